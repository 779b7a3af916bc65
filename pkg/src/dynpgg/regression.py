"""Least-squares quadratic fit and parabola vertex."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve


class RegressionError(ValueError):
    pass


@dataclass(frozen=True)
class QuadraticModel:
    a: float
    b: float
    c: float
    rss: float
    n_samples: int

    def __call__(self, x):
        return (self.a * x + self.b) * x + self.c

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "rss": self.rss,
                "n_samples": self.n_samples}


def fit_quadratic(samples: Iterable[tuple[float, float]]) -> QuadraticModel:
    """Ordinary least squares for y = a*x**2 + b*x + c.

    The normal equations are formed on a centred and scaled abscissa, which
    keeps the 3x3 system well conditioned, and solved by Cholesky. The
    coefficients are then mapped back to the raw abscissa.
    """
    data = np.asarray(list(samples), dtype=np.float64)
    if data.ndim != 2 or data.shape[1] != 2:
        raise RegressionError("samples must be (x, y) pairs")
    x, y = data[:, 0], data[:, 1]
    if len(np.unique(x)) < 3:
        raise RegressionError("need at least 3 distinct x values for a quadratic")

    shift = x.mean()
    scale = np.abs(x - shift).max()
    u = (x - shift) / scale
    basis = np.column_stack([u * u, u, np.ones_like(u)])
    try:
        coef = cho_solve(cho_factor(basis.T @ basis), basis.T @ y)
    except LinAlgError as exc:
        raise RegressionError(f"normal equations are singular: {exc}") from None

    # y = A u^2 + B u + C with u = (x - s)/h
    A, B, C = coef
    a = A / scale**2
    b = B / scale - 2 * A * shift / scale**2
    c = C - B * shift / scale + A * shift**2 / scale**2
    model = QuadraticModel(float(a), float(b), float(c), 0.0, len(x))
    resid = y - model(x)
    return QuadraticModel(model.a, model.b, model.c, float(resid @ resid), len(x))


def vertex(model: QuadraticModel) -> tuple[float, float]:
    if model.a == 0:
        raise RegressionError("degenerate parabola: a = 0")
    x_v = -model.b / (2 * model.a)
    return x_v, model(x_v)
