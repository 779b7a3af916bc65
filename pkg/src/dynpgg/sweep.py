"""Robustness sweep: grid search, closed form and fitted vertex across parameters."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

from .game import TOL, GameParams
from .optimizer import closed_form_optimum, grid_search
from .regression import fit_quadratic, vertex

# short names used in configs and report columns
RANGE_KEYS = {
    "m": "productivity_rate",
    "omega": "endowment",
    "M0": "base_productivity",
    "T": "n_periods",
    "N": "n_players",
}

DEFAULT_RANGES = {
    "m": [0.005, 0.01, 0.015, 0.02],
    "omega": [5, 10, 20],
    "M0": [0.1, 0.3, 0.8, 1.5],
    "T": [5, 10, 20],
    "N": [2, 4, 8],
}


@dataclass
class SweepRow:
    m: float
    omega: float
    M0: float
    T: int
    N: int
    grid_x: float = float("nan")
    grid_payoff: float = float("nan")
    closed_x: float = float("nan")
    closed_payoff: float = float("nan")
    clamped: bool = False
    fit_x: float = float("nan")
    fit_rss: float = float("nan")
    agree: bool = False
    error: str = ""

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]


def combinations(ranges: dict | None = None) -> list[dict]:
    merged = dict(DEFAULT_RANGES)
    for key, values in (ranges or {}).items():
        if key not in RANGE_KEYS:
            raise ValueError(f"unknown sweep parameter {key!r}; use {sorted(RANGE_KEYS)}")
        values = list(values) if isinstance(values, (list, tuple)) else [values]
        if not values:
            raise ValueError(f"empty range for {key!r}")
        merged[key] = values
    keys = list(RANGE_KEYS)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(merged[k] for k in keys))]


def sweep_row(combo: dict, step: float = 0.01) -> SweepRow:
    row = SweepRow(
        m=float(combo["m"]),
        omega=float(combo["omega"]),
        M0=float(combo["M0"]),
        T=int(combo["T"]),
        N=int(combo["N"]),
    )
    try:
        params = GameParams(
            n_players=row.N,
            n_periods=row.T,
            endowment=row.omega,
            base_productivity=row.M0,
            productivity_rate=row.m,
            strict_integer_votes=False,
        )
        grid = grid_search(params, step)
        opt = closed_form_optimum(params)
        model = fit_quadratic(grid.samples)
        fx, _ = vertex(model)
        fx = min(max(fx, 0.0), float(row.T))
    except (ValueError, ZeroDivisionError) as exc:
        row.error = str(exc)
        return row
    row.grid_x, row.grid_payoff = grid.x_best, grid.payoff_best
    row.closed_x, row.closed_payoff, row.clamped = opt.x_max, opt.f_max, opt.clamped
    row.fit_x, row.fit_rss = fx, model.rss
    lim = step + TOL
    row.agree = (
        abs(row.grid_x - row.closed_x) <= lim
        and abs(row.fit_x - row.closed_x) <= lim
        and abs(row.grid_x - row.fit_x) <= lim
    )
    return row


def run_sweep(
    ranges: dict | None = None, step: float = 0.01, max_workers: int | None = None
) -> list[SweepRow]:
    """One row per parameter combination, in enumeration order."""
    combos = combinations(ranges)
    if max_workers and max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(sweep_row, combos, [step] * len(combos), chunksize=16))
    return [sweep_row(c, step) for c in combos]
