"""Mechanics of the dynamic public good game.

Each period has an investment stage (players vote, the median vote becomes a
common investment that raises contribution productivity) followed by a
contribution stage (players split what is left between keeping it and the
group account, whose total is multiplied by the current productivity and
paid to everyone).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:
    from .strategies import StrategyProfile

TOL = 1e-9


class GameError(ValueError):
    """Raised when an action or parameter violates the rules of the game."""


@dataclass(frozen=True)
class GameParams:
    n_players: int = 4
    n_periods: int = 10
    endowment: float = 10.0
    base_productivity: float = 0.30
    productivity_rate: float = 0.01
    strict_integer_votes: bool = True

    def __post_init__(self):
        if self.n_players < 2:
            raise GameError(f"n_players must be >= 2, got {self.n_players}")
        if self.n_periods < 1:
            raise GameError(f"n_periods must be >= 1, got {self.n_periods}")
        if self.endowment < 0:
            raise GameError(f"endowment must be >= 0, got {self.endowment}")
        if self.base_productivity <= 0:
            raise GameError(f"base_productivity must be > 0, got {self.base_productivity}")
        if self.productivity_rate < 0:
            raise GameError(f"productivity_rate must be >= 0, got {self.productivity_rate}")

    def relaxed(self) -> "GameParams":
        """Same rules, but fractional votes allowed (used by the solvers)."""
        if not self.strict_integer_votes:
            return self
        return GameParams(
            self.n_players,
            self.n_periods,
            self.endowment,
            self.base_productivity,
            self.productivity_rate,
            strict_integer_votes=False,
        )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "GameParams":
        known = {k: data[k] for k in cls.__dataclass_fields__ if k in data}
        unknown = set(data) - set(known)
        if unknown:
            raise GameError(f"unknown GameParams fields: {sorted(unknown)}")
        return cls(**known)


@dataclass(frozen=True)
class ProductivityState:
    """Productivity after ``period`` completed investment stages."""

    period: int
    productivity: float

    @classmethod
    def initial(cls, params: GameParams) -> "ProductivityState":
        return cls(0, params.base_productivity)


@dataclass(frozen=True)
class PeriodRecord:
    period: int
    votes: tuple[float, ...]
    investment: float
    productivity: float
    contributions: tuple[float, ...]
    group_return: float
    payoffs: tuple[float, ...]


@dataclass(frozen=True)
class Trajectory:
    params: GameParams
    records: tuple[PeriodRecord, ...]
    total_payoffs: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if not self.total_payoffs:
            totals = tuple(
                math.fsum(r.payoffs[i] for r in self.records)
                for i in range(self.params.n_players)
            )
            object.__setattr__(self, "total_payoffs", totals)

    def cumulative_payoffs(self, player: int = 0) -> list[float]:
        out, acc = [], 0.0
        for r in self.records:
            acc += r.payoffs[player]
            out.append(acc)
        return out

    # -- serialization -------------------------------------------------

    def columns(self) -> list[str]:
        n = self.params.n_players
        return (
            ["period"]
            + [f"vote_{i + 1}" for i in range(n)]
            + ["investment", "productivity"]
            + [f"contribution_{i + 1}" for i in range(n)]
            + ["group_return"]
            + [f"payoff_{i + 1}" for i in range(n)]
        )

    def rows(self) -> list[list]:
        return [
            [r.period, *r.votes, r.investment, r.productivity, *r.contributions,
             r.group_return, *r.payoffs]
            for r in self.records
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns())
        for row in self.rows():
            w.writerow([row[0]] + [fmt(v) for v in row[1:]])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "params": self.params.to_dict(),
            "records": [
                {
                    "period": r.period,
                    "votes": [_round12(v) for v in r.votes],
                    "investment": _round12(r.investment),
                    "productivity": _round12(r.productivity),
                    "contributions": [_round12(v) for v in r.contributions],
                    "group_return": _round12(r.group_return),
                    "payoffs": [_round12(v) for v in r.payoffs],
                }
                for r in self.records
            ],
            "total_payoffs": [_round12(v) for v in self.total_payoffs],
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Trajectory":
        doc = json.loads(text)
        params = GameParams.from_dict(doc["params"])
        records = tuple(
            PeriodRecord(
                period=int(r["period"]),
                votes=tuple(float(v) for v in r["votes"]),
                investment=float(r["investment"]),
                productivity=float(r["productivity"]),
                contributions=tuple(float(v) for v in r["contributions"]),
                group_return=float(r["group_return"]),
                payoffs=tuple(float(v) for v in r["payoffs"]),
            )
            for r in doc["records"]
        )
        totals = tuple(float(v) for v in doc.get("total_payoffs", ()))
        return cls(params, records, totals)

    @classmethod
    def from_csv(cls, text: str, params: GameParams) -> "Trajectory":
        n = params.n_players
        reader = csv.DictReader(io.StringIO(text))
        records = []
        for row in reader:
            records.append(
                PeriodRecord(
                    period=int(row["period"]),
                    votes=tuple(float(row[f"vote_{i + 1}"]) for i in range(n)),
                    investment=float(row["investment"]),
                    productivity=float(row["productivity"]),
                    contributions=tuple(float(row[f"contribution_{i + 1}"]) for i in range(n)),
                    group_return=float(row["group_return"]),
                    payoffs=tuple(float(row[f"payoff_{i + 1}"]) for i in range(n)),
                )
            )
        return cls(params, tuple(records))


def fmt(value: float) -> str:
    """Shortest text for ``value`` at 12 significant digits."""
    if isinstance(value, int):
        return str(value)
    s = f"{value:.12g}"
    return "0" if s == "-0" else s


def _round12(value: float) -> float:
    return float(fmt(value))


# -- operations ---------------------------------------------------------------

def _check_amount(name: str, value: float, upper: float) -> None:
    if not math.isfinite(value) or value < -TOL or value > upper + TOL:
        raise GameError(f"{name}={value} outside [0, {upper}]")


def median_investment(votes: Sequence[float], params: GameParams) -> float:
    """Group investment under the median voter rule.

    With an even group the two middle votes are averaged.
    """
    if len(votes) != params.n_players:
        raise GameError(f"expected {params.n_players} votes, got {len(votes)}")
    for v in votes:
        _check_amount("vote", v, params.endowment)
        if params.strict_integer_votes and abs(v - round(v)) > TOL:
            raise GameError(f"vote {v} is not a whole number")
    ordered = sorted(votes)
    n = len(ordered)
    mid = n // 2
    if n % 2:
        return float(ordered[mid])
    return (ordered[mid - 1] + ordered[mid]) / 2


def update_productivity(
    prev: ProductivityState, investment: float, params: GameParams
) -> ProductivityState:
    if prev.period >= params.n_periods:
        raise GameError(f"game already finished after period {prev.period}")
    _check_amount("investment", investment, params.endowment)
    return ProductivityState(
        prev.period + 1, prev.productivity + params.productivity_rate * investment
    )


def period_payoff(
    params: GameParams,
    productivity: float,
    investment: float,
    own_contribution: float,
    total_contribution: float,
) -> float:
    """Payoff of one player in one period.

    ``total_contribution`` includes the player's own contribution.
    """
    _check_amount("investment", investment, params.endowment)
    _check_amount("contribution", own_contribution, params.endowment - investment)
    if total_contribution < own_contribution - TOL:
        raise GameError("total contribution is smaller than own contribution")
    return (
        params.endowment - investment - own_contribution
        + productivity * total_contribution
    )


def run_period(
    state: ProductivityState,
    votes: Sequence[float],
    contributions: Sequence[float],
    params: GameParams,
) -> tuple[ProductivityState, PeriodRecord]:
    investment = median_investment(votes, params)
    new_state = update_productivity(state, investment, params)
    if len(contributions) != params.n_players:
        raise GameError(
            f"expected {params.n_players} contributions, got {len(contributions)}"
        )
    total = math.fsum(contributions)
    payoffs = tuple(
        period_payoff(params, new_state.productivity, investment, c, total)
        for c in contributions
    )
    record = PeriodRecord(
        period=new_state.period,
        votes=tuple(float(v) for v in votes),
        investment=investment,
        productivity=new_state.productivity,
        contributions=tuple(float(c) for c in contributions),
        group_return=new_state.productivity * total,
        payoffs=payoffs,
    )
    return new_state, record


def run_game(params: GameParams, profile: "StrategyProfile") -> Trajectory:
    """Play all periods with each player following its policy."""
    from .strategies import decide

    policies = profile.policies
    if len(policies) != params.n_players:
        raise GameError(
            f"profile has {len(policies)} policies for {params.n_players} players"
        )
    state = ProductivityState.initial(params)
    records = []
    for _ in range(params.n_periods):
        votes = [decide(p, state, params, "investment") for p in policies]
        investment = median_investment(votes, params)
        remaining = params.endowment - investment
        after = update_productivity(state, investment, params)
        contributions = [
            decide(p, after, params, "contribution", remaining) for p in policies
        ]
        state, record = run_period(state, votes, contributions, params)
        records.append(record)
    return Trajectory(params, tuple(records))
