"""Player policies: switch-point, threshold and constant."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from typing import Literal, Sequence, Union

from .game import TOL, GameError, GameParams, ProductivityState

log = logging.getLogger(__name__)

Phase = Literal["investment", "contribution"]


@dataclass(frozen=True)
class SwitchPolicy:
    """Invest everything until stage ``switch_stage``, contribute everything after.

    The integer part ``a`` of the stage counts full-investment periods; the
    fractional part ``f`` is the share of the endowment invested in period
    ``a + 1``. The rest of that period's money, and everything afterwards,
    goes to the group account.
    """

    switch_stage: float
    kind = "switch"

    def split(self) -> tuple[int, float]:
        a = math.floor(self.switch_stage)
        return a, self.switch_stage - a

    def to_dict(self) -> dict:
        return {"kind": self.kind, "switch_stage": self.switch_stage}


@dataclass(frozen=True)
class ThresholdPolicy:
    """Contribute nothing below unit productivity, everything above it.

    Votes follow a caller-supplied schedule; at productivity exactly 1 the
    player contributes ``tie_contribution`` (clamped to what is left).
    """

    investment_vote_schedule: tuple[float, ...]
    tie_contribution: float = 0.0
    kind = "threshold"

    def __post_init__(self):
        object.__setattr__(
            self, "investment_vote_schedule", tuple(self.investment_vote_schedule)
        )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "investment_vote_schedule": list(self.investment_vote_schedule),
            "tie_contribution": self.tie_contribution,
        }


@dataclass(frozen=True)
class ConstantPolicy:
    vote: float
    contribution_fraction: float = 0.0
    kind = "constant"

    def __post_init__(self):
        if not 0.0 <= self.contribution_fraction <= 1.0:
            raise GameError(
                f"contribution_fraction must be in [0, 1], got {self.contribution_fraction}"
            )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "vote": self.vote,
            "contribution_fraction": self.contribution_fraction,
        }


Policy = Union[SwitchPolicy, ThresholdPolicy, ConstantPolicy]


@dataclass(frozen=True)
class StrategyProfile:
    policies: tuple[Policy, ...]

    def __post_init__(self):
        object.__setattr__(self, "policies", tuple(self.policies))

    @classmethod
    def symmetric(cls, policy: Policy, n_players: int) -> "StrategyProfile":
        return cls((policy,) * n_players)

    def replace(self, player: int, policy: Policy) -> "StrategyProfile":
        policies = list(self.policies)
        policies[player] = policy
        return StrategyProfile(tuple(policies))

    def to_dict(self) -> dict:
        return {"policies": [p.to_dict() for p in self.policies]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict | list) -> "StrategyProfile":
        items = data["policies"] if isinstance(data, dict) else data
        return cls(tuple(policy_from_dict(d) for d in items))


def policy_from_dict(data: dict) -> Policy:
    kind = data.get("kind")
    fields = {k: v for k, v in data.items() if k != "kind"}
    try:
        if kind == "switch":
            return SwitchPolicy(float(fields["switch_stage"]))
        if kind == "threshold":
            return ThresholdPolicy(
                tuple(float(v) for v in fields["investment_vote_schedule"]),
                float(fields.get("tie_contribution", 0.0)),
            )
        if kind == "constant":
            return ConstantPolicy(
                float(fields["vote"]), float(fields.get("contribution_fraction", 0.0))
            )
    except KeyError as exc:
        raise GameError(f"{kind} policy is missing field {exc}") from None
    raise GameError(f"unknown policy kind {kind!r}")


def _clamp(value: float, upper: float, what: str, policy: Policy) -> float:
    if value < 0.0:
        log.debug("%s %s clamped from %r to 0", policy.kind, what, value)
        return 0.0
    if value > upper:
        log.debug("%s %s clamped from %r to %r", policy.kind, what, value, upper)
        return upper
    return value


def decide(
    policy: Policy,
    state: ProductivityState,
    params: GameParams,
    phase: Phase,
    remaining_after_investment: float | None = None,
) -> float:
    """Vote or contribution of ``policy`` at ``state``.

    In the investment phase ``state`` is the productivity before the period
    being played (so that period is ``state.period + 1``). In the
    contribution phase it is the productivity right after this period's
    investment, and ``remaining_after_investment`` must be given.
    """
    omega = params.endowment
    if phase == "investment":
        t = state.period + 1
        if isinstance(policy, SwitchPolicy):
            a, f = policy.split()
            vote = omega if t <= a else (f * omega if t == a + 1 else 0.0)
        elif isinstance(policy, ThresholdPolicy):
            sched = policy.investment_vote_schedule
            if not 1 <= t <= len(sched):
                raise GameError(f"vote schedule has no entry for period {t}")
            vote = sched[t - 1]
        elif isinstance(policy, ConstantPolicy):
            vote = policy.vote
        else:
            raise TypeError(f"not a policy: {policy!r}")
        return _clamp(vote, omega, "vote", policy)

    if phase != "contribution":
        raise ValueError(f"unknown phase {phase!r}")
    if remaining_after_investment is None:
        raise ValueError("contribution phase needs remaining_after_investment")
    remaining = max(0.0, remaining_after_investment)
    t = state.period
    if isinstance(policy, SwitchPolicy):
        a, _ = policy.split()
        c = 0.0 if t <= a else remaining
    elif isinstance(policy, ThresholdPolicy):
        m = state.productivity
        if abs(m - 1.0) <= TOL:
            c = policy.tie_contribution
        else:
            c = 0.0 if m < 1.0 else remaining
    elif isinstance(policy, ConstantPolicy):
        c = policy.contribution_fraction * remaining
    else:
        raise TypeError(f"not a policy: {policy!r}")
    return _clamp(c, remaining, "contribution", policy)


def symmetric_switch_profile(x: float, params: GameParams) -> StrategyProfile:
    if not 0.0 <= x <= params.n_periods:
        raise GameError(f"switch stage {x} outside [0, {params.n_periods}]")
    return StrategyProfile.symmetric(SwitchPolicy(x), params.n_players)


def threshold_profile(
    schedule: Sequence[float], params: GameParams, tie_contribution: float = 0.0
) -> StrategyProfile:
    return StrategyProfile.symmetric(
        ThresholdPolicy(tuple(schedule), tie_contribution), params.n_players
    )
