"""Payoff parameterizations of the Prisoner's Dilemma, Snowdrift and Stag-Hunt games."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qinvasion.errors import DomainError

GAME_KINDS = ("PD", "SD", "SH")
SWEEP_VARIABLE = {"PD": "b", "SD": "r", "SH": "r"}


@dataclass(frozen=True)
class PayoffVector:
    R: float
    S: float
    T: float
    P: float
    alpha: float
    kind: str
    param: float

    @property
    def spread(self) -> tuple[float, float]:
        vals = (self.R, self.S, self.T, self.P)
        return min(vals), max(vals)


def pd_payoffs(b: float) -> PayoffVector:
    b = float(b)
    if not 1.0 < b <= 2.0:
        raise DomainError(f"b must satisfy 1 < b <= 2 for PD, got {b!r}")
    return PayoffVector(R=1.0, S=0.0, T=b, P=0.0, alpha=b, kind="PD", param=b)


def sd_payoffs(r: float) -> PayoffVector:
    """Snowdrift with cost c = 1; the benefit b follows from r = 1 / (2b - 1)."""
    r = float(r)
    if not 0.0 < r <= 1.0:
        raise DomainError(f"r must satisfy 0 < r <= 1 for SD, got {r!r}")
    b = (1.0 + r) / (2.0 * r)
    return PayoffVector(R=b - 0.5, S=b - 1.0, T=b, P=0.0, alpha=b, kind="SD", param=r)


def sh_payoffs(r: float) -> PayoffVector:
    r = float(r)
    # r = 1 would make T = R and leave the stag-hunt ordering
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must satisfy 0 < r < 1 for SH, got {r!r}")
    return PayoffVector(R=1.0, S=-r, T=r, P=0.0, alpha=1.0 + r, kind="SH", param=r)


_FACTORIES = {"PD": pd_payoffs, "SD": sd_payoffs, "SH": sh_payoffs}


def make_payoffs(kind: str, param: float) -> PayoffVector:
    try:
        factory = _FACTORIES[kind.upper()]
    except (KeyError, AttributeError):
        raise DomainError(f"game kind must be one of {', '.join(GAME_KINDS)}, got {kind!r}") from None
    return factory(param)


def default_grid(kind: str) -> tuple[float, ...]:
    """Sweep grid for a game: b in 1.05..2.00, r in 0.05..1.00 (SD) or 0.05..0.95 (SH)."""
    kind = kind.upper()
    if kind == "PD":
        steps = range(21, 41)
    elif kind == "SD":
        steps = range(1, 21)
    elif kind == "SH":
        steps = range(1, 20)
    else:
        raise DomainError(f"game kind must be one of {', '.join(GAME_KINDS)}, got {kind!r}")
    # k/20 instead of accumulated 0.05 steps keeps grid values exact decimals
    return tuple(float(np.round(k / 20, 2)) for k in steps)
