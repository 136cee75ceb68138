"""Two-player Eisert-scheme quantum games.

Both qubits start in |00>, pass through the entangler J(omega), receive one
local unitary each, pass through J^dagger and are measured in the
computational basis. Amplitudes are ordered (|00>, |01>, |10>, |11>) with the
first qubit owned by the row player.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from qinvasion.errors import DomainError

HALF_PI = np.pi / 2
SNAP_TOL = 1e-12

_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
_XX = np.kron(_SIGMA_X, _SIGMA_X)
_KET00 = np.array([1, 0, 0, 0], dtype=complex)


@dataclass(frozen=True)
class Strategy:
    """A named strategy operator, or a point Y(gamma, phi) of the two-parameter space."""

    name: str
    gamma: float | None = None
    phi: float | None = None

    def __str__(self) -> str:
        if self.name == "General":
            return f"Y({self.gamma!r},{self.phi!r})"
        return self.name


C = Strategy("C")
D = Strategy("D")
H = Strategy("H")
Q = Strategy("Q")

NAMED = {"C": C, "D": D, "H": H, "Q": Q}


def general(gamma: float, phi: float) -> Strategy:
    if not 0.0 <= gamma <= np.pi:
        raise DomainError(f"gamma must lie in [0, pi], got {gamma!r}")
    if not 0.0 <= phi <= HALF_PI:
        raise DomainError(f"phi must lie in [0, pi/2], got {phi!r}")
    return Strategy("General", float(gamma), float(phi))


def as_strategy(s: Strategy | str) -> Strategy:
    if isinstance(s, Strategy):
        return s
    try:
        return NAMED[s.strip().upper()]
    except (KeyError, AttributeError):
        raise DomainError(f"unknown strategy {s!r}; expected one of C, D, H, Q") from None


def strategy_unitary(s: Strategy | str) -> np.ndarray:
    """Return the 2x2 unitary a player applies to their own qubit."""
    s = as_strategy(s)
    if s.name == "C":
        return np.eye(2, dtype=complex)
    if s.name == "D":
        return _SIGMA_X.copy()
    if s.name == "H":
        return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    if s.name == "Q":
        return np.array([[1j, 0], [0, -1j]], dtype=complex)
    if s.name == "General":
        # re-validate: Strategy can be constructed directly
        general(s.gamma, s.phi)
        c, sn = np.cos(s.gamma / 2), np.sin(s.gamma / 2)
        e = np.exp(1j * s.phi)
        return np.array([[e * c, sn], [-sn, np.conj(e) * c]], dtype=complex)
    raise DomainError(f"unknown strategy {s!r}")


@dataclass(frozen=True)
class Entangler:
    omega: float
    matrix: np.ndarray

    @property
    def adjoint(self) -> np.ndarray:
        return self.matrix.conj().T


def entangler(omega: float) -> Entangler:
    """J(omega) = cos(omega/2) I⊗I + i sin(omega/2) σx⊗σx."""
    if not 0.0 <= omega <= HALF_PI:
        raise DomainError(f"omega must lie in [0, pi/2], got {omega!r}")
    m = np.cos(omega / 2) * np.eye(4, dtype=complex) + 1j * np.sin(omega / 2) * _XX
    m.setflags(write=False)
    return Entangler(float(omega), m)


def final_state(s1: Strategy | str, s2: Strategy | str, omega: float = HALF_PI) -> np.ndarray:
    """J^dagger (Y1 ⊗ Y2) J |00>, defined up to a global phase."""
    j = entangler(omega)
    local = np.kron(strategy_unitary(s1), strategy_unitary(s2))
    return j.adjoint @ (local @ (j.matrix @ _KET00))


class OutcomeDistribution(NamedTuple):
    p00: float
    p01: float
    p10: float
    p11: float


def outcome_distribution(s1: Strategy | str, s2: Strategy | str,
                         omega: float = HALF_PI) -> OutcomeDistribution:
    probs = np.abs(final_state(s1, s2, omega)) ** 2
    return OutcomeDistribution(*(float(p) for p in probs))


def expected_payoff(dist: OutcomeDistribution, v) -> float:
    """Row player's expected payoff R p00 + S p01 + T p10 + P p11."""
    return v.R * dist.p00 + v.S * dist.p01 + v.T * dist.p10 + v.P * dist.p11


@dataclass(frozen=True)
class PairPayoffTable:
    """Expected payoffs for every ordered pair of a finite strategy set.

    ``row[i, j]`` is what strategy i earns against j; ``col[i, j]`` is what
    the opponent playing j earns in that same game.
    """

    strategies: tuple[Strategy, ...]
    row: np.ndarray
    col: np.ndarray
    payoffs: object
    omega: float

    def index(self, s: Strategy | str) -> int:
        return self.strategies.index(as_strategy(s))

    def __getitem__(self, pair) -> tuple[float, float]:
        i, j = (self.index(s) if not isinstance(s, (int, np.integer)) else int(s) for s in pair)
        return float(self.row[i, j]), float(self.col[i, j])


def build_pair_table(strategies: Sequence[Strategy | str], v,
                     omega: float = HALF_PI) -> PairPayoffTable:
    strategies = tuple(as_strategy(s) for s in strategies)
    if not strategies:
        raise DomainError("strategy list must be non-empty")
    n = len(strategies)
    row = np.empty((n, n))
    for i, a in enumerate(strategies):
        for j, b in enumerate(strategies):
            row[i, j] = expected_payoff(outcome_distribution(a, b, omega), v)
    # rounding in the amplitudes leaves residues like 1e-32 or 1 - 2e-16; snap
    # those onto the exact payoff so ties stay ties, then clip into range
    for value in (v.R, v.S, v.T, v.P):
        row[np.abs(row - value) < SNAP_TOL] = value
    lo, hi = min(v.R, v.S, v.T, v.P), max(v.R, v.S, v.T, v.P)
    np.clip(row, lo, hi, out=row)
    col = row.T.copy()
    row.setflags(write=False)
    col.setflags(write=False)
    return PairPayoffTable(strategies, row, col, v, float(omega))
