"""Quantum-strategy invasion of defector-dominated populations on networks."""

from qinvasion.errors import ConfigError, DomainError
from qinvasion.games import PayoffVector, make_payoffs, pd_payoffs, sd_payoffs, sh_payoffs
from qinvasion.quantum import (
    C, D, H, Q,
    Strategy,
    build_pair_table,
    expected_payoff,
    outcome_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "C", "D", "H", "Q",
    "ConfigError",
    "DomainError",
    "PayoffVector",
    "Strategy",
    "build_pair_table",
    "expected_payoff",
    "make_payoffs",
    "outcome_distribution",
    "pd_payoffs",
    "sd_payoffs",
    "sh_payoffs",
]
