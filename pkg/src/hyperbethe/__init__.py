"""Quantum integrable model of weighted hyperplane arrangements."""

from .arrangement import ArrangementFamily, FiberPoint, classify_fiber, enumerate_circuits
from .config import Command, ConfigRepository, OutputFormat, RunConfig, SuiteName
from .critical import solve_critical_points
from .flags import FlagSpace, contravariant_gram, sing_basis
from .hamiltonians import HamiltonianFamily, hamiltonian_at, regularized_hamiltonians
from .pipeline import VerificationPipeline
from .session import VerificationSession, SessionState

__all__ = [
    "ArrangementFamily",
    "FiberPoint",
    "classify_fiber",
    "enumerate_circuits",
    "Command",
    "ConfigRepository",
    "OutputFormat",
    "RunConfig",
    "SuiteName",
    "solve_critical_points",
    "FlagSpace",
    "contravariant_gram",
    "sing_basis",
    "HamiltonianFamily",
    "hamiltonian_at",
    "regularized_hamiltonians",
    "VerificationPipeline",
    "VerificationSession",
    "SessionState",
]
