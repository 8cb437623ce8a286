from __future__ import annotations

from typing import Optional


class HyperbetheError(Exception):
    """Root of every error raised by the package."""


class InputError(HyperbetheError, ValueError):
    """Invalid user data, optionally located in the source file."""

    def __init__(
        self,
        message: str,
        *,
        line: Optional[int] = None,
        column: Optional[int] = None,
        path: Optional[str] = None,
    ) -> None:
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column
        self.path = path

    def __str__(self) -> str:
        where = []
        if self.path:
            where.append(f"at {self.path}")
        if self.line is not None:
            where.append(f"line {self.line}, column {self.column}")
        if not where:
            return self.message
        return f"{self.message} ({', '.join(where)})"


class FamilyError(InputError):
    """Arrangement family invariants are violated."""


class FiberError(HyperbetheError, ValueError):
    """The fiber point has the wrong kind or precision for the operation."""


class NotACircuitError(HyperbetheError, ValueError):
    pass


class SolverError(HyperbetheError, RuntimeError):
    """Numerical solve failed."""

    def __init__(self, message: str, *, region: Optional[int] = None) -> None:
        super().__init__(message if region is None else f"{message} (region {region})")
        self.region = region


class DegenerateFormError(HyperbetheError, ArithmeticError):
    """The contravariant form is degenerate on the requested subspace."""


class VerificationError(HyperbetheError, AssertionError):
    """An identity that must hold exactly or within tolerance failed."""

    def __init__(self, tag: str, detail: str) -> None:
        super().__init__(f"{tag}: {detail}")
        self.tag = tag
        self.detail = detail


__all__ = [
    "HyperbetheError",
    "InputError",
    "FamilyError",
    "FiberError",
    "NotACircuitError",
    "SolverError",
    "DegenerateFormError",
    "VerificationError",
]
