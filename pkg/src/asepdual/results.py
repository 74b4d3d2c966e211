"""Outcome records shared by every check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict

from .operators import Operator, first_nonzero, max_abs_entry
from .scalar_ring import is_exact

# absolute infinity-norm thresholds for numeric mode
ALGEBRAIC_TOL = 1e-10
EXPONENTIAL_TOL = 1e-8


class InternalConsistencyError(RuntimeError):
    """Two independent construction paths for the same operator disagree."""


@dataclass
class CheckResult:
    name: str
    params: Dict[str, Any]
    passed: bool
    residual: Any
    derived: Dict[str, Any] = field(default_factory=dict)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        shown = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"[{status}] {self.name} ({shown}) residual={self.residual}"


def operator_residual(diff: Operator, tol: float = ALGEBRAIC_TOL):
    """``(passed, residual)`` for an identity written as ``diff == 0``.

    Exact operators pass only when ``diff`` is literally zero and report the
    first nonzero entry; numeric ones report the max-abs entry.
    """
    if all(is_exact(v) for _, v in diff.items()):
        res = first_nonzero(diff)
        return diff.is_zero(), res
    res = max_abs_entry(diff)
    return res <= tol, res


def scalar_residual(x, tol: float = 1e-12):
    if is_exact(x):
        return x == 0, x
    return abs(float(x)) <= tol, abs(float(x))
