"""Instrumented DPLL solver and an exhaustive enumeration oracle."""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .cnf import CnfFormula


class Status(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    TIMEOUT = "TIMEOUT"


_STATUS = {
    kernels.STATUS_SAT: Status.SAT,
    kernels.STATUS_UNSAT: Status.UNSAT,
    kernels.STATUS_TIMEOUT: Status.TIMEOUT,
}


@dataclass(frozen=True)
class SolverLimits:
    """Resource bounds; 0 means unlimited."""

    timeout_ms: float = 0
    max_backtracks: int = 0

    def __post_init__(self):
        if self.timeout_ms < 0 or self.max_backtracks < 0:
            raise ValueError("limits must be non-negative")


@dataclass(frozen=True)
class SolveResult:
    status: Status
    backtracks: int
    decisions: int
    elapsed_ms: float
    model: dict[int, bool] | None = None

    def model_literals(self) -> list[int]:
        if self.model is None:
            return []
        return [v if val else -v for v, val in sorted(self.model.items())]


UNLIMITED = SolverLimits()


def solve(f: CnfFormula, limits: SolverLimits = UNLIMITED) -> SolveResult:
    """Decide ``f`` with chronological DPLL and unit propagation.

    Branching picks the first unassigned literal of the first unsatisfied
    clause, tried as written before its negation. ``backtracks`` counts
    reversions to an open decision (one per polarity flip). On SAT the model
    is total; variables the search never touched are set false.
    """
    lits, offsets = f.csr
    values = np.zeros(f.num_vars + 1, np.int8)
    t0 = time.perf_counter()
    code, backtracks, decisions = kernels.dpll_kernel(
        lits, offsets, f.num_vars, float(limits.timeout_ms), int(limits.max_backtracks), values
    )
    elapsed = (time.perf_counter() - t0) * 1000.0
    status = _STATUS[int(code)]
    model = None
    if status is Status.SAT:
        model = {v: bool(values[v] > 0) for v in range(1, f.num_vars + 1)}
    return SolveResult(status, int(backtracks), int(decisions), elapsed, model)


BRUTE_FORCE_MAX_VARS = 24


def brute_force(f: CnfFormula) -> Status:
    """Enumerate all ``2**v`` assignments, 64 per machine word.

    Assignment number ``a`` sets variable ``i`` true iff bit ``i-1`` of ``a``
    is set.
    """
    v = f.num_vars
    if v > BRUTE_FORCE_MAX_VARS:
        raise ValueError(f"brute_force supports at most {BRUTE_FORCE_MAX_VARS} variables, got {v}")
    if not f.clauses:
        return Status.SAT
    nwords = max(1, 2 ** (v - 6)) if v >= 6 else 1
    low = np.array(
        [
            0xAAAAAAAAAAAAAAAA,
            0xCCCCCCCCCCCCCCCC,
            0xF0F0F0F0F0F0F0F0,
            0xFF00FF00FF00FF00,
            0xFFFF0000FFFF0000,
            0xFFFFFFFF00000000,
        ],
        dtype=np.uint64,
    )
    words = np.arange(nwords, dtype=np.uint64)
    patterns = np.empty((v, nwords), dtype=np.uint64)
    for i in range(v):
        if i < 6:
            patterns[i] = low[i]
        else:
            bit = (words >> np.uint64(i - 6)) & np.uint64(1)
            patterns[i] = np.where(bit == 1, np.uint64(0xFFFFFFFFFFFFFFFF), np.uint64(0))
    alive = np.full(nwords, 0xFFFFFFFFFFFFFFFF, dtype=np.uint64)
    if v < 6:
        alive[0] = np.uint64((1 << (1 << v)) - 1)
    for clause in f.clauses:
        sat = np.zeros(nwords, dtype=np.uint64)
        for lit in clause:
            col = patterns[abs(lit) - 1]
            sat |= col if lit > 0 else ~col
        alive &= sat
        if not alive.any():
            return Status.UNSAT
    return Status.SAT
