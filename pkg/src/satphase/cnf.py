"""CNF formulas, DIMACS I/O and evaluation.

Literals are non-zero signed ints in the DIMACS convention: ``3`` is x3,
``-3`` is its negation. A clause is a tuple of literals over distinct
variables; a formula is an immutable sequence of clauses whose order matters
to the solver's branching rule.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

Clause = tuple[int, ...]
Assignment = Mapping[int, bool]


class DimacsError(ValueError):
    """Malformed DIMACS input or a clause that breaks the CNF invariants."""


class Truth(enum.Enum):
    SATISFIED = "satisfied"
    FALSIFIED = "falsified"
    UNDETERMINED = "undetermined"


def make_clause(literals: Iterable[int], num_vars: int | None = None) -> Clause:
    """Normalize literals into a clause.

    Repeated literals collapse to their first occurrence. A clause containing
    both ``x`` and ``-x`` is rejected, as is literal ``0`` or one whose
    variable exceeds ``num_vars``.
    """
    out: list[int] = []
    seen: dict[int, int] = {}
    for lit in literals:
        lit = int(lit)
        if lit == 0:
            raise DimacsError("literal 0 inside a clause")
        var = abs(lit)
        if num_vars is not None and var > num_vars:
            raise DimacsError(f"literal {lit} exceeds declared variable count {num_vars}")
        prev = seen.get(var)
        if prev is None:
            seen[var] = lit
            out.append(lit)
        elif prev != lit:
            raise DimacsError(f"tautological clause: contains {var} and -{var}")
    if not out:
        raise DimacsError("empty clause")
    return tuple(out)


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[Clause, ...] = ()
    origin: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("num_vars must be >= 1")
        clauses = tuple(make_clause(c, self.num_vars) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)

    @classmethod
    def from_flat(cls, num_vars: int, lits: np.ndarray, k: int, origin: str | None = None) -> CnfFormula:
        """Build from a flat k-uniform literal array without re-validation.

        Callers (the generators) guarantee distinct variables per clause.
        """
        self = object.__new__(cls)
        flat = np.asarray(lits, dtype=np.int64)
        rows = flat.reshape(-1, k).tolist() if flat.size else []
        object.__setattr__(self, "num_vars", int(num_vars))
        object.__setattr__(self, "clauses", tuple(map(tuple, rows)))
        object.__setattr__(self, "origin", origin)
        self.__dict__["csr"] = (flat, np.arange(0, flat.size + 1, k, dtype=np.int64))
        return self

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """``(lits, offsets)`` arrays consumed by the kernels."""
        lengths = np.fromiter((len(c) for c in self.clauses), dtype=np.int64, count=len(self.clauses))
        offsets = np.zeros(len(self.clauses) + 1, dtype=np.int64)
        np.cumsum(lengths, out=offsets[1:])
        lits = np.fromiter((l for c in self.clauses for l in c), dtype=np.int64, count=int(offsets[-1]))
        return lits, offsets

    def with_origin(self, origin: str | None) -> CnfFormula:
        return CnfFormula(self.num_vars, self.clauses, origin)


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF text.

    The clause count must match the header. ``c`` comment lines are skipped
    anywhere; an ``origin:`` comment is not carried into the formula.
    """
    header = None
    tokens: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsError(f"line {lineno}: second header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from None
            if header[0] < 1 or header[1] < 0:
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause data before header")
        if line.startswith("%"):
            # end marker used by some benchmark archives
            break
        try:
            tokens.extend(int(t) for t in line.split())
        except ValueError:
            raise DimacsError(f"line {lineno}: non-integer token") from None
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    num_vars, declared = header
    if declared == 0 and tokens:
        raise DimacsError("header declares 0 clauses but body is nonempty")

    clauses: list[Clause] = []
    current: list[int] = []
    for tok in tokens:
        if tok == 0:
            clauses.append(make_clause(current, num_vars))
            current = []
        else:
            current.append(tok)
    if current:
        raise DimacsError("last clause is not terminated by 0")
    if len(clauses) != declared:
        raise DimacsError(f"header declares {declared} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, tuple(clauses))


def write_dimacs(f: CnfFormula) -> str:
    lines = []
    if f.origin:
        lines.append(f"c origin: {f.origin}")
    lines.append(f"p cnf {f.num_vars} {len(f.clauses)}")
    lines.extend(" ".join(map(str, c)) + " 0" for c in f.clauses)
    return "\n".join(lines) + "\n"


def constrainedness(f: CnfFormula) -> Fraction:
    return Fraction(len(f.clauses), f.num_vars)


def evaluate(f: CnfFormula, a: Assignment) -> Truth:
    undetermined = False
    for clause in f.clauses:
        open_lit = False
        for lit in clause:
            val = a.get(abs(lit))
            if val is None:
                open_lit = True
            elif val == (lit > 0):
                break
        else:
            if not open_lit:
                return Truth.FALSIFIED
            undetermined = True
    return Truth.UNDETERMINED if undetermined else Truth.SATISFIED


def is_k_uniform(f: CnfFormula, k: int) -> bool:
    if k < 1:
        raise ValueError("k must be >= 1")
    return all(len(c) == k for c in f.clauses)

