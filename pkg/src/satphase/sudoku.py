"""Sudoku <-> CNF.

Cell ``(r, c)`` holding digit ``d`` (all 1-based) is variable
``81*(r-1) + 9*(c-1) + d``. The encoding is the extended one: at-least-one
and pairwise at-most-one for every cell and for every digit in every row,
column and box, plus one unit clause per given.
"""
from __future__ import annotations

from itertools import combinations

from .cnf import Assignment, CnfFormula

Grid = tuple[tuple[int, ...], ...]

NUM_VARS = 729


class SudokuError(ValueError):
    pass


def var(r: int, c: int, d: int) -> int:
    return 81 * (r - 1) + 9 * (c - 1) + d


def _units():
    rng = range(1, 10)
    cells = [[(r, c) for c in rng] for r in rng]
    rows = cells
    cols = [[(r, c) for r in rng] for c in rng]
    boxes = [
        [(br + i, bc + j) for i in range(3) for j in range(3)]
        for br in (1, 4, 7)
        for bc in (1, 4, 7)
    ]
    return rows, cols, boxes


def conflicts(grid: Grid) -> list[str]:
    """Descriptions of every digit repeated within a row, column or box."""
    rows, cols, boxes = _units()
    found = []
    for name, units in (("row", rows), ("column", cols), ("box", boxes)):
        for idx, unit in enumerate(units, 1):
            digits = [grid[r - 1][c - 1] for r, c in unit if grid[r - 1][c - 1]]
            for d in sorted(set(digits)):
                if digits.count(d) > 1:
                    found.append(f"digit {d} repeated in {name} {idx}")
    return found


def parse_grid(text: str) -> Grid:
    chars = [ch for ch in text if not ch.isspace()]
    if len(chars) != 81:
        raise SudokuError(f"expected 81 cells, got {len(chars)}")
    cells = []
    for ch in chars:
        if ch in ".0":
            cells.append(0)
        elif ch in "123456789":
            cells.append(int(ch))
        else:
            raise SudokuError(f"invalid character {ch!r}")
    grid = tuple(tuple(cells[9 * r : 9 * r + 9]) for r in range(9))
    bad = conflicts(grid)
    if bad:
        raise SudokuError("conflicting givens: " + "; ".join(bad))
    return grid


def format_grid(grid: Grid) -> str:
    return "\n".join("".join(str(d) if d else "." for d in row) for row in grid) + "\n"


def givens(grid: Grid) -> int:
    return sum(1 for row in grid for d in row if d)


def encode(grid: Grid) -> CnfFormula:
    rows, cols, boxes = _units()
    clauses = []
    for row in rows:
        for r, c in row:
            clauses.append(tuple(var(r, c, d) for d in range(1, 10)))
            clauses.extend((-var(r, c, a), -var(r, c, b)) for a, b in combinations(range(1, 10), 2))
    for units in (rows, cols, boxes):
        for unit in units:
            for d in range(1, 10):
                clauses.append(tuple(var(r, c, d) for r, c in unit))
                clauses.extend(
                    (-var(*p, d), -var(*q, d)) for p, q in combinations(unit, 2)
                )
    for r in range(1, 10):
        for c in range(1, 10):
            d = grid[r - 1][c - 1]
            if d:
                clauses.append((var(r, c, d),))
    return CnfFormula(NUM_VARS, tuple(clauses), f"sudoku givens={givens(grid)}")


def decode_model(model: Assignment) -> Grid:
    out = []
    for r in range(1, 10):
        row = []
        for c in range(1, 10):
            digits = [d for d in range(1, 10) if model.get(var(r, c, d), False)]
            if len(digits) != 1:
                raise SudokuError(f"cell ({r},{c}) has {len(digits)} true digits")
            row.append(digits[0])
        out.append(tuple(row))
    grid = tuple(out)
    bad = conflicts(grid)
    if bad:
        raise SudokuError("decoded grid is invalid: " + "; ".join(bad))
    return grid


def is_complete_solution(grid: Grid) -> bool:
    return all(all(row) for row in grid) and not conflicts(grid)


def consistent_with(solution: Grid, puzzle: Grid) -> bool:
    return all(
        p == 0 or p == s for prow, srow in zip(puzzle, solution) for p, s in zip(prow, srow)
    )
