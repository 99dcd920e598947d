import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from satphase import kernels
from satphase.cnf import CnfFormula, Truth, evaluate, parse_dimacs
from satphase.generators import NeighborhoodSpec, RichSpec, UniformSpec, generate
from satphase.solver import SolverLimits, Status, brute_force, solve


def test_empty_formula():
    r = solve(CnfFormula(4))
    assert r.status is Status.SAT
    assert r.backtracks == 0
    assert r.model == {1: False, 2: False, 3: False, 4: False}


def test_unit_conflict_without_branching():
    r = solve(parse_dimacs("p cnf 1 2\n1 0\n-1 0"))
    assert (r.status, r.backtracks, r.decisions) == (Status.UNSAT, 0, 0)


def test_four_binary_clauses_trace():
    # branch +1 -> units +2,-2 clash; flip to -1 -> same clash; no open decision
    f = CnfFormula(2, ((1, 2), (-1, 2), (1, -2), (-1, -2)))
    r = solve(f)
    assert (r.status, r.backtracks, r.decisions) == (Status.UNSAT, 1, 1)
    assert brute_force(f) is Status.UNSAT


def test_branch_order_written_polarity_first():
    # first clause (-2 3): branch on -2 first; that path is satisfiable at once
    f = CnfFormula(3, ((-2, 3), (1, 2, 3)))
    r = solve(f)
    assert r.status is Status.SAT
    assert r.decisions >= 1 and r.backtracks == 0
    assert r.model[2] is False


def test_backtrack_counting_nested():
    # both polarities of x3 clash, under +1 and under (-1, +2); -1,-2 forces x3
    clauses = [(1, 2, 3), (-3, 4), (-3, -4), (3, 5), (3, -5)]
    f = CnfFormula(5, tuple(clauses))
    r = solve(f)
    assert r.status is Status.UNSAT
    assert brute_force(f) is Status.UNSAT
    # decisions: +1, -3, +2, -3; flips: +3, -1, +3, -2
    assert r.decisions == 4
    assert r.backtracks == 4


def test_max_backtracks_limit():
    f = generate(UniformSpec(60, 3, 4.3), 3)
    full = solve(f)
    assert full.backtracks > 5
    r = solve(f, SolverLimits(max_backtracks=5))
    assert r.status is Status.TIMEOUT
    assert r.backtracks == 5


def test_timeout_reported():
    f = generate(UniformSpec(200, 3, 4.26), 1)
    r = solve(f, SolverLimits(timeout_ms=20))
    assert r.status is Status.TIMEOUT
    assert r.elapsed_ms < 2000


def test_limits_validation():
    with pytest.raises(ValueError):
        SolverLimits(timeout_ms=-1)


def test_brute_force_basics():
    assert brute_force(CnfFormula(1, ((1,),))) is Status.SAT
    assert brute_force(CnfFormula(1, ((1,), (-1,)))) is Status.UNSAT
    assert brute_force(CnfFormula(3)) is Status.SAT
    with pytest.raises(ValueError):
        brute_force(CnfFormula(25, ((1,),)))


def _naive_sat(f):
    for bits in itertools.product([False, True], repeat=f.num_vars):
        a = {i + 1: b for i, b in enumerate(bits)}
        if evaluate(f, a) is Truth.SATISFIED:
            return Status.SAT
    return Status.UNSAT


@pytest.mark.parametrize("v", [1, 3, 5, 6, 7, 9])
def test_brute_force_word_packing(v):
    # bit-packed enumeration against a dictionary walk
    rng = np.random.default_rng(v)
    for _ in range(40):
        m = int(rng.integers(1, 4 * v + 2))
        clauses = []
        for _ in range(m):
            k = int(rng.integers(1, min(v, 3) + 1))
            vars_ = rng.choice(np.arange(1, v + 1), size=k, replace=False)
            clauses.append(tuple(int(x) if rng.random() < 0.5 else -int(x) for x in vars_))
        f = CnfFormula(v, tuple(clauses))
        assert brute_force(f) == _naive_sat(f)


def test_brute_force_single_satisfying_assignment():
    # only x1..x8 = (T,F,T,F,...) satisfies; tests high-word bit layout
    v = 8
    target = [i % 2 == 0 for i in range(v)]
    clauses = [((i + 1) if t else -(i + 1),) for i, t in enumerate(target)]
    assert brute_force(CnfFormula(v, tuple(clauses))) is Status.SAT
    clauses.append((-1, 2))
    assert brute_force(CnfFormula(v, tuple(clauses))) is Status.UNSAT


SPECS = [
    lambda v, g: UniformSpec(v, 3, g),
    lambda v, g: RichSpec(v, 3, g, copies=1),
    lambda v, g: NeighborhoodSpec(v, 3, g, bucket_size=5, p=0.3),
]


@pytest.mark.parametrize("make", SPECS)
def test_agrees_with_brute_force(make):
    rng = np.random.default_rng(7)
    for seed in range(150):
        v = int(rng.integers(5, 13))
        v -= v % 5 if v % 5 < 3 else 0
        f = generate(make(max(v, 5), int(rng.integers(1, 9))), seed)
        r = solve(f)
        assert r.status == brute_force(f)
        if r.status is Status.SAT:
            assert evaluate(f, r.model) is Truth.SATISFIED
        assert 0 <= r.backtracks <= r.decisions


def test_determinism():
    f = generate(UniformSpec(80, 3, 4.3), 5)
    a, b = solve(f), solve(f)
    assert (a.status, a.backtracks, a.decisions, a.model) == (b.status, b.backtracks, b.decisions, b.model)


clause_st = st.lists(
    st.tuples(st.integers(1, 8), st.booleans()), min_size=1, max_size=3, unique_by=lambda t: t[0]
).map(lambda lits: tuple(v if pos else -v for v, pos in lits))


@settings(max_examples=300, deadline=None)
@given(st.lists(clause_st, max_size=30))
def test_property_sound_complete(clauses):
    f = CnfFormula(8, tuple(clauses))
    r = solve(f)
    assert r.status == brute_force(f)
    if r.status is Status.SAT:
        assert evaluate(f, r.model) is Truth.SATISFIED
    assert r.backtracks <= r.decisions
    if r.decisions == 0:
        assert r.backtracks == 0


def _propagated_state(f, assignment):
    # brute fixpoint of unit propagation from a partial assignment
    a = dict(assignment)
    changed = True
    while changed:
        changed = False
        for c in f.clauses:
            if any(a.get(abs(l)) == (l > 0) for l in c):
                continue
            open_ = [l for l in c if abs(l) not in a]
            if len(open_) == 1:
                a[abs(open_[0])] = open_[0] > 0
                changed = True
    return a


def test_units_propagated_before_branching():
    # chain of implications resolved without a decision
    f = CnfFormula(5, ((1,), (-1, 2), (-2, 3), (-3, 4), (-4, 5)))
    r = solve(f)
    assert r.status is Status.SAT and r.decisions == 0
    assert r.model == _propagated_state(f, {})


def test_kernel_values_layout():
    lits, offs = CnfFormula(3, ((1,), (-2,), (3, -1))).csr
    vals = np.zeros(4, np.int8)
    status, bt, dec = kernels.dpll_kernel(lits, offs, 3, 0.0, 0, vals)
    assert status == kernels.STATUS_SAT
    assert vals.tolist() == [0, 1, -1, 1]


def two_sat_by_scc(f):
    """Implication-graph decision: unsatisfiable iff some x and -x share a
    strongly connected component."""
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import connected_components

    node = lambda lit: 2 * (abs(lit) - 1) + (lit < 0)
    rows, cols = [], []
    for a, b in f.clauses:
        rows += [node(-a), node(-b)]
        cols += [node(b), node(a)]
    n = 2 * f.num_vars
    graph = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    _, label = connected_components(graph, connection="strong")
    return Status.UNSAT if np.any(label[0::2] == label[1::2]) else Status.SAT


def test_two_sat_matches_scc_oracle_at_v100():
    for seed in range(100):
        f = generate(UniformSpec(100, 2, 1.3), seed)
        assert solve(f).status is two_sat_by_scc(f)
