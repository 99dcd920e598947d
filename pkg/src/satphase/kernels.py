"""Hot loops: DPLL search, random clause sampling, all-pairs BFS.

Everything here takes and returns flat numpy arrays so it can be compiled by
numba or executed as-is (see ``_accel``). Public wrappers live in the domain
modules; nothing outside the package should call these directly.
"""
import time

import numpy as np

from ._accel import njit, objmode

STATUS_SAT = 0
STATUS_UNSAT = 1
STATUS_TIMEOUT = 2

# propagation steps between wall-clock checks
_CLOCK_EVERY = 4096


@njit
def _now_ms():
    with objmode(t="float64"):
        t = time.perf_counter() * 1000.0
    return t


@njit
def _lit_index(lit):
    if lit > 0:
        return 2 * (lit - 1)
    return 2 * (-lit - 1) + 1


@njit
def dpll_kernel(lits, offsets, num_vars, timeout_ms, max_backtracks, values):
    """Chronological DPLL with counter-based unit propagation.

    ``lits``/``offsets`` are the CSR form of the clause list. ``values`` is
    filled with +1/-1/0 per variable (index 0 unused). Returns
    ``(status, backtracks, decisions)``.

    Branching takes the first unassigned literal of the first clause that is
    not yet satisfied, written polarity first. A backtrack is a flip of the
    most recent unflipped decision.
    """
    m = offsets.size - 1
    nlit = 2 * num_vars

    # literal -> clause occurrence lists
    occ_count = np.zeros(nlit + 1, np.int64)
    for i in range(lits.size):
        occ_count[_lit_index(lits[i]) + 1] += 1
    occ_off = np.cumsum(occ_count)
    occ = np.empty(lits.size, np.int64)
    fill = occ_off[:-1].copy()
    for c in range(m):
        for i in range(offsets[c], offsets[c + 1]):
            li = _lit_index(lits[i])
            occ[fill[li]] = c
            fill[li] += 1

    ntrue = np.zeros(m, np.int64)
    nfalse = np.zeros(m, np.int64)
    for v in range(values.size):
        values[v] = 0

    trail = np.empty(num_vars + 1, np.int64)
    trail_len = 0
    qhead = 0
    dec_pos = np.empty(num_vars + 1, np.int64)
    dec_lit = np.empty(num_vars + 1, np.int64)
    dec_flip = np.zeros(num_vars + 1, np.bool_)
    ndec = 0

    backtracks = 0
    decisions = 0
    steps = 0
    use_clock = timeout_ms > 0.0
    start = 0.0
    if use_clock:
        start = _now_ms()

    conflict = False
    for c in range(m):
        if offsets[c + 1] - offsets[c] == 1:
            lit = lits[offsets[c]]
            var = abs(lit)
            want = 1 if lit > 0 else -1
            if values[var] == 0:
                values[var] = want
                trail[trail_len] = lit
                trail_len += 1
            elif values[var] != want:
                conflict = True
                break

    while True:
        # propagate pending trail entries to fixpoint or conflict
        while not conflict and qhead < trail_len:
            lit = trail[qhead]
            qhead += 1
            li = _lit_index(lit)
            for t in range(occ_off[li], occ_off[li + 1]):
                ntrue[occ[t]] += 1
            ni = li ^ 1
            for t in range(occ_off[ni], occ_off[ni + 1]):
                c = occ[t]
                nfalse[c] += 1
                if conflict or ntrue[c] > 0:
                    continue
                size = offsets[c + 1] - offsets[c]
                if nfalse[c] == size:
                    conflict = True
                elif nfalse[c] == size - 1:
                    for i in range(offsets[c], offsets[c + 1]):
                        u = lits[i]
                        if values[abs(u)] == 0:
                            values[abs(u)] = 1 if u > 0 else -1
                            trail[trail_len] = u
                            trail_len += 1
                            break
            steps += 1
            if use_clock and steps % _CLOCK_EVERY == 0:
                if _now_ms() - start > timeout_ms:
                    return STATUS_TIMEOUT, backtracks, decisions

        if conflict:
            resolved = False
            while ndec > 0:
                top = ndec - 1
                target = dec_pos[top]
                for i in range(trail_len - 1, target - 1, -1):
                    u = trail[i]
                    if i < qhead:
                        ui = _lit_index(u)
                        for t in range(occ_off[ui], occ_off[ui + 1]):
                            ntrue[occ[t]] -= 1
                        ni = ui ^ 1
                        for t in range(occ_off[ni], occ_off[ni + 1]):
                            nfalse[occ[t]] -= 1
                    values[abs(u)] = 0
                trail_len = target
                qhead = target
                if dec_flip[top]:
                    ndec -= 1
                    continue
                if max_backtracks > 0 and backtracks >= max_backtracks:
                    return STATUS_TIMEOUT, backtracks, decisions
                dec_flip[top] = True
                backtracks += 1
                lit = -dec_lit[top]
                values[abs(lit)] = 1 if lit > 0 else -1
                trail[trail_len] = lit
                trail_len += 1
                resolved = True
                break
            if not resolved:
                return STATUS_UNSAT, backtracks, decisions
            conflict = False
            continue

        # fixpoint reached without conflict: branch or finish
        branch = 0
        for c in range(m):
            if ntrue[c] == 0:
                for i in range(offsets[c], offsets[c + 1]):
                    if values[abs(lits[i])] == 0:
                        branch = lits[i]
                        break
                break
        if branch == 0:
            for v in range(1, num_vars + 1):
                if values[v] == 0:
                    values[v] = -1
            return STATUS_SAT, backtracks, decisions

        if use_clock and _now_ms() - start > timeout_ms:
            return STATUS_TIMEOUT, backtracks, decisions
        decisions += 1
        dec_pos[ndec] = trail_len
        dec_lit[ndec] = branch
        dec_flip[ndec] = False
        ndec += 1
        values[abs(branch)] = 1 if branch > 0 else -1
        trail[trail_len] = branch
        trail_len += 1


@njit
def _pick(u, n):
    x = int(u * n)
    if x >= n:
        x = n - 1
    return x


@njit
def _seen(out, start, j, var):
    for t in range(start, start + j):
        if abs(out[t]) == var:
            return True
    return False


@njit
def sample_uniform(u, v, k, m, out):
    """Fill ``out`` (length m*k) from the uniform stream ``u``.

    Returns the number of uniforms consumed, or -1 if ``u`` ran out.
    """
    pos = 0
    n = u.size
    for c in range(m):
        base = c * k
        for j in range(k):
            while True:
                if pos >= n:
                    return -1
                var = _pick(u[pos], v) + 1
                pos += 1
                if not _seen(out, base, j, var):
                    break
            if pos >= n:
                return -1
            out[base + j] = var if u[pos] < 0.5 else -var
            pos += 1
    return pos


@njit
def sample_rich(u, v, k, m, copies, out):
    """Urn sampling: each accepted pick adds ``copies`` tokens of its variable.

    The urn is shared by every clause. A pick that repeats a variable already
    in the current clause is discarded and does not grow the urn.
    """
    urn = np.empty(v + m * k * copies, np.int64)
    for i in range(v):
        urn[i] = i + 1
    size = v
    pos = 0
    n = u.size
    for c in range(m):
        base = c * k
        for j in range(k):
            while True:
                if pos >= n:
                    return -1
                var = urn[_pick(u[pos], size)]
                pos += 1
                if not _seen(out, base, j, var):
                    break
            for _ in range(copies):
                urn[size] = var
                size += 1
            if pos >= n:
                return -1
            out[base + j] = var if u[pos] < 0.5 else -var
            pos += 1
    return pos


@njit
def sample_neighborhood(u, v, k, m, bucket_size, p, out):
    """Bucketed sampling: later literals leave the home bucket with prob. p."""
    pos = 0
    n = u.size
    for c in range(m):
        base = c * k
        lo = 0
        width = 0
        for j in range(k):
            while True:
                if j == 0:
                    if pos >= n:
                        return -1
                    var = _pick(u[pos], v) + 1
                    pos += 1
                    break
                if pos + 1 >= n:
                    return -1
                if u[pos] < p:
                    var = _pick(u[pos + 1], v) + 1
                else:
                    var = lo + _pick(u[pos + 1], width) + 1
                pos += 2
                if not _seen(out, base, j, var):
                    break
            if j == 0:
                lo = ((var - 1) // bucket_size) * bucket_size
                width = min(bucket_size, v - lo)
            if pos >= n:
                return -1
            out[base + j] = var if u[pos] < 0.5 else -var
            pos += 1
    return pos


@njit
def bfs_distance_sums(indptr, indices, n):
    """Sum of shortest-path lengths and count over ordered connected pairs."""
    dist = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    total = 0
    pairs = 0
    for s in range(n):
        for i in range(n):
            dist[i] = -1
        dist[s] = 0
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            x = queue[head]
            head += 1
            dx = dist[x] + 1
            for t in range(indptr[x], indptr[x + 1]):
                y = indices[t]
                if dist[y] < 0:
                    dist[y] = dx
                    queue[tail] = y
                    tail += 1
                    total += dx
                    pairs += 1
    return total, pairs
