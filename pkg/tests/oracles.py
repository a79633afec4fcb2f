"""Independent reference implementations used as test oracles.

Plain Python loops over lists, written straight from the kernel listings;
nothing here imports the package's compiled code paths.
"""

import math
from itertools import product


def givens_reference(Ar, Ai, M, N):
    """Verbatim transcription on nested lists; returns branch counts and a (k, i, branch) trace."""
    counts = [0, 0, 0]
    trace = []
    for k in range(N):
        for i in range(M - 1 - k):
            if Ar[i + 1][k] == 0.0 and Ai[i + 1][k] == 0.0:
                br = 0
                for j in range(k, N):
                    t1_r, t1_i = Ar[i + 1][j], Ai[i + 1][j]
                    t2_r, t2_i = Ar[i][j], Ai[i][j]
                    Ar[i][j], Ai[i][j] = t1_r, t1_i
                    Ar[i + 1][j], Ai[i + 1][j] = t2_r, t2_i
            elif Ar[i][k] == 0.0 and Ai[i][k] == 0.0:
                br = 1
                ng = math.sqrt(Ar[i + 1][k] * Ar[i + 1][k] + Ai[i + 1][k] * Ai[i + 1][k])
                s_r = Ar[i + 1][k] / ng
                s_i = -Ai[i + 1][k] / ng
                for j in range(k, N):
                    t1_r = -s_r * Ar[i][j] - s_i * Ai[i][j]
                    t1_i = -s_r * Ai[i][j] + s_i * Ar[i][j]
                    t2_r = s_r * Ar[i + 1][j] - s_i * Ai[i + 1][j]
                    t2_i = s_r * Ai[i + 1][j] + s_i * Ar[i + 1][j]
                    Ar[i][j], Ai[i][j] = t1_r, t1_i
                    Ar[i + 1][j], Ai[i + 1][j] = t2_r, t2_i
            else:
                br = 2
                nm = math.sqrt(Ar[i][k] * Ar[i][k] + Ai[i][k] * Ai[i][k]
                               + Ar[i + 1][k] * Ar[i + 1][k] + Ai[i + 1][k] * Ai[i + 1][k])
                nf = math.sqrt(Ar[i][k] * Ar[i][k] + Ai[i][k] * Ai[i][k])
                sig_r = Ar[i][k] / nf
                sig_i = Ai[i][k] / nf
                c_r = nf / nm
                s_r = (sig_r * Ar[i + 1][k] + sig_i * Ai[i + 1][k]) / nm
                s_i = (sig_i * Ar[i + 1][k] - sig_r * -Ai[i + 1][k]) / nm
                for j in range(k, N):
                    t1_r = -s_r * Ar[i][j] - s_i * Ai[i][j] + c_r * Ar[i + 1][j]
                    t1_i = -s_r * Ai[i][j] + s_i * Ar[i][j] + c_r * Ai[i + 1][j]
                    t2_r = c_r * Ar[i][j] + s_r * Ar[i + 1][j] - s_i * Ai[i + 1][j]
                    t2_i = c_r * Ai[i][j] + s_r * Ai[i + 1][j] + s_i * Ar[i + 1][j]
                    Ar[i][j], Ai[i][j] = t1_r, t1_i
                    Ar[i + 1][j], Ai[i + 1][j] = t2_r, t2_i
            counts[br] += 1
            trace.append((k, i, br))
    return counts, trace


class Singular(Exception):
    pass


def gaussj_reference(a, b):
    """Forward elimination on lists (0-based); returns the swap log."""
    n = len(a)
    swaps = []
    for k in range(n - 1):
        if a[k][k] == 0:
            amax = abs(a[k][k])
            m = k
            for i in range(k + 1, n):
                aabs = abs(a[i][k])
                if aabs > amax:
                    amax = aabs
                    m = i
            if m == k:
                raise Singular(k)
            b[m], b[k] = b[k], b[m]
            for j in range(k, n):
                a[k][j], a[m][j] = a[m][j], a[k][j]
            swaps.append((k, m))
        for i in range(k + 1, n):
            xfac = a[i][k] / a[k][k]
            for j in range(k + 1, n):
                a[i][j] = a[i][j] - xfac * a[k][j]
            b[i] = b[i] - xfac * b[k]
    return swaps


def dense_symmetric_matvec(dense, v_flat, w_flat):
    """``w + A v`` by definition, in exact rational-free float sums (order irrelevant at test tolerance)."""
    n = len(v_flat)
    return [w_flat[r] + math.fsum(dense[r][c] * v_flat[c] for c in range(n)) for r in range(n)]


# -- dependence oracles --------------------------------------------------------


def givens_accesses(M, N):
    """Instance -> set of (row, col) cells read and written (every cell is both)."""
    acc = {}
    for k in range(N):
        for i in range(M - 1 - k):
            acc[(k, i)] = {(r, c) for r in (i, i + 1) for c in range(k, N)}
    return acc


def gaussj_accesses(n):
    """Update instance U(k, i) of pivot-free elimination -> (reads, writes).

    Cells are ('a', r, c) and ('b', r).
    """
    acc = {}
    for k in range(n - 1):
        for i in range(k + 1, n):
            reads = {("a", i, k), ("a", k, k), ("b", i), ("b", k)}
            reads |= {("a", k, j) for j in range(k + 1, n)} | {("a", i, j) for j in range(k + 1, n)}
            writes = {("a", i, j) for j in range(k + 1, n)} | {("b", i)}
            acc[(k, i)] = (reads, writes)
    return acc


def conflict_distances(accesses, rw=False):
    """All lexicographically positive distances between instances that touch a common
    cell with at least one write (brute force over all ordered pairs)."""
    inst = sorted(accesses)
    dists = set()
    for p, q in product(inst, inst):
        if q <= p:
            continue
        if rw:
            rp, wp = accesses[p]
            rq, wq = accesses[q]
            hit = (wp & (rq | wq)) or (rp & wq)
        else:
            hit = accesses[p] & accesses[q]
        if hit:
            dists.add((q[0] - p[0], q[1] - p[1]))
    return dists
