"""Exact integer/rational linear algebra: Smith normal form, sparse
elimination for homology ranks and torsion, integer solves, and a small
rational simplex for feasibility questions.

Everything here is exact (Python ints / fractions.Fraction); no floats.
"""

from dataclasses import dataclass
from fractions import Fraction
import heapq


# ---------------------------------------------------------------------------
# Smith normal form (dense, with unimodular transforms)


@dataclass
class SNFResult:
    D: list          # diagonal matrix, same shape as input
    U: list          # unimodular, rows x rows
    V: list          # unimodular, cols x cols
    diagonal: list   # the invariant factors d_1 | d_2 | ... (nonnegative)


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(A, B):
    n, m, k = len(A), len(B[0]) if B else 0, len(B)
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                row = out[i]
                for j in range(m):
                    row[j] += a * Bt[j]
    return out


def _swap_rows(M, i, j):
    M[i], M[j] = M[j], M[i]


def _swap_cols(M, i, j):
    for row in M:
        row[i], row[j] = row[j], row[i]


def _addmul_row(M, dst, src, q):
    # row_dst += q * row_src
    Ms, Md = M[src], M[dst]
    for j in range(len(Md)):
        Md[j] += q * Ms[j]


def _addmul_col(M, dst, src, q):
    for row in M:
        row[dst] += q * row[src]


def smith_normal_form(M):
    """Return SNFResult with U*M*V = D, U and V unimodular, the diagonal of D
    nonnegative and satisfying d_1 | d_2 | ... .

    Deterministic: at each step the pivot is the entry of smallest absolute
    value in the remaining block, ties broken by (row, col) position.
    """
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    D = [list(map(int, row)) for row in M]
    if any(len(row) != ncols for row in D):
        raise ValueError("ragged matrix")
    U = identity_matrix(nrows)
    V = identity_matrix(ncols)

    t = 0
    while t < min(nrows, ncols):
        # pick pivot: smallest |value| among D[i][j], i,j >= t
        pivot = None
        for i in range(t, nrows):
            row = D[i]
            for j in range(t, ncols):
                v = row[j]
                if v:
                    key = (abs(v), i, j)
                    if pivot is None or key < pivot[0]:
                        pivot = (key, i, j)
        if pivot is None:
            break
        _, pi, pj = pivot
        if pi != t:
            _swap_rows(D, t, pi)
            _swap_rows(U, t, pi)
        if pj != t:
            _swap_cols(D, t, pj)
            _swap_cols(V, t, pj)

        # clear row and column t by division with remainder; if a remainder
        # appears, it becomes a smaller pivot next pass
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, nrows):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    _addmul_row(D, i, t, -q)
                    _addmul_row(U, i, t, -q)
                    if D[i][t]:
                        # remainder smaller than pivot: swap it up, restart
                        _swap_rows(D, t, i)
                        _swap_rows(U, t, i)
                        dirty = True
            for j in range(t + 1, ncols):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    _addmul_col(D, j, t, -q)
                    _addmul_col(V, j, t, -q)
                    if D[t][j]:
                        _swap_cols(D, t, j)
                        _swap_cols(V, t, j)
                        dirty = True

        # divisibility: pivot must divide every entry of the remaining block
        bad = None
        p = D[t][t]
        for i in range(t + 1, nrows):
            row = D[i]
            for j in range(t + 1, ncols):
                if row[j] % p:
                    bad = (i, j)
                    break
            if bad:
                break
        if bad:
            # fold the offending column into column t and redo this step
            _addmul_col(D, t, bad[1], 1)
            _addmul_col(V, t, bad[1], 1)
            continue
        t += 1

    # normalize signs
    for i in range(min(nrows, ncols)):
        if D[i][i] < 0:
            for j in range(ncols):
                D[i][j] = -D[i][j]
            for row in V:
                row[i] = -row[i]

    diag = [D[i][i] for i in range(min(nrows, ncols))]
    return SNFResult(D=D, U=U, V=V, diagonal=diag)


def determinant(M):
    """Exact determinant (Bareiss fraction-free); used to test unimodularity."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(map(int, row)) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Sparse integer matrices and elimination
#
# Boundary matrices of regular complexes are overwhelmingly +-1 entries, so
# rank/torsion are computed by splitting off unit pivots cheaply (chosen by
# Markowitz fill count) and running dense SNF on the small remaining core.


class SparseMat:
    def __init__(self, nrows, ncols, entries=None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries = {}  # (i, j) -> nonzero int
        if entries:
            for (i, j), v in entries.items():
                self[i, j] = v

    def __setitem__(self, key, v):
        if v:
            self.entries[key] = v
        else:
            self.entries.pop(key, None)

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def to_dense(self):
        M = [[0] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            M[i][j] = v
        return M

    def nnz(self):
        return len(self.entries)


def _elim_state(mat, p=None):
    rows = {}
    cols = {}
    for (i, j), v in mat.entries.items():
        if p is not None:
            v %= p
            if not v:
                continue
        rows.setdefault(i, {})[j] = v
        cols.setdefault(j, set()).add(i)
    return rows, cols


def _eliminate_units(rows, cols, p=None):
    """Split off invertible pivots; returns number of pivots taken.

    Over Z (p is None) only entries of absolute value 1 are used as pivots;
    mod a prime p every nonzero is invertible.  Rows/cols are consumed in
    place; whatever remains has no invertible entries (over Z) or is empty
    (mod p).
    """
    heap = []
    for i, r in rows.items():
        for j, v in r.items():
            if p is not None or v in (1, -1):
                cost = (len(r) - 1) * (len(cols[j]) - 1)
                heapq.heappush(heap, (cost, i, j))
    done = 0
    while heap:
        cost, pi, pj = heapq.heappop(heap)
        r = rows.get(pi)
        if r is None or pj not in r:
            continue
        v = r[pj]
        if p is None and v not in (1, -1):
            continue
        if cost != (len(r) - 1) * (len(cols[pj]) - 1):
            heapq.heappush(heap, ((len(r) - 1) * (len(cols[pj]) - 1), pi, pj))
            continue
        # pivot at (pi, pj)
        done += 1
        inv = v if p is None else pow(v, -1, p)  # v = +-1 over Z: own inverse
        prow = rows.pop(pi)
        for j in prow:
            cols[j].discard(pi)
        for i in list(cols.get(pj, ())):
            ri = rows[i]
            factor = ri[pj] * inv if p is None else (ri[pj] * inv) % p
            if not factor:
                continue
            for j, pv in prow.items():
                if j == pj:
                    continue
                nv = ri.get(j, 0) - factor * pv
                if p is not None:
                    nv %= p
                if nv:
                    if j not in ri:
                        cols.setdefault(j, set()).add(i)
                        if p is not None or nv in (1, -1):
                            heapq.heappush(
                                heap, ((len(ri)) * (len(cols[j]) - 1), i, j))
                    ri[j] = nv
                else:
                    if j in ri:
                        del ri[j]
                        cols[j].discard(i)
            del ri[pj]
            cols[pj].discard(i)
            if not ri:
                del rows[i]
            else:
                # entries may have become units
                if p is None:
                    for j, nv in ri.items():
                        if nv in (1, -1):
                            heapq.heappush(
                                heap,
                                ((len(ri) - 1) * (len(cols[j]) - 1), i, j))
        cols.pop(pj, None)
    return done


def _core_dense(rows):
    """Pack the remaining rows into a small dense matrix."""
    if not rows:
        return []
    col_ids = sorted({j for r in rows.values() for j in r})
    idx = {j: t for t, j in enumerate(col_ids)}
    out = []
    for i in sorted(rows):
        row = [0] * len(col_ids)
        for j, v in rows[i].items():
            row[idx[j]] = v
        out.append(row)
    return out


def snf_diagonal(M):
    """Invariant factors of a dense integer matrix, without transforms."""
    if not M or not M[0]:
        return []
    return smith_normal_form(M).diagonal


def invariant_factors(mat):
    """Nonzero invariant factors of a SparseMat over Z (1s included)."""
    rows, cols = _elim_state(mat)
    units = _eliminate_units(rows, cols)
    rest = [d for d in snf_diagonal(_core_dense(rows)) if d != 0]
    return [1] * units + rest


def integer_rank(mat):
    """Rank over Z (equivalently over Q) of a SparseMat."""
    rows, cols = _elim_state(mat)
    units = _eliminate_units(rows, cols)
    core = _core_dense(rows)
    return units + sum(1 for d in snf_diagonal(core) if d != 0)


def modp_rank(mat, p):
    rows, cols = _elim_state(mat, p)
    return _eliminate_units(rows, cols, p)


def homology_of_pair(n_k, d_k, d_k1, ring):
    """Homology at degree k of ... -> C_{k+1} --d_k1--> C_k --d_k--> C_{k-1}.

    n_k = dim C_k; d_k, d_k1 are SparseMat (maps out of C_k and into C_k).
    ring is ('Z',), ('Q',) or ('Fp', p).  Returns (rank, torsion list).
    """
    kind = ring[0]
    if kind in ('Z', 'Q'):
        r_out = integer_rank(d_k) if d_k is not None else 0
        if d_k1 is not None:
            facs = invariant_factors(d_k1)
            r_in = len(facs)
        else:
            facs, r_in = [], 0
        rank = n_k - r_out - r_in
        torsion = [d for d in facs if d > 1] if kind == 'Z' else []
        return rank, torsion
    if kind == 'Fp':
        p = ring[1]
        r_out = modp_rank(d_k, p) if d_k is not None else 0
        r_in = modp_rank(d_k1, p) if d_k1 is not None else 0
        return n_k - r_out - r_in, []
    raise ValueError(f"unknown ring {ring!r}")


# ---------------------------------------------------------------------------
# Integer linear systems (via SNF)


def solve_integer(M, b):
    """One integer solution x of M x = b, or None.  M dense, b a list."""
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    if nrows == 0:
        return [0] * ncols  # empty system
    snf = smith_normal_form(M)
    ub = [sum(snf.U[i][t] * b[t] for t in range(nrows)) for i in range(nrows)]
    y = [0] * ncols
    for i in range(nrows):
        d = snf.D[i][i] if i < ncols else 0
        if d:
            if ub[i] % d:
                return None
            y[i] = ub[i] // d
        elif ub[i]:
            return None
    return [sum(snf.V[i][t] * y[t] for t in range(ncols)) for i in range(ncols)]


def integer_kernel_basis(M):
    """Basis (list of vectors) of {x in Z^ncols : M x = 0}."""
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    if nrows == 0:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    snf = smith_normal_form(M)
    rank = sum(1 for d in snf.diagonal if d)
    return [[snf.V[i][t] for i in range(ncols)] for t in range(rank, ncols)]


# ---------------------------------------------------------------------------
# Exact rational simplex (maximize c.x, A x = b, x >= 0)
#
# Two-phase tableau simplex with Bland's rule; all data Fraction, so it
# terminates and is exact.  Problem sizes here are tiny (toric feasibility
# questions in <= a dozen variables).


def lp_maximize(c, A, b):
    """Return (status, value, x) for max c.x s.t. A x = b, x >= 0.

    status is 'optimal', 'infeasible' or 'unbounded'; on 'optimal', value is a
    Fraction and x a list of Fractions.
    """
    m = len(A)
    n = len(c)
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    c = [Fraction(v) for v in c]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]

    # tableau columns: n real vars + m artificials | rhs
    T = [A[i] + [Fraction(1) if j == i else Fraction(0) for j in range(m)]
         + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]

    def pivot(T, basis, row, col):
        pr = T[row]
        pv = pr[col]
        T[row] = [v / pv for v in pr]
        pr = T[row]
        for i in range(len(T)):
            if i != row and T[i][col]:
                f = T[i][col]
                T[i] = [a - f * bv for a, bv in zip(T[i], pr)]
        basis[row] = col

    def run(T, basis, obj, ncols):
        # obj: coefficient per column (maximize); returns False if unbounded
        while True:
            # reduced costs: z_j - c_j with current basis
            lam = [obj[basis[i]] for i in range(m)]
            entering = None
            for j in range(ncols):
                if j in basis:
                    continue
                red = obj[j] - sum(lam[i] * T[i][j] for i in range(m))
                if red > 0:
                    entering = j
                    break  # Bland: first improving index
            if entering is None:
                return True
            leaving = None
            best = None
            for i in range(m):
                if T[i][entering] > 0:
                    ratio = T[i][-1] / T[i][entering]
                    key = (ratio, basis[i])
                    if best is None or key < best:
                        best = key
                        leaving = i
            if leaving is None:
                return False
            pivot(T, basis, leaving, entering)

    # phase 1: maximize -(sum of artificials)
    obj1 = [Fraction(0)] * n + [Fraction(-1)] * m
    run(T, basis, obj1, n + m)
    val1 = sum(T[i][-1] for i in range(m) if basis[i] >= n)
    if val1 != 0:
        return 'infeasible', None, None
    # drive remaining artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            for j in range(n):
                if T[i][j]:
                    pivot(T, basis, i, j)
                    break
    # rows still basic in an artificial are all-zero constraints; keep them,
    # the artificial columns are fixed at 0 by never letting them re-enter
    obj2 = c + [Fraction(-1)] * m  # artificials never improve
    if not run(T, basis, obj2, n):
        return 'unbounded', None, None
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][-1]
    value = sum(ci * xi for ci, xi in zip(c, x))
    return 'optimal', value, x


def lp_feasible(A, b):
    """Is {x >= 0 : A x = b} nonempty?"""
    status, _, x = lp_maximize([0] * (len(A[0]) if A else 0), A, b)
    return (status == 'optimal'), x
