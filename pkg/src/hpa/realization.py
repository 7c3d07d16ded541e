"""Geometric realization of a path algebra as a regular semi-simplicial
complex.

Cells in dimension k are canonical chains (e_v < p_1 < ... < p_k) of path
classes, strictly increasing under left divisibility, with a trivial first
entry.  Face i deletes the i-th entry; deleting the trivial head rebases the
chain by dividing through p_1.  Regularity makes every incidence number
(-1)^i, so boundary matrices have entries in {-1, 0, 1}.
"""

from .algebra import path_poset
from .linalg import SparseMat, homology_of_pair


RING_Z = ('Z',)
RING_Q = ('Q',)


def ring_fp(p):
    return ('Fp', p)


def parse_ring(text):
    """Ring selector: 'Z', 'Q', 'Fp:7' (or the shorthand 'F7')."""
    t = text.strip()
    if t == 'Z':
        return RING_Z
    if t == 'Q':
        return RING_Q
    if t.startswith('Fp:'):
        p = int(t[3:])
    elif t.startswith('F') and t[1:].isdigit():
        p = int(t[1:])
    else:
        raise ValueError(f"unknown ring {text!r} (want Z, Q or Fp:<p>)")
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    return ring_fp(p)


def ring_name(ring):
    return ring[0] if ring[0] != 'Fp' else f"Fp:{ring[1]}"


class CellComplex:
    """Cells graded by dimension; each cell is a tuple of class ids."""

    def __init__(self, hpa, cells_by_dim, truncated=False):
        self.hpa = hpa
        self.poset = path_poset(hpa)
        self.cells = [sorted(cs) for cs in cells_by_dim]
        while self.cells and not self.cells[-1]:
            self.cells.pop()
        self.index = {}
        for k, cs in enumerate(self.cells):
            for pos, cell in enumerate(cs):
                self.index[cell] = (k, pos)
        self.truncated = truncated
        self._faces = {}

    @property
    def max_dim(self):
        return len(self.cells) - 1

    def counts(self):
        return [len(cs) for cs in self.cells]

    def dim(self, cell):
        return len(cell) - 1

    def tail(self, cell):
        return self.hpa.tail(cell[0])

    def head(self, cell):
        return self.hpa.head(cell[-1])

    def tree_stratum(self, cell):
        """Tail vertex of the cell: the tree stratum of X_A it lies in."""
        return self.tail(cell)

    def faces(self, cell):
        """List of the k+1 facets, position i giving the i-th face."""
        cached = self._faces.get(cell)
        if cached is not None:
            return cached
        k = len(cell) - 1
        out = []
        for i in range(k + 1):
            if i == 0:
                p1 = cell[1]
                rebased = [self.hpa.trivial_class[self.hpa.head(p1)]]
                for p in cell[2:]:
                    rebased.append(self.poset.divide(p1, p))
                out.append(tuple(rebased))
            else:
                out.append(cell[:i] + cell[i + 1:])
        self._faces[cell] = out
        return out

    def boundary_terms(self, cell):
        """Signed facets: [(sign, face)] with sign = (-1)^i."""
        return [((-1) ** i, f) for i, f in enumerate(self.faces(cell))]

    def format_cell(self, cell):
        names = []
        for c in cell:
            pc = self.hpa.cls(c)
            names.append(' '.join(pc.rep.labels) if pc.rep.labels
                         else f"e_{pc.tail}")
        return '[' + ' < '.join(names) + ']'


def build_realization(a, max_dim=None):
    """Enumerate all canonical chains of the path poset of `a`.

    max_dim caps the dimension (the complex is then a truncation; homology
    above the cap is not defined from it).
    """
    poset = path_poset(a)
    cells = []
    truncated = False

    for v in a.quiver.vertices:
        nontrivial = [c for c in a.classes_by_tail[v] if not a.is_trivial(c)]
        ups = {}
        for p in nontrivial:
            ups[p] = [q for q in nontrivial
                      if q != p and poset.leq(p, q)]
        e_v = a.trivial_class[v]
        # DFS over strictly increasing chains
        stack = [(e_v,)]
        while stack:
            chain = stack.pop()
            k = len(chain) - 1
            while len(cells) <= k:
                cells.append([])
            cells[k].append(chain)
            if max_dim is not None and k >= max_dim:
                if any(ups[chain[-1]] if k else nontrivial):
                    truncated = True
                continue
            for q in (ups[chain[-1]] if k else nontrivial):
                stack.append(chain + (q,))

    return CellComplex(a, cells, truncated=truncated)


class ChainComplex:
    """dims[k] = rank of C_k; d[k]: C_k -> C_{k-1} as SparseMat (d[0] = None)."""

    def __init__(self, dims, d, ring, truncated=False):
        self.dims = dims
        self.d = d
        self.ring = ring
        self.truncated = truncated

    @property
    def top(self):
        return len(self.dims) - 1

    def differential(self, k):
        if 1 <= k <= self.top:
            return self.d[k]
        return None

    def verify_d_squared(self):
        """Return the first degree k with d_{k-1} d_k != 0, or None."""
        for k in range(2, self.top + 1):
            a, b = self.d[k - 1], self.d[k]
            if a is None or b is None:
                continue
            # accumulate a*b column by column
            cols = {}
            for (i, j), v in b.entries.items():
                cols.setdefault(j, []).append((i, v))
            rows_a = {}
            for (i, j), v in a.entries.items():
                rows_a.setdefault(j, {})[i] = v
            for j, col in cols.items():
                acc = {}
                for i, v in col:
                    for r, w in rows_a.get(i, {}).items():
                        acc[r] = acc.get(r, 0) + v * w
                if any(acc.values()):
                    return k
        return None


def cw_chain_complex(complex_, ring=RING_Z):
    """Cellular chain complex of a CellComplex over the given ring."""
    dims = complex_.counts()
    d = [None]
    for k in range(1, len(dims)):
        mat = SparseMat(dims[k - 1], dims[k])
        for j, cell in enumerate(complex_.cells[k]):
            for sign, face in complex_.boundary_terms(cell):
                i = complex_.index[face][1]
                mat[i, j] = mat[i, j] + sign
        d.append(mat)
    return ChainComplex(dims, d, ring, truncated=complex_.truncated)


def homology(chain):
    """Per-degree (rank, torsion list).  Raises on d^2 != 0, reporting the
    offending degree.  For a truncated complex the top degree is omitted."""
    bad = chain.verify_d_squared()
    if bad is not None:
        raise ValueError(f"d^2 != 0 at degree {bad}")
    out = {}
    top = chain.top
    limit = top if not chain.truncated else top - 1
    for k in range(limit + 1):
        out[k] = homology_of_pair(chain.dims[k], chain.differential(k),
                                  chain.differential(k + 1), chain.ring)
    return out


def euler_characteristic(complex_):
    return sum((-1) ** k * n for k, n in enumerate(complex_.counts()))


def tree_stratum(complex_, cell):
    return complex_.tree_stratum(cell)


def check_semisimplicial(complex_):
    """Exhaustively verify the face identities d_i d_j = d_{j-1} d_i (i < j)
    and regularity (pairwise distinct facets).  Returns list of violations."""
    bad = []
    for k in range(2, complex_.max_dim + 1):
        for cell in complex_.cells[k]:
            faces = complex_.faces(cell)
            if len(set(faces)) != len(faces):
                bad.append(('facets not distinct', cell))
            for j in range(1, k + 1):
                fj = complex_.faces(faces[j])
                for i in range(j):
                    fi = complex_.faces(faces[i])
                    if fj[i] != fi[j - 1]:
                        bad.append(('identity fails', cell, i, j))
    for cell in complex_.cells[1] if complex_.max_dim >= 1 else []:
        faces = complex_.faces(cell)
        if len(set(faces)) != len(faces):
            bad.append(('facets not distinct', cell))
    return bad


def face_poset_dot(complex_):
    """Graphviz digraph of the face poset (cell -> facet edges)."""
    lines = ["digraph faces {"]
    ids = {}
    for k, cs in enumerate(complex_.cells):
        for cell in cs:
            ids[cell] = f"c{k}_{complex_.index[cell][1]}"
            label = complex_.format_cell(cell).replace('"', "'")
            lines.append(f'  {ids[cell]} [label="{label}"];')
    for k in range(1, complex_.max_dim + 1):
        for cell in complex_.cells[k]:
            for f in complex_.faces(cell):
                lines.append(f"  {ids[cell]} -> {ids[f]};")
    lines.append("}")
    return '\n'.join(lines) + '\n'
