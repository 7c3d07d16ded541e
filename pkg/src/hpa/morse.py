"""Internal acyclic matchings and the Morse complex of projective bimodules.

A matching pairs k-cells with (k-1)-facets.  Internality (no cell from Q_0 or
Q_1 matched, matched pairs share tail and head) forces every matched facet to
be a middle face: dropping the first entry changes the tail and dropping the
last changes the head (the quiver is acyclic, so a proper quotient cannot be
a loop).  Middle faces carry trivial coefficients and incidence +-1, which is
what lets the matched pairs be cancelled.

Gradient flow: a non-critical bottom sigma matched with top tau satisfies
0 ~ d(tau) = eps.sigma + sum(other faces), so sigma is rewritten as
-eps^{-1} sum s_f . l_f [f] r_f and the rewriting is iterated; acyclicity
makes the recursion well founded.  The Morse differential of a critical cell
composes its boundary terms with these flows.
"""

import json
from collections import deque

from .realization import build_realization


class MatchingError(ValueError):
    pass


class Matching:
    """A set of (top, bottom) cell pairs, bottom a facet of top, no cell used
    twice.  Holds a reference to the complex it lives on."""

    def __init__(self, complex_, pairs):
        self.complex = complex_
        seen = set()
        norm = []
        for top, bottom in pairs:
            if top not in complex_.index:
                raise MatchingError(f"unknown cell {top}")
            if bottom not in complex_.index:
                raise MatchingError(f"unknown cell {bottom}")
            if bottom not in complex_.faces(top):
                raise MatchingError(
                    f"{complex_.format_cell(bottom)} is not a facet of "
                    f"{complex_.format_cell(top)}")
            for cell in (top, bottom):
                if cell in seen:
                    raise MatchingError(
                        f"cell {complex_.format_cell(cell)} matched twice")
                seen.add(cell)
            norm.append((top, bottom))
        self.pairs = sorted(norm)
        self.top_of = {b: t for t, b in self.pairs}
        self.bottom_of = {t: b for t, b in self.pairs}
        self.cells = seen

    def __len__(self):
        return len(self.pairs)

    def is_matched(self, cell):
        return cell in self.cells


class InternalReport:
    def __init__(self, witnesses):
        self.witnesses = witnesses
        self.ok = not witnesses

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {'ok': self.ok, 'witnesses': self.witnesses}


def _is_arrow_cell(hpa, cell):
    """1-cell [e_v < p] with p the class of an arrow."""
    if len(cell) != 2:
        return False
    return any(len(w.labels) == 1 for w in hpa.cls(cell[1]).words)


def check_internal(m, a=None):
    """Internality: no Q_0 or Q_1 cell matched; pairs share tail and head."""
    if a is None:
        a = m.complex.hpa
    x = m.complex
    witnesses = []
    for top, bottom in m.pairs:
        for cell in (top, bottom):
            if len(cell) == 1:
                witnesses.append(
                    ('vertex cell matched', x.format_cell(cell)))
            elif _is_arrow_cell(a, cell):
                witnesses.append(
                    ('arrow cell matched', x.format_cell(cell)))
        if x.tail(top) != x.tail(bottom) or x.head(top) != x.head(bottom):
            witnesses.append(
                ('pair changes stratum',
                 f"{x.format_cell(top)} ~ {x.format_cell(bottom)}"))
    return InternalReport(witnesses)


class AcyclicReport:
    def __init__(self, cycle, complex_=None):
        self.cycle = cycle
        self.ok = cycle is None
        self._complex = complex_

    def __bool__(self):
        return self.ok

    def to_json(self):
        out = {'ok': self.ok}
        if not self.ok:
            out['cycle'] = [self._complex.format_cell(c) if self._complex
                            else str(c) for c in self.cycle]
        return out


def check_acyclic(m):
    """Cycle detection on the Hasse digraph with matched edges upward.

    A directed cycle alternates matched-up and facet-down steps, so it only
    visits matched bottoms of a fixed dimension; for internal matchings it
    also stays inside one (tail, head) stratum, which we use to cut the
    search space.  Returns a replayable alternating cycle on failure.
    """
    x = m.complex
    internal = check_internal(m).ok

    groups = {}
    for bottom, top in m.top_of.items():
        if internal:
            key = (len(bottom), x.tail(bottom), x.head(bottom))
        else:
            key = len(bottom)
        groups.setdefault(key, []).append(bottom)

    for _, bottoms in sorted(groups.items()):
        bset = set(bottoms)
        succ = {}
        for s in bottoms:
            top = m.top_of[s]
            succ[s] = [f for f in x.faces(top) if f != s and f in bset]
        color = {}
        for start in sorted(bottoms):
            if color.get(start):
                continue
            stack = [(start, iter(succ[start]))]
            color[start] = 1
            path = [start]
            while stack:
                node, it = stack[-1]
                advanced = False
                for nxt in it:
                    if color.get(nxt, 0) == 1:
                        cycle = path[path.index(nxt):] + [nxt]
                        full = []
                        for sb in cycle[:-1]:
                            full.extend([sb, m.top_of[sb]])
                        full.append(cycle[-1])
                        return AcyclicReport(full, x)
                    if color.get(nxt, 0) == 0:
                        color[nxt] = 1
                        path.append(nxt)
                        stack.append((nxt, iter(succ[nxt])))
                        advanced = True
                        break
                if not advanced:
                    color[node] = 2
                    path.pop()
                    stack.pop()
    return AcyclicReport(None)


# ---------------------------------------------------------------------------
# Morse complex


class MorseComplex:
    """Critical cells with the gradient-path differential; exposes the same
    generators/terms interface as BimoduleComplex."""

    def __init__(self, hpa, cells_by_dim, terms, matching):
        self.hpa = hpa
        self.cells = cells_by_dim
        self._terms = terms
        self.matching = matching

    @property
    def top(self):
        return len(self.cells) - 1

    def generators(self, k):
        if 0 <= k <= self.top:
            return self.cells[k]
        return []

    def terms(self, cell):
        return self._terms.get(cell, [])

    def counts(self):
        return [len(cs) for cs in self.cells]


def _matched_entry(c, top, bottom):
    """Incidence of a matched pair; must be a bare +-1 (middle face)."""
    hits = [(s, l, r) for s, l, f, r in c.terms(top) if f == bottom]
    if len(hits) != 1:
        raise AssertionError("matched facet not unique in boundary")
    s, l, r = hits[0]
    if not (c.hpa.is_trivial(l) and c.hpa.is_trivial(r) and s in (1, -1)):
        raise AssertionError(
            "matched pair has a non-invertible incidence coefficient")
    return s


def morse_complex(c, m):
    """Morse complex of the bimodule resolution c under the matching m.

    Raises MatchingError unless m is internal and acyclic.  With the empty
    matching this reproduces c itself.
    """
    rep = check_internal(m, c.hpa)
    if not rep.ok:
        raise MatchingError(f"matching not internal: {rep.witnesses[0]}")
    rep = check_acyclic(m)
    if not rep.ok:
        raise MatchingError("matching not acyclic: " + ' -> '.join(
            c.complex.format_cell(x) for x in rep.cycle))

    a = c.hpa
    x = c.complex
    critical = [[cell for cell in x.cells[k] if not m.is_matched(cell)]
                for k in range(x.max_dim + 1)]

    terms = {}
    for k in range(1, x.max_dim + 1):
        flow = {}

        def flow_of(s0):
            # iterative post-order; flow of a (k-1)-cell as
            # {(l, critical target, r): coefficient}
            stack = [s0]
            while stack:
                s = stack[-1]
                if s in flow:
                    stack.pop()
                    continue
                if not m.is_matched(s):
                    flow[s] = {(a.trivial_class[x.tail(s)], s,
                                a.trivial_class[x.head(s)]): 1}
                    stack.pop()
                    continue
                if s in m.bottom_of:  # matched downward: paths end, not critical
                    flow[s] = {}
                    stack.pop()
                    continue
                tau = m.top_of[s]
                deps = [(sign, l, f, r) for sign, l, f, r in c.terms(tau)
                        if f != s]
                missing = [f for _, _, f, _ in deps if f not in flow]
                if missing:
                    stack.extend(missing)
                    continue
                eps = _matched_entry(c, tau, s)
                acc = {}
                for sign, l, f, r in deps:
                    for (l2, tgt, r2), cf in flow[f].items():
                        key = (a.mult(l, l2), tgt, a.mult(r2, r))
                        nv = acc.get(key, 0) + (-eps) * sign * cf
                        if nv:
                            acc[key] = nv
                        else:
                            acc.pop(key, None)
                flow[s] = acc
                stack.pop()
            return flow[s0]

        for tau in critical[k]:
            acc = {}
            for sign, l, f, r in c.terms(tau):
                for (l2, tgt, r2), cf in flow_of(f).items():
                    key = (a.mult(l, l2), tgt, a.mult(r2, r))
                    nv = acc.get(key, 0) + sign * cf
                    if nv:
                        acc[key] = nv
                    else:
                        acc.pop(key, None)
            terms[tau] = [(cf, l, tgt, r)
                          for (l, tgt, r), cf in sorted(acc.items())]

    while critical and not critical[-1]:
        critical.pop()
    return MorseComplex(a, critical, terms, m)


def gradient_path_counts(c, m):
    """Audit: number of alternating gradient paths between critical cells,
    as {(top cell, target cell): count}."""
    x = c.complex
    counts = {}
    critical = [[cell for cell in x.cells[k] if not m.is_matched(cell)]
                for k in range(x.max_dim + 1)]
    for k in range(1, x.max_dim + 1):
        flow = {}

        def count_of(s0):
            stack = [s0]
            while stack:
                s = stack[-1]
                if s in flow:
                    stack.pop()
                    continue
                if not m.is_matched(s):
                    flow[s] = {s: 1}
                    stack.pop()
                    continue
                if s in m.bottom_of:
                    flow[s] = {}
                    stack.pop()
                    continue
                tau = m.top_of[s]
                deps = [f for _, _, f, _ in c.terms(tau) if f != s]
                missing = [f for f in deps if f not in flow]
                if missing:
                    stack.extend(missing)
                    continue
                acc = {}
                for f in deps:
                    for tgt, n in flow[f].items():
                        acc[tgt] = acc.get(tgt, 0) + n
                flow[s] = acc
                stack.pop()
            return flow[s0]

        for tau in critical[k]:
            for _, _, f, _ in c.terms(tau):
                for tgt, n in count_of(f).items():
                    counts[tau, tgt] = counts.get((tau, tgt), 0) + n
    return counts


# ---------------------------------------------------------------------------
# Matching constructions


def default_chain_order(hpa, chain):
    """Lexicographic key: the sequence of canonical words along the chain."""
    return tuple(hpa.quiver.word_key(hpa.cls(c).rep) for c in chain)


def _maximal_chains(elements, leq):
    """All maximal chains of a finite poset given as element list + leq."""
    elems = list(elements)
    below = {e: [f for f in elems if f != e and leq(f, e)] for e in elems}
    above = {e: [f for f in elems if f != e and leq(e, f)] for e in elems}
    minimals = [e for e in elems if not below[e]]
    chains = []
    stack = [(e, (e,)) for e in minimals]
    while stack:
        last, chain = stack.pop()
        covers = [f for f in above[last]
                  if not any(g != f and leq(g, f) for g in above[last])]
        if not covers:
            chains.append(chain)
        else:
            for f in covers:
                stack.append((f, chain + (f,)))
    return chains


def _component_cells(x, p):
    """Cells whose maximal chain element is p (dimension >= 1)."""
    out = []
    for k in range(1, x.max_dim + 1):
        for cell in x.cells[k]:
            if cell[-1] == p:
                out.append(cell)
    return out


def _greedy_on_cells(x, cells):
    """Coreduction on a family of cells closed under 'shares max element':
    repeatedly match a bottom with its only available coface via a middle
    face; when stuck, set aside one cell as critical."""
    available = set(cells)
    middle = {}
    cofaces = {}
    for cell in cells:
        if len(cell) >= 3:
            ms = x.faces(cell)[1:-1]
            middle[cell] = ms
            for f in ms:
                cofaces.setdefault(f, []).append(cell)
    count = {cell: sum(1 for t in cofaces.get(cell, ()) if t in available)
             for cell in cells}

    pairs = []
    queue = deque(sorted(c for c in cells if count[c] == 1))

    def remove(cell):
        available.discard(cell)
        for f in middle.get(cell, ()):
            if f in count:
                count[f] -= 1
                if count[f] == 1 and f in available:
                    queue.append(f)

    critical = []
    while available:
        while queue:
            s = queue.popleft()
            if s not in available or count[s] != 1:
                continue
            tops = [t for t in cofaces.get(s, ()) if t in available]
            if len(tops) != 1 or tops[0] == s:
                continue
            t = tops[0]
            pairs.append((t, s))
            remove(s)
            remove(t)
        if available:
            # deterministically give up on one cell
            s = min(available, key=lambda cell: (len(cell), cell))
            critical.append(s)
            remove(s)
    return pairs, critical


def greedy_internal_matching(a, complex_=None):
    """Internal acyclic matching by coreduction, stratified by the maximal
    chain element (pairs always share it), then augmented to be maximal by
    inclusion."""
    x = complex_ if complex_ is not None else build_realization(a)
    pairs = []
    for p in range(len(a.classes)):
        if a.is_trivial(p):
            continue
        cells = _component_cells(x, p)
        if cells:
            got, _ = _greedy_on_cells(x, cells)
            pairs.extend(got)
    m = Matching(x, pairs)
    m = _augment(a, x, m)
    assert check_internal(m, a).ok and check_acyclic(m).ok
    return m


def _augment(a, x, m):
    """Try to add remaining internal pairs while preserving acyclicity."""
    pairs = list(m.pairs)
    matched = set(m.cells)
    changed = True
    while changed:
        changed = False
        for k in range(2, x.max_dim + 1):
            for top in x.cells[k]:
                if top in matched or _is_arrow_cell(a, top):
                    continue
                for f in x.faces(top)[1:-1]:
                    if f in matched or len(f) < 2 or _is_arrow_cell(a, f):
                        continue
                    candidate = Matching(x, pairs + [(top, f)])
                    if check_acyclic(candidate).ok:
                        pairs.append((top, f))
                        matched.add(top)
                        matched.add(f)
                        changed = True
                        break
    return Matching(x, pairs)


def babson_hersh_matching(a, chain_order=None, complex_=None):
    """Lexicographic interval matching.

    For each nontrivial class p, the maximal chains of the open interval
    (e_{t(p)}, p) are ordered (default: lexicographically by canonical
    words); the shelling restriction sets R_j yield a perfect matching on
    the non-critical faces, with the empty face matched into the first
    facet — that reproduces the extra pairing [e < p] ~ [e < t < p] with t
    the lexicographically least toggle.  Interval faces lift to cells by
    sandwiching between e_{t(p)} and p.  When the chosen order fails the
    shelling condition for some p (a non-shellable interval), that class
    falls back to greedy coreduction on its own cells.  Internality and
    acyclicity of the result are asserted, not assumed.
    """
    if chain_order is None:
        chain_order = default_chain_order
    x = complex_ if complex_ is not None else build_realization(a)
    poset = x.poset
    pairs = []
    fallbacks = []

    for p in range(len(a.classes)):
        if a.is_trivial(p):
            continue
        interval = poset.open_interval(p)
        if not interval:
            continue  # the 1-cell [e < p] stays critical
        pos = {}
        chains = _maximal_chains(interval, poset.leq)
        chains.sort(key=lambda ch: chain_order(a, ch))
        for ch in chains:
            for i, e in enumerate(ch):
                pos[e] = i

        def lift(face_set, chain):
            ordered = tuple(sorted(face_set, key=lambda e: chain.index(e)))
            return (a.trivial_class[a.tail(p)],) + ordered + (p,)

        facet_sets = [frozenset(ch) for ch in chains]
        new_pairs = []
        ok = True
        seen_faces = set()
        for j, ch in enumerate(chains):
            fj = facet_sets[j]
            rj = set()
            for v in fj:
                rest = fj - {v}
                if any(rest <= facet_sets[i] for i in range(j)):
                    rj.add(v)
            # shelling condition: the new faces of F_j must be exactly the
            # interval [R_j, F_j].  Both directions matter: R_j = empty with
            # the empty face already seen is how a disjoint union sneaks in.
            subsets = [frozenset()]
            for v in ch:
                subsets += [s | {v} for s in subsets]
            for s in subsets:
                if (rj <= s) == (s in seen_faces):
                    ok = False
                    break
            if not ok:
                break
            free = sorted(fj - rj,
                          key=lambda e: a.quiver.word_key(a.cls(e).rep))
            if not free:
                pass  # R_j = F_j: single new face, critical
            else:
                toggle = free[0]
                rest = [v for v in free if v != toggle]
                tsets = [frozenset()]
                for v in rest:
                    tsets += [s | {v} for s in tsets]
                for t in tsets:
                    low = frozenset(rj) | t
                    new_pairs.append((lift(low | {toggle}, ch), lift(low, ch)))
            seen_faces.update(subsets)

        if ok:
            pairs.extend(new_pairs)
        else:
            got, _ = _greedy_on_cells(x, _component_cells(x, p))
            pairs.extend(got)
            fallbacks.append(p)

    m = Matching(x, pairs)
    if fallbacks:
        # greedy leftovers may admit further pairs; keep the matching as
        # large as possible so minimality still has a chance
        m = _augment(a, x, m)
    m.fallback_classes = fallbacks
    internal = check_internal(m, a)
    assert internal.ok, internal.witnesses
    acyclic = check_acyclic(m)
    assert acyclic.ok, acyclic.to_json()
    return m


# ---------------------------------------------------------------------------
# Minimality / linearity


class TermReport:
    def __init__(self, witnesses, checked):
        self.witnesses = witnesses
        self.checked = checked
        self.ok = not witnesses

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {'ok': self.ok, 'checked': self.checked,
                'witnesses': self.witnesses[:20]}


def check_minimal(mc):
    """Minimal iff no differential term has both coefficients trivial."""
    a = mc.hpa
    witnesses = []
    checked = 0
    for k in range(1, mc.top + 1):
        for cell in mc.generators(k):
            for coef, l, tgt, r in mc.terms(cell):
                checked += 1
                if a.is_trivial(l) and a.is_trivial(r):
                    witnesses.append((cell, tgt, coef))
    return TermReport(witnesses, checked)


def check_linear(mc, a=None):
    """Linear iff every term has len(l) + len(r) = 1.  Refuses ungraded
    algebras (length of a class is ill defined there)."""
    if a is None:
        a = mc.hpa
    if not a.graded:
        raise ValueError("algebra is not graded by path length")
    witnesses = []
    checked = 0
    for k in range(1, mc.top + 1):
        for cell in mc.generators(k):
            for coef, l, tgt, r in mc.terms(cell):
                checked += 1
                if a.length(l) + a.length(r) != 1:
                    witnesses.append((cell, tgt, a.length(l), a.length(r)))
    return TermReport(witnesses, checked)


# ---------------------------------------------------------------------------
# Fixture serialization


def _cell_to_json(x, cell):
    a = x.hpa
    return {'tail': x.tail(cell),
            'chain': [list(a.cls(c).rep.labels) for c in cell]}


def _cell_from_json(x, data):
    a = x.hpa
    tail = data['tail']
    chain = data['chain']
    if not chain:
        raise MatchingError("empty chain")
    classes = []
    for labels in chain:
        w = a.quiver.word(tail, tuple(labels))
        classes.append(a.word_class(w))
    if not a.is_trivial(classes[0]):
        # rebase a chain written with a nontrivial first entry
        poset = x.poset
        c0 = classes[0]
        rebased = [a.trivial_class[a.head(c0)]]
        for c in classes[1:]:
            rebased.append(poset.divide(c0, c))
        classes = rebased
    cell = tuple(classes)
    if cell not in x.index:
        raise MatchingError(f"not a cell of the realization: {cell}")
    return cell


def matching_to_json(m):
    x = m.complex
    return {'pairs': [{'top': _cell_to_json(x, t), 'bottom': _cell_to_json(x, b)}
                      for t, b in m.pairs]}


def matching_from_json(data, complex_):
    """Load a matching fixture.  Chains may be written with a nontrivial
    first entry (they are rebased to canonical cells).  Identical pairs
    collapse to one; the same cell in two different pairs is an error."""
    raw = []
    for item in data['pairs']:
        top = _cell_from_json(complex_, item['top'])
        bottom = _cell_from_json(complex_, item['bottom'])
        raw.append((top, bottom))
    dedup = sorted(set(raw))
    return Matching(complex_, dedup)


def load_matching(path, complex_):
    with open(path) as f:
        return matching_from_json(json.load(f), complex_)


def save_matching(path, m):
    with open(path, 'w') as f:
        json.dump(matching_to_json(m), f, indent=1, sort_keys=True)
        f.write('\n')
