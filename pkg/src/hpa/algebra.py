"""Path congruences on acyclic quivers and the homotopy-path-algebra axioms.

An algebra here is kQ/I where I is generated by differences p - p' of path
words listed in relation groups.  We only ever manipulate the induced
congruence on path words; coefficients never leave {0, +-1, q-classes}.
"""

from collections import namedtuple

from .quiver import (Arrow, PathWord, Quiver, QuiverError, enumerate_paths,
                     linear_quiver, trivial_word)


class RelationError(ValueError):
    pass


class RelationSet:
    """Groups of path words to be identified.  Each group shares endpoints;
    groups with the same endpoints are pairwise disjoint as word sets."""

    def __init__(self, quiver, groups):
        self.quiver = quiver
        norm = []
        for g in groups:
            g = tuple(g)
            if len(g) < 2:
                raise RelationError("relation group needs at least two words")
            t, h = g[0].tail, g[0].head
            for w in g:
                if not isinstance(w, PathWord):
                    raise RelationError(f"not a path word: {w!r}")
                if (w.tail, w.head) != (t, h):
                    raise RelationError(
                        f"relation endpoints mismatch: {_fmt(g[0])} vs {_fmt(w)}")
                quiver.word(w.tail, w.labels)  # validates composability
            if len(set(g)) != len(g):
                raise RelationError(f"repeated word in relation group {_fmt(g[0])}")
            norm.append(g)
        seen = {}
        for g in norm:
            key = (g[0].tail, g[0].head)
            for w in g:
                if w in seen.get(key, set()):
                    raise RelationError(
                        f"word {_fmt(w)} appears in two relation groups")
                seen.setdefault(key, set()).add(w)
        self.groups = tuple(norm)

    def __len__(self):
        return len(self.groups)


def _fmt(w):
    return ' '.join(w.labels) if w.labels else f"e_{w.tail}"


PathClass = namedtuple('PathClass', ['id', 'rep', 'tail', 'head', 'words',
                                     'lengths', 'is_trivial'])


class HPA:
    """A quiver with a path congruence; built by congruence_closure.

    Classes are indexed 0..n-1 sorted by their canonical representative
    (lexicographically least word under the arrow declaration order).
    """

    def __init__(self, quiver, relations, classes_words):
        self.quiver = quiver
        self.relations = relations
        # classes_words: list of lists of PathWord
        keyed = []
        for ws in classes_words:
            ws = sorted(ws, key=quiver.word_key)
            keyed.append((quiver.word_key(ws[0]), ws))
        keyed.sort(key=lambda t: t[0])
        self.classes = []
        self.class_of_word = {}
        for cid, (_, ws) in enumerate(keyed):
            rep = ws[0]
            lengths = frozenset(len(w.labels) for w in ws)
            pc = PathClass(cid, rep, rep.tail, rep.head, tuple(ws), lengths,
                           lengths == frozenset({0}))
            self.classes.append(pc)
            for w in ws:
                self.class_of_word[w] = cid
        self.graded = all(len(c.lengths) == 1 for c in self.classes)
        self.trivial_class = {c.tail: c.id for c in self.classes if c.is_trivial}
        self.arrow_class = {}
        for a in quiver.arrows:
            self.arrow_class[a.label] = self.class_of_word[
                PathWord(a.tail, a.head, (a.label,))]
        self.classes_by_tail = {v: [] for v in quiver.vertices}
        self.classes_by_pair = {}
        for c in self.classes:
            self.classes_by_tail[c.tail].append(c.id)
            self.classes_by_pair.setdefault((c.tail, c.head), []).append(c.id)
        self._mult = {}

    # -- basic queries ------------------------------------------------------

    def cls(self, cid):
        return self.classes[cid]

    def tail(self, cid):
        return self.classes[cid].tail

    def head(self, cid):
        return self.classes[cid].head

    def is_trivial(self, cid):
        return self.classes[cid].is_trivial

    def length(self, cid):
        """Length of a class; for graded algebras this is well defined.
        Returns the minimum word length otherwise."""
        return min(self.classes[cid].lengths)

    def mult(self, c1, c2):
        """Class of the concatenation; classes must be composable."""
        key = (c1, c2)
        r = self._mult.get(key)
        if r is None:
            a, b = self.classes[c1], self.classes[c2]
            if a.head != b.tail:
                raise ValueError(
                    f"classes not composable: head {a.head!r} != tail {b.tail!r}")
            w = PathWord(a.tail, b.head, a.rep.labels + b.rep.labels)
            r = self.class_of_word[w]
            self._mult[key] = r
        return r

    def word_class(self, w):
        return self.class_of_word[w]

    def class_table(self):
        """JSON-ready class table."""
        return [{
            'id': c.id,
            'canonical': list(c.rep.labels),
            'tail': c.tail,
            'head': c.head,
            'lengths': sorted(c.lengths),
            'size': len(c.words),
        } for c in self.classes]


def congruence_closure(paths, rels):
    """Smallest congruence on the path words containing the relation groups
    and closed under left/right concatenation by arbitrary paths."""
    q = rels.quiver
    words = sorted(paths, key=q.word_key)
    wid = {w: i for i, w in enumerate(words)}
    parent = list(range(len(words)))

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx == ry:
            return None
        if rx > ry:
            rx, ry = ry, rx
        parent[ry] = rx
        return (rx, ry)

    work = []
    for g in rels.groups:
        first = wid[g[0]]
        for w in g[1:]:
            m = union(first, wid[w])
            if m:
                work.append(m)

    # closure under single-arrow extension on both sides suffices: any longer
    # extension is a chain of single-arrow ones.
    while work:
        x, y = work.pop()
        u, v = words[x], words[y]
        for a in q.out[u.head]:
            xu = wid[PathWord(u.tail, a.head, u.labels + (a.label,))]
            xv = wid[PathWord(v.tail, a.head, v.labels + (a.label,))]
            m = union(xu, xv)
            if m:
                work.append(m)
        for a in q.inc[u.tail]:
            xu = wid[PathWord(a.tail, u.head, (a.label,) + u.labels)]
            xv = wid[PathWord(a.tail, v.head, (a.label,) + v.labels)]
            m = union(xu, xv)
            if m:
                work.append(m)

    groups = {}
    for i, w in enumerate(words):
        groups.setdefault(find(i), []).append(w)
    return HPA(q, rels, list(groups.values()))


def free_algebra(q):
    return congruence_closure(enumerate_paths(q), RelationSet(q, []))


def from_document(text):
    """Parse a DSL document and run the congruence; convenience wrapper."""
    from .dsl import parse_quiver
    q, rels = parse_quiver(text)
    return congruence_closure(enumerate_paths(q), rels)


# -- HPA axiom check --------------------------------------------------------

Violation = namedtuple('Violation', ['side', 'r', 'p', 'p2'])


class CheckReport:
    def __init__(self, violations):
        self.violations = violations
        self.ok = not violations

    def __bool__(self):
        return self.ok

    def summary(self):
        if self.ok:
            return "cancellative: passes both axioms"
        v = self.violations[0]
        return (f"{len(self.violations)} violation(s); first: "
                f"{v.side} cancellation fails for r={_fmt(v.r)} with "
                f"p={_fmt(v.p)}, p'={_fmt(v.p2)}")

    def to_json(self):
        return {
            'ok': self.ok,
            'violations': [{
                'side': v.side,
                'r': list(v.r.labels),
                'r_tail': v.r.tail,
                'p': list(v.p.labels),
                'p2': list(v.p2.labels),
                'p_tail': v.p.tail,
            } for v in self.violations],
        }


def check_hpa(a):
    """Left/right cancellativity of the congruence, checked exhaustively:
    rp ~ rp' must imply p ~ p', and pr ~ p'r must imply p ~ p'."""
    q = a.quiver
    words_by_tail = {v: [] for v in q.vertices}
    words_by_head = {v: [] for v in q.vertices}
    for w in a.class_of_word:
        words_by_tail[w.tail].append(w)
        words_by_head[w.head].append(w)
    for v in q.vertices:
        words_by_tail[v].sort(key=q.word_key)
        words_by_head[v].sort(key=q.word_key)

    cls = a.class_of_word
    violations = []
    for r in a.class_of_word:
        if not r.labels:
            continue
        ps = words_by_tail[r.head]
        for i, p in enumerate(ps):
            rp = cls[PathWord(r.tail, p.head, r.labels + p.labels)]
            for p2 in ps[i + 1:]:
                if p2.head != p.head or cls[p] == cls[p2]:
                    continue
                if rp == cls[PathWord(r.tail, p2.head, r.labels + p2.labels)]:
                    violations.append(Violation('left', r, p, p2))
        ps = words_by_head[r.tail]
        for i, p in enumerate(ps):
            pr = cls[PathWord(p.tail, r.head, p.labels + r.labels)]
            for p2 in ps[i + 1:]:
                if p2.tail != p.tail or cls[p] == cls[p2]:
                    continue
                if pr == cls[PathWord(p2.tail, r.head, p2.labels + r.labels)]:
                    violations.append(Violation('right', r, p, p2))
    return CheckReport(violations)


# -- path poset --------------------------------------------------------------


class PathPoset:
    """Classes of an HPA ordered by left divisibility: p <= q iff q = p.r for
    some class r.  Quotients are unique by cancellativity."""

    def __init__(self, hpa):
        self.hpa = hpa
        self._div = {}

    def divide(self, p, q):
        """The unique class r with p.r = q; raises ValueError('not a subpath')
        if p does not left-divide q."""
        r = self.divide_or_none(p, q)
        if r is None:
            raise ValueError("not a subpath")
        return r

    def divide_or_none(self, p, q):
        key = (p, q)
        if key in self._div:
            return self._div[key]
        a = self.hpa
        result = None
        pc, qc = a.cls(p), a.cls(q)
        if pc.tail == qc.tail:
            if pc.is_trivial:
                result = q
            else:
                plen = sorted({len(w.labels) for w in pc.words})
                for w in qc.words:
                    for k in plen:
                        if k > len(w.labels):
                            continue
                        pre = a.quiver.word(w.tail, w.labels[:k])
                        if a.class_of_word.get(pre) == p:
                            suf = PathWord(pre.head, w.head, w.labels[k:])
                            result = a.class_of_word[suf]
                            break
                    if result is not None:
                        break
        self._div[key] = result
        return result

    def leq(self, p, q):
        return self.divide_or_none(p, q) is not None

    def less(self, p, q):
        return p != q and self.leq(p, q)

    def open_interval(self, p):
        """Classes strictly between the trivial path at tail(p) and p."""
        a = self.hpa
        out = []
        for c in a.classes_by_tail[a.tail(p)]:
            if c != p and not a.is_trivial(c) and self.leq(c, p):
                out.append(c)
        return out


def path_poset(a):
    return PathPoset(a)


# -- tensor product ----------------------------------------------------------


def _uniquify(names):
    """Make names unique by appending primes, preserving order."""
    seen = {}
    out = []
    for n in names:
        m = n
        while m in seen:
            m = m + "'"
        seen[m] = True
        out.append(m)
    return out


def tensor(a, b):
    """Tensor product algebra: product quiver, both relation sets lifted, and
    one commuting-square group per arrow pair."""
    qa, qb = a.quiver, b.quiver
    vname = {}
    names = _uniquify([f"{v}|{w}" for v in qa.vertices for w in qb.vertices])
    i = 0
    for v in qa.vertices:
        for w in qb.vertices:
            vname[v, w] = names[i]
            i += 1

    aname = {}
    raw = [f"{ar.label}|{w}" for ar in qa.arrows for w in qb.vertices] + \
          [f"{v}|{br.label}" for v in qa.vertices for br in qb.arrows]
    raw = _uniquify(raw)
    arrows = []
    i = 0
    for ar in qa.arrows:
        for w in qb.vertices:
            aname['L', ar.label, w] = raw[i]
            arrows.append(Arrow(raw[i], vname[ar.tail, w], vname[ar.head, w]))
            i += 1
    for v in qa.vertices:
        for br in qb.arrows:
            aname['R', v, br.label] = raw[i]
            arrows.append(Arrow(raw[i], vname[v, br.tail], vname[v, br.head]))
            i += 1
    q = Quiver(list(vname.values()), arrows)

    def lift_a(word, w):
        labels = tuple(aname['L', l, w] for l in word.labels)
        return PathWord(vname[word.tail, w], vname[word.head, w], labels)

    def lift_b(v, word):
        labels = tuple(aname['R', v, l] for l in word.labels)
        return PathWord(vname[v, word.tail], vname[v, word.head], labels)

    groups = []
    for g in a.relations.groups:
        for w in qb.vertices:
            groups.append([lift_a(word, w) for word in g])
    for g in b.relations.groups:
        for v in qa.vertices:
            groups.append([lift_b(v, word) for word in g])
    for ar in qa.arrows:
        for br in qb.arrows:
            w1 = PathWord(vname[ar.tail, br.tail], vname[ar.head, br.head],
                          (aname['L', ar.label, br.tail],
                           aname['R', ar.head, br.label]))
            w2 = PathWord(vname[ar.tail, br.tail], vname[ar.head, br.head],
                          (aname['R', ar.tail, br.label],
                           aname['L', ar.label, br.head]))
            groups.append([w1, w2])

    rels = RelationSet(q, groups)
    return congruence_closure(enumerate_paths(q), rels)


def bhk_algebra(d_total, charges):
    """Tensor of linear quivers A_{d_total/r - 1}, one factor per charge r.
    Each charge must divide d_total."""
    if not charges:
        raise ValueError("need at least one charge")
    factors = []
    for i, r in enumerate(charges):
        if r <= 0 or d_total % r:
            raise ValueError(f"charge {r} does not divide {d_total}")
        k = d_total // r - 1
        if k < 1:
            raise ValueError(f"charge {r} gives an empty factor")
        factors.append(free_algebra(
            linear_quiver(k, vertex_prefix=f"u{i}_", arrow_prefix=f"s{i}_")))
    out = factors[0]
    for f in factors[1:]:
        out = tensor(out, f)
    return out
