"""Regenerate the quiver/weight/matching fixtures under fixtures/.

The quiver files come straight out of the toric constructors.  The F3
matching file encodes a hand-chosen maximal internal acyclic matching on
the realization of the F3 four-bundle collection; cells are written as
monomial intervals (a chain starting at a nonunit monomial is rebased by
the loader).  Variable x2 never shows up in the interval notation because
its exponent is forced by the target degree; restore_x2() puts it back.
"""

import json
import pathlib
import re
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / 'src'))

from hpa.dsl import emit_quiver
from hpa.toric import WeightData, build_toric_hpa, bondal_ruan_hpa

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / 'fixtures'

P2 = WeightData([[1, 1, 1]])
P113 = WeightData([[1, 1, 3]])
F1 = WeightData([[1, 0, 1, 1], [0, 1, 0, 1]])
F3 = WeightData([[1, 0, 1, 3], [0, 1, 0, 1]])
F3_DEGREES = [(0, 0), (1, 0), (3, 1), (4, 1)]

# The F3 matching, written as monomial intervals.  Tops and bottoms differ
# in exactly one middle chain entry (every pair is a facet relation; the
# loader checks this).  The four pairs based at x3 duplicate the four based
# at x1 after rebasing and collapse on load.
F3_PAIRS_21 = [
    ('1 < x1 < x1^3', '1 < x1^3'),
    ('1 < x1 < x1^2x3', '1 < x1^2x3'),
    ('1 < x1 < x1x3^2', '1 < x1x3^2'),
    ('1 < x3 < x3^3', '1 < x3^3'),
    ('1 < x1 < x1x4', '1 < x1x4'),
    ('1 < x3 < x3x4', '1 < x3x4'),
    ('1 < x1 < x1^4', '1 < x1^4'),
    ('1 < x1 < x1^3x3', '1 < x1^3x3'),
    ('1 < x1 < x1^2x3^2', '1 < x1^2x3^2'),
    ('1 < x1 < x1x3^3', '1 < x1x3^3'),
    ('1 < x3 < x3^4', '1 < x3^4'),
    ('x1 < x1^3 < x1^4', 'x1 < x1^4'),
    ('x1 < x1^3 < x1^3x3', 'x1 < x1^3x3'),
    ('x1 < x1^2x3 < x1^2x3^2', 'x1 < x1^2x3^2'),
    ('x1 < x1x3^2 < x1x3^3', 'x1 < x1x3^3'),
    ('x3 < x1^2x3 < x1^3x3', 'x3 < x1^3x3'),
    ('x3 < x1^2x3 < x1^2x3^2', 'x3 < x1^2x3^2'),
    ('x3 < x1x3^2 < x1x3^3', 'x3 < x1x3^3'),
    ('x3 < x3^3 < x3^4', 'x3 < x3^4'),
]
F3_PAIRS_32 = [
    ('1 < x3 < x1^2x3 < x1^3x3', '1 < x3 < x1^3x3'),
    ('1 < x3 < x1^2x3 < x1^2x3^2', '1 < x3 < x1^2x3^2'),
    ('1 < x3 < x1x3^2 < x1x3^3', '1 < x3 < x1x3^3'),
    ('1 < x1 < x1^3 < x1^4', '1 < x1^3 < x1^4'),
    ('1 < x1 < x1^3 < x1^3x3', '1 < x1^3 < x1^3x3'),
    ('1 < x1 < x1^2x3 < x1^3x3', '1 < x1^2x3 < x1^3x3'),
    ('1 < x1 < x1^2x3 < x1^2x3^2', '1 < x1^2x3 < x1^2x3^2'),
    ('1 < x1 < x1x3^2 < x1^2x3^2', '1 < x1x3^2 < x1^2x3^2'),
    ('1 < x1 < x1x3^2 < x1x3^3', '1 < x1x3^2 < x1x3^3'),
    ('1 < x3 < x3^3 < x1x3^3', '1 < x3^3 < x1x3^3'),
    ('1 < x3 < x3^3 < x3^4', '1 < x3^3 < x3^4'),
]


def parse_interval_monomial(text):
    """'x1^2x3' -> exponents of (x1, x3, x4); '1' -> zero."""
    text = text.strip()
    exps = {1: 0, 3: 0, 4: 0}
    if text != '1':
        pos = 0
        for m in re.finditer(r'x([134])(?:\^(\d+))?', text):
            assert m.start() == pos, f"bad monomial {text!r}"
            pos = m.end()
            exps[int(m.group(1))] += int(m.group(2) or 1)
        assert pos == len(text), f"bad monomial {text!r}"
    return exps[1], exps[3], exps[4]


def restore_x2(a1, a3, a4):
    """The x2 exponent that lands the monomial on one of the four degrees."""
    row1 = a1 + a3 + 3 * a4
    row2 = {0: 0, 1: 0, 3: 1, 4: 1}[row1]
    a2 = row2 - a4
    assert a2 >= 0, (a1, a3, a4)
    return (a1, a2, a3, a4)


def monomial_classes(a):
    """Map (tail vertex, total exponent vector) -> class id."""
    out = {}
    for c in a.classes:
        total = [0] * a.toric_weights.ncols
        for lab in c.rep.labels:
            total = [x + y for x, y in zip(total, a.toric_monomials[lab])]
        out[(c.tail, tuple(total))] = c.id
    return out


def chain_to_json(a, index, text):
    entries = []
    for piece in text.split('<'):
        mono = restore_x2(*parse_interval_monomial(piece))
        if sum(mono) == 0:
            entries.append([])
        else:
            cid = index[('d(0,0)', mono)]
            entries.append(list(a.cls(cid).rep.labels))
    return {'tail': 'd(0,0)', 'chain': entries}


def write_weights(name, w, degrees=None):
    data = w.to_json()
    if degrees is not None:
        data['degrees'] = [list(d) for d in degrees]
    path = FIXTURES / f'{name}.weights.json'
    path.write_text(json.dumps(data, indent=1, sort_keys=True) + '\n')
    print(f'wrote {path}')


def write_quiver(name, a):
    path = FIXTURES / f'{name}.quiver'
    path.write_text(emit_quiver(a.quiver, a.relations))
    print(f'wrote {path}')


def main():
    f3 = build_toric_hpa(F3, F3_DEGREES)
    write_quiver('f3', f3)
    write_quiver('f1', bondal_ruan_hpa(F1))
    write_quiver('p113', bondal_ruan_hpa(P113))

    write_weights('p2', P2, [(0,), (1,), (2,)])
    write_weights('p113', P113)
    write_weights('f1', F1)
    write_weights('f3', F3, F3_DEGREES)

    index = monomial_classes(f3)
    pairs = [{'top': chain_to_json(f3, index, top),
              'bottom': chain_to_json(f3, index, bot)}
             for top, bot in F3_PAIRS_21 + F3_PAIRS_32]
    path = FIXTURES / 'f3_matching.json'
    path.write_text(json.dumps({'pairs': pairs}, indent=1, sort_keys=True)
                    + '\n')
    print(f'wrote {path} ({len(pairs)} listed pairs)')


if __name__ == '__main__':
    main()
