"""Command-line front end.

Every subcommand reads a quiver document (or weight data), runs one of the
library pipelines and writes a JSON report -- except `toric`/`tensor` in
quiver-emitting mode, which write the DSL text itself.  Reports carry no
timestamps and are emitted with sorted keys, so identical input and flags
give byte-identical output.  Each report is validated against the schema of
the same name shipped under hpa/schemas/ before it is written.

Exit codes: 0 success, 1 mathematical failure (axiom violation, rejected
matching, failed verification), 2 usage or I/O errors.
"""

import argparse
import importlib.resources
import json
import sys

import jsonschema

from . import __version__
from .algebra import check_hpa, from_document, tensor
from .dsl import ParseError, emit_quiver
from .invariants import betti_table, koszul_check
from .morse import (MatchingError, babson_hersh_matching, check_acyclic,
                    check_internal, check_linear, check_minimal,
                    greedy_internal_matching, load_matching, morse_complex)
from .quiver import QuiverError
from .realization import (RING_Z, build_realization, cw_chain_complex,
                          euler_characteristic, homology, parse_ring,
                          ring_name)
from .resolution import (cellular_resolution, contracting_homotopy_check,
                         tensor_simples, verify_d_squared)
from .toric import (WeightData, bondal_ruan_hpa, build_toric_hpa,
                    check_cohomologically_proper, check_directable,
                    degree_name, image_phi, weight_data_from_json)


def _header(command):
    return {'command': command, 'version': __version__, 'schema_version': 1}


def _schema(command):
    ref = importlib.resources.files('hpa') / 'schemas' / f'{command}.json'
    return json.loads(ref.read_text())


def _emit(args, command, payload, code=0):
    payload = {'header': _header(command), **payload}
    text = json.dumps(payload, indent=1, sort_keys=True) + '\n'
    # validate the serialized form (tuples become arrays there)
    jsonschema.validate(json.loads(text), _schema(command))
    _write(args, text)
    return code


def _write(args, text):
    if getattr(args, 'out', None):
        with open(args.out, 'w') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _load(path):
    with open(path) as f:
        return from_document(f.read())


def _homology_json(h):
    return {str(k): [rank, list(tors)] for k, (rank, tors) in sorted(h.items())}


def cmd_check(args):
    a = _load(args.input)
    rep = check_hpa(a)
    payload = {'ok': rep.ok, 'summary': rep.summary(),
               'report': rep.to_json()}
    return _emit(args, 'check', payload, 0 if rep.ok else 1)


def cmd_realize(args):
    a = _load(args.input)
    x = build_realization(a, max_dim=args.max_dim)
    payload = {'counts': x.counts(),
               'euler': euler_characteristic(x),
               'truncated': x.truncated,
               'cells': [[x.format_cell(c) for c in cells]
                         for cells in x.cells]}
    return _emit(args, 'realize', payload)


def cmd_homology(args):
    a = _load(args.input)
    x = build_realization(a, max_dim=args.max_dim)
    h = homology(cw_chain_complex(x, ring=args.ring))
    payload = {'ring': ring_name(args.ring),
               'homology': _homology_json(h),
               'euler': euler_characteristic(x),
               'truncated': x.truncated}
    return _emit(args, 'homology', payload)


def cmd_resolve(args):
    a = _load(args.input)
    x = build_realization(a, max_dim=args.max_dim)
    c = cellular_resolution(a, x)
    d2 = verify_d_squared(c)
    if x.truncated:
        # a capped complex is not a resolution; only d^2 is meaningful
        homotopy = None
    else:
        homotopy = contracting_homotopy_check(a, c)
    payload = {'generators': x.counts(),
               'truncated': x.truncated,
               'd_squared': d2.to_json(),
               'contracting_homotopy':
                   None if homotopy is None else homotopy.to_json()}
    ok = d2.ok and (homotopy is None or homotopy.ok)
    return _emit(args, 'resolve', payload, 0 if ok else 1)


def _build_matching(args, a, x):
    if args.matching == 'bh':
        return babson_hersh_matching(a, complex_=x), 'babson-hersh'
    if args.matching == 'greedy':
        return greedy_internal_matching(a, complex_=x), 'greedy'
    return load_matching(args.matching, x), 'fixture'


def cmd_morse(args):
    a = _load(args.input)
    x = build_realization(a, max_dim=args.max_dim)
    m, strategy = _build_matching(args, a, x)
    internal = check_internal(m, a)
    acyclic = check_acyclic(m)
    payload = {'matching': {'strategy': strategy, 'pairs': len(m.pairs)},
               'internal': internal.to_json(),
               'acyclic': acyclic.to_json()}
    if not (internal.ok and acyclic.ok):
        payload.update({'criticals': None, 'd_squared': None,
                        'quasi_iso': None, 'minimal': None, 'linear': None})
        return _emit(args, 'morse', payload, 1)

    c = cellular_resolution(a, x)
    mc = morse_complex(c, m)
    d2 = verify_d_squared(mc)
    pairs = [(v, w) for v in a.quiver.vertices for w in a.quiver.vertices]
    quasi_ok = all(
        homology(tensor_simples(c, v, w, ring=args.ring)) ==
        homology(tensor_simples(mc, v, w, ring=args.ring))
        for v, w in pairs)
    minimal = check_minimal(mc)
    try:
        linear = check_linear(mc, a).ok
    except ValueError:
        linear = None
    payload.update({
        'criticals': mc.counts(),
        'd_squared': d2.to_json(),
        'quasi_iso': {'ok': quasi_ok, 'ring': ring_name(args.ring),
                      'vertex_pairs': len(pairs)},
        'minimal': minimal.ok,
        'linear': linear,
    })
    ok = d2.ok and quasi_ok
    return _emit(args, 'morse', payload, 0 if ok else 1)


def cmd_betti(args):
    a = _load(args.input)
    bt = betti_table(a)
    if args.out and args.out.endswith('.csv'):
        _write(args, bt.to_csv())
        return 0
    return _emit(args, 'betti', bt.to_json())


def cmd_koszul(args):
    a = _load(args.input)
    verdict = koszul_check(a)
    return _emit(args, 'koszul', verdict.to_json())


def _weight_data(args):
    if args.weights.lstrip().startswith('['):
        free = json.loads(args.weights)
        degrees = json.loads(args.degrees) if args.degrees else None
        w = WeightData(free)
    else:
        with open(args.weights) as f:
            w, degrees = weight_data_from_json(json.load(f))
        if args.degrees:
            degrees = [w.degree(tuple(d)) if not isinstance(d, int)
                       else w.degree((d,)) for d in json.loads(args.degrees)]
    if degrees and not isinstance(degrees[0], tuple):
        degrees = [w.degree(tuple(d) if not isinstance(d, int) else (d,))
                   for d in degrees]
    return w, degrees


def cmd_toric(args):
    w, degrees = _weight_data(args)
    if args.bondal_ruan:
        a = bondal_ruan_hpa(w)
    elif degrees:
        a = build_toric_hpa(w, degrees)
    else:
        proper = check_cohomologically_proper(w)
        payload = {'proper': proper,
                   'image': [degree_name(d) for d in sorted(image_phi(w))]
                            if proper else None}
        return _emit(args, 'toric', payload)
    _write(args, emit_quiver(a.quiver, a.relations))
    return 0


def cmd_tensor(args):
    a = _load(args.input)
    b = _load(args.second)
    t = tensor(a, b)
    if args.emit_quiver:
        _write(args, emit_quiver(t.quiver, t.relations))
        return 0
    payload = {'vertices': len(t.quiver.vertices),
               'arrows': len(t.quiver.arrows),
               'relation_groups': len(t.relations.groups),
               'classes': len(t.classes)}
    return _emit(args, 'tensor', payload)


def _add_common(sub, ring=False, max_dim=False, matching=False):
    sub.add_argument('input', help='quiver document')
    if ring:
        sub.add_argument('--ring', type=parse_ring, default=RING_Z,
                         help='Z, Q or Fp:<p> (default Z)')
    if max_dim:
        sub.add_argument('--max-dim', type=int, default=None,
                         help='cap the realization dimension')
    if matching:
        sub.add_argument('--matching', default='bh',
                         help="'bh', 'greedy', or a matching JSON file")
    sub.add_argument('--out', default=None, help='write output to a file')


def build_parser():
    p = argparse.ArgumentParser(
        prog='hpa',
        description='homotopy path algebras: realizations, resolutions, '
                    'Morse matchings, invariants, toric constructions')
    p.add_argument('--version', action='version', version=__version__)
    subs = p.add_subparsers(dest='command', required=True)

    s = subs.add_parser('check', help='validate the cancellation axioms')
    _add_common(s)
    s.set_defaults(func=cmd_check)

    s = subs.add_parser('realize', help='build the cell complex')
    _add_common(s, max_dim=True)
    s.set_defaults(func=cmd_realize)

    s = subs.add_parser('homology', help='cellular homology of the realization')
    _add_common(s, ring=True, max_dim=True)
    s.set_defaults(func=cmd_homology)

    s = subs.add_parser('resolve', help='cellular bimodule resolution checks')
    _add_common(s, max_dim=True)
    s.set_defaults(func=cmd_resolve)

    s = subs.add_parser('morse', help='Morse complex of an internal matching')
    _add_common(s, ring=True, max_dim=True, matching=True)
    s.set_defaults(func=cmd_morse)

    s = subs.add_parser('betti', help='Betti table Tor_i(S_v, S_w)')
    _add_common(s)
    s.set_defaults(func=cmd_betti)

    s = subs.add_parser('koszul', help='Koszulity verdict with certificate')
    _add_common(s)
    s.set_defaults(func=cmd_koszul)

    s = subs.add_parser('toric', help='toric HPAs from weight data')
    s.add_argument('--weights', required=True,
                   help='inline JSON rows or a weights JSON file')
    s.add_argument('--degrees', default=None,
                   help='inline JSON list of degrees')
    s.add_argument('--bondal-ruan', action='store_true',
                   help='use the full half-open-zonotope degree collection')
    s.add_argument('--emit-quiver', action='store_true',
                   help='emit quiver DSL (default when an algebra is built)')
    s.add_argument('--out', default=None)
    s.set_defaults(func=cmd_toric)

    s = subs.add_parser('tensor', help='tensor product of two algebras')
    s.add_argument('input', help='first quiver document')
    s.add_argument('second', help='second quiver document')
    s.add_argument('--emit-quiver', action='store_true',
                   help='emit the product as quiver DSL instead of a report')
    s.add_argument('--out', default=None)
    s.set_defaults(func=cmd_tensor)

    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, json.JSONDecodeError) as e:
        print(f'error: {e}', file=sys.stderr)
        return 2
    except OSError as e:
        print(f'error: {e}', file=sys.stderr)
        return 2
    except (QuiverError, MatchingError, ValueError) as e:
        print(f'error: {e}', file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
