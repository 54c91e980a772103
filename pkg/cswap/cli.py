import argparse
import json
import sys

import numpy
import pandas

from cswap import estimate, figures, oracles, verify
from cswap.circuit import run_entanglement_test
from cswap.states import PairSpec, StateSpec
from cswap.utils import CswapError, DomainError, SignatureClass, \
    UndetectableError, all_bitstrings, popcount

__all__ = ['main', 'build_parser']


RUN_COLUMNS = ['outcome', 'ones', 'probability', 'count']


def _pair(args):
    if args.test_file:
        with open(args.test_file) as f:
            try:
                pair = PairSpec.from_json(json.load(f))
            except ValueError as e:
                if isinstance(e, DomainError):
                    raise
                raise DomainError('Malformed state file %s: %s'
                                  % (args.test_file, e))
        if args.copy:
            pair = PairSpec(pair.test, StateSpec.parse(args.copy))
        return pair
    if not args.test:
        raise DomainError('Pass a test state with --test or --test-file')
    copy = StateSpec.parse(args.copy) if args.copy else None
    return PairSpec(StateSpec.parse(args.test), copy)


def _jsonable(x):
    if isinstance(x, dict):
        return dict((k, _jsonable(v)) for k, v in x.items())
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (numpy.floating, numpy.integer, numpy.bool_)):
        return x.item()
    return x


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        if not text.endswith('\n'):
            sys.stdout.write('\n')
        return
    with open(out, 'w') as f:
        f.write(text)


def _emit_json(obj, out):
    _emit(json.dumps(_jsonable(obj), indent=2, sort_keys=True), out)


def _emit_frame(df, fmt, out):
    if fmt == 'json':
        _emit_json(df.to_dict(orient='records'), out)
    else:
        _emit(df.to_csv(index=False, float_format=figures.CSV_FLOAT_FORMAT),
              out)


def _simulate(pair):
    a, b = pair.build()
    return run_entanglement_test(a, b).control_dist


def cmd_run(args):
    pair = _pair(args)
    dist = _simulate(pair)
    counts = None
    if args.shots:
        counts = estimate.sample(dist, args.shots,
                                 estimate.RngSpec(args.seed, args.stream))
    if args.format == 'csv':
        rows = [{'outcome': bits, 'ones': popcount(bits),
                 'probability': dist.probability(bits),
                 'count': counts.count(bits) if counts else numpy.nan}
                for bits in all_bitstrings(dist.n)]
        _emit_frame(pandas.DataFrame(rows, columns=RUN_COLUMNS), 'csv',
                    args.out)
        return 0
    signature = dist.signature_total
    res = {
        'test': pair.test.to_json(),
        'copy': pair.copy.to_json(),
        'n': dist.n,
        'distribution': dict((bits, p) for bits, p in dist.probs.items()
                             if p > 0),
        'classes': dist.class_totals(),
        'c_n': oracles.degree_cn(dist),
        'entangled': bool(signature > 0),
        'unequal_copies': bool(dist.class_total(SignatureClass.ODD_ONES) > 0),
        'expected_trials': oracles.expected_trials_any(signature),
        'tomography_baseline': oracles.tomography_baseline(dist.n),
    }
    if counts is not None:
        res['samples'] = counts.to_json()
        res['report'] = estimate.classify(counts).to_json()
    _emit_json(res, args.out)
    return 0


def cmd_sweep(args):
    grid = figures.parse_grid(args.grid) if args.grid else None
    df = figures.sweep(args.family, args.n, grid,
                       include_simulation=args.include_simulation,
                       progress=not args.quiet)
    _emit_frame(df, args.format, args.out)
    return 0


def cmd_figures(args):
    paths = figures.write_figures(args.out,
                                  include_simulation=args.include_simulation,
                                  progress=not args.quiet)
    for path in paths:
        sys.stderr.write('wrote %s\n' % path)
    return 0


def cmd_verify(args):
    report = verify.run_all(n_max=args.n_max, trials=args.trials,
                            seed=args.seed, progress=not args.quiet)
    _emit_frame(report, args.format, args.out)
    failed = report[~report['passed']]
    for _, row in failed.iterrows():
        sys.stderr.write('FAILED %s: max discrepancy %.3g >= tolerance '
                         '%.3g over %d samples\n'
                         % (row['name'], row['max_discrepancy'],
                            row['tolerance'], row['samples']))
    return 1 if len(failed) else 0


def cmd_estimate(args):
    if args.shots < 1:
        raise DomainError('estimate needs --shots >= 1, got %d' % args.shots)
    pair = _pair(args)
    dist = _simulate(pair)
    rng = estimate.RngSpec(args.seed, args.stream)
    counts = estimate.sample(dist, args.shots, rng)
    res = estimate.classify(counts).to_json()
    p, sigma = estimate.estimate_signature_probability(counts)
    res['signature_probability'] = {'value': p, 'stderr': sigma}
    res['expected_trials'] = estimate.expected_trials_estimate(counts)
    res['tomography_baseline'] = oracles.tomography_baseline(dist.n)
    res['test'] = pair.test.to_json()
    res['copy'] = pair.copy.to_json()
    res['samples'] = counts.to_json()
    if args.repetitions:
        try:
            mean, se = estimate.trials_to_first_signature(
                dist, rng.spawn(rng.stream + 1), args.repetitions,
                progress=not args.quiet)
            res['trials_to_first_signature'] = {'mean': mean, 'stderr': se}
        except UndetectableError:
            res['trials_to_first_signature'] = oracles.UNDETECTABLE
    _emit_json(res, args.out)
    return 0


def _add_state_args(p):
    p.add_argument('--test', help='test state, e.g. bell:psi+, ghz:5, '
                   'unbalanced_w:4:0.3, general:[1,0,0,0]')
    p.add_argument('--copy', help='copy state, defaults to the test state')
    p.add_argument('--test-file', help='JSON file holding a state spec, or '
                   'an object with "test" and "copy" specs')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--stream', type=int, default=0)
    p.add_argument('--out', help='output file, defaults to stdout')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='cswap',
        description='Simulate the CSWAP entanglement test, check its closed '
        'forms and write the datasets behind its figures.')
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--quiet', action='store_true',
                        help='no progress bars')
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('run', parents=[common],
                       help='exact control distribution of a state pair, '
                       'optionally sampled')
    _add_state_args(p)
    p.add_argument('--shots', type=int, default=0)
    p.add_argument('--format', choices=['csv', 'json'], default='json')
    p.set_defaults(func=cmd_run)

    p = sub.add_parser('sweep', parents=[common],
                       help='error-family sweep over a parameter grid')
    p.add_argument('--family', required=True,
                   choices=oracles.ERROR_FAMILIES)
    p.add_argument('--n', type=int, nargs='+',
                   default=figures.FIGURE_N_VALUES)
    p.add_argument('--grid', help='START:STOP:COUNT in radians')
    p.add_argument('--include-simulation', action='store_true')
    p.add_argument('--format', choices=['csv', 'json'], default='csv')
    p.add_argument('--out', help='output file, defaults to stdout')
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('figures', parents=[common],
                       help='write fig3.csv ... fig9.csv')
    p.add_argument('--out', default='figures', help='output directory')
    p.add_argument('--no-simulation', dest='include_simulation',
                   action='store_false',
                   help='leave the simulated columns empty')
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser('verify', parents=[common],
                       help='check every closed form against the simulator')
    p.add_argument('--n-max', type=int, default=6)
    p.add_argument('--trials', type=int, default=1000)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--format', choices=['csv', 'json'], default='csv')
    p.add_argument('--out', help='output file, defaults to stdout')
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('estimate', parents=[common],
                       help='sample, classify and estimate C_n')
    _add_state_args(p)
    p.add_argument('--shots', type=int, default=100000)
    p.add_argument('--repetitions', type=int, default=0,
                   help='also simulate this many trials-to-first-signature '
                   'runs')
    p.set_defaults(func=cmd_estimate)
    return parser


def main(argv=None):
    ''' Entry point of the `cswap` command. Returns the exit status. '''
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CswapError, OSError) as e:
        sys.stderr.write('error: %s\n' % e)
        return 2


if __name__ == '__main__':
    sys.exit(main())
