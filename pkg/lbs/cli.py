# -*- coding: utf-8 -*-
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import argparse
import sys

from ._version import __version__
from .config import ENV_IDS, ExperimentConfig
from .errors import ConfigError, DatasetError, IdxFormatError, \
    NumericalError
from .intrinsic import METHODS

# Command-line entry point (``lbs-explore`` or ``python -m lbs``):
#
#   run       one seeded exploration run
#   report    aggregate table of finished runs
#   ratio     stochastic-image reward ratio run
#   benchmark timing of the intrinsic-reward methods
#
# exit codes: 0 success, 2 configuration/usage error, 3 numerical failure

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _overrides(pairs):
    """``key=value`` strings from ``--set`` as a dict."""
    values = {}
    for pair in pairs or []:
        if '=' not in pair:
            raise ConfigError('Expected key=value after --set, got "{}"'
                              .format(pair))
        key, value = (s.strip() for s in pair.split('=', 1))
        values[key] = value
    return values


def _config(args, **values):
    """Configuration from --config, then --set, then explicit options."""
    values = dict(_overrides(args.set), **{k: v for k, v in values.items()
                                          if v is not None})
    if args.config:
        return ExperimentConfig.from_file(args.config, **values)
    return ExperimentConfig(**values)


def _run(args):
    from .experiment import run_experiment

    cfg = _config(args, env=args.env, method=args.method, steps=args.steps,
                  seed=args.seed, out=args.out)
    if cfg.image_task:
        raise ConfigError('Use the "ratio" command for "{}"'.format(cfg.env))
    record = run_experiment(cfg, verbose=args.verbose)
    print('{} {} seed {}: coverage {:.2f}% -> {}'.format(
        cfg.env, cfg.method, cfg.seed, record.final()['coverage'],
        cfg.out_dir))


def _ratio(args):
    from .experiment import run_experiment

    cfg = _config(args, env='stochastic-image', method=args.method,
                  batches=args.batches, seed=args.seed, data_dir=args.data,
                  out=args.out)
    record = run_experiment(cfg, verbose=args.verbose)
    print('{} seed {}: reward ratio {:.4f} -> {}'.format(
        cfg.method, cfg.seed, record.final()['reward_ratio'], cfg.out_dir))


def _report(args):
    from .report import report

    text = report(args.runs, args.format)
    if args.output:
        with open(args.output, 'w') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _benchmark(args):
    from .benchmark import CuriosityTiming

    print(CuriosityTiming(n=args.n, select=args.select, repeat=args.repeat,
                          t_min=args.t_min, seed=args.seed,
                          verbose=args.verbose))


def build_parser():
    parser = argparse.ArgumentParser(
        prog='lbs-explore',
        description='Curiosity-driven exploration with latent Bayesian '
                    'surprise.')
    parser.add_argument('--version', action='version',
                        version='PyLBS ' + __version__)
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    p = sub.add_parser('run', help='one seeded exploration run')
    p.add_argument('--env', choices=[e for e in ENV_IDS
                                     if e != 'stochastic-image'])
    p.add_argument('--method', choices=METHODS)
    p.add_argument('--steps', type=int, help='environment steps')
    p.add_argument('--seed', type=int)
    p.add_argument('--config', help='key = value configuration file')
    p.add_argument('--out', help='output directory')
    p.add_argument('--set', action='append', metavar='KEY=VALUE',
                   help='override a configuration key (repeatable)')
    p.add_argument('--verbose', '-v', action='store_true')
    p.set_defaults(func=_run)

    p = sub.add_parser('ratio', help='reward ratio on the stochastic '
                                     'image task')
    p.add_argument('--data', help='directory with the MNIST IDX files')
    p.add_argument('--method', choices=[m for m in METHODS
                                        if m != 'random'])
    p.add_argument('--batches', type=int, help='training batches')
    p.add_argument('--seed', type=int)
    p.add_argument('--config', help='key = value configuration file')
    p.add_argument('--out', help='output directory')
    p.add_argument('--set', action='append', metavar='KEY=VALUE',
                   help='override a configuration key (repeatable)')
    p.add_argument('--verbose', '-v', action='store_true')
    p.set_defaults(func=_ratio)

    p = sub.add_parser('report', help='aggregate finished runs')
    p.add_argument('--runs', nargs='+', required=True, metavar='DIR',
                   help='run directories or their parents')
    p.add_argument('--format', choices=('csv', 'json'), default='csv')
    p.add_argument('--output', '-o', help='write to file instead of stdout')
    p.set_defaults(func=_report)

    p = sub.add_parser('benchmark', help='time the intrinsic-reward methods')
    p.add_argument('-n', type=int, nargs='+', default=[128, 2048],
                   help='batch sizes')
    p.add_argument('--select', nargs='+', default=['all'])
    p.add_argument('--repeat', type=int, default=1)
    p.add_argument('--t-min', type=float, default=0.1, dest='t_min')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--verbose', '-v', action='store_true')
    p.set_defaults(func=_benchmark)

    return parser


def main(argv=None):
    """
    Command-line entry point.

    Parameters
    ----------
    argv : list of str or None
        arguments (``None`` uses ``sys.argv[1:]``)

    Returns
    -------
    code : int
        0 on success, 2 on configuration or usage errors, 3 if the run
        failed numerically
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # --help/--version exit with 0, usage errors with 2
        return e.code if isinstance(e.code, int) else EXIT_CONFIG
    try:
        args.func(args)
    except (ConfigError, IdxFormatError, DatasetError) as e:
        print('lbs-explore: error: {}'.format(e), file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as e:
        print('lbs-explore: numerical failure: {}'.format(e),
              file=sys.stderr)
        return EXIT_NUMERICAL
    except (IOError, OSError) as e:
        print('lbs-explore: error: {}'.format(e), file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK
