"""Command line interface.

Exit codes: 0 on success, 1 for configuration and graph format errors and
any other invalid parameter, 2 for data errors (malformed logs or corpora,
graphs violating the network constraints or stranding the vehicle).
"""
import argparse
import logging
import os
import sys
from dataclasses import replace
from ._version import __version__
from .errors import ConfigError, GraphFormatError, LogFormatError, StructuralError
from .experiments import ExperimentSpec, load_config, run_full_network, \
                         run_visits_sweep, run_rate_sweep, run_roc, replay, \
                         write_profiles, estimate_log
from .experiments.reports import write_config, write_csv
from .experiments.replay import ESTIMATES_FILE
from .model import load_graph, load_bundled_graph, validate_graph, BUNDLED_GRAPHS
from .simulation import simulate, resolve_graph

logger = logging.getLogger('arrivaltools')

def _load_spec(args, kind=None):
    """Loads the configuration file (or the defaults) and applies the
    command line overrides. The experiment kind is replaced if given."""
    spec = load_config(args.config) if args.config else ExperimentSpec()
    try:
        scenario = spec.scenario
        if args.seed is not None:
            scenario = replace(scenario, seed=args.seed)
        estimator = spec.estimator
        overrides = {k: v for k, v in (('alpha', args.alpha),
                                       ('window_sec', args.window_sec),
                                       ('fallback_speed', args.fallback_speed))
                     if v is not None}
        if overrides:
            estimator = replace(estimator, **overrides)
        changes = {'scenario': scenario, 'estimator': estimator}
        if kind is not None:
            changes['kind'] = kind
        if args.reps is not None:
            changes['repetitions'] = args.reps
            changes['n_seeds'] = args.reps
        if args.out is not None:
            changes['output_dir'] = args.out
        if args.jobs is not None:
            changes['jobs'] = args.jobs
        return replace(spec, **changes)
    except ValueError as e:
        raise ConfigError('Invalid command line option: {0}'.format(e)) from e

def _progress(args):
    return args.verbose and not args.quiet

def cmd_simulate(args):
    spec = _load_spec(args)
    log = simulate(spec.scenario, resolve_graph(spec.scenario), progress=_progress(args))
    log.write(spec.output_dir)
    write_config(spec.output_dir, spec.to_dict())
    return 0

def cmd_estimate(args):
    spec = _load_spec(args, 'hardware-replay')
    df = estimate_log(args.log_dir, spec.estimator)
    write_config(spec.output_dir, spec.to_dict())
    write_csv(os.path.join(spec.output_dir, ESTIMATES_FILE), df)
    logger.info('Estimates of %d links written to %s.', len(df), spec.output_dir)
    return 0

def cmd_replay(args):
    spec = _load_spec(args, 'hardware-replay')
    log_dir = args.log_dir if args.log_dir is not None else spec.log_dir
    if log_dir is None:
        raise ConfigError('No event log given. Pass a log directory or set log_dir.')
    spec = replace(spec, log_dir=os.path.abspath(log_dir))
    profiles = replay(spec.log_dir, spec.estimator)
    write_profiles(profiles, spec.output_dir, spec.to_dict())
    return 0

def cmd_roc(args):
    spec = _load_spec(args, 'roc')
    run_roc(spec, _progress(args)).write(spec.output_dir)
    return 0

def _report_command(kind, runner):
    def command(args):
        spec = _load_spec(args, kind)
        runner(spec, _progress(args)).write(spec.output_dir)
        return 0
    return command

def cmd_validate_graph(args):
    if args.graph in BUNDLED_GRAPHS:
        graph = load_bundled_graph(args.graph)
    else:
        graph = load_graph(args.graph)
    violations = validate_graph(graph)
    for v in violations:
        print(v)
    if violations:
        logger.error('%s violates %d network constraint(s).', args.graph, len(violations))
        return 2
    print('{0}: {1} nodes, {2} links, {3} routes, valid.'.format(
        args.graph, len(graph.nodes), len(graph.links), len(graph.routes)))
    return 0

def _add_common_options(parser):
    parser.add_argument('--config', help='JSON experiment configuration.')
    parser.add_argument('--seed', type=int, help='Base seed.')
    parser.add_argument('--reps', type=int, help='Number of repetitions (or corpora).')
    parser.add_argument('--alpha', type=float, help='Significance level of the intervals.')
    parser.add_argument('--window-sec', type=float, help='Moving-average window in seconds.')
    parser.add_argument('--fallback-speed', type=float,
                        help='Pedestrian speed (m/s) assumed when none is visible.')
    parser.add_argument('--out', help='Output directory.')
    parser.add_argument('--jobs', type=int, help='Number of worker processes.')

def build_parser():
    parser = argparse.ArgumentParser(
        prog='arrivaltools',
        description='Pedestrian arrival rate estimation from a moving vehicle.'
    )
    parser.add_argument('--version', action='version', version=__version__)
    parser.add_argument('-v', '--verbose', action='store_true',
                        help='Log progress and debugging details.')
    parser.add_argument('-q', '--quiet', action='store_true', help='Log warnings and errors only.')
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True
    commands = [
        ('simulate', 'Simulate a scenario and write its event log.', cmd_simulate),
        ('estimate', 'Estimate link arrival rates from an event log.', cmd_estimate),
        ('replay', 'Compute moving-average rate profiles from an event log.', cmd_replay),
        ('roc', 'Compare DF and MLF fusion on detection corpora.', cmd_roc),
        ('sweep-visits', 'Vary the number of traversals of a link.',
         _report_command('single-link-visits-sweep', run_visits_sweep)),
        ('sweep-rates', 'Vary the true arrival rate of a link.',
         _report_command('rate-sweep', run_rate_sweep)),
        ('full-network', 'Estimate all links of a network.',
         _report_command('full-network', run_full_network))
    ]
    for name, help_text, func in commands:
        p = sub.add_parser(name, help=help_text, description=help_text)
        if name == 'estimate':
            p.add_argument('log_dir', help='Event log directory.')
        elif name == 'replay':
            p.add_argument('log_dir', nargs='?', help='Event log directory.')
        _add_common_options(p)
        p.set_defaults(func=func)
    p = sub.add_parser('validate-graph', help='Check a graph against the network constraints.')
    p.add_argument('graph', help='Graph file or bundled graph name ({0}).'
                   .format(', '.join(BUNDLED_GRAPHS)))
    p.set_defaults(func=cmd_validate_graph)
    return parser

def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.quiet:
        level = logging.WARNING
    elif args.verbose:
        level = logging.DEBUG
    else:
        level = logging.INFO
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')
    logging.getLogger().setLevel(level)
    logging.captureWarnings(True)
    try:
        return args.func(args)
    except (ConfigError, GraphFormatError) as e:
        logger.error('%s', e)
        return 1
    except (LogFormatError, StructuralError) as e:
        logger.error('%s', e)
        return 2
    except ValueError as e:
        logger.error('Invalid configuration: %s', e)
        return 1

if __name__ == '__main__':
    sys.exit(main())
