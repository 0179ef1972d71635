# -*- coding: utf-8 -*-
"""Command line front end.

Every command returns an exit code: 0 on success, 2 when hypotheses fail, 3
on a solver shortfall, 64 for unreadable input, 65 for invalid input and 70
for an internal inconsistency.
"""

import argparse
import json
import logging
import sys

import numpy as np

from dinc import __version__
from dinc.decorators import exit_code
from dinc.errors import HypothesisNotSatisfied, ParseError
from dinc.mixins import jsonable
from dinc.scenario import (AUTO_MID, Scenario, matrix_from_spec,
                           parse_matrix_spec, run)
from dinc.solvers import brute_force_oracle, find_multiplicity

__author__ = 'pydinc developers'
__all__ = ['main', 'build_parser']

logger = logging.getLogger(__name__)

VERBOSITY = (logging.WARNING, logging.INFO, logging.DEBUG)


class Parser(argparse.ArgumentParser):
    """ArgumentParser reporting usage errors as :class:`~dinc.errors.ParseError`"""

    def error(self, message):
        raise ParseError(message)


def _print_json(data):
    print(json.dumps(jsonable(data), indent=2))


def _matrix(args):
    if args.matrix is not None:
        return matrix_from_spec(parse_matrix_spec(args.matrix))
    if args.scenario is not None:
        return Scenario.from_file(args.scenario).build_matrix()
    raise ParseError('give a matrix spec such as second_order:5 or --scenario')


def _scenario(args):
    if args.scenario is None:
        raise ParseError(f'{args.command} needs --scenario')
    return Scenario.from_file(args.scenario)


def _overrides(args):
    return {'seed': args.seed, 'tol_residual': args.tol}


def cmd_build_matrix(args):
    A = _matrix(args)
    with np.printoptions(linewidth=200):
        print(A.entries)
    return 0


def cmd_spectrum(args):
    for value in _matrix(args).spectrum.eigenvalues:
        print(repr(value))
    return 0


def cmd_check(args):
    report, admissible, satisfied = _scenario(args).check()
    _print_json({'hypotheses': report, 'admissible': admissible, 'satisfied': satisfied})
    return 0 if satisfied else 2


def cmd_interval(args):
    _, admissible, _ = _scenario(args).check()
    if admissible.is_empty:
        raise HypothesisNotSatisfied(f'empty interval ]{admissible.left:g}, {admissible.right:g}[')
    print(repr(admissible.left), repr(admissible.right))
    return 0


def cmd_solve(args):
    scenario = _scenario(args)
    _, admissible, _ = scenario.check()
    problem = scenario.problem(scenario.resolve_lambda(admissible))
    report = find_multiplicity(problem, scenario.solve_config(**_overrides(args)),
                               scenario.kind, scenario.delta, admissible)
    _print_json(report)
    return 0 if report.claims_met else 3


def cmd_oracle(args):
    scenario = _scenario(args)
    if scenario.lam == AUTO_MID:
        _, admissible, _ = scenario.check()
        lam = scenario.resolve_lambda(admissible)
    else:
        lam = float(scenario.lam)
    problem = scenario.problem(lam)
    solutions = brute_force_oracle(problem, args.radius, args.points,
                                   scenario.solve_config(**_overrides(args)))
    _print_json({'lambda': lam, 'solutions': solutions})
    return 0


def cmd_run(args):
    return run(_scenario(args), args.out, **_overrides(args)).exit_code


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--scenario', metavar='PATH', help='scenario JSON file')
    common.add_argument('--seed', type=int, help='seed of the multistart generator')
    common.add_argument('--tol', type=float, help='residual tolerance of a certified solution')
    common.add_argument('-v', '--verbose', action='count', default=0,
                        help='-v for progress, -vv for solver detail')

    parser = Parser(prog='dinc', description=__doc__.splitlines()[0])
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    commands = parser.add_subparsers(dest='command', parser_class=Parser)

    sub = commands.add_parser('run', parents=[common], help='check, solve and write reports')
    sub.add_argument('--out', default='.', metavar='DIR', help='directory for report files')
    sub.set_defaults(handler=cmd_run)

    for name, handler, text in (('build-matrix', cmd_build_matrix, 'print the matrix'),
                                ('spectrum', cmd_spectrum, 'print the eigenvalues')):
        sub = commands.add_parser(name, parents=[common], help=text)
        sub.add_argument('matrix', nargs='?', help='type:args, e.g. fourth_order:9')
        sub.set_defaults(handler=handler)

    for name, handler, text in (('check', cmd_check, 'check the scenario hypotheses'),
                                ('interval', cmd_interval, 'print the admissible interval'),
                                ('solve', cmd_solve, 'search for solutions')):
        sub = commands.add_parser(name, parents=[common], help=text)
        sub.set_defaults(handler=handler)

    sub = commands.add_parser('oracle', parents=[common], help='lattice scan for T <= 3')
    sub.add_argument('--radius', type=float, default=2.0, help='half side of the scanned box')
    sub.add_argument('--points', type=int, default=401, help='lattice points per axis')
    sub.set_defaults(handler=cmd_oracle)
    return parser


@exit_code
def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, 'handler', None) is None:
        raise ParseError('missing command')
    logging.basicConfig(stream=sys.stderr,
                        level=VERBOSITY[min(args.verbose, len(VERBOSITY) - 1)],
                        format='%(levelname)s %(name)s: %(message)s')
    logger.debug('running %s', args.command)
    return args.handler(args)


if __name__ == '__main__':
    sys.exit(main())
