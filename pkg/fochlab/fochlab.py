# "fochlab" - A numerical laboratory for a fifth-order Camassa-Holm type
# equation.
# Copyright (C) 2026  The fochlab developers
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

""" fochlab main module. """

import argparse
import logging

import yaml

import fochlab
from fochlab.commands.experiment import ExperimentCommand
from fochlab.commands.sweep import SweepCommand
from fochlab.logic.common import THREADS_VARIABLE

EXPERIMENT_HELP = {
    'simulate': (['sim'], 'integrate initial data',
                 'Integrate the initial data and write the conserved '
                 'quantities, norms and snapshots of the run.'),
    'blowup-certify': (['certify'], 'certify and check wave breaking',
                       'Evaluate the blow-up criterion for the initial data, '
                       'run it, and compare the run with the predicted '
                       'blow-up window and Riccati envelope.'),
    'inflation-scan': (['scan'], 'run the norm inflation ladder',
                       'Build the norm inflation data for every N in '
                       'options.Ns, measure its scaling quantities and run '
                       'it.'),
    'operator-check': (['ops'], 'check the operators against oracles',
                       'Compare the Fourier multipliers, the dyadic '
                       'partition and the three forms of the equation with '
                       'independent oracles.'),
    'picard-check': (['picard'], 'check the Picard iteration',
                     'Run the Picard iteration of the n form and compare its '
                     'last iterate with a direct run.'),
}

LOG_LEVELS = [logging.WARNING, logging.INFO, logging.DEBUG]


def key_value(argument):
    """ Split "section.key=value", parsing the value as YAML. """
    key, separator, value = argument.partition('=')
    if not separator or not key.strip():
        raise argparse.ArgumentTypeError(
            'expected section.key=value, got {!r}'.format(argument))
    try:
        return key.strip(), yaml.safe_load(value)
    except yaml.YAMLError as err:
        raise argparse.ArgumentTypeError(
            'cannot parse the value of {}: {}'.format(key.strip(), err))


def setup_experiment_command(sub_parsers, parent, experiment):
    """ Setup the command for one experiment. """
    aliases, short, description = EXPERIMENT_HELP[experiment]
    parser = sub_parsers.add_parser(
        experiment, aliases=aliases,
        help=short,
        description=description,
        parents=[parent])
    parser.set_defaults(command=ExperimentCommand, experiment=experiment)

    parser.add_argument(
        '--config', metavar='file',
        help='YAML configuration file, overriding the defaults')
    parser.add_argument(
        '--set', metavar='key=value', type=key_value, action='append',
        default=[],
        help='override one configuration value, e.g. stepper.t_end=0.5. '
             'May be repeated')
    parser.add_argument(
        '--out', metavar='folder',
        help='the folder to write the artifacts to')
    parser.add_argument(
        '--seed', type=int,
        help='seed of the random fields of the checks')

    return parser


def setup_sweep_command(sub_parsers, parent):
    """ Setup the command for sweep. """
    parser = sub_parsers.add_parser(
        'sweep', aliases=['sw'],
        help='run several configurations',
        description='Run several configuration files concurrently, each into '
                    'its own folder. {} caps the number of concurrent '
                    'experiments.'.format(THREADS_VARIABLE),
        parents=[parent])
    parser.set_defaults(command=SweepCommand)

    parser.add_argument(
        'configs', metavar='config', nargs='+',
        help='the configuration files to run')
    parser.add_argument(
        '--set', metavar='key=value', type=key_value, action='append',
        default=[],
        help='override one configuration value in every experiment')
    parser.add_argument(
        '--out', metavar='folder', default='fochlab-sweep',
        help='the folder below which every experiment gets its own folder. '
             'defaults to fochlab-sweep')
    parser.add_argument(
        '--seed', type=int,
        help='seed of the random fields, for every experiment')

    return parser


def setup_parse_command():
    """ Setup commands, and return the parser. """
    # Parent parser
    parent = argparse.ArgumentParser(add_help=False)

    # Arguments that can be used for all sub commands
    parent.add_argument(
        '--version',
        help='show the version of fochlab, then quit',
        action='store_true', dest='show_version')
    parent.add_argument(
        '--quiet', action='store_true',
        help="don't print progress")
    parent.add_argument(
        '-v', '--verbose', action='count', default=0,
        help='log more, may be given twice')

    # The top level command
    parser = argparse.ArgumentParser(
        description='A numerical laboratory for a fifth-order Camassa-Holm '
                    'type equation',
        epilog='Exit status: 0 completed, 2 blow-up detected, 3 resolution '
               'loss, 4 invalid configuration, 5 numerical failure',
        parents=[parent])

    sub_parsers = parser.add_subparsers(title='subcommands')

    for experiment in EXPERIMENT_HELP:
        setup_experiment_command(sub_parsers, parent, experiment)
    setup_sweep_command(sub_parsers, parent)

    return parser


def main(argv=None):
    """ Main function. Returns the exit status. """
    parser = setup_parse_command()

    args = parser.parse_args(argv)

    level = LOG_LEVELS[min(args.verbose, len(LOG_LEVELS) - 1)]
    logging.basicConfig(
        level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')

    if args.show_version:
        print('Version: {}'.format(fochlab.__version__))
    elif 'command' not in args:
        parser.print_help()
    else:
        try:
            return args.command(args).status
        except KeyboardInterrupt:
            print()
            return 130
    return 0
