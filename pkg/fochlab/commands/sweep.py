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

""" The sweep command of fochlab.

This module is the home of the front end part of the command. This means that
as little as possible logic should go here.

"""

import argparse
import os.path

from fochlab.command import Command
from fochlab.commands.experiment import EXIT_NUMERIC, ExperimentCommand
from fochlab.logic import common


def output_folders(paths, base):
    """ One output folder below base per config path, named after the file.

    Files with the same name are told apart by a numeric suffix.

    """
    folders = list()
    for path in paths:
        stem = os.path.splitext(os.path.basename(path))[0] or 'experiment'
        folder = os.path.join(base, stem)
        suffix = 2
        while folder in folders:
            folder = os.path.join(base, '{}_{}'.format(stem, suffix))
            suffix += 1
        folders.append(folder)
    return folders


class SweepCommand(Command):

    """ Run several experiment configurations concurrently.

    The number of concurrent experiments is capped by FOCH_LAB_THREADS. The
    exit status, the largest of the experiments', is left in self.status.

    """

    def __init__(self, args):
        """ Parse command and execute tasks. """
        Command.__init__(self)
        self.args = args
        self.status = 0

        if args.quiet:
            self.printer = lambda *a, **b: None

        self.run()

    def _experiment(self, job):
        path, folder = job
        args = argparse.Namespace(experiment=None, config=path,
                                  set=self.args.set, out=folder,
                                  seed=self.args.seed, quiet=True)
        return ExperimentCommand(args).status

    def run(self):
        """ Run the command. """
        folders = output_folders(self.args.configs, self.args.out)
        workers = common.thread_count()
        self.p_main('Running {} experiment(s) with {} worker(s)',
                    len(folders), workers)

        statuses = common.run_workers(
            list(zip(self.args.configs, folders)), self._experiment,
            workers)

        for path, folder, status in zip(self.args.configs, folders,
                                        statuses):
            if isinstance(status, Exception):
                self.p_sub('{}: Error: {}', path, status)
                status = EXIT_NUMERIC
            else:
                self.p_sub('{} -> {}: exit status {}', path, folder, status)
            self.status = max(self.status, status)
