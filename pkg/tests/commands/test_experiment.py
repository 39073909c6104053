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

""" Tests for fochlab.commands.experiment. """
from fochlab.commands import experiment
from fochlab.commands.experiment import ExperimentCommand
from fochlab.logic import artifacts
from fochlab.logic.checks import CheckRecord
from fochlab.logic.spectral import NonFiniteError
from unittest.mock import patch
from unittest import TestCase
import argparse
import json
import os
import shutil
import tempfile

SMALL = """
grid:
  length: 40.0
  points: 128
stepper:
  dt_init: 0.05
  t_end: 0.1
initial_data:
  kind: gaussian
  parameters:
    amplitude: 0.0
"""


class ExperimentTestCase(TestCase):

    """ Runs experiments from a small configuration in a temporary folder.
    """

    def setUp(self):
        self.folder = tempfile.mkdtemp()
        self.config = os.path.join(self.folder, 'small.yml')
        self.out = os.path.join(self.folder, 'out')
        with open(self.config, 'w') as stream:
            stream.write(SMALL)

    def tearDown(self):
        shutil.rmtree(self.folder)

    def command(self, name, *overrides):
        args = argparse.Namespace(experiment=name, config=self.config,
                                  set=list(overrides), out=self.out, seed=0,
                                  quiet=True)
        return ExperimentCommand(args)

    def manifest(self):
        with open(os.path.join(self.out, artifacts.MANIFEST)) as stream:
            return json.load(stream)

    def table(self, name):
        return artifacts.read_table(os.path.join(self.out, name))


class TestSimulate(ExperimentTestCase):

    """ Test the simulate experiment. """

    def test_zero(self):
        """ Test that zero data complete with exit status 0. """
        command = self.command('simulate')
        assert command.status == experiment.EXIT_OK
        manifest = self.manifest()
        assert manifest['exit_status'] == 0
        assert manifest['experiment'] == 'simulate'
        assert manifest['config']['grid']['points'] == 128
        assert manifest['config']['output_dir'] == self.out
        assert manifest['summary']['termination'] == 'completed'
        assert manifest['summary']['E_drift'] == 0
        files = [entry['file'] for entry in manifest['artifacts']]
        assert files[:2] == ['diagnostics.csv', 'steps.csv']
        assert 'snapshots/snapshot_00002.bin' in files
        assert artifacts.verify_manifest(self.out) == []

        columns, rows = self.table('diagnostics.csv')
        assert columns == ['t', 'E', 'F', 'h2', 'w1inf', 'b0inf_n', 'q_min',
                           'q_argmin']
        assert len(rows) == 3
        assert float(rows[0][1]) == 0
        columns, rows = self.table('steps.csv')
        assert columns == ['step', 'dt']
        assert [row[0] for row in rows] == ['1', '2']

    def test_blowup(self):
        """ Test that detected blow-up gives exit status 2. """
        command = self.command('simulate',
                               ('initial_data.parameters.amplitude', 0.5),
                               ('stepper.q_abort', 1e-6))
        assert command.status == experiment.EXIT_BLOWUP
        assert self.manifest()['summary']['termination'] == 'blowup_detected'

    def test_resolution_loss(self):
        """ Test that periodic data fail the boundary check. """
        command = self.command('simulate', ('initial_data.kind', 'cosine'),
                               ('initial_data.parameters.amplitude', 0.1))
        assert command.status == experiment.EXIT_RESOLUTION
        assert self.manifest()['exit_status'] == 3

    def test_invalid_config(self):
        """ Test that an invalid configuration writes nothing. """
        command = self.command('simulate', ('grid.points', 100))
        assert command.status == experiment.EXIT_CONFIG
        assert not os.path.exists(self.out)

    def test_invalid_data(self):
        """ Test initial data the grid cannot hold. """
        command = self.command('simulate', ('initial_data.kind', 'inflation'),
                               ('initial_data.parameters', {'N': 10}))
        assert command.status == experiment.EXIT_CONFIG
        assert self.manifest()['exit_status'] == 4

    @patch('fochlab.logic.integrator.run')
    def test_nonfinite(self, mock_run):
        """ Test that numerical failures give exit status 5. """
        mock_run.side_effect = NonFiniteError('Right-hand side is not finite')
        command = self.command('simulate')
        assert command.status == experiment.EXIT_NUMERIC
        assert self.manifest()['exit_status'] == 5

    def test_repeatable(self):
        """ Test that two runs with the same seed write identical files. """
        sums = []
        for name in ('first', 'second'):
            self.out = os.path.join(self.folder, name)
            command = self.command('simulate',
                                   ('initial_data.parameters.amplitude', 0.05))
            assert command.status == experiment.EXIT_OK
            sums.append(self.manifest()['artifacts'])
        assert len(sums[0]) > 2
        assert sums[0] == sums[1]
        for entry in sums[0]:
            with open(os.path.join(self.folder, 'first', entry['file']),
                      'rb') as first, \
                    open(os.path.join(self.folder, 'second', entry['file']),
                         'rb') as second:
                assert first.read() == second.read()


class TestCertify(ExperimentTestCase):

    """ Test the blowup-certify experiment. """

    def test_small_data(self):
        """ Test the artifacts of a certificate for small data. """
        command = self.command('blowup-certify',
                               ('initial_data.parameters.amplitude', 0.5))
        assert command.status == experiment.EXIT_OK
        assert self.manifest()['summary']['verdict'] == \
            'not-covered-by-theorem'

        with open(os.path.join(self.out, 'certificate.json')) as stream:
            document = json.load(stream)
        assert document['certificate']['C1'] == 0.4
        assert document['certificate']['T2'] is None
        assert document['verdict']['verdict'] == 'not-covered-by-theorem'
        assert sorted(document['integrals']) == ['I_b', 'I_w', 'I_wb']
        assert document['termination'] == 'completed'

        columns, rows = self.table('characteristic.csv')
        assert columns == ['t', 'y', 'q_along', 'ux_along', 'riccati_bound']
        assert len(rows) == 3
        assert rows[0][4] == ''
        assert artifacts.verify_manifest(self.out) == []


class TestInflationScan(ExperimentTestCase):

    """ Test the inflation-scan experiment on a short run. """

    def scan(self, Ns):
        return self.command('inflation-scan',
                            ('grid.length', 400.0), ('grid.points', 8192),
                            ('stepper.dt_init', 1e-4),
                            ('stepper.t_end', 5e-4),
                            ('stepper.boundary_abort', float('inf')),
                            ('options.Ns', Ns))

    def test_scan(self):
        """ Test the artifacts of a scan. """
        command = self.scan([2, 3])
        assert command.status == experiment.EXIT_OK
        columns, rows = self.table('inflation.csv')
        assert columns[0] == 'N'
        assert [row[0] for row in rows] == ['2', '3']
        with open(os.path.join(self.out, 'scaling.json')) as stream:
            scaling = json.load(stream)
        assert scaling['N'] == [2, 3]
        assert scaling['lifespan_non_increasing'] in (True, False)
        with open(os.path.join(self.out, 'N_2', 'certificate.json')) as stream:
            assert json.load(stream)['certificate']['C1'] == 0.25
        assert os.path.isfile(os.path.join(self.out, 'N_3', 'final.bin'))

    def test_failed_item(self):
        """ Test that an unresolved N fails with exit status 5. """
        command = self.scan([2, 8])
        assert command.status == experiment.EXIT_NUMERIC
        assert self.manifest()['summary']['failed'] == [8]
        assert not os.path.exists(os.path.join(self.out, 'N_8'))


class TestChecks(ExperimentTestCase):

    """ Test the operator-check and picard-check experiments. """

    @patch('fochlab.logic.checks.operator_check')
    def test_operator_check(self, mock_check):
        """ Test the status follows the gating records. """
        mock_check.return_value = [CheckRecord('a', 0.0, 1.0),
                                   CheckRecord('b', 2.0, 1.0, gating=False)]
        assert self.command('operator-check').status == experiment.EXIT_OK
        mock_check.assert_called_once_with(0)
        columns, rows = self.table('checks.csv')
        assert columns == ['name', 'value', 'bound', 'tolerance', 'passed',
                           'gating']
        assert rows[1][4:] == ['False', 'False']

        mock_check.return_value = [CheckRecord('c', 2.0, 1.0)]
        assert self.command('operator-check').status == \
            experiment.EXIT_NUMERIC
        assert self.manifest()['summary']['passed'] is False

    def test_picard_check(self):
        """ Test the Picard mirror on a small Gaussian. """
        command = self.command('picard-check',
                               ('initial_data.parameters.amplitude', 0.1),
                               ('stepper.dt_init', 0.0125),
                               ('options.picard_T', 0.05),
                               ('options.picard_k_max', 6))
        assert command.status == experiment.EXIT_OK
        columns, rows = self.table('picard.csv')
        assert columns == ['k', 'residual', 'ratio']
        assert len(rows) == 6
        assert rows[0][2] == ''
        assert self.manifest()['summary']['direct_termination'] == \
            'completed'
