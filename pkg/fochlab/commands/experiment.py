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

""" The experiment commands of fochlab.

This module is the home of the front end part of the experiments. This means
that as little as possible logic should go here: each subcommand builds the
data, calls the backend and hands the results to the artifact writer.

"""

import dataclasses
import time

import fochlab
from fochlab.command import Command
from fochlab.logic import artifacts, blowup, checks, common, config
from fochlab.logic import diagnostics, inflation, integrator
from fochlab.logic.littlewood_paley import build_partition

EXIT_OK = 0
EXIT_BLOWUP = 2
EXIT_RESOLUTION = 3
EXIT_CONFIG = 4
EXIT_NUMERIC = 5

TERMINATION_STATUS = {
    'completed': EXIT_OK,
    'blowup_detected': EXIT_BLOWUP,
    'resolution_loss': EXIT_RESOLUTION,
    'nonfinite': EXIT_NUMERIC,
}

# Inflation scans expect blow-up, so it is no reason for a non-zero status.
SCAN_STATUS = dict(TERMINATION_STATUS, blowup_detected=EXIT_OK)


class ExperimentCommand(Command):

    """ Run one experiment and write its artifacts.

    The exit status is left in self.status.

    """

    def __init__(self, args):
        """ Parse command and execute tasks. """
        Command.__init__(self)
        self.args = args
        self.status = EXIT_OK
        self.config = None
        self.writer = None
        self.summary = dict()

        if getattr(args, 'quiet', False):
            self.printer = lambda *a, **b: None

        self.register_subcommand('simulate', self.simulate)
        self.register_subcommand('blowup-certify', self.certify)
        self.register_subcommand('inflation-scan', self.inflation_scan)
        self.register_subcommand('operator-check', self.operator_check)
        self.register_subcommand('picard-check', self.picard_check)

        self.run()

    def run(self):
        """ Load the configuration, run the experiment, write the manifest.
        """
        try:
            self.config = config.load_config(
                self.args.config, self.args.set or (), self.args.out,
                self.args.seed, self.args.experiment)
        except config.ConfigError as err:
            self.p_main('Invalid configuration')
            self.p_sub('Error: {}'.format(err))
            self.status = EXIT_CONFIG
            return

        experiment = self.config.experiment
        self.p_main('Running {} into {}', experiment, self.config.output_dir)
        started = time.time()
        try:
            self.writer = artifacts.ArtifactWriter(self.config.output_dir)
            self.status = self.invoke_subcommand(
                experiment, (ArithmeticError,), failure=EXIT_NUMERIC)
        except (ValueError, OSError) as err:
            self.p_sub('Error: {}'.format(err))
            self.status = EXIT_CONFIG
            if self.writer is None:
                return

        self.writer.manifest({
            'version': fochlab.__version__,
            'experiment': experiment,
            'config': self.config.to_dict(),
            'started': time.strftime('%Y-%m-%dT%H:%M:%S%z',
                                     time.localtime(started)),
            'elapsed': time.time() - started,
            'exit_status': self.status,
            'summary': self.summary,
        })
        self.p_main('Finished with exit status {}', self.status)

    def _diagnostics(self, name, result):
        """ Write the diagnostics series of a run. """
        columns = ['t'] + diagnostics.ConservationReport.columns()
        rows = [[t] + entry.row()
                for t, entry in zip(result.times, result.diagnostics)]
        self.writer.table(name, columns, rows)

    def _snapshots(self, folder, result):
        """ Write every sampled snapshot of a run. """
        for index, (t, u) in enumerate(zip(result.times, result.snapshots)):
            self.writer.snapshot('{}/snapshot_{:05d}.bin'.format(folder,
                                                                 index), u, t)

    def _run_summary(self, result):
        self.summary['termination'] = result.termination
        self.summary['t_final'] = result.t_final
        self.summary['samples'] = len(result.times)
        self.summary['steps'] = len(result.dt_log)
        self.p_sub('{} at t = {:.6g} after {} steps', result.termination,
                   result.t_final, len(result.dt_log))

    def simulate(self):
        """ Integrate the initial data and record the diagnostics. """
        u0 = config.initial_field(self.config)
        result = integrator.run(u0, self.config.stepper,
                                build_partition(u0.grid))
        self._run_summary(result)
        self.summary.update(diagnostics.drift(result))

        self.p_sub('Writing diagnostics and {} snapshots',
                   len(result.snapshots))
        self._diagnostics('diagnostics.csv', result)
        self.writer.table('steps.csv', ['step', 'dt'],
                          list(enumerate(result.dt_log, 1)))
        self._snapshots('snapshots', result)
        return TERMINATION_STATUS[result.termination]

    def certify(self):
        """ Build the blow-up certificate and check it against a run. """
        constants = self.config.constants
        u0 = config.initial_field(self.config)
        part = build_partition(u0.grid)
        cert = blowup.build_certificate(
            u0, self.config.options['x0'],
            constants.slope_constant(self.config.experiment),
            constants.C_wp, constants.besov_s, part)
        self.p_sub('T1 = {:.6g} ({}), T2 = {}, conditions {}', cert.T1,
                   cert.t1_branch, cert.T2,
                   'hold' if cert.covered else 'fail')

        stepper = config.stepper_for(self.config, cert.q0)
        result = integrator.run(u0, stepper, part)
        self._run_summary(result)
        path = diagnostics.track_characteristic(result, cert.x0)
        verdict = blowup.validate_prediction(cert, result, path)
        integrals = diagnostics.criterion_integrals(result)
        self.summary['verdict'] = verdict.verdict
        self.p_sub('Verdict: {}', verdict.verdict)

        self.writer.json('certificate.json', {
            'certificate': cert,
            'verdict': verdict,
            'integrals': dataclasses.asdict(integrals),
            'q_abort': stepper.q_abort,
            'termination': result.termination,
            't_final': result.t_final,
        })
        self.writer.table(
            'characteristic.csv',
            ['t', 'y', 'q_along', 'ux_along', 'riccati_bound'],
            zip(path.times, path.y, path.q_along, path.ux_along,
                blowup.envelope(cert, path.times)))
        self._diagnostics('diagnostics.csv', result)
        self.writer.snapshot('snapshots/initial.bin', u0, 0.0)
        self.writer.snapshot('snapshots/final.bin', result.snapshots[-1],
                             result.times[-1])
        return TERMINATION_STATUS[result.termination]

    def inflation_scan(self):
        """ Build, certify and run the inflation data for every N. """
        constants = self.config.constants
        Ns = self.config.options['Ns']
        self.p_sub('N = {}', common.list_names(Ns))
        family = inflation.inflation_scan(
            Ns, self.config.stepper, self.config.grid,
            constants.slope_constant(self.config.experiment),
            constants.C_wp, constants.g_ratio, constants.besov_s,
            workers=common.thread_count())

        status = EXIT_OK
        self.writer.table('inflation.csv', inflation.ROW_COLUMNS,
                          [item.row() for item in family.items])
        for item in family.items:
            folder = 'N_{}'.format(item.N)
            if item.error is not None:
                self.p_sub('N = {}: Error: {}', item.N, item.error)
                status = max(status, EXIT_NUMERIC)
                continue
            self.p_sub('N = {}: {} at t = {:.6g}', item.N, item.termination,
                       item.t_final)
            status = max(status, SCAN_STATUS[item.termination])
            self.writer.json(folder + '/certificate.json', {
                'metrics': dataclasses.asdict(item.metrics),
                'certificate': item.certificate,
                'initial_b0inf': item.initial_b0inf,
                'max_b0inf': item.max_b0inf,
                'max_h12': item.max_h12,
            })
            self._diagnostics(folder + '/diagnostics.csv', item.result)
            self.writer.snapshot(folder + '/initial.bin',
                                 family.fields_u0[item.N], 0.0)
            self.writer.snapshot(folder + '/final.bin',
                                 item.result.snapshots[-1],
                                 item.result.times[-1])

        compensated = inflation.compensated_metrics(family)
        compensated['lifespan_non_increasing'] = \
            inflation.lifespan_trend(family)
        self.writer.json('scaling.json', compensated)
        self.summary['items'] = len(family.items)
        self.summary['failed'] = [item.N for item in family.items
                                  if item.error is not None]
        return status

    def operator_check(self):
        """ Compare the spectral operators against their oracles. """
        records = checks.operator_check(self.config.seed)
        return self._checks(records)

    def picard_check(self):
        """ Run the Picard mirror and compare it with a direct run. """
        options = self.config.options
        u0 = config.initial_field(self.config)
        records, picard, direct = checks.picard_check(
            u0, options['picard_T'], options['picard_k_max'],
            self.config.stepper)
        rows = [[k, residual, ratio] for k, (residual, ratio) in enumerate(
            zip(picard.residuals, [None] + picard.ratios), 1)]
        self.writer.table('picard.csv', ['k', 'residual', 'ratio'], rows)
        self.summary['direct_termination'] = direct.termination
        return self._checks(records)

    def _checks(self, records):
        for record in records:
            self.p_sub('{:<40} {:.3e}  {}', record.name, record.value,
                       'ok' if record.passed else
                       ('FAILED' if record.gating else 'finding'))
        self.writer.table('checks.csv', checks.COLUMNS,
                          [record.row() for record in records])
        self.writer.json('checks.json', records)
        passed = checks.all_passed(records)
        self.summary['passed'] = passed
        return EXIT_OK if passed else EXIT_NUMERIC
