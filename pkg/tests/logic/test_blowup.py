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

""" Tests for fochlab.logic.blowup. """
from fochlab.logic import blowup, diagnostics, inflation, integrator
from fochlab.logic.blowup import BlowupCertificate
from fochlab.logic.diagnostics import CharacteristicPath
from fochlab.logic.integrator import RunResult, StepperConfig
from fochlab.logic.littlewood_paley import sobolev_norm
from fochlab.logic.spectral import GridSpec, SpectralField
from unittest import TestCase
import dataclasses
import math
import os
import unittest

import numpy as np


def certificate(**changes):
    """ A covered certificate with K = 4, q0 = -12, T1 = 1 and C0 = 1. """
    fields = dict(x0=0.0, h2_0=2.5, C0=1.0, C1=0.4, C_wp=1.0, besov_s=2.0,
                  n0_besov=1.0, K=4.0, omega0=2.0, T1=1.0,
                  t1_branch='sobolev', T2=math.log(2) / 2, ux0=2.0,
                  uxx0=-6.0, q0=-12.0, cond_slope=True, cond_product=True,
                  K_positive=True, weak_condition=True)
    fields.update(changes)
    return BlowupCertificate(**fields)


class TestConstants(TestCase):

    """ Test the constants of the criterion. """

    def test_k_constant(self):
        """ Test K for h = C0 = 1. """
        assert blowup.k_constant(1.0, 1.0) == 34 - 1 / 8 + 3025 / 4
        with self.assertRaises(ValueError):
            blowup.k_constant(1.0, 0.0)

    def test_t1_branches(self):
        """ Test both branches of the minimum. """
        assert blowup.t1_constant(0.4, 1.0, 1.0, 1.0) == (0.0125, 'sobolev')
        T1, branch = blowup.t1_constant(0.4, 1.0, 1.0, 10.0)
        assert branch == 'wellposedness'
        assert abs(T1 - 0.0025) < 1e-15

    def test_predict_t2(self):
        """ Test T2 = ln 2 / sqrt(K) for q0 = -6 sqrt(K). """
        for K in (0.25, 4.0, 900.0):
            T2 = blowup.predict_T2(-6 * math.sqrt(K), K)
            assert abs(T2 - math.log(2) / math.sqrt(K)) < 1e-12 * T2

    def test_predict_t2_inadmissible(self):
        """ Test that q0 must lie below -2 sqrt(K) with K > 0. """
        with self.assertRaises(ValueError):
            blowup.predict_T2(-3.0, 4.0)
        with self.assertRaises(ValueError):
            blowup.predict_T2(-3.0, -1.0)

    def test_t2_before_t1(self):
        """ Test T2 <= T1 whenever the product condition holds. """
        for K in (0.01, 1.0, 250.0):
            for T1 in (1e-3, 0.1, 5.0):
                omega0 = 1 + 2 / (T1 * math.sqrt(K))
                for factor in (1.0, 1.5, 10.0):
                    q0 = -2 * omega0 * math.sqrt(K) * factor
                    assert blowup.predict_T2(q0, K) <= T1 * (1 + 1e-12)


class TestRiccati(TestCase):

    """ Test the Riccati comparison solutions. """

    def setUp(self):
        self.q0 = -12.0
        self.K = 4.0
        self.T2 = blowup.predict_T2(self.q0, self.K)

    def test_initial_value(self):
        """ Test f(0) = q0. """
        assert abs(blowup.riccati_bound(0.0, self.q0, self.K) - self.q0) \
            < 1e-12

    def test_solves_ode(self):
        """ Test the closed form against f' = -f^2 / 4 + K. """
        times = np.linspace(0, 0.9 * self.T2, 50)
        h = 1e-6
        f = blowup.riccati_bound(times, self.q0, self.K)
        ahead = blowup.riccati_bound(times[1:] + h, self.q0, self.K)
        behind = blowup.riccati_bound(times[1:] - h, self.q0, self.K)
        slope = (ahead - behind) / (2 * h)
        expected = -f[1:] ** 2 / 4 + self.K
        assert np.allclose(slope, expected, rtol=1e-6)

    def test_numeric(self):
        """ Test the RK4 solve against the closed form up to 0.95 T2. """
        solution = blowup.riccati_integrate(self.q0, self.K, 0.95 * self.T2)
        assert solution.singular_time is None
        assert abs(solution.times[-1] - 0.95 * self.T2) < 1e-12
        exact = blowup.riccati_bound(solution.times, self.q0, self.K)
        assert np.allclose(solution.values, exact, rtol=1e-8, atol=0)

    def test_numeric_singularity(self):
        """ Test that the RK4 solve finds the singularity at T2. """
        solution = blowup.riccati_integrate(self.q0, self.K, 2 * self.T2)
        assert solution.singular_time is not None
        assert abs(solution.singular_time - self.T2) < 1e-5 * self.T2

    def test_crossed(self):
        """ Test that the bound refuses times from T2 on. """
        with self.assertRaises(blowup.SingularityCrossed) as context:
            blowup.riccati_bound([0.0, self.T2], self.q0, self.K)
        assert context.exception.T2 == self.T2
        assert isinstance(context.exception, ArithmeticError)

    def test_envelope(self):
        """ Test the envelope column of a certificate. """
        cert = certificate()
        values = blowup.envelope(cert, [0.0, 0.1, 1.0])
        assert abs(values[0] + 12) < 1e-12
        assert values[1] == blowup.riccati_bound(0.1, -12.0, 4.0)
        assert values[2] is None
        assert blowup.envelope(certificate(T2=None), [0.0, 1.0]) \
            == [None, None]


class TestCertificate(TestCase):

    """ Test blowup.build_certificate. """

    def setUp(self):
        self.grid = GridSpec(40, 512)
        self.u0 = SpectralField.from_function(
            self.grid, lambda x: 0.5 * np.exp(-x ** 2))

    def test_invalid(self):
        """ Test zero data and constants out of range. """
        with self.assertRaises(ValueError):
            blowup.build_certificate(SpectralField.zeros(self.grid))
        with self.assertRaises(ValueError):
            blowup.build_certificate(self.u0, C1=0.5)
        with self.assertRaises(ValueError):
            blowup.build_certificate(self.u0, C_wp=0.5)

    def test_small_data(self):
        """ Test that small smooth data are not covered. """
        cert = blowup.build_certificate(self.u0)
        h2 = sobolev_norm(self.u0, 2)
        assert cert.h2_0 == h2
        assert abs(cert.C0 - 0.4 * h2) < 1e-15
        assert cert.K == blowup.k_constant(h2, cert.C0)
        assert cert.K_positive
        assert abs(cert.omega0 - (1 + 2 / (cert.T1 * math.sqrt(cert.K)))) \
            < 1e-12
        assert cert.x0 == blowup.default_seed(self.u0)
        assert abs(cert.q0 - cert.ux0 * cert.uxx0) < 1e-15
        assert not cert.weak_condition
        assert not cert.cond_product
        assert cert.T2 is None
        assert not cert.covered
        assert cert.to_dict()['t1_branch'] in ('sobolev', 'wellposedness')

    def test_seed(self):
        """ Test the default seed against the grid minimum of q. """
        value, index = diagnostics.q_grid_min(self.u0)
        assert blowup.default_seed(self.u0) == -20 + index * 40 / 1024
        assert value < 0

    def test_given_seed(self):
        """ Test the derivatives at a given seed. """
        cert = blowup.build_certificate(self.u0, x0=0.5)
        assert cert.x0 == 0.5
        assert abs(cert.ux0 + 0.5 * math.exp(-0.25)) < 1e-10
        assert abs(cert.uxx0 - (-1 + 2 * 0.25) * math.exp(-0.25)) < 1e-10


class TestValidatePrediction(TestCase):

    """ Test blowup.validate_prediction on hand made runs. """

    def setUp(self):
        self.times = np.array([0.0, 0.1, 0.2, 0.3])
        self.bound = blowup.riccati_bound(self.times, -12.0, 4.0)

    def make_run(self, termination='blowup_detected', t_final=0.3):
        result = RunResult(GridSpec(), 'u_form')
        result.terminate(termination, t_final)
        return result

    def path(self, q_shift=-1.0, slope=2.0, truncated=False):
        return CharacteristicPath(0.0, self.times, np.zeros(4),
                                  self.bound + q_shift, np.full(4, slope),
                                  truncated)

    def test_confirmed(self):
        """ Test a run matching every prediction. """
        verdict = blowup.validate_prediction(certificate(), self.make_run(),
                                             self.path())
        assert verdict.window_ok
        assert verdict.envelope_ok
        assert verdict.slope_ok
        assert abs(verdict.envelope_excess + 1) < 1e-12
        assert verdict.min_slope == 2.0
        assert verdict.verdict == 'confirmed'

    def test_not_covered(self):
        """ Test that a failing hypothesis wins over the checks. """
        cert = certificate(cond_slope=False)
        verdict = blowup.validate_prediction(cert, self.make_run(), self.path())
        assert not verdict.covered
        assert verdict.verdict == 'not-covered-by-theorem'

    def test_inconclusive(self):
        """ Test every way a covered run can fall short. """
        cases = [(self.make_run('completed', 1.0), self.path()),
                 (self.make_run(t_final=1.2), self.path()),
                 (self.make_run(), self.path(q_shift=1.0)),
                 (self.make_run(), self.path(slope=0.4)),
                 (self.make_run(), self.path(truncated=True))]
        for result, path in cases:
            verdict = blowup.validate_prediction(certificate(), result, path)
            assert verdict.verdict == 'inconclusive'
        assert blowup.VERDICTS[2] == 'inconclusive'

    def test_no_t2(self):
        """ Test that the envelope is skipped without T2. """
        cert = certificate(T2=None, weak_condition=False,
                           cond_product=False)
        verdict = blowup.validate_prediction(cert, self.make_run(), self.path())
        assert verdict.envelope_ok is None
        assert verdict.envelope_excess is None
        assert verdict.verdict == 'not-covered-by-theorem'


@unittest.skipUnless(os.environ.get('FOCH_LAB_SLOW'),
                     'set FOCH_LAB_SLOW to run the blow-up validation')
class TestInflationValidation(TestCase):

    """ Test the certificate of the N = 10 inflation data against a run. """

    def test_n10(self):
        """ Test that covered data blow up inside the predicted window. """
        grid = GridSpec(200, 2 ** 17)
        psi = inflation.build_psi(grid, 10)
        u0 = inflation.build_u0N(10, psi, inflation.build_g(0.2, grid))
        cert = blowup.build_certificate(u0, 0.0, C1=0.4)
        q_abort = 1e3 * abs(cert.q0)
        cfg = StepperConfig(t_end=min(max(cert.T1 * 1.2, 1e-3), 0.1),
                            q_abort=q_abort, dt_init=1e-4)
        result = integrator.run(u0, cfg)
        verdict = blowup.validate_prediction(cert, result)
        assert verdict.verdict in blowup.VERDICTS
        if cert.covered:
            assert cert.T2 <= cert.T1 * (1 + 1e-12)
            assert result.termination == 'blowup_detected'
            assert result.t_final <= cert.T1 * (1 + blowup.WINDOW_SLACK)
        else:
            assert verdict.verdict == 'not-covered-by-theorem'
        assert dataclasses.asdict(cert)['C1'] == 0.4
