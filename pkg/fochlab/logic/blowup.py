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

""" Blow-up certificates and the Riccati comparison dynamics.

Given initial data u0 and a point x0, the certificate evaluates the
constants of the sufficient wave-breaking condition

    K  = 34 h^4 - C0^4 / 8 + 3025 h^6 / (4 C0^2),   h = |u0|_H2, C0 = C1 h
    T1 = min(C0 / (32 h^3), 1 / (4 C_wp^3 |n0|^2_{B^s_{2,2}}))
    w0 = 1 + 2 / (T1 sqrt(K))

and checks |u0_x(x0)| >= C0 and q0 = u0_x u0_xx (x0) <= -2 w0 sqrt(K).
Along the characteristic from x0, q stays below the solution f of
f' = -f^2 / 4 + K, f(0) = q0, which reaches -infinity at T2.

"""

import logging
import math
from dataclasses import asdict, dataclass

import numpy as np

from fochlab.logic import diagnostics, spectral
from fochlab.logic.littlewood_paley import BesovIndex, besov_norm, \
    build_partition, sobolev_norm

log = logging.getLogger(__name__)

# Relative slack on T1 for the detected blow-up time.
WINDOW_SLACK = 0.1
# Slack on the Riccati envelope, relative to |q0|.
ENVELOPE_SLACK = 0.05
# |f| at which the numeric Riccati solve declares the singularity reached.
RICCATI_CAP = 1e8

VERDICTS = ('confirmed', 'not-covered-by-theorem', 'inconclusive')


class SingularityCrossed(ArithmeticError):

    """ Raised when the Riccati envelope is asked for at or after T2. """

    def __init__(self, t, T2):
        ArithmeticError.__init__(
            self, 'Time {} is not before the singularity at T2 = {}'
            .format(t, T2))
        self.t = t
        self.T2 = T2


def k_constant(h2_0, C0):
    """ K for the H2 norm h2_0 and the slope bound C0 > 0. """
    if not C0 > 0:
        raise ValueError('C0 must be positive, got {}'.format(C0))
    h2 = h2_0 * h2_0
    h4 = h2 * h2
    h6 = h4 * h2
    c2 = C0 * C0
    return 34 * h4 - c2 * c2 / 8 + 3025 * h6 / (4 * c2)


def t1_constant(C0, h2_0, C_wp, n0_besov):
    """ T1 and the name of the active branch of its minimum.

    The branch is "sobolev" for C0 / (32 h^3) and "wellposedness" for
    1 / (4 C_wp^3 |n0|^2).

    """
    sobolev = C0 / (32 * h2_0 ** 3)
    wellposedness = 1 / (4 * C_wp ** 3 * n0_besov ** 2)
    if sobolev <= wellposedness:
        return sobolev, 'sobolev'
    return wellposedness, 'wellposedness'


def _check_admissible(q0, K):
    if not K > 0:
        raise ValueError('K must be positive, got {}'.format(K))
    if not q0 < -2 * math.sqrt(K):
        raise ValueError('q0 = {} is not below -2 sqrt(K) = {}'
                         .format(q0, -2 * math.sqrt(K)))


def predict_T2(q0, K):
    """ The time at which the Riccati solution from q0 < -2 sqrt(K) blows up.
    """
    _check_admissible(q0, K)
    root = math.sqrt(K)
    return math.log((q0 - 2 * root) / (q0 + 2 * root)) / root


def riccati_bound(t, q0, K):
    """ The closed form solution of f' = -f^2 / 4 + K, f(0) = q0.

    t may be a scalar or an array; every t must lie in [0, T2). Raises
    SingularityCrossed otherwise.

    """
    T2 = predict_T2(q0, K)
    times = np.asarray(t, dtype=float)
    if np.any(times >= T2):
        raise SingularityCrossed(float(np.max(times)), T2)
    root = math.sqrt(K)
    C = (2 * root - q0) / (2 * root + q0)
    decay = C * np.exp(-root * times)
    values = 2 * root * (1 - decay) / (1 + decay)
    return float(values) if np.ndim(t) == 0 else values


@dataclass(frozen=True, eq=False)
class RiccatiSolution(object):

    """ A numeric solve of the Riccati comparison equation.

    singular_time is the time |f| first exceeded the cap, or None if t_end
    came first.

    """

    times: np.ndarray
    values: np.ndarray
    singular_time: float


def riccati_integrate(q0, K, t_end, h_max=1e-3, accuracy=1e-3,
                      cap=RICCATI_CAP):
    """ Solve f' = -f^2 / 4 + K from q0 with RK4.

    The step is min(h_max, 4 accuracy / |f|), so it shrinks with the
    solution as the singularity comes near.

    This function accepts up to six parameters:
        q0                The initial value.
        K                 The constant.
        t_end             Where to stop if the solution stays below cap.
        h_max=1e-3        The largest step.
        accuracy=1e-3     The step size relative to the time scale 4 / |f|.
        cap=1e8           The magnitude that counts as the singularity.

    """
    def slope(f):
        return -f * f / 4 + K

    t, f = 0.0, float(q0)
    times, values = [t], [f]
    singular = None
    while t < t_end:
        h = min(h_max, 4 * accuracy / max(abs(f), 1e-300), t_end - t)
        k1 = slope(f)
        k2 = slope(f + h / 2 * k1)
        k3 = slope(f + h / 2 * k2)
        k4 = slope(f + h * k3)
        f = f + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t + h
        times.append(t)
        values.append(f)
        if not math.isfinite(f) or abs(f) > cap:
            singular = t
            break
    return RiccatiSolution(np.array(times), np.array(values), singular)


@dataclass(frozen=True)
class BlowupCertificate(object):

    """ The constants and conditions of the blow-up criterion for u0 and x0.

    omega0 and T2 are None where they are undefined. weak_condition is the
    plain q0 < -2 sqrt(K), which cond_product tightens by omega0.

    """

    x0: float
    h2_0: float
    C0: float
    C1: float
    C_wp: float
    besov_s: float
    n0_besov: float
    K: float
    omega0: float
    T1: float
    t1_branch: str
    T2: float
    ux0: float
    uxx0: float
    q0: float
    cond_slope: bool
    cond_product: bool
    K_positive: bool
    weak_condition: bool

    @property
    def covered(self):
        """ Whether every hypothesis of the criterion holds. """
        return self.K_positive and self.cond_slope and self.cond_product

    def to_dict(self):
        """ The fields as plain python values. """
        return asdict(self)


def default_seed(u0):
    """ The point of the 2x oversampled grid where u_x u_xx is smallest. """
    _, index = diagnostics.q_grid_min(u0)
    return -u0.grid.length / 2 + index * u0.grid.dx / 2


def build_certificate(u0, x0=None, C1=0.4, C_wp=1.0, s=2.0, partition=None):
    """ Evaluate the blow-up criterion for u0 at x0.

    This function accepts up to six parameters:
        u0                The initial SpectralField.
        x0=None           The seed point, the minimum of q by default.
        C1=0.4            The slope constant, in (0, 1/2).
        C_wp=1.0          The stand-in for the well-posedness constant,
                          at least 1.
        s=2.0             The regularity of the Besov norm of n0 in T1.
        partition=None    The DyadicPartition of u0's grid.

    Raises ValueError for zero data or constants out of range.

    """
    if not 0 < C1 < 0.5:
        raise ValueError('C1 must lie in (0, 1/2), got {}'.format(C1))
    if not C_wp >= 1:
        raise ValueError('C_wp must be at least 1, got {}'.format(C_wp))
    if u0.is_zero():
        raise ValueError('Zero initial data has C0 = 0 and no K')
    part = partition or build_partition(u0.grid)
    if x0 is None:
        x0 = default_seed(u0)
    h2_0 = sobolev_norm(u0, 2)
    C0 = C1 * h2_0
    n0_besov = besov_norm(spectral.helmholtz(u0), BesovIndex(s, 2, 2), part)
    K = k_constant(h2_0, C0)
    T1, branch = t1_constant(C0, h2_0, C_wp, n0_besov)
    ux0 = spectral.interpolate(spectral.derivative(u0, 1), x0)
    uxx0 = spectral.interpolate(spectral.derivative(u0, 2), x0)
    q0 = ux0 * uxx0

    positive = K > 0
    omega0 = 1 + 2 / (T1 * math.sqrt(K)) if positive else None
    weak = positive and q0 < -2 * math.sqrt(K)
    certificate = BlowupCertificate(
        x0=float(x0), h2_0=h2_0, C0=C0, C1=C1, C_wp=C_wp, besov_s=s,
        n0_besov=n0_besov, K=K, omega0=omega0, T1=T1, t1_branch=branch,
        T2=predict_T2(q0, K) if weak else None,
        ux0=ux0, uxx0=uxx0, q0=q0,
        cond_slope=abs(ux0) >= C0,
        cond_product=positive and q0 <= -2 * omega0 * math.sqrt(K),
        K_positive=positive, weak_condition=weak)
    log.info('Certificate at x0 = %g: K = %.6g, T1 = %.6g (%s), q0 = %.6g, '
             'covered = %s', certificate.x0, K, T1, branch, q0,
             certificate.covered)
    return certificate


@dataclass(frozen=True)
class PredictionVerdict(object):

    """ How a run compares with its certificate.

    window_ok: blow-up was detected no later than T1 (1 + 0.1).
    envelope_ok: q along the characteristic stayed below the Riccati
    solution plus 0.05 |q0| before detection; None without T2.
    slope_ok: |u_x| along the characteristic stayed at least C0 / 2 up to
    min(t_final, T1).

    """

    covered: bool
    window_ok: bool
    envelope_ok: bool
    slope_ok: bool
    truncated: bool
    envelope_excess: float
    min_slope: float
    verdict: str

    def to_dict(self):
        """ The fields as plain python values. """
        return asdict(self)


def validate_prediction(cert, result, path=None):
    """ Compare a run from the certificate's data with its predictions.

    This function accepts up to three parameters:
        cert         The BlowupCertificate.
        result       The RunResult started from the same data.
        path=None    The characteristic from cert.x0, tracked if missing.

    The verdict is "confirmed" when the criterion applies and every check
    passes, "not-covered-by-theorem" when a hypothesis fails and
    "inconclusive" otherwise. A run is never reported as refuting the
    criterion.

    """
    if path is None:
        path = diagnostics.track_characteristic(result, cert.x0)
    window_ok = (result.termination == 'blowup_detected'
                 and result.t_final <= cert.T1 * (1 + WINDOW_SLACK))

    envelope_ok, excess = None, None
    if cert.T2 is not None:
        before = (path.times < result.t_final) & (path.times < cert.T2)
        if before.any():
            bound = riccati_bound(path.times[before], cert.q0, cert.K)
            tolerance = ENVELOPE_SLACK * abs(cert.q0)
            excess = float(np.max(path.q_along[before] - bound))
            envelope_ok = excess <= tolerance

    watched = path.times <= min(result.t_final, cert.T1)
    min_slope = float(np.min(np.abs(path.ux_along[watched])))
    slope_ok = min_slope >= cert.C0 / 2

    if not cert.covered:
        verdict = 'not-covered-by-theorem'
    elif window_ok and envelope_ok and slope_ok and not path.truncated:
        verdict = 'confirmed'
    else:
        verdict = 'inconclusive'
    log.info('Prediction verdict %s (window %s, envelope %s, slope %s)',
             verdict, window_ok, envelope_ok, slope_ok)
    return PredictionVerdict(cert.covered, window_ok, envelope_ok, slope_ok,
                             path.truncated, excess, min_slope, verdict)


def envelope(cert, times):
    """ The Riccati bound at times, None at times from T2 on or when the
    certificate has no T2. """
    if cert.T2 is None:
        return [None] * len(times)
    return [riccati_bound(t, cert.q0, cert.K) if t < cert.T2 else None
            for t in times]
