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

""" The norm inflation data family and the scan over it.

For N >= 2 the data are

    u0^N = (sum_{j=1..N} 2^-3j j^-2/3 f_j + g) / ln N

where f_j has the transform psi(2^-j xi) for an even bump psi supported in
4/3 <= |xi| <= 3/2, and g = A x exp(-x^2) is odd. Every f_j sits inside a
single dyadic block, the f_j part is even and the g part carries the slope
at the origin.

"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from fochlab.logic import blowup, common, integrator, spectral
from fochlab.logic.diagnostics import B0_INF
from fochlab.logic.littlewood_paley import besov_norm, build_partition, \
    bump, sobolev_norm
from fochlab.logic.spectral import MultiplierSymbol, SpectralField

log = logging.getLogger(__name__)

PSI_LOW = 4 / 3
PSI_HIGH = 3 / 2
# Grid frequencies the j = 1 annulus must hold.
MIN_ANNULUS_POINTS = 4
LATTICE_REFINEMENT = 10


def _psi(xi):
    middle = (PSI_LOW + PSI_HIGH) / 2
    half = (PSI_HIGH - PSI_LOW) / 2
    return bump((np.abs(xi) - middle) / half)


PSI = MultiplierSymbol(_psi, 'psi')


@dataclass(frozen=True)
class BumpProfile(object):

    """ The bump psi with its L2 norm and second moment over the line. """

    psi: MultiplierSymbol
    psi_l2: float
    psi_moment2: float


def annulus_points(grid, j=1):
    """ Number of non-negative grid frequencies where psi(2^-j xi) > 0. """
    return int(np.count_nonzero(PSI.dilate(j)(grid.wavenumbers) > 0))


def check_resolution(grid, N):
    """ Raise ValueError naming the first annulus 2^j [4/3, 3/2], j <= N,
    that reaches the Nyquist frequency. """
    for j in range(1, N + 1):
        if 2 ** j * PSI_HIGH > grid.nyquist:
            raise ValueError('Annulus j = {} reaches xi = {:.6g}, above the '
                             'Nyquist frequency {:.6g}'
                             .format(j, 2 ** j * PSI_HIGH, grid.nyquist))


def build_psi(grid, n_max=None):
    """ Build the bump profile and check it against a grid.

    The support and range of psi are verified on a lattice ten times finer
    than the grid frequencies. Raises ValueError if the j = 1 annulus holds
    fewer than four grid frequencies, or if n_max is given and its annulus
    lies above Nyquist.

    """
    half = LATTICE_REFINEMENT * (grid.points // 2)
    lattice = grid.dxi / LATTICE_REFINEMENT * np.arange(-half, half + 1)
    values = PSI(lattice)
    outside = (np.abs(lattice) < PSI_LOW) | (np.abs(lattice) > PSI_HIGH)
    if np.any(values[outside] != 0) or values.min() < 0 or values.max() > 1:
        raise ValueError('psi leaves its support or the interval [0, 1]')
    if np.any(values != values[::-1]):
        raise ValueError('psi is not even on the frequency lattice')
    count = annulus_points(grid, 1)
    if count < MIN_ANNULUS_POINTS:
        raise ValueError('The j = 1 annulus holds {} grid frequencies, at '
                         'least {} are needed'
                         .format(count, MIN_ANNULUS_POINTS))
    if n_max is not None:
        check_resolution(grid, n_max)

    square, _ = integrate.quad(lambda eta: float(_psi(eta)) ** 2,
                               PSI_LOW, PSI_HIGH, epsabs=0, epsrel=1e-13)
    moment, _ = integrate.quad(lambda eta: eta ** 2 * float(_psi(eta)),
                               PSI_LOW, PSI_HIGH, epsabs=0, epsrel=1e-13)
    return BumpProfile(PSI, math.sqrt(2 * square), 2 * moment)


def g_shape(grid):
    """ x exp(-x^2) on the grid. """
    return SpectralField.from_function(grid, lambda x: x * np.exp(-x ** 2))


def g_amplitude(target, grid):
    """ The smallest A with A / (1 + A c_g) >= target, and c_g.

    c_g is the measured H2 norm of x exp(-x^2). Raises ValueError when
    target is not in (0, 1 / c_g).

    """
    c_g = sobolev_norm(g_shape(grid), 2)
    bound = 1 / c_g
    if not 0 < target < bound:
        raise ValueError('Target ratio {} is infeasible for A x exp(-x^2); '
                         'it must lie in (0, {:.6g})'.format(target, bound))
    return target / (1 - target * c_g) * (1 + 1e-9), c_g


def build_g(target, grid):
    """ The odd profile g = A x exp(-x^2) with g'(0) / (1 + |g|_H2) >= target.
    """
    amplitude, _ = g_amplitude(target, grid)
    return g_shape(grid) * amplitude


def inflation_parts(N, psi, g):
    """ The even f_j part and the odd g part of u0^N, separately. """
    if N < 2:
        raise ValueError('N must be at least 2, got {}'.format(N))
    grid = g.grid
    check_resolution(grid, N)
    xi = grid.wavenumbers
    spectrum = np.zeros(xi.shape)
    for j in range(1, N + 1):
        spectrum += 2.0 ** (-3 * j) * j ** (-2 / 3) * psi.psi.dilate(j)(xi)
    scale = 1 / math.log(N)
    return (SpectralField.from_spectrum(grid, spectrum * scale),
            g * scale)


def build_u0N(N, psi, g):
    """ The inflation data u0^N on g's grid. """
    even, odd = inflation_parts(N, psi, g)
    return even + odd


@dataclass(frozen=True)
class InflationMetrics(object):

    """ Scaling quantities of u0^N. """

    N: int
    h12_n0: float
    slope0: float
    curv0: float
    product0: float
    h2: float


def measure(N, u0):
    """ The metrics of u0^N; slope and curvature at the grid point x = 0. """
    centre = u0.grid.points // 2
    slope = spectral.derivative(u0, 1).samples[centre]
    curvature = spectral.derivative(u0, 2).samples[centre]
    return InflationMetrics(
        N=N,
        h12_n0=sobolev_norm(spectral.helmholtz(u0), 0.5),
        slope0=float(slope), curv0=float(curvature),
        product0=float(slope * curvature),
        h2=sobolev_norm(u0, 2))


@dataclass(eq=False)
class ScanItem(object):

    """ The outcome of one N of a scan.

    error holds the message of a failure; the other run fields are then
    None.

    """

    N: int
    metrics: InflationMetrics = None
    certificate: blowup.BlowupCertificate = None
    t_final: float = None
    termination: str = None
    initial_b0inf: float = None
    max_b0inf: float = None
    max_h12: float = None
    error: str = None
    result: integrator.RunResult = field(default=None, repr=False)

    def row(self):
        """ The CSV row of this item. """
        metrics = self.metrics
        cert = self.certificate
        return [self.N,
                metrics.h12_n0 if metrics else None,
                metrics.slope0 if metrics else None,
                metrics.curv0 if metrics else None,
                metrics.product0 if metrics else None,
                cert.T1 if cert else None,
                cert.T2 if cert else None,
                self.t_final, self.termination, self.max_b0inf]


ROW_COLUMNS = ['N', 'h12_n0', 'slope0', 'curv0', 'product0', 'T1', 'T2',
               't_final', 'termination', 'max_b0inf']


@dataclass(eq=False)
class InflationFamily(object):

    """ The data, metrics and run outcomes of a scan, keyed by N. """

    Ns: list
    fields_u0: dict
    metrics: dict
    items: list


def _scan_item(N, psi, g, cfg, constants, part, simulate):
    item = ScanItem(N)
    u0 = None
    try:
        u0 = build_u0N(N, psi, g)
        item.metrics = measure(N, u0)
        item.certificate = blowup.build_certificate(
            u0, 0.0, constants['C1'], constants['C_wp'],
            constants['besov_s'], part)
        if simulate:
            result = integrator.run(u0, cfg, part)
            b0 = [entry.b0inf_n for entry in result.diagnostics]
            item.result = result
            item.t_final = result.t_final
            item.termination = result.termination
            item.initial_b0inf = b0[0]
            item.max_b0inf = max(b0)
            item.max_h12 = max(
                sobolev_norm(spectral.helmholtz(snapshot), 0.5)
                for snapshot in result.snapshots)
        log.info('N = %d: %s at t = %s', N, item.termination, item.t_final)
    except (ValueError, ArithmeticError) as err:
        log.warning('Scan item N = %d failed: %s', N, err)
        item.error = str(err)
    return item, u0


def inflation_scan(Ns, cfg, grid, C1=0.25, C_wp=1.0, g_ratio=0.2, s=2.0,
                   workers=1, simulate=True):
    """ Build, measure, certify and run the inflation data for every N.

    This function accepts up to nine parameters:
        Ns               The list of N values.
        cfg              The StepperConfig of the runs.
        grid             The GridSpec; it must resolve every annulus.
        C1=0.25          Slope constant of the certificates.
        C_wp=1.0         Well-posedness constant of the certificates.
        g_ratio=0.2      Target g'(0) / (1 + |g|_H2) of the odd profile.
        s=2.0            Besov regularity in T1.
        workers=1        Threads running the items.
        simulate=True    Run the solver, or only build and certify.

    Failures of single items are recorded on the item and the scan
    continues.

    """
    Ns = [int(N) for N in Ns]
    if not Ns:
        raise ValueError('The scan needs at least one N')
    psi = build_psi(grid)
    g = build_g(g_ratio, grid)
    part = build_partition(grid)
    constants = {'C1': C1, 'C_wp': C_wp, 'besov_s': s}
    log.info('Inflation scan over N = %s with %d worker(s)',
             common.list_names(Ns), workers)
    outcomes = common.run_workers(
        Ns, lambda N: _scan_item(N, psi, g, cfg, constants, part, simulate),
        workers)
    fields_u0, metrics, items = {}, {}, []
    for N, outcome in zip(Ns, outcomes):
        if isinstance(outcome, Exception):
            item, u0 = ScanItem(N, error=str(outcome)), None
        else:
            item, u0 = outcome
        items.append(item)
        if u0 is not None:
            fields_u0[N] = u0
        if item.metrics is not None:
            metrics[N] = item.metrics
    return InflationFamily(Ns, fields_u0, metrics, items)


def compensated_metrics(family):
    """ The sequences the scaling claims predict to be bounded or constant.

    Returns a dict of lists over family.Ns with a measured entry:
        h12_log         h12_n0 ln N
        curv_log        curv0 ln N / N^(1/3)
        product_log2    product0 (ln N)^2 / N^(1/3)

    """
    Ns = [N for N in family.Ns if N in family.metrics]
    sequences = {'N': Ns, 'h12_log': [], 'curv_log': [], 'product_log2': []}
    for N in Ns:
        entry = family.metrics[N]
        log_n = math.log(N)
        sequences['h12_log'].append(entry.h12_n0 * log_n)
        sequences['curv_log'].append(entry.curv0 * log_n / N ** (1 / 3))
        sequences['product_log2'].append(entry.product0 * log_n ** 2
                                         / N ** (1 / 3))
    return sequences


def curvature_prediction(N, psi):
    """ u0^N_xx(0) from the second moment of psi.

    Each f_j contributes -(2^-3j j^-2/3 / 2pi) 2^3j psi_moment2 and g none,
    so the exact value is -(psi_moment2 / 2pi) sum j^-2/3 / ln N.

    """
    total = sum(j ** (-2 / 3) for j in range(1, N + 1))
    return -psi.psi_moment2 / (2 * math.pi) * total / math.log(N)


def lifespan_trend(family, noise=0.1):
    """ Whether t_final is non-increasing in N, allowing noise relative
    slack between neighbours. """
    times = [item.t_final for item in family.items
             if item.t_final is not None]
    return all(later <= earlier * (1 + noise)
               for earlier, later in zip(times, times[1:]))
