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

""" Conserved functionals, norms, the functional q and characteristics. """

import logging
import math
from dataclasses import dataclass, fields

import numpy as np
from scipy import integrate, optimize

from fochlab.logic import spectral
from fochlab.logic.littlewood_paley import BesovIndex, besov_norm, \
    sobolev_norm

log = logging.getLogger(__name__)

B0_INF = BesovIndex(0, math.inf, math.inf)


@dataclass(frozen=True)
class ConservationReport(object):

    """ Diagnostics of one snapshot. """

    E: float
    F: float
    h2: float
    w1inf: float
    b0inf_n: float
    q_min: float
    q_argmin: float

    @classmethod
    def columns(cls):
        """ CSV column names, in order. """
        return [field.name for field in fields(cls)]

    def row(self):
        """ The values in column order. """
        return [getattr(self, name) for name in self.columns()]


def _padded_spacing(grid):
    return grid.dx / 2


def energy_E(u):
    """ The integral of u^2 + 2 u_x^2 + u_xx^2. """
    value, slope, curvature = spectral.jet(u, 2)
    integrand = value ** 2 + 2 * slope ** 2 + curvature ** 2
    return float(_padded_spacing(u.grid) * np.sum(integrand))


def energy_F(u):
    """ The integral of u^4 - u^2 u_x^2 + 10/3 u_x^4 + u^2 u_xx^2
    + u_x^2 u_xx^2. """
    value, slope, curvature = spectral.jet(u, 2)
    u2, ux2, uxx2 = value ** 2, slope ** 2, curvature ** 2
    integrand = (u2 ** 2 - u2 * ux2 + 10 / 3 * ux2 ** 2 + u2 * uxx2
                 + ux2 * uxx2)
    return float(_padded_spacing(u.grid) * np.sum(integrand))


def q_field(u):
    """ The dealiased product u_x u_xx. """
    return spectral.product(spectral.derivative(u, 1),
                            spectral.derivative(u, 2))


def q_grid_min(u):
    """ The minimum of u_x u_xx on the 2x oversampled grid, and its index.

    Ties go to the smallest index.

    """
    values = spectral.oversample(spectral.derivative(u, 1)) \
        * spectral.oversample(spectral.derivative(u, 2))
    index = int(np.argmin(values))
    return float(values[index]), index


def q_minimum(u):
    """ Locate the minimum of q = u_x u_xx.

    The 2x oversampled grid minimum is refined by a bounded scalar search on
    the trigonometric interpolant, within one padded grid spacing. Returns
    (q_min, x_min).

    """
    grid = u.grid
    value, index = q_grid_min(u)
    spacing = _padded_spacing(grid)
    position = -grid.length / 2 + index * spacing
    if u.is_zero():
        return value, position
    slope = spectral.derivative(u, 1)
    curvature = spectral.derivative(u, 2)

    def q_at(x):
        return spectral.interpolate(slope, x) \
            * spectral.interpolate(curvature, x)

    found = optimize.minimize_scalar(
        q_at, bounds=(position - spacing, position + spacing),
        method='bounded', options={'xatol': 1e-10 * grid.length})
    if found.success and found.fun < value:
        return float(found.fun), float(found.x)
    return value, position


def report(u, part):
    """ All diagnostics of one snapshot u, with the partition of its grid. """
    value, slope = spectral.jet(u, 1)
    n = spectral.helmholtz(u)
    q_min, q_argmin = q_minimum(u)
    return ConservationReport(
        E=energy_E(u),
        F=energy_F(u),
        h2=sobolev_norm(u, 2),
        w1inf=float(max(np.max(np.abs(value)), np.max(np.abs(slope)))),
        b0inf_n=besov_norm(n, B0_INF, part),
        q_min=q_min,
        q_argmin=q_argmin)


@dataclass(frozen=True, eq=False)
class CharacteristicPath(object):

    """ A path of the flow y_t = (u^2 + u_x^2)(t, y) from y(0) = x0.

    truncated is set when the path reached the boundary bands, where the
    periodic box stops standing in for the line; the arrays end there.

    """

    x0: float
    times: np.ndarray
    y: np.ndarray
    q_along: np.ndarray
    ux_along: np.ndarray
    truncated: bool


def _velocity(u, y):
    value = spectral.interpolate(u, y)
    slope = spectral.interpolate(spectral.derivative(u, 1), y)
    return value ** 2 + slope ** 2


def _along(u, y):
    slope = spectral.derivative(u, 1)
    curvature = spectral.derivative(u, 2)
    ux = spectral.interpolate(slope, y)
    return ux * spectral.interpolate(curvature, y), ux


def track_characteristics(result, seeds):
    """ Track the characteristics of a run from several seed points at once.

    The flow is advanced with RK4 between consecutive snapshots, using the
    average of the two snapshot velocities at the midpoint stages.

    This function accepts two parameters:
        result    The RunResult, sampled densely enough for RK4.
        seeds     The starting points.

    Returns one CharacteristicPath per seed.

    """
    seeds = np.atleast_1d(np.asarray(seeds, dtype=float))
    grid = result.grid
    margin = grid.length * spectral.EDGE_FRACTION
    low, high = -grid.length / 2 + margin, grid.length / 2 - margin
    if np.any((seeds <= low) | (seeds >= high)):
        raise ValueError('Seed points must lie inside ({}, {})'
                         .format(low, high))
    times = np.asarray(result.times, dtype=float)
    snapshots = result.snapshots
    count = len(seeds)
    y = np.empty((len(times), count))
    q = np.empty((len(times), count))
    ux = np.empty((len(times), count))
    alive = np.full(count, True)
    length = np.full(count, len(times))

    y[0] = seeds
    q[0], ux[0] = _along(snapshots[0], seeds)
    for m in range(len(times) - 1):
        if not alive.any():
            break
        h = times[m + 1] - times[m]
        current, following = snapshots[m], snapshots[m + 1]
        position = y[m]

        def middle(points):
            return (_velocity(current, points)
                    + _velocity(following, points)) / 2

        k1 = _velocity(current, position)
        k2 = middle(position + h / 2 * k1)
        k3 = middle(position + h / 2 * k2)
        k4 = _velocity(following, position + h * k3)
        y[m + 1] = position + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        q[m + 1], ux[m + 1] = _along(following, y[m + 1])

        leaving = alive & ((y[m + 1] <= low) | (y[m + 1] >= high))
        length[leaving] = m + 1
        alive &= ~leaving

    paths = []
    for i, seed in enumerate(seeds):
        end = length[i]
        truncated = end < len(times)
        if truncated:
            log.warning('Characteristic from x0 = %g reached the boundary '
                        'band at t = %g', seed, times[end - 1])
        paths.append(CharacteristicPath(float(seed), times[:end],
                                        y[:end, i], q[:end, i],
                                        ux[:end, i], truncated))
    return paths


def track_characteristic(result, x0):
    """ Track the characteristic of a run from x0. """
    return track_characteristics(result, [x0])[0]


@dataclass(frozen=True)
class CriterionIntegrals(object):

    """ The time integrals of the blow-up criteria.

    I_w integrates |u|_W1inf, I_b integrates |n|_B0inf, and I_wb their
    product.

    """

    I_w: float
    I_wb: float
    I_b: float


def criterion_integrals(result, until=None):
    """ Trapezoid time integrals of the criterion norms over a run.

    until, when given, stops the integration at the last sample not later
    than it.

    """
    times = np.asarray(result.times, dtype=float)
    w = np.array([entry.w1inf for entry in result.diagnostics])
    b = np.array([entry.b0inf_n for entry in result.diagnostics])
    if until is not None:
        keep = times <= until
        times, w, b = times[keep], w[keep], b[keep]
    if len(times) < 2:
        return CriterionIntegrals(0.0, 0.0, 0.0)
    return CriterionIntegrals(float(integrate.trapezoid(w, times)),
                              float(integrate.trapezoid(w * b, times)),
                              float(integrate.trapezoid(b, times)))


def drift(result):
    """ Relative drift of E and F over a run, and the H2 growth.

    Returns a dict with E_drift and F_drift, the largest |X(t) - X(0)| / X(0)
    (absolute when X(0) = 0), and h2_ratio, the largest |u(t)|_H2 / |u0|_H2.

    """
    first = result.diagnostics[0]

    def relative(name):
        start = getattr(first, name)
        values = np.array([getattr(entry, name)
                           for entry in result.diagnostics])
        change = float(np.max(np.abs(values - start)))
        return change / abs(start) if start else change

    h2 = max(entry.h2 for entry in result.diagnostics)
    return {'E_drift': relative('E'), 'F_drift': relative('F'),
            'h2_ratio': h2 / first.h2 if first.h2 else 0.0}
