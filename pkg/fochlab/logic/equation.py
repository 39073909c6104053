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

""" Right-hand sides of the equivalent formulations of the equation.

The same dynamics is written three ways:

    u form    u_t = -(u^2 + u_x^2 / 3) u_x
                    + P F1(u) + dx P F2(u) + dxx P F3(u)
    n form    n_t = -(u^2 + u_x^2) n_x
                    + P1 G1(u) + dx P1 G2(u) + dxx P1 G3(u),  n = (1 - dxx) u
    raw       (1 - 2 dxx + dxxxx) u_t + dx B(u) = 0

with P = (1 - dxx)^-2, P1 = (1 - dxx)^-1 and cubic fluxes. The fluxes are
kept as coefficient tables keyed by monomial exponents, so a single
coefficient can be perturbed to test that formulation_residual notices.

"""

import logging
from dataclasses import dataclass

import numpy as np

from fochlab.logic import spectral
from fochlab.logic.spectral import SpectralField

log = logging.getLogger(__name__)


# Exponents of (u, u_x, u_xx) -> coefficient.
F1 = {(0, 3, 0): 1 / 3}
F2 = {(3, 0, 0): -5 / 3, (1, 2, 0): -5.0, (2, 0, 1): -3.0,
      (0, 2, 1): 24.0, (1, 0, 2): -1.0}
F3 = {(0, 1, 2): 1.0, (1, 1, 1): 4.0}

G1 = {(0, 1, 2): 2.0}
G2 = {(3, 0, 0): -5 / 3, (1, 2, 0): -2.0, (2, 0, 1): -3.0,
      (0, 2, 1): 16.0, (1, 0, 2): -1.0}
G3 = {(0, 1, 2): -1.0, (1, 1, 1): -2.0}

# (u^2 + u_x^2 / 3) u_x
TRANSPORT = {(2, 1, 0): 1.0, (0, 3, 0): 1 / 3}

# Exponents of (u, u_x, u_xx, u_xxx, u_xxxx) -> coefficient.
RAW_BRACKET = {
    (3, 0, 0, 0, 0): 2.0,
    (1, 2, 0, 0, 0): 1.0,
    (2, 0, 1, 0, 0): 1.0,
    (0, 2, 1, 0, 0): -18.0,
    (1, 0, 2, 0, 0): 3.0,
    (1, 1, 0, 1, 0): 4.0,
    (2, 0, 0, 0, 1): 1.0,
    (0, 0, 3, 0, 0): 1.0,
    (0, 1, 1, 1, 0): 4.0,
    (0, 2, 0, 0, 1): 1.0,
}


class Jet(object):

    """ A field and its derivatives, sampled on the 2x padded grid.

    Products of up to three padded factors truncate back to the grid without
    aliasing, so polynomials of degree three are exact projections.

    """

    def __init__(self, u, order=2):
        """ Pad u and its first order derivatives. """
        self.grid = u.grid
        self.field = u
        self.padded = spectral.jet(u, order)

    def monomial(self, exponents):
        """ The padded samples of one monomial. """
        values = np.ones(2 * self.grid.points)
        for factor, power in zip(self.padded, exponents):
            for _ in range(power):
                values = values * factor
        return values

    def polynomial(self, terms):
        """ Truncated field of sum(coefficient * monomial) over terms. """
        values = np.zeros(2 * self.grid.points)
        for exponents, coefficient in sorted(terms.items()):
            if len(exponents) > len(self.padded):
                raise ValueError('Monomial {} needs more derivatives than '
                                 'this jet holds'.format(exponents))
            values = values + coefficient * self.monomial(exponents)
        return spectral.truncate(self.grid, values)


@dataclass(frozen=True)
class FluxSet(object):

    """ Three cubic fluxes and the smoothing multiplier they are fed through.

    The source term is smoother(first + dx second + dxx third).

    """

    label: str
    smoother: spectral.MultiplierSymbol
    first: dict
    second: dict
    third: dict

    def perturbed(self, flux, exponents, coefficient):
        """ A copy with one coefficient replaced.

        This method accepts three parameters:
            flux           1, 2 or 3.
            exponents      The (u, u_x, u_xx) exponents of the monomial.
            coefficient    Its new coefficient.

        """
        names = {1: 'first', 2: 'second', 3: 'third'}
        if flux not in names:
            raise ValueError('Flux number must be 1, 2 or 3, got {}'
                             .format(flux))
        table = dict(getattr(self, names[flux]))
        table[tuple(exponents)] = float(coefficient)
        tables = {name: getattr(self, name) for name in names.values()}
        tables[names[flux]] = table
        return FluxSet('{}*'.format(self.label), self.smoother, **tables)

    def fluxes(self, jet):
        """ The three flux fields for the jet of u. """
        return (jet.polynomial(self.first), jet.polynomial(self.second),
                jet.polynomial(self.third))

    def source(self, jet):
        """ smoother(first + dx second + dxx third) for the jet of u. """
        first, second, third = self.fluxes(jet)
        grid = jet.grid
        ik = 1j * grid.wavenumbers
        modes = first.modes + ik * second.modes + ik ** 2 * third.modes
        weights = self.smoother(grid.wavenumbers)
        return SpectralField.from_modes(grid, weights * modes)


F_FLUXES = FluxSet('F', spectral.P, F1, F2, F3)
G_FLUXES = FluxSet('G', spectral.P1, G1, G2, G3)


def _checked(grid, modes, state):
    if not np.all(np.isfinite(modes)):
        raise spectral.NonFiniteError('Right-hand side is not finite',
                                      scale=_finite_scale(state))
    return SpectralField.from_modes(grid, modes)


def _finite_scale(field):
    finite = field.samples[np.isfinite(field.samples)]
    return float(np.max(np.abs(finite))) if finite.size else None


def transport_speed(u):
    """ max over the grid of |u^2 + u_x^2|. """
    ux = spectral.derivative(u, 1)
    return float(np.max(np.abs(u.samples ** 2 + ux.samples ** 2)))


def rhs_u(u, fluxes=F_FLUXES):
    """ u_t for the u form, with the fluxes of F_FLUXES by default. """
    if u.is_zero():
        return SpectralField.zeros(u.grid)
    jet = Jet(u, 2)
    transport = jet.polynomial(TRANSPORT)
    source = fluxes.source(jet)
    return _checked(u.grid, source.modes - transport.modes, u)


def advection(u, n):
    """ The truncated product (u^2 + u_x^2) n_x. """
    padded = spectral.jet(u, 1)
    speed = padded[0] ** 2 + padded[1] ** 2
    slope = spectral.oversample(spectral.derivative(n, 1))
    return spectral.truncate(u.grid, speed * slope)


def rhs_n(n, fluxes=G_FLUXES):
    """ n_t for the n form, with u recovered as P1 n. """
    if n.is_zero():
        return SpectralField.zeros(n.grid)
    u = spectral.helmholtz(n, invert=True)
    source = fluxes.source(Jet(u, 2))
    return _checked(n.grid, source.modes - advection(u, n).modes, n)


def raw_operator(ut):
    """ (1 - 2 dxx + dxxxx) u_t. """
    return spectral.apply_multiplier(ut, spectral.BIHARMONIC)


def raw_flux(u):
    """ dx of the flux bracket of the raw fifth order form. """
    return spectral.derivative(Jet(u, 4).polynomial(RAW_BRACKET), 1)


@dataclass(frozen=True)
class Residuals(object):

    """ Relative residuals between formulations. """

    r12: float
    r10: float


def _relative(residual, *parts):
    scale = sum(part.l2_norm() for part in parts)
    if scale == 0:
        return 0.0
    return residual.l2_norm() / scale


def formulation_residual(u, f_fluxes=F_FLUXES, g_fluxes=G_FLUXES):
    """ Measure how well the u form agrees with the n form and the raw form.

    r12 is the relative L2 norm of
    (1 - dxx) rhs_u(u) + (u^2 + u_x^2) n_x - G(u), and r10 the relative L2
    norm of the raw form residual with u_t = rhs_u(u). Both are normalised
    by the sum of the norms of their terms.

    """
    ut = rhs_u(u, f_fluxes)
    n = spectral.helmholtz(u)
    lhs = spectral.helmholtz(ut)
    advected = advection(u, n)
    source = g_fluxes.source(Jet(u, 2))
    r12 = _relative(lhs + advected - source, lhs, advected, source)

    time_part = raw_operator(ut)
    flux_part = raw_flux(u)
    r10 = _relative(time_part + flux_part, time_part, flux_part)
    if r10 > 1e-6:
        log.warning('Raw form residual r10 = %.3e exceeds 1e-6', r10)
    return Residuals(r12, r10)
