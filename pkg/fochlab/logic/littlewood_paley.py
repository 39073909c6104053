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

""" Dyadic partition of unity, dyadic blocks and Besov/Sobolev norms.

The partition is built from one radial low-pass profile theta, equal to 1
for |xi| <= 3/4 and to 0 for |xi| >= 1. The transition in between is a
C-infinity step made of two copies of the bump exp(1 - 1 / (1 - t^2)).
Then chi = theta and phi(xi) = theta(xi/2) - theta(xi), which
puts chi inside |xi| <= 4/3 and phi inside 3/4 <= |xi| <= 8/3. The sum
chi + phi(.) + ... + phi(2^-j .) telescopes to theta(2^-(j+1) .), so the
partition identity holds to rounding wherever the last dilate of theta
is still 1.

"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from fochlab.logic import spectral
from fochlab.logic.spectral import MultiplierSymbol

log = logging.getLogger(__name__)

# theta is 1 up to INNER and 0 from OUTER on
INNER = 0.75
OUTER = 1.0


def bump(t):
    """ exp(1 - 1 / (1 - t^2)) on (-1, 1) and 0 elsewhere; bump(0) = 1. """
    t = np.asarray(t, dtype=float)
    inside = np.abs(t) < 1
    safe = np.where(inside, t, 0.0)
    return np.where(inside, np.exp(1 - 1 / (1 - safe ** 2)), 0.0)


def smooth_step(t):
    """ A C-infinity step, exactly 0 for t <= 0 and exactly 1 for t >= 1.

    It is bump(1 - t) / (bump(t) + bump(1 - t)) on [0, 1]: both bumps are
    flat to all orders where they vanish, and the ratio rises monotonically
    since bump decreases on [0, 1].

    """
    t = np.clip(np.asarray(t, dtype=float), 0, 1)
    rising = bump(1 - t)
    return rising / (rising + bump(t))


def _theta(xi):
    return 1 - smooth_step((np.abs(xi) - INNER) / (OUTER - INNER))


def _phi(xi):
    return _theta(xi / 2) - _theta(xi)


THETA = MultiplierSymbol(_theta, 'theta')
CHI = MultiplierSymbol(_theta, 'chi')
PHI = MultiplierSymbol(_phi, 'phi')


@dataclass(frozen=True)
class BesovIndex(object):

    """ The indices (s, p, r) of B^s_{p,r}. p and r may be math.inf. """

    s: float
    p: float = 2
    r: float = 2

    def __post_init__(self):
        for name in ('p', 'r'):
            value = float(getattr(self, name))
            if math.isnan(value) or value < 1:
                raise ValueError('Besov index {} must lie in [1, inf], got {}'
                                 .format(name, value))
            object.__setattr__(self, name, value)
        if not math.isfinite(self.s):
            raise ValueError('Besov regularity must be finite, got {}'
                             .format(self.s))


@dataclass(frozen=True)
class DyadicPartition(object):

    """ The (chi, phi) partition sampled on one grid. """

    grid: spectral.GridSpec
    chi: MultiplierSymbol
    phi: MultiplierSymbol
    j_max: int
    j_min: int = -1

    def block_symbol(self, j):
        """ The multiplier of the block Delta_j. """
        if not self.j_min <= j <= self.j_max:
            raise ValueError('Block index {} outside [{}, {}]'
                             .format(j, self.j_min, self.j_max))
        if j == -1:
            return self.chi
        return self.phi.dilate(j)

    def cutoff_symbol(self, j):
        """ The multiplier of the low-frequency cut-off S_j. """
        if j < 0:
            raise ValueError('Cut-off index must be non-negative, got {}'
                             .format(j))
        return THETA.dilate(j)

    @property
    def resolved(self):
        """ The largest |xi| on which the partition identity is asserted. """
        return 2.0 ** self.j_max * INNER


def build_partition(grid):
    """ Build the dyadic partition for a grid.

    j_max is floor(log2(Nyquist)) - 1. Raises ValueError when the grid is so
    coarse that j_max < 1.

    """
    j_max = int(math.floor(math.log2(grid.nyquist))) - 1
    if j_max < 1:
        raise ValueError('Grid with Nyquist frequency {:.4g} resolves no '
                         'dyadic block beyond j = 0'.format(grid.nyquist))
    return DyadicPartition(grid, CHI, PHI, j_max)


def partition_deviation(part):
    """ Largest |chi + sum phi(2^-j .) - 1| over the resolved grid frequencies.
    """
    xi = part.grid.wavenumbers
    xi = xi[xi <= part.resolved]
    total = part.chi(xi).copy()
    for j in range(0, part.j_max + 1):
        total = total + part.phi.dilate(j)(xi)
    return float(np.max(np.abs(total - 1)))


def _check_grid(u, part):
    if u.grid != part.grid:
        raise ValueError('Field grid {} does not match the partition grid {}'
                         .format(u.grid, part.grid))


def dyadic_block(u, j, part):
    """ The dyadic block Delta_j u for -1 <= j <= j_max. """
    _check_grid(u, part)
    return spectral.apply_multiplier(u, part.block_symbol(j))


def low_pass(u, j, part):
    """ The cut-off S_j u, the sum of the blocks below j. """
    _check_grid(u, part)
    return spectral.apply_multiplier(u, part.cutoff_symbol(j))


def lp_norm(u, p):
    """ The L^p norm of u; the sup norm is taken on the 2x oversampled grid.
    """
    if p == math.inf:
        if u.is_zero():
            return 0.0
        return float(np.max(np.abs(spectral.oversample(u, 2))))
    if p == 2:
        return u.l2_norm()
    return float((u.grid.dx * np.sum(np.abs(u.samples) ** p)) ** (1 / p))


def _lr_norm(values, r):
    if r == math.inf:
        return float(np.max(values))
    return float(np.sum(values ** r) ** (1 / r))


@dataclass(frozen=True, eq=False)
class BesovProfile(object):

    """ A Besov norm with the sequence it aggregates.

    unresolved is the L2 share of u the blocks up to j_max do not carry,
    which is what the grid truncation hides from the norm.

    """

    index: BesovIndex
    j: np.ndarray
    block_norms: np.ndarray
    weighted: np.ndarray
    value: float
    j_max: int
    unresolved: float


def besov_profile(u, idx, part):
    """ Compute the weighted block sequence and the B^s_{p,r} norm of u.

    This function accepts three parameters:
        u       The SpectralField.
        idx     The BesovIndex.
        part    The DyadicPartition of u's grid.

    """
    _check_grid(u, part)
    j = np.arange(part.j_min, part.j_max + 1)
    blocks = [dyadic_block(u, k, part) for k in j]
    block_norms = np.array([lp_norm(block, idx.p) for block in blocks])
    weighted = 2.0 ** (idx.s * j) * block_norms
    total = u.l2_norm()
    if total == 0:
        unresolved = 0.0
    else:
        remainder = u.modes - sum(block.modes for block in blocks)
        rest = spectral.SpectralField.from_modes(u.grid, remainder)
        unresolved = rest.l2_norm() / total
    return BesovProfile(idx, j, block_norms, weighted,
                        _lr_norm(weighted, idx.r), part.j_max, unresolved)


def besov_norm(u, idx, part):
    """ The B^s_{p,r} norm of u, summed over -1 <= j <= j_max. """
    profile = besov_profile(u, idx, part)
    if profile.unresolved > 1e-8:
        log.debug('Besov norm misses %.3e of the L2 mass above j_max = %d',
                  profile.unresolved, profile.j_max)
    return profile.value


def sobolev_norm(u, s):
    """ The H^s norm with weight (1 + xi^2)^s, by discrete Plancherel. """
    weights = spectral.mode_weights(u.grid)
    xi = u.grid.wavenumbers
    return math.sqrt(float(np.sum(weights * (1 + xi ** 2) ** s
                                  * spectral.power(u))))
