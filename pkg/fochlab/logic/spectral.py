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

""" Periodic spectral grid and Fourier multipliers.

Every field in fochlab lives on a periodic box [-L/2, L/2) sampled at
N_grid equally spaced points, with x = 0 always a grid point. A
SpectralField carries the samples together with their real FFT, and the
two are kept in sync by construction.

The Nyquist coefficient is never stored. A real trigonometric polynomial
cannot represent it without ambiguity, and leaving it out makes every
multiplier, derivative and norm in this module exact on the stored modes.

"""

import functools
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import fft, signal

log = logging.getLogger(__name__)

# Part of the box, at each end, watched by the boundary decay monitor.
EDGE_FRACTION = 1 / 64
# Part of the kept modes that counts as the spectral tail.
TAIL_FRACTION = 0.1
# Decay the kernel oracle expects at the box boundary.
ORACLE_DECAY = 1e-10
# Interpolation points evaluated per batch, bounds the phase matrix size.
INTERPOLATION_BATCH = 16


class NonFiniteError(ArithmeticError):

    """ Raised when a field, or something computed from it, is not finite. """

    def __init__(self, message, scale=None, time=None):
        """ Initialize the error.

        This initializer accepts up to three parameters:
            message      What went wrong.
            scale=None   The largest finite magnitude of the offending field.
            time=None    The simulation time, when it is known.

        """
        ArithmeticError.__init__(self, message)
        self.scale = scale
        self.time = time

    def __str__(self):
        text = ArithmeticError.__str__(self)
        if self.time is not None:
            text += ' at t = {}'.format(self.time)
        if self.scale is not None:
            text += ' (field scale {:.3e})'.format(self.scale)
        return text


@functools.lru_cache(maxsize=32)
def _frequencies(length, points):
    """ Non-negative grid frequencies, read only and shared. """
    values = (2 * math.pi / length) * np.arange(points // 2 + 1)
    values.flags.writeable = False
    return values


@functools.lru_cache(maxsize=32)
def _positions(length, points):
    """ Grid positions, read only and shared. """
    values = -length / 2 + (length / points) * np.arange(points)
    values.flags.writeable = False
    return values


@functools.lru_cache(maxsize=32)
def _derivative_weights(length, points):
    """ The weight of one derivative per stored mode, zero at Nyquist. """
    weights = 1j * _frequencies(length, points)
    weights[-1] = 0
    weights.flags.writeable = False
    return weights


@functools.lru_cache(maxsize=32)
def _centring_signs(points):
    """ (-1)^k, the phase of the box origin at -L/2 for mode k. """
    signs = np.ones(points // 2 + 1)
    signs[1::2] = -1
    signs.flags.writeable = False
    return signs


@dataclass(frozen=True)
class GridSpec(object):

    """ A periodic box of length L sampled at N_grid points.

    dealias_cut is the part of the Nyquist band kept after a nonlinear
    product; 1 keeps everything below Nyquist.

    """

    length: float = 2 * math.pi
    points: int = 256
    dealias_cut: float = 1.0

    def __post_init__(self):
        if isinstance(self.points, bool) or int(self.points) != self.points:
            raise ValueError('N_grid must be an integer, got {}'
                             .format(self.points))
        object.__setattr__(self, 'points', int(self.points))
        object.__setattr__(self, 'length', float(self.length))
        object.__setattr__(self, 'dealias_cut', float(self.dealias_cut))
        if not (math.isfinite(self.length) and self.length > 0):
            raise ValueError('Box length must be positive, got {}'
                             .format(self.length))
        if self.points < 16 or self.points & (self.points - 1):
            raise ValueError('N_grid must be a power of two of at least 16, '
                             'got {}'.format(self.points))
        if not 0 < self.dealias_cut <= 1:
            raise ValueError('dealias_cut must lie in (0, 1], got {}'
                             .format(self.dealias_cut))

    @property
    def dx(self):
        """ Grid spacing. """
        return self.length / self.points

    @property
    def dxi(self):
        """ Frequency spacing. """
        return 2 * math.pi / self.length

    @property
    def nyquist(self):
        """ The Nyquist frequency. """
        return math.pi * self.points / self.length

    @property
    def x(self):
        """ Sample positions. """
        return _positions(self.length, self.points)

    @property
    def wavenumbers(self):
        """ Frequencies of the stored modes, 0 up to and including Nyquist. """
        return _frequencies(self.length, self.points)

    @property
    def kept(self):
        """ Boolean mask of the modes a nonlinear product keeps. """
        index = np.arange(self.points // 2 + 1)
        return index < self.dealias_cut * (self.points // 2)

    def refined(self, factor):
        """ The same box with factor times as many points. """
        return GridSpec(self.length, self.points * factor, self.dealias_cut)

    def to_dict(self):
        """ The fields as plain python values. """
        return {'length': self.length, 'points': self.points,
                'dealias_cut': self.dealias_cut}


def _freeze(array):
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class SpectralField(object):

    """ A real periodic field, as samples and as rfft modes.

    Construct fields with the from_* class methods, never directly. Both
    arrays are read only.

    """

    grid: GridSpec
    samples: np.ndarray
    modes: np.ndarray

    @classmethod
    def from_modes(cls, grid, modes):
        """ Build a field from its rfft modes.

        The imaginary part of the mean and the Nyquist mode are dropped, so
        the result is always a real field.

        """
        modes = np.array(modes, dtype=complex)
        if modes.shape != (grid.points // 2 + 1,):
            raise ValueError('Expected {} modes, got shape {}'
                             .format(grid.points // 2 + 1, modes.shape))
        modes[0] = modes[0].real
        modes[-1] = 0
        samples = fft.irfft(modes, n=grid.points)
        return cls(grid, _freeze(samples), _freeze(modes))

    @classmethod
    def from_samples(cls, grid, samples):
        """ Build a field from its samples on the grid. """
        samples = np.asarray(samples, dtype=float)
        if samples.shape != (grid.points,):
            raise ValueError('Expected {} samples, got shape {}'
                             .format(grid.points, samples.shape))
        return cls.from_modes(grid, fft.rfft(samples))

    @classmethod
    def from_function(cls, grid, function):
        """ Sample a vectorised function of x on the grid. """
        return cls.from_samples(grid, function(grid.x))

    @classmethod
    def from_spectrum(cls, grid, values):
        """ Build a field from samples of its continuous Fourier transform.

        values[k] is the transform, with the convention
        f(xi) = integral of f(x) exp(-i xi x) dx, at the k-th non-negative
        grid frequency.

        """
        values = np.asarray(values, dtype=complex)
        return cls.from_modes(grid, values * _centring_signs(grid.points)
                              / grid.dx)

    @classmethod
    def zeros(cls, grid):
        """ The zero field. """
        return cls.from_modes(grid, np.zeros(grid.points // 2 + 1))

    def spectrum(self):
        """ The continuous Fourier transform at the non-negative frequencies.
        """
        return self.modes * _centring_signs(self.grid.points) * self.grid.dx

    def scale(self):
        """ The largest absolute sample. """
        return float(np.max(np.abs(self.samples)))

    def l2_norm(self):
        """ The L2 norm, by the trapezoid rule on the grid. """
        return math.sqrt(self.grid.dx * float(np.dot(self.samples,
                                                     self.samples)))

    def is_zero(self):
        """ Whether every mode vanishes. """
        return not np.any(self.modes)

    def __add__(self, other):
        return SpectralField.from_modes(self.grid, self.modes + other.modes)

    def __sub__(self, other):
        return SpectralField.from_modes(self.grid, self.modes - other.modes)

    def __neg__(self):
        return SpectralField.from_modes(self.grid, -self.modes)

    def __mul__(self, factor):
        return SpectralField.from_modes(self.grid, self.modes * factor)

    __rmul__ = __mul__


@dataclass(frozen=True)
class MultiplierSymbol(object):

    """ A Fourier multiplier: a vectorised map from frequency to weight. """

    evaluator: object
    label: str

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        return np.broadcast_to(self.evaluator(xi), xi.shape)

    def compose(self, other):
        """ The symbol of self applied after other. """
        return MultiplierSymbol(_Product(self, other),
                                '{}*{}'.format(self.label, other.label))

    def dilate(self, exponent):
        """ The symbol xi -> m(2^-exponent xi). """
        return MultiplierSymbol(_Dilation(self, exponent),
                                '{}(2^{}.)'.format(self.label, -exponent))


@dataclass(frozen=True)
class _Product(object):
    first: MultiplierSymbol
    second: MultiplierSymbol

    def __call__(self, xi):
        return self.first(xi) * self.second(xi)


@dataclass(frozen=True)
class _Dilation(object):
    symbol: MultiplierSymbol
    exponent: int

    def __call__(self, xi):
        return self.symbol(xi * 2.0 ** -self.exponent)


def _helmholtz_symbol(xi):
    return 1 + xi ** 2


def _p1_symbol(xi):
    return 1 / (1 + xi ** 2)


def _p_symbol(xi):
    return 1 / (1 + xi ** 2) ** 2


def _biharmonic_symbol(xi):
    return 1 + 2 * xi ** 2 + xi ** 4


HELMHOLTZ = MultiplierSymbol(_helmholtz_symbol, '1-dxx')
P1 = MultiplierSymbol(_p1_symbol, 'P1')
P = MultiplierSymbol(_p_symbol, 'P')
# 1 - 2 dxx + dxxxx, the left inverse of P
BIHARMONIC = MultiplierSymbol(_biharmonic_symbol, '1-2dxx+dxxxx')


def apply_multiplier(u, symbol):
    """ Multiply the modes of u by symbol(xi).

    This function accepts two parameters:
        u         The SpectralField.
        symbol    The MultiplierSymbol. Its value at the Nyquist frequency
                  is never used.

    Raises ValueError naming the first frequency where the symbol is not
    finite.

    """
    weights = np.array(symbol(u.grid.wavenumbers), dtype=complex)
    weights[-1] = 0
    bad = ~np.isfinite(weights)
    if bad.any():
        xi = u.grid.wavenumbers[np.argmax(bad)]
        raise ValueError('Symbol {} is not finite at xi = {}'
                         .format(symbol.label, xi))
    return SpectralField.from_modes(u.grid, u.modes * weights)


def derivative(u, order):
    """ The order-th spectral derivative of u, for order 0 to 4. """
    if order not in range(5):
        raise ValueError('Derivative order must be between 0 and 4, got {}'
                         .format(order))
    weights = _derivative_weights(u.grid.length, u.grid.points)
    modes = u.modes
    for _ in range(order):
        modes = modes * weights
    return SpectralField.from_modes(u.grid, modes)


def helmholtz(u, invert=False):
    """ (1 - dxx) u, or its inverse P1(D) u when invert is true. """
    return apply_multiplier(u, P1 if invert else HELMHOLTZ)


def dealias(u):
    """ u with the modes above the dealias cut removed. """
    kept = u.grid.kept
    if kept.all():
        return u
    return SpectralField.from_modes(u.grid, np.where(kept, u.modes, 0))


def oversample(u, factor=2):
    """ Samples of u on the grid refined factor times, by zero padding.

    Returns a plain array of points * factor values.

    """
    points = u.grid.points * factor
    padded = np.zeros(points // 2 + 1, dtype=complex)
    padded[:u.grid.points // 2 + 1] = u.modes
    return fft.irfft(padded, n=points) * factor


def truncate(grid, values, factor=2):
    """ The field on grid whose modes are those of values below the cut.

    values are samples on the grid refined factor times, typically a
    product of oversampled fields.

    """
    if not np.all(np.isfinite(values)):
        finite = values[np.isfinite(values)]
        raise NonFiniteError('Non-finite value in a nonlinear product',
                             scale=float(np.max(np.abs(finite)))
                             if finite.size else None)
    modes = fft.rfft(values)[:grid.points // 2 + 1] / factor
    modes[~grid.kept] = 0
    return SpectralField.from_modes(grid, modes)


def jet(u, order, factor=2):
    """ Oversampled u and its first order derivatives, as a list of arrays.
    """
    return [oversample(derivative(u, k), factor) for k in range(order + 1)]


def product(*fields):
    """ The dealiased pointwise product of up to three fields. """
    if not 1 <= len(fields) <= 3:
        raise ValueError('product takes one to three fields, got {}'
                         .format(len(fields)))
    grid = fields[0].grid
    values = oversample(fields[0])
    for field in fields[1:]:
        values = values * oversample(field)
    return truncate(grid, values)


def interpolate(u, x):
    """ Evaluate the trigonometric interpolant of u at arbitrary points.

    Returns a float for a scalar x and an array otherwise.

    """
    points = np.atleast_1d(np.asarray(x, dtype=float))
    grid = u.grid
    offset = points + grid.length / 2
    inner = u.modes[1:-1]
    xi = grid.wavenumbers[1:-1]
    values = np.empty(points.shape)
    for start in range(0, points.size, INTERPOLATION_BATCH):
        chunk = offset[start:start + INTERPOLATION_BATCH]
        phase = np.exp(1j * np.outer(chunk, xi))
        values[start:start + chunk.size] = (
            u.modes[0].real + 2 * (phase @ inner).real) / grid.points
    if np.ndim(x) == 0:
        return float(values[0])
    return values


def edge_width(grid):
    """ Number of grid points in each boundary band. """
    return max(1, int(grid.points * EDGE_FRACTION))


def boundary_amplitude(u):
    """ Largest sample in the boundary bands, relative to the largest overall.
    """
    peak = np.max(np.abs(u.samples))
    if peak == 0:
        return 0.0
    edge = edge_width(u.grid)
    band = np.concatenate((u.samples[:edge], u.samples[-edge:]))
    return float(np.max(np.abs(band)) / peak)


def mode_weights(grid):
    """ Discrete Plancherel weights: sum(w |c|^2) is the squared L2 norm. """
    weights = np.full(grid.points // 2 + 1, 2.0)
    weights[0] = 1
    weights[-1] = 0
    return weights * grid.dx / grid.points


def power(u):
    """ |c|^2 per stored mode. """
    return u.modes.real ** 2 + u.modes.imag ** 2


def tail_fraction(u):
    """ The part of the L2 mass carried by the top tenth of the kept modes. """
    energy = mode_weights(u.grid) * power(u)
    total = energy.sum()
    if total == 0:
        return 0.0
    kept = int(np.count_nonzero(u.grid.kept))
    start = int(math.floor((1 - TAIL_FRACTION) * kept))
    return float(energy[start:kept].sum() / total)


def _half_exp(x):
    return 0.5 * np.exp(-np.abs(x))


def _quarter_exp_poly(x):
    return 0.25 * np.exp(-np.abs(x)) * (1 + np.abs(x))


# kernel, one sided slope at 0+
KERNELS = {
    'half_exp': (_half_exp, -0.5),
    'quarter_exp_poly': (_quarter_exp_poly, 0.0),
}


def _kernel(kernel_id):
    try:
        return KERNELS[kernel_id]
    except KeyError:
        raise ValueError('Unknown kernel {}, expected one of {}'
                         .format(kernel_id, ', '.join(sorted(KERNELS))))


def kernel_value(kernel_id, x):
    """ The closed form convolution kernel of P1 ("half_exp") or P
    ("quarter_exp_poly") at x. """
    return _kernel(kernel_id)[0](np.asarray(x, dtype=float))


@dataclass(frozen=True, eq=False)
class ConvolutionResult(object):

    """ The field computed by the kernel oracle, and whether u decayed. """

    field: SpectralField
    boundary_warning: bool


def kernel_convolution_oracle(u, kernel_id):
    """ Convolve u with a closed form kernel by quadrature.

    The samples are treated as line data vanishing outside the box. The
    quadrature is the trapezoid rule with the end correction for the kink of
    the kernel at the origin, which makes it fourth order. This is meant as
    an independent check of apply_multiplier with P1 and P.

    This function accepts two parameters:
        u            The SpectralField. It should decay below 1e-10 of its
                     maximum at the box boundary.
        kernel_id    "half_exp" or "quarter_exp_poly".

    """
    kernel, slope = _kernel(kernel_id)
    grid = u.grid
    points = grid.points
    warning = boundary_amplitude(u) > ORACLE_DECAY
    if warning:
        log.warning('Kernel oracle input does not decay at the boundary '
                    '(relative edge amplitude %.3e)', boundary_amplitude(u))
    offsets = grid.dx * np.arange(-(points - 1), points)
    full = signal.fftconvolve(u.samples, kernel(offsets) * grid.dx,
                              mode='full')
    values = full[points - 1:2 * points - 1]
    values = values + grid.dx ** 2 / 6 * slope * u.samples
    return ConvolutionResult(SpectralField.from_samples(grid, values),
                             warning)
