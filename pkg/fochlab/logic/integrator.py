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

""" Time stepping, blow-up detection and the Picard iteration mirror. """

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from fochlab.logic import diagnostics, equation, spectral
from fochlab.logic.littlewood_paley import BesovIndex, besov_norm, \
    build_partition, low_pass
from fochlab.logic.spectral import NonFiniteError, SpectralField

log = logging.getLogger(__name__)

FORMULATIONS = ('u_form', 'n_form')
TERMINATIONS = ('completed', 'blowup_detected', 'resolution_loss',
                'nonfinite')
# Spectral tail share of the L2 mass that counts as lost resolution.
TAIL_ABORT = 0.01


@dataclass(frozen=True)
class StepperConfig(object):

    """ Settings of one run. """

    formulation: str = 'u_form'
    dt_init: float = 1e-2
    cfl: float = 0.3
    dt_min: float = 1e-9
    t_end: float = 1.0
    q_abort: float = 1e6
    boundary_abort: float = 1e-6
    sample_stride: int = 1

    def __post_init__(self):
        if self.formulation not in FORMULATIONS:
            raise ValueError('Unknown formulation {}, expected one of {}'
                             .format(self.formulation,
                                     ', '.join(FORMULATIONS)))
        for name in ('dt_init', 'cfl', 'dt_min', 't_end', 'q_abort',
                     'boundary_abort'):
            value = float(getattr(self, name))
            if not value > 0:
                raise ValueError('{} must be positive, got {}'
                                 .format(name, value))
            object.__setattr__(self, name, value)
        if not self.dt_min < self.dt_init:
            raise ValueError('dt_min ({}) must be smaller than dt_init ({})'
                             .format(self.dt_min, self.dt_init))
        if isinstance(self.sample_stride, bool) \
                or int(self.sample_stride) != self.sample_stride \
                or self.sample_stride < 1:
            raise ValueError('sample_stride must be a positive integer, got '
                             '{}'.format(self.sample_stride))
        object.__setattr__(self, 'sample_stride', int(self.sample_stride))

    def to_dict(self):
        """ The fields as plain python values. """
        return {'formulation': self.formulation, 'dt_init': self.dt_init,
                'cfl': self.cfl, 'dt_min': self.dt_min, 't_end': self.t_end,
                'q_abort': self.q_abort,
                'boundary_abort': self.boundary_abort,
                'sample_stride': self.sample_stride}


@dataclass(eq=False)
class RunResult(object):

    """ A sampled trajectory and why it ended.

    snapshots always hold u, whatever the formulation stepped. dt_log holds
    every accepted step.

    """

    grid: spectral.GridSpec
    formulation: str
    times: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    dt_log: list = field(default_factory=list)
    termination: str = None
    t_final: float = 0.0

    def record(self, t, u, entry):
        """ Append one sample; times must increase. """
        if self.times and not t > self.times[-1]:
            raise ValueError('Sample time {} does not follow {}'
                             .format(t, self.times[-1]))
        self.times.append(t)
        self.snapshots.append(u)
        self.diagnostics.append(entry)

    def terminate(self, cause, t):
        """ Set the termination cause, once. """
        if self.termination is not None:
            raise ValueError('Run already terminated with {}'
                             .format(self.termination))
        if cause not in TERMINATIONS:
            raise ValueError('Unknown termination {}'.format(cause))
        self.termination = cause
        self.t_final = t


def _rhs(formulation):
    return equation.rhs_u if formulation == 'u_form' else equation.rhs_n


def _as_u(state, formulation):
    if formulation == 'u_form':
        return state
    return spectral.helmholtz(state, invert=True)


def _as_state(u, formulation):
    if formulation == 'u_form':
        return u
    return spectral.helmholtz(u)


def cfl_bound(u, cfg):
    """ cfl dx / max(1, max |u^2 + u_x^2|). """
    return cfg.cfl * u.grid.dx / max(1.0, equation.transport_speed(u))


def step(state, dt, cfg):
    """ Advance the state by one classical RK4 step.

    state is u or n depending on cfg.formulation. Raises NonFiniteError if
    any stage is not finite.

    """
    rhs = _rhs(cfg.formulation)
    grid = state.grid
    k1 = rhs(state).modes
    k2 = rhs(SpectralField.from_modes(grid, state.modes + dt / 2 * k1)).modes
    k3 = rhs(SpectralField.from_modes(grid, state.modes + dt / 2 * k2)).modes
    k4 = rhs(SpectralField.from_modes(grid, state.modes + dt * k3)).modes
    modes = state.modes + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    if not np.all(np.isfinite(modes)):
        raise NonFiniteError('RK4 update is not finite',
                             scale=state.scale())
    return spectral.dealias(SpectralField.from_modes(grid, modes))


def check(u, cfg):
    """ The termination cause u triggers, or None.

    The checks run in order: non-finite samples, q below -q_abort, spectral
    tail above one percent of the L2 mass, boundary amplitude above
    boundary_abort.

    """
    if not np.all(np.isfinite(u.samples)):
        return 'nonfinite'
    q_min, _ = diagnostics.q_grid_min(u)
    if q_min < -cfg.q_abort:
        return 'blowup_detected'
    if spectral.tail_fraction(u) > TAIL_ABORT:
        return 'resolution_loss'
    if spectral.boundary_amplitude(u) > cfg.boundary_abort:
        return 'resolution_loss'
    return None


def run(u0, cfg, partition=None):
    """ Integrate from u0 until t_end or a termination trigger.

    This function accepts up to three parameters:
        u0               The initial SpectralField.
        cfg              The StepperConfig.
        partition=None   The DyadicPartition of u0's grid, built if missing.

    Returns a RunResult; the run never raises for numerical trouble, it
    terminates with a cause instead.

    """
    grid = u0.grid
    part = partition or build_partition(grid)
    result = RunResult(grid, cfg.formulation)
    state = _as_state(spectral.dealias(u0), cfg.formulation)
    u = _as_u(state, cfg.formulation)
    t = 0.0
    result.record(t, u, diagnostics.report(u, part))
    cause = check(u, cfg)
    steps = 0
    tolerance = 1e-12 * cfg.t_end

    while cause is None and cfg.t_end - t > tolerance:
        remaining = cfg.t_end - t
        dt = min(cfg.dt_init, cfl_bound(u, cfg), remaining)
        if dt < cfg.dt_min and dt < remaining:
            log.info('Step size %.3e fell below dt_min at t = %g', dt, t)
            cause = 'resolution_loss'
            break
        try:
            state = step(state, dt, cfg)
        except NonFiniteError as err:
            err.time = t
            log.info('Run stopped: %s', err)
            cause = 'nonfinite'
            break
        t = t + dt if dt < remaining else cfg.t_end
        steps += 1
        result.dt_log.append(dt)
        u = _as_u(state, cfg.formulation)
        cause = check(u, cfg)
        finished = cfg.t_end - t <= tolerance
        if cause is not None or finished or steps % cfg.sample_stride == 0:
            if cause == 'nonfinite':
                break
            result.record(t, u, diagnostics.report(u, part))
        log.debug('t = %.6g dt = %.3e max|u| = %.4g', t, dt, u.scale())

    result.terminate(cause or 'completed', t)
    log.info('Run finished with %s at t = %g after %d steps',
             result.termination, t, steps)
    return result


@dataclass(eq=False)
class PicardResult(object):

    """ Iterates of the Picard scheme at time T and their Cauchy residuals.

    iterates[k] is n^k(T), starting with n^0 = 0. residuals[k] is the
    B^1_{2,2} norm of n^{k+1}(T) - n^k(T). ratios are residuals[k+1] /
    residuals[k] where both lie above the round-off floor, else nan.

    """

    T: float
    iterates: list
    residuals: list
    ratios: list
    diverged: bool


class _Trajectory(object):

    """ Node states and time derivatives of one iterate of the scheme. """

    def __init__(self, states, slopes):
        self.states = states
        self.slopes = slopes

    def at(self, m, half, dt):
        """ The state at node m, or halfway to node m + 1 by Hermite
        interpolation when half is set. """
        if not half:
            return self.states[m]
        start, end = self.states[m], self.states[m + 1]
        modes = (start.modes + end.modes) / 2 \
            + dt / 8 * (self.slopes[m] - self.slopes[m + 1])
        return SpectralField.from_modes(start.grid, modes)


class _Coefficients(object):

    """ The frozen speed and source of one iterate at one time. """

    def __init__(self, n, fluxes):
        u = spectral.helmholtz(n, invert=True)
        padded = spectral.jet(u, 1)
        self.speed = padded[0] ** 2 + padded[1] ** 2
        self.source = fluxes.source(equation.Jet(u, 2))
        self.grid = n.grid

    def rhs(self, n):
        slope = spectral.oversample(spectral.derivative(n, 1))
        transport = spectral.truncate(self.grid, self.speed * slope)
        return self.source.modes - transport.modes


def _linear_solve(start, previous, nodes, dt, fluxes):
    """ RK4 for n_t + s(t) n_x = G(t) with s and G taken from previous. """
    grid = start.grid
    states = [start]
    slopes = []
    n = start
    for m in range(nodes - 1):
        first = _Coefficients(previous.at(m, False, dt), fluxes)
        middle = _Coefficients(previous.at(m, True, dt), fluxes)
        last = _Coefficients(previous.at(m + 1, False, dt), fluxes)
        k1 = first.rhs(n)
        k2 = middle.rhs(SpectralField.from_modes(grid, n.modes + dt / 2 * k1))
        k3 = middle.rhs(SpectralField.from_modes(grid, n.modes + dt / 2 * k2))
        k4 = last.rhs(SpectralField.from_modes(grid, n.modes + dt * k3))
        slopes.append(k1)
        n = SpectralField.from_modes(
            grid, n.modes + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4))
        if not np.all(np.isfinite(n.samples)):
            raise NonFiniteError('Picard iterate is not finite',
                                 time=(m + 1) * dt)
        states.append(n)
    final = _Coefficients(previous.at(nodes - 1, False, dt), fluxes)
    slopes.append(final.rhs(n))
    return _Trajectory(states, slopes)


def picard_steps(u0, T, cfl=0.3):
    """ Number of RK4 steps the Picard mirror takes over [0, T]. """
    speed = max(1.0, 4 * equation.transport_speed(u0))
    return max(4, int(math.ceil(T * speed / (cfl * u0.grid.dx))))


def picard_solve(u0, T, k_max, steps=None, partition=None,
                 fluxes=equation.G_FLUXES):
    """ Run the Picard scheme for the n form.

    n^0 = 0, and n^{k+1} solves the linear transport problem
    n_t + ((u^k)^2 + (u^k_x)^2) n_x = G(u^k) with n^{k+1}(0) = S_{k+1} n_0,
    where u^k = P1 n^k keeps its full time dependence on [0, T].

    This function accepts up to six parameters:
        u0                The initial SpectralField u0.
        T                 The final time.
        k_max             The number of iterates, at most 30.
        steps=None        RK4 steps over [0, T], from picard_steps if
                          missing.
        partition=None    The DyadicPartition of u0's grid.
        fluxes=G_FLUXES   The fluxes of the source term.

    """
    if not 1 <= k_max <= 30:
        raise ValueError('k_max must lie in [1, 30], got {}'.format(k_max))
    if not T > 0:
        raise ValueError('T must be positive, got {}'.format(T))
    grid = u0.grid
    part = partition or build_partition(grid)
    steps = steps or picard_steps(u0, T)
    dt = T / steps
    n0 = spectral.helmholtz(u0)
    norm_index = BesovIndex(1, 2, 2)
    floor = 1e-12 * besov_norm(n0, norm_index, part)

    zero = SpectralField.zeros(grid)
    previous = _Trajectory([zero] * (steps + 1),
                           [np.zeros(grid.points // 2 + 1)] * (steps + 1))
    iterates = [zero]
    residuals = []
    for k in range(k_max):
        start = low_pass(n0, k + 1, part)
        current = _linear_solve(start, previous, steps + 1, dt, fluxes)
        iterates.append(current.states[-1])
        residuals.append(besov_norm(iterates[-1] - iterates[-2],
                                    norm_index, part))
        log.debug('Picard iterate %d residual %.3e', k + 1, residuals[-1])
        previous = current

    ratios = []
    for before, after in zip(residuals, residuals[1:]):
        if before > floor and after > floor:
            ratios.append(after / before)
        else:
            ratios.append(math.nan)
    growth = 0
    diverged = False
    for before, after in zip(residuals, residuals[1:]):
        growth = growth + 1 if after > before and after > floor else 0
        diverged = diverged or growth >= 3
    if diverged:
        log.warning('Picard residuals grew for three consecutive iterates')
    return PicardResult(T, iterates, residuals, ratios, diverged)
