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

""" Experiment configuration.

A configuration is a tree of sections mirroring ExperimentConfig. Values
come, in increasing priority, from the defaults below, a YAML file, and
"section.key=value" overrides whose values are parsed as YAML.

"""

import copy
import logging
import math
import os.path
from dataclasses import dataclass, field, fields, replace

import numpy as np
import yaml

from fochlab.logic import artifacts, inflation
from fochlab.logic.integrator import StepperConfig
from fochlab.logic.spectral import GridSpec, SpectralField

log = logging.getLogger(__name__)

EXPERIMENTS = ('simulate', 'blowup-certify', 'inflation-scan',
               'operator-check', 'picard-check')

# Parameters each kind of initial data understands, with their defaults.
INITIAL_DEFAULTS = {
    'gaussian': {'amplitude': 0.05, 'width': 1.0, 'center': 0.0},
    'cosine': {'amplitude': 0.1, 'mode': 1},
    'inflation': {'N': 10},
    'file': {'path': None},
}

# Slope constant per experiment when constants.C1 is left empty. The
# inflation data reach u_x(0) / |u|_H2 of about 0.37 with g_ratio = 0.2, and
# no g amplitude gets past 1 / |x exp(-x^2)|_H2 ~ 0.381, so the scan cannot
# meet C1 = 0.4 and uses 0.25.
SLOPE_DEFAULTS = {'inflation-scan': 0.25}
SLOPE_DEFAULT = 0.4

OPTION_DEFAULTS = {
    'Ns': [6, 8, 10, 12],
    'x0': None,
    'q_abort_factor': None,
    'picard_T': 0.1,
    'picard_k_max': 12,
}


class ConfigError(ValueError):

    """ Raised for an unreadable or invalid configuration. """


@dataclass
class InitialData(object):

    """ What to start from. parameters override the defaults of kind. """

    kind: str = 'gaussian'
    parameters: dict = field(default_factory=dict)

    def resolved(self):
        """ The parameters merged over the defaults of kind. """
        merged = dict(INITIAL_DEFAULTS[self.kind])
        merged.update(self.parameters)
        return merged


@dataclass
class Constants(object):

    """ Constants of the blow-up criterion and the inflation data. """

    C1: float = None
    C_wp: float = 1.0
    besov_s: float = 2.0
    g_ratio: float = 0.2

    def slope_constant(self, experiment):
        """ C1, or the default of the experiment when it is empty. """
        if self.C1 is not None:
            return self.C1
        return SLOPE_DEFAULTS.get(experiment, SLOPE_DEFAULT)


def _default_grid():
    return GridSpec(100.0, 2048)


@dataclass
class ExperimentConfig(object):

    """ Everything one experiment needs. """

    experiment: str = 'simulate'
    grid: GridSpec = field(default_factory=_default_grid)
    stepper: StepperConfig = field(default_factory=StepperConfig)
    initial_data: InitialData = field(default_factory=InitialData)
    constants: Constants = field(default_factory=Constants)
    options: dict = field(default_factory=lambda: dict(OPTION_DEFAULTS))
    output_dir: str = 'fochlab-out'
    seed: int = 0

    def to_dict(self):
        """ The configuration as plain python values. """
        return {
            'experiment': self.experiment,
            'grid': self.grid.to_dict(),
            'stepper': self.stepper.to_dict(),
            'initial_data': {'kind': self.initial_data.kind,
                             'parameters': dict(self.initial_data.parameters)},
            'constants': {item.name: getattr(self.constants, item.name)
                          for item in fields(Constants)},
            'options': copy.deepcopy(self.options),
            'output_dir': self.output_dir,
            'seed': self.seed,
        }

    @classmethod
    def from_dict(cls, document):
        """ Build and validate a configuration from plain values.

        Raises ConfigError for unknown keys and invalid values.

        """
        document = dict(document)
        _check_keys('configuration', document,
                    [item.name for item in fields(cls)])
        try:
            grid = GridSpec(**_section(document, 'grid', GridSpec))
            stepper = StepperConfig(**_section(document, 'stepper',
                                               StepperConfig))
            initial = InitialData(**_section(document, 'initial_data',
                                             InitialData))
            constants = Constants(**_section(document, 'constants',
                                             Constants))
        except (TypeError, ValueError) as err:
            raise ConfigError(str(err))
        options = dict(OPTION_DEFAULTS)
        given = document.get('options') or {}
        _check_keys('options', given, OPTION_DEFAULTS)
        options.update(given)
        config = cls(document.get('experiment', 'simulate'), grid, stepper,
                     initial, constants, options,
                     document.get('output_dir', 'fochlab-out'),
                     document.get('seed', 0))
        config.validate()
        return config

    def validate(self):
        """ Raise ConfigError unless every value is usable. """
        if self.experiment not in EXPERIMENTS:
            raise ConfigError('Unknown experiment {}, expected one of {}'
                              .format(self.experiment,
                                      ', '.join(EXPERIMENTS)))
        kind = self.initial_data.kind
        if kind not in INITIAL_DEFAULTS:
            raise ConfigError('Unknown initial data kind {}, expected one '
                              'of {}'.format(kind,
                                             ', '.join(INITIAL_DEFAULTS)))
        _check_keys('initial_data.parameters', self.initial_data.parameters,
                    INITIAL_DEFAULTS[kind])
        if kind == 'file':
            path = self.initial_data.resolved()['path']
            if not path or not os.path.isfile(path):
                raise ConfigError('Initial data file {} does not exist'
                                  .format(path))
        C1 = self.constants.C1
        if C1 is not None and not 0 < C1 < 0.5:
            raise ConfigError('constants.C1 must lie in (0, 1/2), got {}'
                              .format(C1))
        if not self.constants.C_wp >= 1:
            raise ConfigError('constants.C_wp must be at least 1, got {}'
                              .format(self.constants.C_wp))
        Ns = self.options['Ns']
        if not isinstance(Ns, list) or not Ns \
                or not all(isinstance(N, int) and N >= 2 for N in Ns):
            raise ConfigError('options.Ns must be a list of integers of at '
                              'least 2, got {}'.format(Ns))
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigError('seed must be an integer, got {}'
                              .format(self.seed))
        if not self.output_dir:
            raise ConfigError('output_dir must not be empty')

    def dump(self, stream=None):
        """ Serialise to YAML; returns the text when stream is None. """
        return yaml.safe_dump(self.to_dict(), stream, default_flow_style=False,
                              sort_keys=True)

    @classmethod
    def load(cls, text):
        """ Parse the YAML produced by dump. """
        return cls.from_dict(yaml.safe_load(text))


def _check_keys(where, document, known):
    if not isinstance(document, dict):
        raise ConfigError('{} must be a mapping, got {!r}'
                          .format(where, document))
    unknown = sorted(set(document) - set(known))
    if unknown:
        raise ConfigError('Unknown key(s) in {}: {}'
                          .format(where, ', '.join(map(str, unknown))))


def _section(document, name, kind):
    section = document.get(name) or {}
    _check_keys(name, section, [item.name for item in fields(kind)])
    return section


def _merge(base, update):
    """ Recursively merge the mapping update into base. """
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict) \
                and key != 'parameters':
            _merge(base[key], value)
        else:
            base[key] = copy.deepcopy(value)


def apply_override(document, key, value):
    """ Set the dotted key, e.g. "stepper.t_end", in a config document. """
    parts = key.split('.')
    target = document
    for part in parts[:-1]:
        node = target.get(part)
        if node is None:
            node = target[part] = {}
        if not isinstance(node, dict):
            raise ConfigError('Cannot set {}: {} is not a section'
                              .format(key, part))
        target = node
    target[parts[-1]] = value


def load_config(path=None, overrides=(), output_dir=None, seed=None,
                experiment=None):
    """ Build the effective configuration.

    This function accepts up to five parameters:
        path=None          A YAML file, merged over the defaults.
        overrides=()       (dotted key, value) pairs applied after the file.
        output_dir=None    Replaces output_dir when given.
        seed=None          Replaces seed when given.
        experiment=None    Replaces experiment when given.

    Raises ConfigError when the file cannot be read or the result is
    invalid.

    """
    document = ExperimentConfig().to_dict()
    if path is not None:
        try:
            with open(path, 'r') as file:
                loaded = yaml.safe_load(file)
        except OSError as err:
            raise ConfigError('Cannot read {}: {}'.format(path, err))
        except yaml.YAMLError as err:
            raise ConfigError('Cannot parse {}: {}'.format(path, err))
        if loaded is not None:
            _check_keys(path, loaded, document)
            _merge(document, loaded)
    for key, value in overrides:
        apply_override(document, key, value)
    if output_dir is not None:
        document['output_dir'] = output_dir
    if seed is not None:
        document['seed'] = seed
    if experiment is not None:
        document['experiment'] = experiment
    return ExperimentConfig.from_dict(document)


def initial_field(config):
    """ The initial SpectralField u0 a configuration describes. """
    grid = config.grid
    kind = config.initial_data.kind
    parameters = config.initial_data.resolved()
    try:
        if kind == 'gaussian':
            amplitude = parameters['amplitude']
            width = parameters['width']
            center = parameters['center']
            return SpectralField.from_function(
                grid, lambda x: amplitude * np.exp(-((x - center) / width)
                                                   ** 2))
        if kind == 'cosine':
            amplitude = parameters['amplitude']
            frequency = parameters['mode'] * grid.dxi
            return SpectralField.from_function(
                grid, lambda x: amplitude * np.cos(frequency * x))
        if kind == 'inflation':
            N = parameters['N']
            psi = inflation.build_psi(grid, N)
            g = inflation.build_g(config.constants.g_ratio, grid)
            return inflation.build_u0N(N, psi, g)
        field, t = artifacts.read_snapshot(parameters['path'],
                                           grid.dealias_cut)
    except (TypeError, ValueError) as err:
        raise ConfigError('Cannot build {} initial data: {}'
                          .format(kind, err))
    if field.grid != grid:
        raise ConfigError('Snapshot grid (L = {}, N_grid = {}) does not match '
                          'the configured grid (L = {}, N_grid = {})'
                          .format(field.grid.length, field.grid.points,
                                  grid.length, grid.points))
    log.info('Starting from snapshot %s taken at t = %g', parameters['path'],
             t)
    return field


def stepper_for(config, q0=None):
    """ The stepper of a configuration, with q_abort tied to |q0| when the
    q_abort_factor option is set. """
    factor = config.options.get('q_abort_factor')
    stepper = config.stepper
    if factor is None or q0 is None or q0 == 0:
        return stepper
    q_abort = min(stepper.q_abort, factor * abs(q0))
    if not math.isfinite(q_abort) or q_abort <= 0:
        return stepper
    return replace(stepper, q_abort=q_abort)
