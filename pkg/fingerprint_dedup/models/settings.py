#
# Copyright 2026 fingerprint-dedup developers
#
# ### MIT license
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
#
"""Run configuration.

Values come from the built-in defaults, overlaid by an optional YAML file
and finally by explicit overrides such as command line flags. Keys are
kebab-case in files and snake_case as properties.
"""

import logging
import numbers
import os

import yaml

from ..utils.logging import _log_nested
from .grid_index import GridParams
from .matcher import MatchParams

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = 'FINGERPRINT_DEDUP_CONFIG'

OUTPUT_FORMATS = ('text', 'csv')

DEFAULTS = {
    'grid-n': 5,
    'min-edge': 15.0,
    'max-edge': 100.0,
    'neighbors-k': 4,
    'score-threshold': 90.0,
    'min-matched-descriptors': 0,
    'side-tolerance': 5.0,
    'angle-tolerance': 0.2618,
    'output-format': 'text',
    'jobs': 0,
    'oracle-cap': 5000,
    'signature-suffix': '.sig',
    'repetitions': 3,
    'queries': 100,
}

_INTEGER_KEYS = {'grid-n', 'neighbors-k', 'min-matched-descriptors', 'jobs', 'oracle-cap',
                 'repetitions', 'queries'}
_REAL_KEYS = {'min-edge', 'max-edge', 'score-threshold', 'side-tolerance', 'angle-tolerance'}
_STRING_KEYS = {'output-format', 'signature-suffix'}
_NON_NEGATIVE_KEYS = {'min-matched-descriptors', 'jobs', 'oracle-cap'}
_POSITIVE_KEYS = {'grid-n', 'repetitions', 'queries'}


def _coerce(key, value):
    if key in _INTEGER_KEYS:
        if isinstance(value, bool) or not isinstance(value, numbers.Integral):
            raise ValueError(f"Setting '{key}' must be an integer, got {value!r}")
        value = int(value)
        if key in _NON_NEGATIVE_KEYS and value < 0:
            raise ValueError(f"Setting '{key}' must be non-negative, got {value}")
        if key in _POSITIVE_KEYS and value < 1:
            raise ValueError(f"Setting '{key}' must be positive, got {value}")
        return value
    if key in _REAL_KEYS:
        if isinstance(value, bool) or not isinstance(value, numbers.Real):
            raise ValueError(f"Setting '{key}' must be a number, got {value!r}")
        return float(value)
    if key in _STRING_KEYS:
        if not isinstance(value, str):
            raise ValueError(f"Setting '{key}' must be a string, got {value!r}")
        if key == 'output-format' and value not in OUTPUT_FORMATS:
            raise ValueError(f"Output format must be one of {OUTPUT_FORMATS}, got '{value}'")
        return value
    raise ValueError(f"Unknown setting '{key}'.")


def config_file_from_environment():
    """Configuration file named by the environment, or None."""
    path = os.environ.get(CONFIG_ENV_VAR)
    if path is not None and len(path) == 0:
        path = None
    return path


class Settings:
    def __init__(self, config_file=None):
        self._values = dict(DEFAULTS)
        if config_file is not None:
            self.import_config(config_file)

    def reset(self):
        """Reset all settings to defaults."""
        for key, default in DEFAULTS.items():
            value = self._values[key]
            self._values[key] = default
            if value != default:
                logger.debug("Reset '%s': '%s' back to default '%s'", key, value, default)

    def __getitem__(self, key):
        return self._values[key]

    def __setitem__(self, key, value):
        self._values[key] = _coerce(key, value)

    def update(self, **kwargs):
        """Override settings by snake_case name, None values leave a setting untouched."""
        for name, value in kwargs.items():
            if value is None:
                continue
            key = name.replace('_', '-')
            self[key] = value

    def as_dict(self):
        return dict(self._values)

    def import_config(self, config_file):
        """Import settings from YAML file, unknown keys are rejected."""
        logger.debug(f"Import config from '{config_file}':")
        with open(config_file, 'r', encoding='utf-8') as f:
            config = yaml.safe_load(f)
        if config is None:
            config = {}
        if not isinstance(config, dict):
            raise ValueError(f"Config file '{config_file}' does not hold a mapping.")
        _log_nested(logger.debug, config)
        unknown = sorted(set(config) - set(DEFAULTS))
        if len(unknown) > 0:
            raise ValueError(f"Unknown keys in config file '{config_file}': {', '.join(map(str, unknown))}")
        for key, value in config.items():
            self[key] = value

    def export_config(self, config_file):
        """Export settings to YAML file."""
        logger.debug(f"Export config to '{config_file}':")
        _log_nested(logger.debug, self._values)
        with open(config_file, 'w', encoding='utf-8') as f:
            f.write(self.to_yaml())

    def to_yaml(self):
        return yaml.safe_dump(self._values, sort_keys=False, default_flow_style=False)

    # derived parameter objects

    @property
    def grid_params(self):
        return GridParams(self.grid_n)

    @property
    def match_params(self):
        return MatchParams(
            min_edge=self.min_edge,
            max_edge=self.max_edge,
            neighbors_k=self.neighbors_k,
            score_threshold=self.score_threshold,
            min_matched_descriptors=self.min_matched_descriptors,
            side_tolerance=self.side_tolerance,
            angle_tolerance=self.angle_tolerance)

    # properties

    @property
    def grid_n(self):
        """Side of the square block matrix."""
        return self._values['grid-n']

    @grid_n.setter
    def grid_n(self, value):
        self['grid-n'] = value

    @property
    def min_edge(self):
        return self._values['min-edge']

    @min_edge.setter
    def min_edge(self, value):
        self['min-edge'] = value

    @property
    def max_edge(self):
        return self._values['max-edge']

    @max_edge.setter
    def max_edge(self, value):
        self['max-edge'] = value

    @property
    def neighbors_k(self):
        return self._values['neighbors-k']

    @neighbors_k.setter
    def neighbors_k(self, value):
        self['neighbors-k'] = value

    @property
    def score_threshold(self):
        return self._values['score-threshold']

    @score_threshold.setter
    def score_threshold(self, value):
        self['score-threshold'] = value

    @property
    def min_matched_descriptors(self):
        return self._values['min-matched-descriptors']

    @min_matched_descriptors.setter
    def min_matched_descriptors(self, value):
        self['min-matched-descriptors'] = value

    @property
    def side_tolerance(self):
        return self._values['side-tolerance']

    @side_tolerance.setter
    def side_tolerance(self, value):
        self['side-tolerance'] = value

    @property
    def angle_tolerance(self):
        return self._values['angle-tolerance']

    @angle_tolerance.setter
    def angle_tolerance(self, value):
        self['angle-tolerance'] = value

    @property
    def output_format(self):
        return self._values['output-format']

    @output_format.setter
    def output_format(self, value):
        self['output-format'] = value

    @property
    def jobs(self):
        """Worker processes for indexing and the sweep. 0 = all available cores."""
        return self._values['jobs']

    @jobs.setter
    def jobs(self, value):
        self['jobs'] = value

    @property
    def oracle_cap(self):
        """Largest corpus the exhaustive all-pairs grouping accepts."""
        return self._values['oracle-cap']

    @oracle_cap.setter
    def oracle_cap(self, value):
        self['oracle-cap'] = value

    @property
    def signature_suffix(self):
        return self._values['signature-suffix']

    @signature_suffix.setter
    def signature_suffix(self, value):
        self['signature-suffix'] = value

    @property
    def repetitions(self):
        return self._values['repetitions']

    @repetitions.setter
    def repetitions(self, value):
        self['repetitions'] = value

    @property
    def queries(self):
        return self._values['queries']

    @queries.setter
    def queries(self, value):
        self['queries'] = value
