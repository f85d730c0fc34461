"""
Run configuration.

Settings come from a flat `key = value` file, environment variables `OSSLIFECYCLE_<KEY>` and
command line flags; later sources win:

    default < config file < environment < command line
"""
import os
import pathlib

import attr
import appdirs
from clldutils.inifile import INI

from osslifecycle.models import ValuationConfig
from osslifecycle.ingest import BOT_SUFFIXES
from osslifecycle.engagement import REGRESSORS
from osslifecycle.util import parse_month

__all__ = ['ENV_PREFIX', 'DEFAULT_CACHE_DIR', 'RunConfig', 'read_config_file', 'load_config']

ENV_PREFIX = 'OSSLIFECYCLE_'
DEFAULT_CACHE_DIR = pathlib.Path(appdirs.user_cache_dir('osslifecycle'))
SECTION = 'osslifecycle'


def _bool(v):
    if isinstance(v, bool):
        return v
    if str(v).strip().lower() in ('1', 'true', 'yes', 'on'):
        return True
    if str(v).strip().lower() in ('0', 'false', 'no', 'off', ''):
        return False
    raise ValueError('invalid boolean {0!r}'.format(v))


def _list(v):
    if isinstance(v, (list, tuple)):
        return tuple(v)
    return tuple(s.strip() for s in str(v).split(',') if s.strip())


def _month(_, attribute, value):
    if value is not None:
        parse_month(value)


def _fraction(_, attribute, value):
    if not 0 < value <= 1:
        raise ValueError('{0} must be in (0, 1], got {1}'.format(attribute.name, value))


def _at_least_one(_, attribute, value):
    if value < 1:
        raise ValueError('{0} must be >= 1, got {1}'.format(attribute.name, value))


@attr.s
class RunConfig(object):
    projects = attr.ib(default=attr.Factory(tuple), converter=_list)
    cutoff_month = attr.ib(default=None, validator=_month)
    cache_dir = attr.ib(default=DEFAULT_CACHE_DIR, converter=pathlib.Path)
    output_dir = attr.ib(default=pathlib.Path('osslifecycle-output'), converter=pathlib.Path)
    valuation = attr.ib(default=attr.Factory(ValuationConfig))
    stability_fraction = attr.ib(default=0.75, converter=float, validator=_fraction)
    fetch_concurrency = attr.ib(default=4, converter=int, validator=_at_least_one)
    workers = attr.ib(default=1, converter=int, validator=_at_least_one)
    step = attr.ib(default=0.25, converter=float, validator=_fraction)
    regressor = attr.ib(default='midpoint', validator=attr.validators.in_(REGRESSORS))
    exclude_bots = attr.ib(default=True, converter=_bool)
    exclude_merges = attr.ib(default=False, converter=_bool)
    bot_suffixes = attr.ib(default=BOT_SUFFIXES, converter=_list)

    @property
    def threshold(self):
        return self.valuation.maturation_threshold


RUN_KEYS = [f.name for f in attr.fields(RunConfig) if f.name != 'valuation']
VALUATION_KEYS = [f.name for f in attr.fields(ValuationConfig)]
KEYS = RUN_KEYS + VALUATION_KEYS


def read_config_file(path):
    """
    Read a flat `key = value` file; lines starting with `#` are comments.
    """
    path = pathlib.Path(path)
    ini = INI(interpolation=None)
    ini.read_string('[{0}]\n{1}'.format(SECTION, path.read_text(encoding='utf8')), str(path))
    res = dict(ini.items(SECTION))
    unknown = set(res) - set(KEYS)
    if unknown:
        raise ValueError('{0}: unknown config keys: {1}'.format(
            path, ', '.join(sorted(unknown))))
    return res


def load_config(path=None, env=None, **overrides):
    """
    Assemble a `RunConfig` from file, environment and explicit overrides.

    Overrides with value `None` are ignored, so unset command line flags do not mask lower
    precedence sources.
    """
    env = os.environ if env is None else env
    values = {}
    if path:
        values.update(read_config_file(path))
    for key in KEYS:
        if ENV_PREFIX + key.upper() in env:
            values[key] = env[ENV_PREFIX + key.upper()]
    values.update({k: v for k, v in overrides.items() if v is not None})

    valuation = {k: values.pop(k) for k in VALUATION_KEYS if k in values}
    if valuation.get('value_per_download') == '':
        valuation['value_per_download'] = None
    return RunConfig(valuation=ValuationConfig(**valuation), **values)
