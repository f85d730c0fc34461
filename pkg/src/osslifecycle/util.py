import math
import pathlib
import datetime
import collections

from termcolor import colored
from tqdm import tqdm

from clldutils import jsonlib

__all__ = ['progressbar', 'month_key', 'month_range', 'months_between', 'jsondump']


def progressbar(iterable=None, **kw):
    kw.setdefault('leave', False)
    kw.setdefault('desc', 'osslifecycle')
    return tqdm(iterable=iterable, **kw)


def parse_timestamp(s):
    """
    Parse an RFC 3339 timestamp into an aware UTC datetime.

    Naive timestamps are taken to be UTC.
    """
    if s.endswith(('Z', 'z')):
        s = s[:-1] + '+00:00'
    dt = datetime.datetime.fromisoformat(s)
    if dt.tzinfo is None:
        return dt.replace(tzinfo=datetime.timezone.utc)
    return dt.astimezone(datetime.timezone.utc)


def format_timestamp(dt):
    return dt.astimezone(datetime.timezone.utc).strftime('%Y-%m-%dT%H:%M:%SZ')


def month_key(dt):
    return '{0:04d}-{1:02d}'.format(dt.year, dt.month)


def parse_month(s):
    try:
        year, month = s.split('-')
        year, month = int(year), int(month)
    except (AttributeError, ValueError):
        raise ValueError('invalid month {0!r}, expected YYYY-MM'.format(s))
    if not 1 <= month <= 12:
        raise ValueError('invalid month {0!r}, expected YYYY-MM'.format(s))
    return year, month


def months_between(first, last):
    """
    Number of calendar months from `first` to `last` (both YYYY-MM), e.g. 0 for equal months.
    """
    (y1, m1), (y2, m2) = parse_month(first), parse_month(last)
    return (y2 - y1) * 12 + (m2 - m1)


def month_range(first, last):
    """
    Contiguous list of YYYY-MM keys from `first` to `last` inclusive.
    """
    year, month = parse_month(first)
    res = []
    for _ in range(months_between(first, last) + 1):
        res.append('{0:04d}-{1:02d}'.format(year, month))
        month += 1
        if month > 12:
            year, month = year + 1, 1
    return res


def finite_or_none(v):
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else None


def sorted_obj(obj):
    res = obj
    if isinstance(obj, dict):
        res = collections.OrderedDict()
        obj.pop(None, None)
        for k, v in sorted(obj.items()):
            res[k] = sorted_obj(v)
    elif isinstance(obj, (list, tuple, set)):
        res = [sorted_obj(v) for v in obj]
    elif isinstance(obj, float):
        res = finite_or_none(obj)
    return res


def log_dump(fname, log=None):
    if log:
        log.info('file written: {0}'.format(colored(pathlib.Path(fname).as_posix(), 'green')))


def jsondump(obj, fname, log=None, update=False):
    fname = pathlib.Path(fname)
    if update and fname.exists():
        d = jsonlib.load(fname)
        d.update(obj)
        obj = d
    fname.parent.mkdir(parents=True, exist_ok=True)
    jsonlib.dump(sorted_obj(obj), fname, indent=4)
    log_dump(fname, log=log)
    return obj
