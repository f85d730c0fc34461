"""
Commit logs and their aggregation into monthly series.

The commit cache is JSON lines, one commit per line::

    {"sha": "...", "author_name": "...", "author_email": "...",
     "timestamp": "2020-01-15T00:00:00Z", "additions": 10, "deletions": 5}

An optional `parents` field records the number of parent commits.
"""
import re
import json
import pathlib
import logging
import collections

import attr
from csvw.dsv import UnicodeWriter, reader
from clldutils.misc import slug

from osslifecycle.errors import CommitLogError, DataError
from osslifecycle.models import CommitRecord, MonthlySeries
from osslifecycle.util import (
    parse_timestamp, format_timestamp, month_key, month_range, parse_month, log_dump,
)

__all__ = [
    'BOT_SUFFIXES', 'canonicalize_author', 'make_commit', 'load_commit_log', 'dump_commit_log',
    'append_commit_log', 'aggregate_monthly', 'read_series', 'write_series']

log = logging.getLogger(__name__)

BOT_SUFFIXES = ('[bot]', '-bot')
UNKNOWN = 'unknown'
CACHE_FIELDS = ['sha', 'author_name', 'author_email', 'timestamp', 'additions', 'deletions']
SERIES_HEADER = ['month', 'developers', 'lines_changed', 'cum_lines', 'cum_dev_months']


@attr.s(frozen=True)
class Author(object):
    id = attr.ib()
    bot = attr.ib(default=False)


def is_bot(name, email, suffixes=BOT_SUFFIXES):
    candidates = [(name or '').strip().lower(), (email or '').strip().lower().split('@')[0]]
    return any(c.endswith(suffix) for c in candidates if c for suffix in suffixes)


def canonicalize_author(raw_name, raw_email, bot_suffixes=BOT_SUFFIXES):
    """
    Canonical developer identity: the lowercased email if present, else the slugged name.
    """
    name, email = (raw_name or '').strip(), (raw_email or '').strip()
    if email:
        id_ = email.lower()
    elif name:
        id_ = slug(name) or re.sub(r'\s+', ' ', name.lower())
    else:
        id_ = UNKNOWN
    return Author(id=id_, bot=is_bot(name, email, bot_suffixes))


def make_commit(sha, author_name, author_email, timestamp, additions, deletions, parents=1,
                bot_suffixes=BOT_SUFFIXES):
    author = canonicalize_author(author_name, author_email, bot_suffixes=bot_suffixes)
    if isinstance(timestamp, str):
        timestamp = parse_timestamp(timestamp)
    return CommitRecord(
        sha=sha,
        author_id=author.id,
        timestamp=timestamp,
        additions=additions,
        deletions=deletions,
        author_name=author_name or '',
        author_email=author_email or '',
        bot=author.bot,
        parents=parents)


def _commit_from_json(d, path, lineno, bot_suffixes):
    if not isinstance(d, dict):
        raise CommitLogError(path, lineno, 'expected a JSON object')
    for field in CACHE_FIELDS:
        if field not in d:
            raise CommitLogError(path, lineno, 'missing field {0}'.format(field))
    for field in ['additions', 'deletions']:
        v = d[field]
        if isinstance(v, bool) or not isinstance(v, int):
            raise CommitLogError(
                path, lineno, 'field {0} must be an integer, got {1!r}'.format(field, v))
        if v < 0:
            raise CommitLogError(
                path, lineno, 'field {0} must be non-negative, got {1}'.format(field, v))
    try:
        ts = parse_timestamp(d['timestamp'])
    except (TypeError, ValueError, AttributeError):
        raise CommitLogError(
            path, lineno, 'unparseable timestamp {0!r}'.format(d['timestamp']))
    return make_commit(
        str(d['sha']),
        d['author_name'],
        d['author_email'],
        ts,
        d['additions'],
        d['deletions'],
        parents=d.get('parents', 1),
        bot_suffixes=bot_suffixes)


def iter_commit_log(path, bot_suffixes=BOT_SUFFIXES):
    path = pathlib.Path(path)
    with path.open(encoding='utf8') as fp:
        for lineno, line in enumerate(fp, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                d = json.loads(line)
            except ValueError as e:
                raise CommitLogError(path, lineno, 'invalid JSON: {0}'.format(e))
            yield _commit_from_json(d, path, lineno, bot_suffixes)


def load_commit_log(path, bot_suffixes=BOT_SUFFIXES):
    return list(iter_commit_log(path, bot_suffixes=bot_suffixes))


def commit_as_json(commit):
    d = collections.OrderedDict([
        ('sha', commit.sha),
        ('author_name', commit.author_name),
        ('author_email', commit.author_email),
        ('timestamp', format_timestamp(commit.timestamp)),
        ('additions', commit.additions),
        ('deletions', commit.deletions),
    ])
    if commit.parents != 1:
        d['parents'] = commit.parents
    return json.dumps(d, ensure_ascii=False)


def append_commit_log(fp, commit):
    fp.write(commit_as_json(commit) + '\n')
    fp.flush()


def dump_commit_log(commits, path, log=None):
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf8') as fp:
        for commit in commits:
            append_commit_log(fp, commit)
    log_dump(path, log=log)
    return path


def aggregate_monthly(commits, project='', cutoff=None, exclude_bots=True,
                      exclude_merges=False):
    """
    Bucket commits by UTC calendar month of their author timestamp.

    The series runs from the first commit month to `cutoff` (YYYY-MM) if given, else to the
    last commit month; commits after the cutoff are dropped and interior gaps are zero.
    """
    if cutoff:
        parse_month(cutoff)
    developers = collections.defaultdict(set)
    lines = collections.Counter()
    for commit in commits:
        if exclude_bots and commit.bot:
            continue
        if exclude_merges and commit.is_merge:
            continue
        key = month_key(commit.timestamp)
        if cutoff and key > cutoff:
            continue
        developers[key].add(commit.author_id)
        lines[key] += commit.additions + commit.deletions

    if not developers:
        return MonthlySeries.empty(project)

    months = month_range(min(developers), cutoff or max(developers))
    return MonthlySeries(
        project,
        months,
        [len(developers.get(m, ())) for m in months],
        [lines.get(m, 0) for m in months])


def write_series(series, path, log=None):
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with UnicodeWriter(path) as w:
        w.writerow(SERIES_HEADER)
        for month, dev, lines, cum_lines, cum_dm in series.rows():
            w.writerow([month, _num(dev), _num(lines), _num(cum_lines), _num(cum_dm)])
    log_dump(path, log=log)
    return path


def read_series(path, project=None):
    path = pathlib.Path(path)
    months, L, dA = [], [], []
    for i, row in enumerate(reader(path, dicts=True), start=2):
        try:
            parse_month(row['month'])
            months.append(row['month'])
            L.append(float(row['developers']))
            dA.append(float(row['lines_changed']))
        except (KeyError, ValueError) as e:
            raise DataError('{0}:{1}: {2}'.format(path, i, e))
    if months and month_range(months[0], months[-1]) != months:
        raise DataError('{0}: months are not contiguous'.format(path))
    return MonthlySeries(project or path.stem, months, L, dA)


def _num(v):
    v = float(v)
    return int(v) if v.is_integer() else v
