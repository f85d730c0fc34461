import datetime
from collections import Counter

import pytest

from osslifecycle import util


def test_jsondump(tmp_path):
    fname = tmp_path / 'dump.json'
    res = util.jsondump({'a': 2}, fname)
    assert 'a' in res
    res = util.jsondump({'b': 3}, fname, update=True)
    assert res['b'] == 3 and res['a'] == 2
    res = util.jsondump({'c': float('nan')}, fname)
    assert 'a' not in res
    assert '"c": null' in fname.read_text(encoding='utf8')


def test_sorted_obj():
    d1 = {'a': [1, 2, 3], 'b': dict(a=3, b=1)}
    d2 = {'b': Counter('baaa'), 'a': [1, 2, 3]}
    assert util.sorted_obj(d1) == util.sorted_obj(d2)
    assert util.sorted_obj(d2)['b']['a'] == 3
    assert util.sorted_obj([1.5, float('inf')]) == [1.5, None]


@pytest.mark.parametrize(
    's,expected',
    [
        ('2020-01-15T12:00:00Z', datetime.datetime(2020, 1, 15, 12, tzinfo=datetime.timezone.utc)),
        ('2020-01-15T12:00:00', datetime.datetime(2020, 1, 15, 12, tzinfo=datetime.timezone.utc)),
        ('2020-01-15T14:00:00+02:00',
         datetime.datetime(2020, 1, 15, 12, tzinfo=datetime.timezone.utc)),
    ]
)
def test_parse_timestamp(s, expected):
    assert util.parse_timestamp(s) == expected
    assert util.format_timestamp(util.parse_timestamp(s)) == '2020-01-15T12:00:00Z'


def test_months():
    assert util.month_key(datetime.date(2009, 7, 31)) == '2009-07'
    assert util.month_range('2019-11', '2020-02') == ['2019-11', '2019-12', '2020-01', '2020-02']
    assert util.month_range('2020-02', '2020-02') == ['2020-02']
    assert util.month_range('2020-03', '2020-02') == []
    assert util.months_between('2009-07', '2026-01') == 198
    for s in ['2020-13', '2020', 'abc', None]:
        with pytest.raises(ValueError):
            util.parse_month(s)


def test_finite_or_none():
    assert util.finite_or_none(None) is None
    assert util.finite_or_none(float('nan')) is None
    assert util.finite_or_none(2) == 2.0


def test_progressbar():
    assert list(util.progressbar(range(3), disable=True)) == [0, 1, 2]
