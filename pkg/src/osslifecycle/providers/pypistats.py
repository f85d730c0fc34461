"""
Download counts from the pypistats.org JSON API.
"""
import datetime

import requests

from osslifecycle.errors import NetworkError, DataError

__all__ = ['API_URL', 'fetch_downloads']

API_URL = 'https://pypistats.org/api/packages/{0}/overall'


def fetch_downloads(package, months=6, end=None, session=None):
    """
    Total downloads (without mirrors) of `package` over the trailing `months` months.

    pypistats.org keeps about 180 days of daily data, so windows longer than six months are
    truncated by the service.
    """
    session = session or requests
    try:
        response = session.get(
            API_URL.format(package), params={'mirrors': 'false'}, timeout=30)
    except requests.RequestException as e:
        raise NetworkError('request for {0} failed: {1}'.format(package, e))
    if response.status_code == 404:
        raise DataError('no download statistics for package {0}'.format(package))
    if response.status_code >= 400:
        raise NetworkError('pypistats.org returned HTTP {0} for {1}'.format(
            response.status_code, package))

    rows = [
        r for r in response.json().get('data', [])
        if r.get('category', 'without_mirrors') == 'without_mirrors']
    if not rows:
        return 0
    end = end or max(datetime.date.fromisoformat(r['date']) for r in rows)
    start = end - datetime.timedelta(days=round(months * 365.25 / 12))
    total = 0
    for r in rows:
        if start < datetime.date.fromisoformat(r['date']) <= end:
            if r['downloads'] < 0:
                raise DataError('negative download count for {0}'.format(package))
            total += int(r['downloads'])
    return total
