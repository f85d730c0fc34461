"""
Supply-side and demand-side valuation.
"""
import functools

from osslifecycle.cli_util import add_projects, run_projects
from osslifecycle.valuation import load_downloads

COLUMNS = [
    ('dev-months', lambda r: r.valuation.cum_dev_months),
    ('innov/dev-month', lambda r: r.valuation.innov_per_devmonth),
    ('supply current', lambda r: r.valuation.supply_current),
    ('supply lifetime', lambda r: r.valuation.supply_lifetime),
    ('remaining downloads', lambda r: r.valuation.remaining_downloads),
]


def add_downloads(parser):
    parser.add_argument(
        '--downloads',
        help='CSV file with columns project,package,downloads_6mo, or the URL of the '
             'download statistics service',
        default=None)


def get_downloads(source, cfg, projects):
    """
    Load download counts; for the statistics service the package is the repository name.
    """
    return load_downloads(
        source,
        projects={p: p.split('/')[-1].replace('.csv', '').replace('.jsonl', '')
                  for p in projects},
        window=cfg.valuation.window_months)


def downloads_loader(args):
    if args.downloads:
        return functools.partial(get_downloads, args.downloads)


def register(parser):
    add_projects(parser)
    add_downloads(parser)


def run(args):
    return run_projects(
        args, ('fit', 'project', 'value'), COLUMNS, downloads=downloads_loader(args))
