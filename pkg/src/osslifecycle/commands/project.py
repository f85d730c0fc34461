"""
Forecast maturity, lifetime developer-months and lifetime growth.
"""
from osslifecycle.cli_util import add_projects, run_projects

COLUMNS = [
    ('t', lambda r: r.forecast.t_current),
    ('T', lambda r: r.forecast.T_maturation),
    ('yrs', lambda r: r.forecast.remaining_years),
    ('m', lambda r: r.forecast.lifetime_dev_months),
    ('current growth', lambda r: r.forecast.current_growth),
    ('lifetime growth', lambda r: r.forecast.lifetime_growth),
]


def register(parser):
    add_projects(parser)
    parser.add_argument(
        '--threshold',
        help='developers per month at maturity',
        type=float,
        default=None)


def run(args):
    return run_projects(
        args, ('fit', 'project'), COLUMNS, maturation_threshold=args.threshold)
