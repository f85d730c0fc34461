"""
Refit on the first part of each series and compare the projections with the full fit.
"""
from osslifecycle.cli_util import add_projects, run_projects

COLUMNS = [
    ('months', lambda r: r.stability.months_truncated),
    ('growth divergence', lambda r: r.stability.growth_divergence),
    ('engagement divergence', lambda r: r.stability.engagement_divergence),
]


def register(parser):
    add_projects(parser)
    parser.add_argument(
        '--fraction',
        help='share of months used for the truncated fit',
        type=float,
        default=None)


def run(args):
    return run_projects(
        args, ('fit', 'stability'), COLUMNS, stability_fraction=args.fraction)
