"""
Run the full analysis: fits, forecast, stability and valuation.
"""
from osslifecycle.cli_util import add_projects, run_projects
from osslifecycle.commands.value import add_downloads, downloads_loader
from osslifecycle.pipeline import STAGES

COLUMNS = [
    ('p', lambda r: r.bass.p),
    ('q', lambda r: r.bass.q),
    ('m', lambda r: r.bass.m),
    ('T', lambda r: r.forecast.T_maturation),
    ('yrs', lambda r: r.forecast.remaining_years),
    ('supply lifetime', lambda r: r.valuation.supply_lifetime),
]


def register(parser):
    add_projects(parser)
    add_downloads(parser)
    parser.add_argument(
        '--normalized',
        help='also write the normalized engagement curve',
        action='store_true',
        default=False)
    parser.add_argument(
        '--fraction',
        help='share of months used for the truncated fit',
        type=float,
        default=None)


def run(args):
    return run_projects(
        args,
        STAGES,
        COLUMNS,
        normalized=args.normalized,
        downloads=downloads_loader(args),
        stability_fraction=args.fraction)
