"""
Fit the engagement and growth models.
"""
from osslifecycle.cli_util import add_projects, run_projects

COLUMNS = [
    ('p', lambda r: r.bass.p),
    ('q', lambda r: r.bass.q),
    ('m', lambda r: r.bass.m),
    ('R²', lambda r: r.bass.r_squared),
    ('gamma', lambda r: r.growth.gamma),
    ('lambda', lambda r: r.growth.lam),
    ('phi', lambda r: r.growth.phi),
]


def register(parser):
    add_projects(parser)


def run(args):
    return run_projects(args, ('fit',), COLUMNS)
