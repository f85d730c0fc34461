import pathlib

from termcolor import colored
from clldutils.clilib import PathType, ParserError
from clldutils.markup import Table

from osslifecycle.config import load_config
from osslifecycle.engagement import REGRESSORS
from osslifecycle.errors import ModelError
from osslifecycle.ingest import write_series
from osslifecycle.pipeline import analyze_many
from osslifecycle import report as rp


def add_common(parser):
    parser.add_argument(
        '--config',
        help='path to a key = value config file',
        type=PathType(type='file'),
        default=None)
    parser.add_argument(
        '--cache-dir',
        help='directory holding the commit caches',
        type=pathlib.Path,
        default=None)
    parser.add_argument(
        '--output',
        help='directory to write reports to',
        type=pathlib.Path,
        default=None)
    parser.add_argument(
        '--cutoff',
        help='last month to include, YYYY-MM',
        default=None)


def add_projects(parser):
    add_common(parser)
    parser.add_argument(
        'project',
        nargs='*',
        help='repository owner/name (with cached commits), commit log (.jsonl) or monthly '
             'series (.csv)')
    parser.add_argument(
        '--batch',
        help='file listing one project per line',
        type=PathType(type='file'),
        default=None)
    parser.add_argument(
        '--workers',
        help='number of projects analyzed in parallel',
        type=int,
        default=None)
    parser.add_argument(
        '--regressor',
        help='cumulative engagement regressor for the engagement fit',
        choices=REGRESSORS,
        default=None)


def get_config(args, **kw):
    """
    Settings from config file, environment and command line; invalid values are usage errors.
    """
    try:
        return load_config(
            getattr(args, 'config', None),
            cache_dir=getattr(args, 'cache_dir', None),
            output_dir=getattr(args, 'output', None),
            cutoff_month=getattr(args, 'cutoff', None),
            workers=getattr(args, 'workers', None),
            regressor=getattr(args, 'regressor', None),
            **kw)
    except ValueError as e:
        raise ParserError(str(e))


def get_projects(args, cfg):
    projects = list(args.project)
    if args.batch:
        projects.extend(
            line.strip() for line in args.batch.read_text(encoding='utf8').splitlines()
            if line.strip() and not line.strip().startswith('#'))
    projects = projects or list(cfg.projects)
    if not projects:
        raise ParserError('no project given')
    return projects


def warning(args, msg, project=None, warnings=None):
    if project:
        msg = '{0}: {1}'.format(colored(project, 'blue', attrs=['bold']), msg)
    args.log.warning(msg)
    if warnings is not None:
        warnings.append(msg)


def _write_project(args, cfg, report, normalized=False):
    outdir = rp.project_dir(cfg.output_dir, report.project)
    rp.write_json(report, cfg.output_dir, log=args.log)
    if report.series is None:
        return
    write_series(report.series, outdir / 'series.csv', log=args.log)
    if not report.bass.valid:
        return
    rp.write_csv(
        outdir / 'engagement.csv',
        rp.ENGAGEMENT_HEADER,
        rp.engagement_curve_rows(report.series, report.bass),
        log=args.log)
    rp.write_csv(
        outdir / 'growth.csv',
        rp.GROWTH_HEADER,
        rp.growth_curve_rows(report.series, report.bass, report.growth, step=cfg.step),
        log=args.log)
    if report.forecast:
        rp.write_csv(
            outdir / 'phase.csv', rp.PHASE_HEADER, rp.phase_rows(report.forecast),
            log=args.log)
    if report.stability and report.stability.grid is not None:
        rp.write_csv(
            outdir / 'stability.csv', rp.STABILITY_HEADER, rp.stability_rows(report),
            log=args.log)
    if normalized:
        try:
            rp.write_csv(
                outdir / 'normalized.csv',
                rp.NORMALIZED_HEADER,
                rp.normalized_curve_rows(report.bass),
                log=args.log)
        except ModelError as e:
            warning(args, str(e), project=report.project)
    outdir.joinpath('report.md').write_text(rp.markdown(report), encoding='utf8')


def print_summary(reports, columns):
    """
    :param columns: list of (header, function: report -> value) pairs.
    """
    table = Table('project', *[c[0] for c in columns], 'status')
    for report in reports:
        row = [report.project]
        for _, getter in columns:
            try:
                row.append(rp.fmt(getter(report)))
            except (AttributeError, TypeError):
                row.append('')
        row.append(report.status)
        table.append(row)
    print(table.render())


def run_projects(args, stages, columns, normalized=False, downloads=None, **kw):
    """
    Analyze the selected projects, write per-project outputs and batch tables.

    :return: exit code, 2 if any project failed or could not be fitted.
    """
    cfg = args.cfg = get_config(args, **kw)
    projects = get_projects(args, cfg)
    if callable(downloads):
        downloads = downloads(cfg, projects)
    reports = analyze_many(projects, cfg, stages=stages, downloads=downloads)

    warnings = []
    for report in reports:
        for msg in report.warnings:
            warning(args, msg, project=report.project, warnings=warnings)
        _write_project(args, cfg, report, normalized=normalized)
    if len(reports) > 1:
        rp.write_tables(reports, cfg.output_dir, log=args.log)
    print_summary(reports, columns)
    if any(r.status != 'ok' for r in reports):
        return 2
    return 0
