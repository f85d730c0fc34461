"""
Per-project orchestration shared by all subcommands and batch runs.
"""
import pathlib
import logging
import concurrent.futures

from osslifecycle.errors import LifecycleError, DataError
from osslifecycle.models import LifecycleReport, Maturation
from osslifecycle.ingest import load_commit_log, aggregate_monthly, read_series
from osslifecycle.providers.github import cache_path
from osslifecycle.engagement import fit_bass
from osslifecycle.growth import calibrate_growth
from osslifecycle.forecast import project_lifecycle, stability_experiment, maturation_crossing
from osslifecycle.valuation import value_project, lookup_downloads

__all__ = ['STAGES', 'project_name', 'load_series', 'analyze', 'analyze_safe', 'analyze_many']

log = logging.getLogger(__name__)

STAGES = ('fit', 'project', 'value', 'stability')
INVALID_FIT = 'invalid fit'


def project_name(project):
    """Display name of a project argument: the file stem for series CSVs and commit logs."""
    path = pathlib.Path(project)
    if path.suffix in ('.csv', '.jsonl'):
        return path.stem
    return project


def load_series(project, cfg):
    """
    Monthly series for `project`: a series CSV, a commit log, or a repository whose commits are
    in the cache directory.
    """
    path = pathlib.Path(project)
    if path.suffix == '.csv' and path.exists():
        series = read_series(path)
        if cfg.cutoff_month:
            series = series.truncate(
                len([m for m in series.months if m <= cfg.cutoff_month]))
        return series
    if path.suffix == '.jsonl' and path.exists():
        commits, name = load_commit_log(path, bot_suffixes=cfg.bot_suffixes), project_name(path)
    else:
        cached = cache_path(cfg.cache_dir, project)
        if not cached.exists():
            raise DataError('no cached commits for {0} in {1}; run fetch first'.format(
                project, cfg.cache_dir))
        commits, name = load_commit_log(cached, bot_suffixes=cfg.bot_suffixes), project
    return aggregate_monthly(
        commits,
        project=name,
        cutoff=cfg.cutoff_month,
        exclude_bots=cfg.exclude_bots,
        exclude_merges=cfg.exclude_merges)


def analyze(series, cfg, stages=STAGES, downloads=None):
    """
    Run the requested stages on one series and collect the results in a `LifecycleReport`.

    An invalid engagement fit is reported, not raised: later stages are skipped and only the
    nominal maturation month is kept.
    """
    if not len(series):
        raise DataError('{0}: empty series'.format(series.project))
    report = LifecycleReport(project=series.project, series=series)
    report.bass = fit_bass(series, regressor=cfg.regressor)
    report.growth = calibrate_growth(series, report.bass, step=cfg.step)
    if not report.bass.valid:
        report.status = INVALID_FIT
        report.warnings.append('engagement fit invalid (p={0:.5f}, q={1:.5f}, m={2:.3f})'.format(
            report.bass.p, report.bass.q, report.bass.m))
        T = maturation_crossing(report.bass, threshold=cfg.threshold)
        if T is not None:
            report.maturation = Maturation(T=T, threshold=cfg.threshold)
            report.warnings.append('T={0:.2f} from an invalid engagement fit'.format(T))
        return report

    if 'project' in stages or 'value' in stages:
        report.forecast = project_lifecycle(
            report.bass, report.growth, series, threshold=cfg.threshold, step=cfg.step)
        if report.forecast.already_mature:
            report.warnings.append('project already mature')
    if 'value' in stages:
        report.valuation = value_project(
            series, report.forecast, cfg.valuation,
            downloads=lookup_downloads(downloads, series.project))
    if 'stability' in stages:
        report.stability = stability_experiment(
            series,
            fraction=cfg.stability_fraction,
            threshold=cfg.threshold,
            regressor=cfg.regressor,
            step=cfg.step,
            full_fit=(report.bass, report.growth))
        if not report.stability.valid:
            report.warnings.append('truncated engagement fit invalid')
    return report


def analyze_safe(project, cfg, stages=STAGES, downloads=None):
    """
    Load and analyze one project; failures come back as a report with an error status.
    """
    try:
        return analyze(load_series(project, cfg), cfg, stages=stages, downloads=downloads)
    except LifecycleError as e:
        log.error('{0}: {1}'.format(project, e))
        return LifecycleReport(
            project=project_name(project), status='error: {0}'.format(e), warnings=[str(e)])


def analyze_many(projects, cfg, stages=STAGES, downloads=None):
    """
    Analyze projects in a process pool of `cfg.workers`; results keep the input order.
    """
    if cfg.workers <= 1 or len(projects) <= 1:
        return [analyze_safe(p, cfg, stages, downloads) for p in projects]
    with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        futures = [pool.submit(analyze_safe, p, cfg, stages, downloads) for p in projects]
        return [f.result() for f in futures]
