"""
Fetch the commit history of GitHub repositories into the local cache.
"""
from osslifecycle.cli_util import add_common, get_config
from osslifecycle.ingest import aggregate_monthly
from osslifecycle.providers.github import fetch_commits, cache_path


def register(parser):
    add_common(parser)
    parser.add_argument('repo', nargs='+', help='repository as owner/name')
    parser.add_argument(
        '--token',
        help='GitHub API token (default: $GITHUB_TOKEN)',
        default=None)
    parser.add_argument(
        '--since',
        help='only list commits from this month on, YYYY-MM',
        default=None)
    parser.add_argument(
        '--concurrency',
        help='parallel requests for commit statistics',
        type=int,
        default=None)


def run(args):
    cfg = args.cfg = get_config(args, fetch_concurrency=args.concurrency)
    for repo in args.repo:
        commits = list(fetch_commits(
            repo,
            cfg.cache_dir,
            token=args.token,
            since=args.since,
            concurrency=cfg.fetch_concurrency,
            bot_suffixes=cfg.bot_suffixes,
            progress=True))
        series = aggregate_monthly(
            commits,
            project=repo,
            cutoff=cfg.cutoff_month,
            exclude_bots=cfg.exclude_bots,
            exclude_merges=cfg.exclude_merges)
        print('{0}: {1} commits, {2} months, cached in {3}'.format(
            repo, len(commits), len(series), cache_path(cfg.cache_dir, repo)))
