"""
Exception hierarchy. Each class carries the exit code the command line reports for it.
"""

__all__ = [
    'LifecycleError', 'DataError', 'CommitLogError', 'ModelError', 'IntegrationError',
    'NetworkError', 'AuthenticationError', 'RateLimitError', 'RepositoryNotFound']


class LifecycleError(Exception):
    exit_code = 2


class DataError(LifecycleError, ValueError):
    pass


class CommitLogError(DataError):
    def __init__(self, path, lineno, msg):
        self.path, self.lineno = path, lineno
        super().__init__('{0}:{1}: {2}'.format(path, lineno, msg))


class ModelError(LifecycleError, ValueError):
    pass


class IntegrationError(ModelError):
    def __init__(self, step, params, msg='non-finite state'):
        self.step, self.params = step, params
        super().__init__('{0} at step {1} with {2}'.format(msg, step, params))


class NetworkError(LifecycleError):
    exit_code = 3


class AuthenticationError(NetworkError):
    def __init__(self, credential, status=401):
        self.credential = credential
        super().__init__(
            'GitHub rejected the request (HTTP {0}); check the token given via {1}'.format(
                status, credential))


class RateLimitError(NetworkError):
    def __init__(self, reset):
        self.reset = reset
        super().__init__('GitHub rate limit exhausted; resets at {0}'.format(
            reset.isoformat() if reset else 'an unknown time'))


class RepositoryNotFound(NetworkError):
    def __init__(self, repo):
        self.repo = repo
        super().__init__('repository not found: {0}'.format(repo))
