#
from osslifecycle.models import *  # noqa: F401, F403
from osslifecycle.errors import *  # noqa: F401, F403
from osslifecycle.engagement import *  # noqa: F401, F403
from osslifecycle.growth import *  # noqa: F401, F403
from osslifecycle.forecast import *  # noqa: F401, F403
from osslifecycle.valuation import *  # noqa: F401, F403

__version__ = '0.1.0.dev0'
