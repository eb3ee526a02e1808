from crashwatch._core import *  # noqa: F401,F403
from crashwatch._core import __version__  # noqa: F401
