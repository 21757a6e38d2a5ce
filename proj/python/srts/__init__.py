from srts._core import *  # noqa: F401,F403
from srts._core import __version__  # noqa: F401
