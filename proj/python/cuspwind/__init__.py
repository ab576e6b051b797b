"""Python interface to the cuspwind C++ core."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, CuspwindError  # noqa: F401
