"""Lyapunov docking controller and closed-loop simulator for
center-articulated mobile robots.

Everything is implemented in the C++ extension; this package re-exports it.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
