"""Flat band workbench: scalar moire model numerics and the 1d complex-WKB toy."""

from _flatband import *  # noqa: F401,F403
from _flatband import __version__  # noqa: F401
