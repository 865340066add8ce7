"""Multiband rectenna chain: combiner design, rectifier simulation and sweeps."""

from ._rectenna import *  # noqa: F401,F403
from ._rectenna import __doc__  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
