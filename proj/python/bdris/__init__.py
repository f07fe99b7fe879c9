"""Grouping-strategy and scattering-matrix optimization for beyond diagonal RIS."""

from ._bdris import *  # noqa: F401,F403
from ._bdris import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
