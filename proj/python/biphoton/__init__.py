"""Transverse-momentum distributions of noncollinear type-I SPDC biphotons."""

from ._biphoton import *  # noqa: F401,F403
from ._biphoton import __doc__  # noqa: F401
