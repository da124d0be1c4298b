"""Perception-output runtime monitor.

Occupancy-grid sensor checks and motion plausibility checks over object
streams, plus the synthetic world, LiDAR model, fault injector and the
evaluation helpers backing them. Everything here is a thin re-export of the
C++ core.
"""

from percmon._core import *  # noqa: F401,F403
from percmon._core import __version__  # noqa: F401
