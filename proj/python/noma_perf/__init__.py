"""Outage analysis of NOMA with fixed-gain AF relaying over Nakagami-m fading."""

from ._noma_perf import *  # noqa: F401,F403
from ._noma_perf import __doc__  # noqa: F401
