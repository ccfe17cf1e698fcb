"""Pulse-level quantum control toolkit for entanglement preparation.

The heavy lifting lives in the compiled extension; this package re-exports it.
"""

from pulseopt._core import *  # noqa: F401,F403
from pulseopt._core import __doc__  # noqa: F401

__version__ = "0.1.0"
