"""Python interface to the oligo simulation core."""

from ._oligo import *  # noqa: F401,F403
from ._oligo import __doc__  # noqa: F401

__version__ = "0.1.0"
