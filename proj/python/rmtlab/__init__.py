"""Numerical laboratory for bulk spectral statistics of real i.i.d. matrices.

The heavy lifting lives in the compiled extension; this package re-exports
its operations.
"""

from ._rmtlab import *  # noqa: F401,F403
from ._rmtlab import __version__  # noqa: F401
