"""Split likelihood ratio tests with universal finite-sample validity.

The heavy lifting lives in the C++ extension; this package re-exports it.
"""

from ._slrt import *  # noqa: F401,F403
from ._slrt import __version__  # noqa: F401
