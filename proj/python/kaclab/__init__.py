"""Workbench for return-time identities of measure-preserving group actions.

Exact rationals cross the C++ boundary as "p/q" strings; use
fractions.Fraction to compute with them.
"""

try:
    from ._kaclab import *  # noqa: F401,F403
    from ._kaclab import __version__  # noqa: F401
except ImportError:  # development layout: extension module on sys.path
    from _kaclab import *  # noqa: F401,F403
    from _kaclab import __version__  # noqa: F401
