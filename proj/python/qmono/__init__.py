"""q-fractional operators on the time scale T_q and checks of their monotonicity theorems."""

from ._qmono import *  # noqa: F401,F403
from ._qmono import __doc__  # noqa: F401
