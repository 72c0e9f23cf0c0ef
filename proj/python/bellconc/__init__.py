"""Nonlocal fraction, concurrence and coincidence-count analysis for two- and three-qubit states."""

import os as _os

_bundled = _os.path.join(_os.path.dirname(__file__), "data", "inequalities")
if "BELLCONC_INEQ_DIR" not in _os.environ and _os.path.isdir(_bundled):
    _os.environ["BELLCONC_INEQ_DIR"] = _bundled

from ._core import *  # noqa: E402,F401,F403
from ._core import __doc__  # noqa: E402,F401
