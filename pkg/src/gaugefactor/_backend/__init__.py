"""Kernel backend selection.

The compiled Cython kernel is used when available; otherwise the NumPy
fallback.  ``GAUGEFACTOR_PURE=1`` forces the fallback (used by the backend
benchmark and the cross-backend tests).
"""

import os

from . import pure as _pure

BACKEND = "pure"
simplex_solve = _pure.simplex_solve
enumerate_basic_points = _pure.enumerate_basic_points

if os.environ.get("GAUGEFACTOR_PURE", "") != "1":
    try:
        from . import _core as _compiled

        simplex_solve = _compiled.simplex_solve
        enumerate_basic_points = _compiled.enumerate_basic_points
        BACKEND = "compiled"
    except ImportError:
        pass

STATUS_OPTIMAL = _pure.STATUS_OPTIMAL
STATUS_INFEASIBLE = _pure.STATUS_INFEASIBLE
STATUS_UNBOUNDED = _pure.STATUS_UNBOUNDED
STATUS_CYCLE_LIMIT = _pure.STATUS_CYCLE_LIMIT
