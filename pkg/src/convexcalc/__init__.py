"""Exact calculus of slopes, bypasses and dividing sets on convex surfaces."""
from .farey import (
    INF, ZERO, Direction, GluingMatrix, Slope, SlopeArc, apply, canonical,
    farey_neighbors, intersection_number, normalize_to, parse_matrix,
    parse_slope,
)
from .seifert import FrameId, poincare_preset, transport
from .surfaces import DividingSet, FramedTorus, parse_dividing_set
from .bypass import BypassMove, Side, attach_bypass_torus
from .replay import builtin_poincare, parse_scenario, run

__version__ = "0.1.0"
