"""Search for mixed Moore Cayley graphs of diameter 2."""

from .feasibility import (FeasibleParams, bosak_feasible, enumerate_feasible,
                          moore_bound_mixed)
from .graph import MixedGraph, from_cayley, kautz, verify_moore
from .groups import Group, build_group

__all__ = ["FeasibleParams", "Group", "MixedGraph", "bosak_feasible", "build_group",
           "enumerate_feasible", "from_cayley", "kautz", "moore_bound_mixed", "verify_moore"]
