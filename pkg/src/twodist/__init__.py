"""Exact verification toolkit for 2-distance 4-coloring of planar subcubic graphs.

Subpackages:

- :mod:`twodist.graphs`       graph substrate, girth/distance, rotation systems
- :mod:`twodist.coloring`     exact list-coloring search over the 4-color palette
- :mod:`twodist.configs`      reducible-configuration engine and helper lemma checks
- :mod:`twodist.discharging`  exact charge bookkeeping and the full local audit
- :mod:`twodist.gadgets`      the girth-11 gadget constructions and their verification
- :mod:`twodist.pipeline`     batch verification runs producing JSON report bundles
- :mod:`twodist.cli`          command-line front end
"""

from .graphs import (
    Graph,
    GraphError,
    RotationSystem,
    check_planar_embedding,
    distance,
    eq1_balance,
    girth,
    square,
    trace_faces,
)
from .coloring import (
    SolveOutcome,
    canonicalize,
    chi2,
    enumerate_colorings,
    solve,
    validate_coloring,
)

__all__ = [
    "Graph",
    "GraphError",
    "RotationSystem",
    "SolveOutcome",
    "canonicalize",
    "check_planar_embedding",
    "chi2",
    "distance",
    "enumerate_colorings",
    "eq1_balance",
    "girth",
    "solve",
    "square",
    "trace_faces",
    "validate_coloring",
]
