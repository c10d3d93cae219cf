"""Bipartite correlation boxes: PR, local and quantum boxes, CHSH bounds and checks."""
from .box_model import (
    BipartiteBox,
    Valuation,
    chsh,
    correlator,
    deterministic_box,
    is_nonsignaling,
    marginal_a,
    marginal_b,
    mix,
    new_box,
    pr_box,
    sequential_symmetry_check,
    signaling_box,
    uniform_box,
)
from .chsh_optimizer import classical_max, nonsignaling_max, seesaw_quantum_max
from .toy_model import chsh_from_model, paper_inconsistency_report, pr_toy_model

__version__ = "0.1.0"
