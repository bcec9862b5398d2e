"""Chord diagram expansions for Dyson-Schwinger equations.

The combinatorial side sums weighted monomials over decorated rooted
connected chord diagrams; the analytic side solves the equation by
truncated-series iteration.  Both are exact.
"""

__version__ = "0.1.0"

from .algebra import BiSeries, Poly, RhoSeries, apply_derivative_operator, gen_binomial
from .compose import insert, normalize, root_share_decompose
from .diagram import ChordDiagram, DiagramError, enumerate_connected, enumerate_decorated, validate_diagram
from .expansion import G_comb, chord_stats, g_comb, monomial_ahat, weight, weight_hat
from .identities import IDENTITIES, verify_all, verify_identity
from .oracle import DseSpec, Primitive, compare, g_dif_rge, solve_dse, symbolic_spec, yukawa_bk
from .tree import admissible_labelings, branch_left_vector, diamond_split, insertion_tree, is_admissible

__all__ = [
    "BiSeries",
    "ChordDiagram",
    "DiagramError",
    "DseSpec",
    "G_comb",
    "IDENTITIES",
    "Poly",
    "Primitive",
    "RhoSeries",
    "admissible_labelings",
    "apply_derivative_operator",
    "branch_left_vector",
    "chord_stats",
    "compare",
    "diamond_split",
    "enumerate_connected",
    "enumerate_decorated",
    "g_comb",
    "g_dif_rge",
    "gen_binomial",
    "insert",
    "insertion_tree",
    "is_admissible",
    "monomial_ahat",
    "normalize",
    "root_share_decompose",
    "solve_dse",
    "symbolic_spec",
    "validate_diagram",
    "verify_all",
    "verify_identity",
    "weight",
    "weight_hat",
    "yukawa_bk",
]
