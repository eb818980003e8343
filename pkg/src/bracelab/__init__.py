"""Exact brace algebras on graded Hom-spaces, free symmetric braces on trees,
homotopy transfer of A-infinity/L-infinity structures and gauge L-infinity algebras."""

from .braces import nonsym_brace, oudom_guin_brace, sym_brace_hom, symmetrize
from .graded import GradedSpace, MultiMap, OperatorSeries, Vector
from .report import CheckReport
from .signs import Permutation, antisym_koszul_sign, koszul_sign, unshuffles
from .structures import a_infinity_defect, l_infinity_defect
from .transfer import Contraction, transfer_a_infinity, transfer_l_infinity
from .trees import DecoratedTree, TreeLC, free_brace, parse_expression

__all__ = [
    "CheckReport", "Contraction", "DecoratedTree", "GradedSpace", "MultiMap", "OperatorSeries",
    "Permutation", "TreeLC", "Vector", "a_infinity_defect", "antisym_koszul_sign", "free_brace",
    "koszul_sign", "l_infinity_defect", "nonsym_brace", "oudom_guin_brace", "parse_expression",
    "sym_brace_hom", "symmetrize", "transfer_a_infinity", "transfer_l_infinity", "unshuffles",
]
