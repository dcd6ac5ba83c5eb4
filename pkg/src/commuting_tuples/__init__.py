"""Computational checks on spaces of commuting n-tuples in SO(3), SU(2) and U(2)."""

from .components import PLUS, ComponentLabel, canonicalize, classify, count_closed_form, count_enumerate, count_recurrence, enumerate_components
from .fpgroups import FpGroup, abelianization, is_elementary_abelian_2, presentation_pi1_plus, presentation_q8, todd_coxeter
from .homology import BettiProfile, F2CellComplex, betti_f2, betti_formula, build_plus_model, edge_path_pi1, euler_characteristic
from .lifting import decompose_u2, lift_tuple, lifted_commutator_sign
from .rotations import DEFAULT_TOL, Quaternion, RotationElement, U2Element, commutes, pair_structure, project

__version__ = "0.1.0"
