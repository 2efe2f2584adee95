"""Limits of the C*-flow on nilpotent Hitchin pairs over the projective line."""
from .cli import dump_instance, load_instance, parse_instance
from .errors import *  # noqa: F401,F403
from .filtration import Filtration, GradedData, graded, kernel_filtration, rank3_filtration
from .flow import (
    adapted_frame,
    conjugate_flow,
    extension_weight_table,
    flow_limit,
    forced_flow,
    run_flow,
)
from .forms import ZERO, BinaryForm, LaurentZ, Poly, X, Y
from .limits import Case, Classification, HodgeBundle, check_slope_constraints, classify, limit
from .model import BundleModel, HitchinImage, HitchinPair, hitchin_map, nilpotency_order, validate
from .polymat import SubbundleBasis, TwistedMatrix, kernel_basis, saturate, splitting_type
from .stability import invariant_candidates, is_stable, is_stable_hodge
from .testkit import GenParams, random_pair

__version__ = "0.1.0"
