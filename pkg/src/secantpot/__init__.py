"""Secant-method dynamics on C^2: potentials, Bottcher-type coordinates and basin images."""

from .errors import *  # noqa: F401,F403
from .mero import MeroFn, RootInfo, certify_root, divided_difference, eval_jet, find_roots, parse_function
from .dynamics import (
    GOLDEN,
    GoldenConstants,
    OrbitOutcome,
    PlanePoint,
    g_factor,
    g_n_log_product,
    jacobian,
    orbit,
    secant_step,
)
from .bottcher import (
    BottcherContext,
    PotentialSample,
    anchored_log,
    direct_limit_h,
    germ_H,
    germ_jacobian_at_fixed,
    green,
    make_context,
    modulus_Hhat,
    partial_product_Hn,
    potential_h,
)

__version__ = "0.1.0"
