"""Exact Sigma^1 classification for groups of piecewise-linear homeomorphisms."""
from .characters import (CHI_ELL, CHI_R, NEG_TAU_R, TAU_ELL, GermChar, TabledChar, char_consistency,
                         character_from_json, exceptional_characters, ray_compare)
from .config import RunConfig
from .groups import BallIndex, GroupSpec, ValidationError, enumerate_ball
from .logreal import LogReal, lr_sign
from .pl import IntervalSpec, PLMap, compose, invert, make_plmap
from .sigma import (MEMBER, NONMEMBER, UNKNOWN, GroupContext, MonoidSpec, classify_ray,
                    gamma_chi_components, known_complement, membership_certificate,
                    monoid_property_test, product_complement)
from .verify import verify_certificate

__version__ = "0.1.0"

__all__ = [
    "CHI_ELL", "CHI_R", "NEG_TAU_R", "TAU_ELL", "GermChar", "TabledChar", "char_consistency",
    "character_from_json", "exceptional_characters", "ray_compare", "RunConfig", "BallIndex",
    "GroupSpec", "ValidationError", "enumerate_ball", "LogReal", "lr_sign", "IntervalSpec", "PLMap",
    "compose", "invert", "make_plmap", "MEMBER", "NONMEMBER", "UNKNOWN", "GroupContext",
    "MonoidSpec", "classify_ray", "gamma_chi_components", "known_complement",
    "membership_certificate", "monoid_property_test", "product_complement", "verify_certificate",
]
