"""Exact PL maps of the line, conjugacy and twisted conjugacy in Thompson's group F."""

from ._core import (
    PLMap,
    ParseError,
    ThompsonError,
    barred_fix_components,
    classify,
    compose,
    conj_in_F,
    conjugate,
    eval_word,
    f2xf2_generators,
    fixed_components,
    odp_decide,
    rinfty_family_F,
    stab_witness,
    tcp,
    transport_build,
    transport_exists,
)

__all__ = [
    "PLMap",
    "ParseError",
    "ThompsonError",
    "barred_fix_components",
    "classify",
    "compose",
    "conj_in_F",
    "conjugate",
    "eval_word",
    "f2xf2_generators",
    "fixed_components",
    "odp_decide",
    "rinfty_family_F",
    "stab_witness",
    "tcp",
    "transport_build",
    "transport_exists",
]
