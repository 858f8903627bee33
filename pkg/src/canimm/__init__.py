"""Finite-horizon constructions and checkers for canonical immunity,
computable Mathias forcing, and a block-avoidance Schnorr test."""

from .finitesets import FiniteSet, SetPrefix, decode_finite_set, encode_finite_set
from .machine import (
    Outcome,
    eval_bounded,
    eval_oracle_bounded,
    fixed_point,
    pair,
    smn,
    unpair,
    we_bounded,
)
from .numberings import Numbering, Registry, default_pool, stage_approx, standard_numbering
from .schnorr import DyadicRational, block, check_schnorr_bound, measure_U_trunc

__all__ = [
    "FiniteSet",
    "SetPrefix",
    "decode_finite_set",
    "encode_finite_set",
    "Outcome",
    "eval_bounded",
    "eval_oracle_bounded",
    "fixed_point",
    "pair",
    "smn",
    "unpair",
    "we_bounded",
    "Numbering",
    "Registry",
    "default_pool",
    "stage_approx",
    "standard_numbering",
    "DyadicRational",
    "block",
    "check_schnorr_bound",
    "measure_U_trunc",
]
