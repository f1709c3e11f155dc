"""Exact Seshadri constants on principally polarized abelian surfaces with
real multiplication."""
from .exactfield import SqrtRat, Surd, parse_rat, rat_str
from .lattice import BundleClass, OrderSpec, Ring
from .pell import PellSolution, pell1, pell1_bounded, pell4
from .bounds import PellBound, SubmaxInterval, candidate_set, pell_bound, qbound_from_length
from .seshadri import (
    CurveCertificate,
    SeshadriResult,
    Segment,
    certify_curve,
    epsilon,
    epsilon_class,
    sample_function,
    submax_curves_at,
)

__all__ = [
    "BundleClass",
    "CurveCertificate",
    "OrderSpec",
    "PellBound",
    "PellSolution",
    "Ring",
    "Segment",
    "SeshadriResult",
    "SqrtRat",
    "SubmaxInterval",
    "Surd",
    "candidate_set",
    "certify_curve",
    "epsilon",
    "epsilon_class",
    "parse_rat",
    "pell1",
    "pell1_bounded",
    "pell4",
    "pell_bound",
    "qbound_from_length",
    "rat_str",
    "sample_function",
    "submax_curves_at",
]
