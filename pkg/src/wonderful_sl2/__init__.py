"""Exact p-adic checks of the wonderful compactifications of SL(2) symmetric varieties."""

from .errors import ConfigError, WonderfulError
from .extension import ExtField, ExtKind, ExtScalar
from .involution import DiagonalSwap, GaloisConj, Inner, Mode, galois, inner, psi
from .limits import Converged, Direction, Diverged, LimitFamily, detect_limit, predicted_accumulation
from .matgroup import Mat2
from .padic import PadicScalar, SquareClass, make_field, square_class, sqrt
from .projective import ProjEnd, ProjLine, RankClass, canonicalize, rank_class
from .report import Check, Report, emit_report
from .suites import Config, run_suite

__version__ = "0.1.0"

__all__ = [
    "Check", "Config", "ConfigError", "Converged", "DiagonalSwap", "Direction", "Diverged",
    "ExtField", "ExtKind", "ExtScalar", "GaloisConj", "Inner", "LimitFamily", "Mat2", "Mode",
    "PadicScalar", "ProjEnd", "ProjLine", "RankClass", "Report", "SquareClass", "WonderfulError",
    "canonicalize", "detect_limit", "emit_report", "galois", "inner", "make_field", "predicted_accumulation",
    "psi", "rank_class", "run_suite", "square_class", "sqrt",
]
