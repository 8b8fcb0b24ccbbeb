"""Points of P(End(K^2)) and P^1(K) in canonical form."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

from .errors import SingularMatrix, ZeroArgument, ZeroMatrix
from .extension import ExtField, ExtScalar
from .matgroup import Mat2
from .padic import PadicScalar

INF = math.inf

POSITIONS = ("(1,1)", "(1,2)", "(2,1)", "(2,2)")


def truncate(x, abs_prec):
    """Forget every digit of ``x`` at or beyond p^abs_prec."""
    if isinstance(x, ExtScalar):
        return ExtScalar(x.ext, x.a._truncate_abs(abs_prec), x.b._truncate_abs(abs_prec))
    return x._truncate_abs(abs_prec)


def _pivot_index(entries) -> int:
    best, best_v = None, INF
    for i, x in enumerate(entries):
        if x.is_zero:
            continue
        if best is None or x.valuation < best_v:
            best, best_v = i, x.valuation
    if best is None:
        raise ZeroMatrix("all entries vanish")
    return best


@dataclass(frozen=True, eq=False)
class ProjEnd:
    """Projective class [M] with the first minimal-valuation entry scaled to 1."""

    mat: Mat2
    pivot: int

    @property
    def entries(self) -> tuple:
        return self.mat.entries()

    @property
    def field(self):
        return self.mat.field

    def rounded(self, depth) -> "ProjEnd":
        if depth == INF:
            return self
        return ProjEnd(self.mat.map(lambda x: truncate(x, depth)), self.pivot)

    def in_cell(self, index: int) -> bool:
        """Whether the point lies in the chart where entry ``index`` is nonzero."""
        return not self.entries[index].is_zero

    def render(self) -> str:
        parts = [("*" if i == self.pivot else "") + x.compact() for i, x in enumerate(self.entries)]
        return f"[{parts[0]}, {parts[1]}; {parts[2]}, {parts[3]}]"

    def __repr__(self) -> str:
        return f"ProjEnd{self.render()}"


def canonicalize(M) -> ProjEnd:
    if isinstance(M, ProjEnd):
        return M
    entries = M.entries()
    i = _pivot_index(entries)
    inv = entries[i].inverse()
    scaled = [x * inv for x in entries]
    scaled[i] = entries[i].coerce(1)
    return ProjEnd(Mat2(*scaled), i)


def proj_point(ring, a, b, c, d) -> ProjEnd:
    return canonicalize(Mat2.of(ring, a, b, c, d))


def proj_depth(A: ProjEnd, B: ProjEnd):
    """Agreement depth of B with A in the chart of A's pivot.

    Symmetric whenever both points share a pivot position; 0 when B has a
    zero where A has its pivot.
    """
    i = A.pivot
    bi = B.entries[i]
    if bi.is_zero:
        return 0
    inv = bi.inverse()
    d = min((x - y * inv).order for x, y in zip(A.entries, B.entries))
    return max(0, d)


class RankClass(Enum):
    INVERTIBLE = "Invertible"
    RANK_ONE = "RankOne"


def rank_class(A: ProjEnd, tau: int = None) -> RankClass:
    if tau is None:
        tau = A.field.N - 2
    return RankClass.RANK_ONE if A.mat.det().order >= tau else RankClass.INVERTIBLE


@dataclass(frozen=True, eq=False)
class ProjLine:
    """Point [x : y] of P^1 with its smaller-valuation coordinate equal to 1."""

    x: Any
    y: Any

    @property
    def is_infinity(self) -> bool:
        return self.x.is_zero

    def affine(self):
        """y/x, or None at [0 : 1]."""
        return None if self.x.is_zero else self.y / self.x

    def render(self) -> str:
        return f"[{self.x.compact()} : {self.y.compact()}]"

    def __repr__(self) -> str:
        return f"ProjLine{self.render()}"


def make_line(x, y) -> ProjLine:
    if x.is_zero and y.is_zero:
        raise ZeroArgument("[0 : 0] is not a point")
    one = x.coerce(1)
    if y.is_zero or (not x.is_zero and x.valuation <= y.valuation):
        return ProjLine(one, y / x)
    return ProjLine(x / y, one)


def line_point(ring, x, y) -> ProjLine:
    one = ring.one()
    return make_line(one.coerce(x), one.coerce(y))


def moebius(g: Mat2, xi: ProjLine) -> ProjLine:
    if isinstance(xi.x, ExtScalar) and isinstance(g.a, PadicScalar):
        g = g.to_ext(xi.x.ext)
    if g.det().is_zero:
        raise SingularMatrix("Moebius action of a singular matrix")
    return make_line(g.a * xi.x + g.b * xi.y, g.c * xi.x + g.d * xi.y)


def line_depth(xi: ProjLine, eta: ProjLine):
    return max(0, (xi.x * eta.y - xi.y * eta.x).order)


def lift_line(xi: ProjLine, ext: ExtField) -> ProjLine:
    if isinstance(xi.x, ExtScalar):
        return xi
    return ProjLine(ext.embed(xi.x), ext.embed(xi.y))
