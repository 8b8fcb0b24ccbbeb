"""2x2 matrices over F or E, the standard subgroups of SL(2) and a sampler."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

from .errors import DegenerateSampler, NonInvertibleDiagonal, NotUnimodular, PivotZero, SingularMatrix
from .extension import ExtField, ExtScalar, random_ext_scalar
from .padic import FieldParams, random_scalar

INF = math.inf

MAX_RETRIES = 16


def ring_of(x):
    """The FieldParams or ExtField a scalar lives in."""
    return x.ext if isinstance(x, ExtScalar) else x.field


def base_field(ring) -> FieldParams:
    return ring.base if isinstance(ring, ExtField) else ring


@dataclass(frozen=True, eq=False)
class Mat2:
    """The matrix [a, b; c, d]; all four entries live in one ring."""

    a: Any
    b: Any
    c: Any
    d: Any

    @classmethod
    def identity(cls, ring) -> "Mat2":
        return cls(ring.one(), ring.zero(), ring.zero(), ring.one())

    @classmethod
    def of(cls, ring, a, b, c, d) -> "Mat2":
        """Build from ints/Fractions/scalars, coercing into ``ring``."""
        one = ring.one()
        return cls(*(one.coerce(x) for x in (a, b, c, d)))

    @property
    def ring(self):
        return ring_of(self.a)

    @property
    def field(self) -> FieldParams:
        return base_field(self.ring)

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def map(self, fn) -> "Mat2":
        return Mat2(fn(self.a), fn(self.b), fn(self.c), fn(self.d))

    def det(self):
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self) -> "Mat2":
        return self.map(lambda x: -x)

    def scale(self, s) -> "Mat2":
        return self.map(lambda x: x * s)

    def adjugate(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def inv(self) -> "Mat2":
        det = self.det()
        if det.is_zero:
            raise SingularMatrix("determinant vanishes at working precision")
        return self.adjugate().scale(det.inverse())

    def conj(self) -> "Mat2":
        return self.map(lambda x: x.conj())

    def to_ext(self, ext: ExtField) -> "Mat2":
        if isinstance(self.a, ExtScalar):
            return self
        return self.map(ext.embed)

    def rebase(self, base: FieldParams, exact: bool = False) -> "Mat2":
        """Move every entry to the base field ``base`` (or its extension)."""
        return self.map(lambda x: x.rebase(base, exact))

    def render(self) -> str:
        return "[" + ", ".join(x.compact() for x in (self.a, self.b)) + "; " + ", ".join(
            x.compact() for x in (self.c, self.d)
        ) + "]"

    def __repr__(self) -> str:
        return f"Mat2{self.render()}"


def det(g: Mat2):
    return g.det()


def mat_mul(g: Mat2, h: Mat2) -> Mat2:
    return g @ h


def mat_inv(g: Mat2) -> Mat2:
    return g.inv()


def _scale_of(*mats: Mat2):
    vals = [x.fval for m in mats for x in m.entries() if not x.is_zero]
    return min(vals) if vals else 0


def mat_depth(A: Mat2, B: Mat2):
    """Agreement depth of two matrices, relative to their largest entry."""
    diff = min((x - y).order for x, y in zip(A.entries(), B.entries()))
    return diff if diff == INF else diff - _scale_of(A, B)


def sl2_depth(g: Mat2):
    """Digits to which det(g) = 1, relative to the size of the terms of det."""
    ad, bc = g.a * g.d, g.b * g.c
    resid = (ad - bc - 1).order
    scale = min(0, ad.fval, bc.fval)
    return resid - scale


def is_sl2(g: Mat2, depth: int = None) -> bool:
    if depth is None:
        depth = g.field.N - 2
    return sl2_depth(g) >= depth


def torus(x) -> Mat2:
    if x.is_zero:
        raise NonInvertibleDiagonal("torus parameter is 0")
    z = x.coerce(0)
    return Mat2(x, z, z, x.inverse())


def uplus(y) -> Mat2:
    return Mat2(y.coerce(1), y, y.coerce(0), y.coerce(1))


def uminus(y) -> Mat2:
    return Mat2(y.coerce(1), y.coerce(0), y, y.coerce(1))


def borel_plus(x, y) -> Mat2:
    if x.is_zero:
        raise NonInvertibleDiagonal("Borel diagonal is 0")
    return Mat2(x, y, x.coerce(0), x.inverse())


def borel_minus(x, y) -> Mat2:
    """The lower-triangular element [x, 0; y, 1/x]."""
    if x.is_zero:
        raise NonInvertibleDiagonal("Borel diagonal is 0")
    return Mat2(x, x.coerce(0), y, x.inverse())


def antidiag(m) -> Mat2:
    """A_m = [0, 1; m, 0]."""
    return Mat2(m.coerce(0), m.coerce(1), m, m.coerce(0))


def ldu_decompose(g: Mat2) -> tuple:
    """Factor g = uminus(c/a) @ torus(a) @ uplus(b/a)."""
    if not is_sl2(g):
        raise NotUnimodular(f"det = {g.det().compact()}")
    if g.a.is_zero:
        raise PivotZero("upper-left entry is 0")
    return uminus(g.c / g.a), torus(g.a), uplus(g.b / g.a)


class Shape(Enum):
    GENERIC = "generic"
    BOREL_PLUS = "borel-plus"
    BOREL_MINUS = "borel-minus"
    TORUS = "torus"


def random_element(rng, ring, vmin: int = -2, vmax: int = 2):
    if isinstance(ring, ExtField):
        return random_ext_scalar(rng, ring, vmin, vmax)
    return random_scalar(rng, ring, vmin, vmax)


def sample_sl2(rng, ring, shape: Shape = Shape.GENERIC, vmin: int = -2, vmax: int = 2) -> Mat2:
    """Random element of SL(2) over ``ring`` with entries of bounded valuation."""
    for _ in range(MAX_RETRIES):
        a = random_element(rng, ring, vmin, vmax)
        if shape is Shape.TORUS:
            g = torus(a)
        elif shape is Shape.BOREL_PLUS:
            g = borel_plus(a, random_element(rng, ring, vmin, vmax))
        elif shape is Shape.BOREL_MINUS:
            g = borel_minus(a, random_element(rng, ring, vmin, vmax))
        else:
            b = random_element(rng, ring, vmin, vmax)
            c = random_element(rng, ring, vmin, vmax)
            d = (b * c + 1) / a
            if d.is_zero:
                continue
            g = Mat2(a, b, c, d)
        if is_sl2(g):
            return g
    raise DegenerateSampler(f"no usable {shape.value} sample in {MAX_RETRIES} draws")
