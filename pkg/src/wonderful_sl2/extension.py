"""Quadratic extensions E = F(alpha) with alpha^2 in {S, p, S*p}."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property

from .errors import DivisionByZero, ZeroArgument
from .padic import FieldParams, PadicScalar, random_scalar

INF = math.inf


class ExtKind(Enum):
    UNRAMIFIED = "unram"  # alpha^2 = S
    RAMIFIED_PI = "ram-pi"  # alpha^2 = p
    RAMIFIED_SPI = "ram-spi"  # alpha^2 = S*p

    @property
    def e(self) -> int:
        """Ramification index."""
        return 1 if self is ExtKind.UNRAMIFIED else 2


@dataclass(frozen=True)
class ExtField:
    base: FieldParams
    kind: ExtKind

    @cached_property
    def alpha_sq(self) -> PadicScalar:
        F = self.base
        return {
            ExtKind.UNRAMIFIED: F(F.S),
            ExtKind.RAMIFIED_PI: F(F.p),
            ExtKind.RAMIFIED_SPI: F(F.S * F.p),
        }[self.kind]

    @property
    def e(self) -> int:
        return self.kind.e

    def __call__(self, a=0, b=0) -> "ExtScalar":
        F = self.base
        a = a if isinstance(a, PadicScalar) else F(a)
        b = b if isinstance(b, PadicScalar) else F(b)
        return ExtScalar(self, a, b)

    def over(self, base: FieldParams) -> "ExtField":
        return ExtField(base, self.kind)

    def embed(self, x: PadicScalar) -> "ExtScalar":
        return ExtScalar(self, x, self.base.zero())

    def zero(self) -> "ExtScalar":
        return self(0, 0)

    def one(self) -> "ExtScalar":
        return self(1, 0)

    def alpha(self) -> "ExtScalar":
        return self(0, 1)


class ExtScalar:
    """a + b*alpha with a, b in F."""

    __slots__ = ("ext", "a", "b")

    def __init__(self, ext: ExtField, a: PadicScalar, b: PadicScalar):
        self.ext = ext
        self.a = a
        self.b = b

    @property
    def field(self) -> FieldParams:
        return self.ext.base

    def _coerce(self, other):
        if isinstance(other, ExtScalar):
            return other
        if isinstance(other, PadicScalar):
            return self.ext.embed(other)
        if isinstance(other, (int, Fraction)):
            return self.ext.embed(self.ext.base(other))
        return NotImplemented

    def coerce(self, value) -> "ExtScalar":
        out = self._coerce(value)
        if out is NotImplemented:
            raise TypeError(f"cannot coerce {type(value).__name__} into E")
        return out

    def rebase(self, base: FieldParams, exact: bool = False) -> "ExtScalar":
        return ExtScalar(self.ext.over(base), self.a.rebase(base, exact), self.b.rebase(base, exact))

    @property
    def is_zero(self) -> bool:
        return self.a.is_zero and self.b.is_zero

    @property
    def is_exact_zero(self) -> bool:
        return self.a.is_exact_zero and self.b.is_exact_zero

    @property
    def valuation(self):
        """Valuation on E scaled so that v_E(p) = e; +inf for zero."""
        va, vb = self.a.valuation, self.b.valuation
        if self.ext.e == 1:
            return min(va, vb)
        return min(2 * va, 2 * vb + 1)

    @property
    def fval(self):
        """Valuation in base-field digits: min over the two coordinates."""
        return min(self.a.valuation, self.b.valuation)

    @property
    def order(self):
        return min(self.a.order, self.b.order)

    @property
    def abs_prec(self):
        return min(self.a.abs_prec, self.b.abs_prec)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ExtScalar(self.ext, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return ExtScalar(self.ext, -self.a, -self.b)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ExtScalar(self.ext, self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (PadicScalar, int, Fraction)):
            return ExtScalar(self.ext, self.a * other, self.b * other)
        if not isinstance(other, ExtScalar):
            return NotImplemented
        a, b, c, d = self.a, self.b, other.a, other.b
        return ExtScalar(self.ext, a * c + self.ext.alpha_sq * (b * d), a * d + b * c)

    __rmul__ = __mul__

    def conj(self) -> "ExtScalar":
        return ExtScalar(self.ext, self.a, -self.b)

    def norm(self) -> PadicScalar:
        return self.a * self.a - self.ext.alpha_sq * (self.b * self.b)

    def inverse(self) -> "ExtScalar":
        if self.is_exact_zero:
            raise DivisionByZero("inverse of 0 in E")
        n = self.norm()
        return ExtScalar(self.ext, self.a / n, -self.b / n)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.ext.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero

    __hash__ = None

    def compact(self) -> str:
        return f"{self.a.compact()} + {self.b.compact()}*alpha"

    def __str__(self) -> str:
        return f"{self.a} + ({self.b})*alpha"

    def __repr__(self) -> str:
        return f"ExtScalar({self.compact()}, {self.ext.kind.value})"


def conj(x: ExtScalar) -> ExtScalar:
    return x.conj()


def ext_valuation(x: ExtScalar) -> int:
    if x.is_zero:
        raise ZeroArgument("valuation of 0 in E")
    return x.valuation


def norm(x: ExtScalar) -> PadicScalar:
    return x.norm()


def ext_arith(op: str, x: ExtScalar, y: ExtScalar = None) -> ExtScalar:
    if op == "neg":
        return -x
    if op == "inv":
        return x.inverse()
    return {
        "add": lambda: x + y,
        "sub": lambda: x - y,
        "mul": lambda: x * y,
        "div": lambda: x / y,
    }[op]()


def random_ext_scalar(rng, ext: ExtField, vmin: int = -2, vmax: int = 2) -> ExtScalar:
    """Element with both coordinates nonzero, valuations in [vmin, vmax]."""
    F = ext.base
    return ExtScalar(ext, random_scalar(rng, F, vmin, vmax), random_scalar(rng, F, vmin, vmax))
