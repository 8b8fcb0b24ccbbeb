"""Truncated arithmetic in Q_p at fixed relative precision.

A nonzero value is stored as ``p**v * unit`` where ``unit`` is an integer
coprime to ``p`` known modulo ``p**prec``.  ``prec`` starts at the field
precision ``N`` and only shrinks when leading digits cancel in an addition.
A sum whose known digits all cancel becomes an *inexact zero*: a zero that
remembers the absolute precision ``O(p**k)`` it is known to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .errors import (
    DivisionByZero,
    EvenPrime,
    NotPrime,
    PrecisionExhausted,
    PrecisionTooSmall,
    ZeroArgument,
    ZeroDenominator,
)

INF = math.inf

Number = Union[int, Fraction, "PadicScalar"]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def vp(n: int, p: int) -> int:
    """Exponent of ``p`` in the nonzero integer ``n``."""
    if n == 0:
        raise ZeroArgument("valuation of 0")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def residue_squares(p: int) -> frozenset:
    return frozenset((x * x) % p for x in range(1, p))


@dataclass(frozen=True)
class FieldParams:
    """The field Q_p stored to ``N`` base-p digits, with nonsquare unit ``S``."""

    p: int
    N: int
    S: int

    def __call__(self, num: Union[int, Fraction], den: int = 1) -> "PadicScalar":
        if isinstance(num, Fraction):
            return from_rational(num.numerator, num.denominator * den, self)
        return from_rational(num, den, self)

    def zero(self) -> "PadicScalar":
        return PadicScalar._zero(self, INF)

    def one(self) -> "PadicScalar":
        return PadicScalar._raw(self, 0, 1, self.N)

    def uniformizer(self) -> "PadicScalar":
        return PadicScalar._raw(self, 1, 1, self.N)

    def is_residue(self, r: int) -> bool:
        return (r % self.p) in residue_squares(self.p)

    def class_rep(self, cls: "SquareClass") -> "PadicScalar":
        """Representative of a square class from {1, S, p, S*p}."""
        return self(self.S if cls.has_u else 1) * (self.p if cls.has_pi else 1)


def guarded(field: FieldParams, guard: int = 8) -> FieldParams:
    """The same field stored to ``guard`` extra digits."""
    return FieldParams(field.p, field.N + guard, field.S)


def make_field(p: int, N: int) -> FieldParams:
    if p == 2:
        raise EvenPrime("p = 2 is excluded")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if N < 4:
        raise PrecisionTooSmall(f"precision {N} < 4")
    squares = residue_squares(p)
    S = next(r for r in range(1, p) if r not in squares)
    return FieldParams(p, N, S)


class SquareClass(Enum):
    """F*/(F*)^2 as the Klein four-group on representatives 1, S, p, S*p."""

    ONE = "One"
    U = "U"
    PI = "Pi"
    UPI = "UPi"

    @property
    def has_u(self) -> bool:
        return self in (SquareClass.U, SquareClass.UPI)

    @property
    def has_pi(self) -> bool:
        return self in (SquareClass.PI, SquareClass.UPI)

    @classmethod
    def from_bits(cls, has_u: bool, has_pi: bool) -> "SquareClass":
        return {
            (False, False): cls.ONE,
            (True, False): cls.U,
            (False, True): cls.PI,
            (True, True): cls.UPI,
        }[(bool(has_u), bool(has_pi))]

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        if not isinstance(other, SquareClass):
            return NotImplemented
        return SquareClass.from_bits(self.has_u ^ other.has_u, self.has_pi ^ other.has_pi)

    @classmethod
    def parse(cls, name: str) -> "SquareClass":
        key = name.strip().lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        raise ValueError(f"unknown square class {name!r}")


class PadicScalar:
    """An element of Q_p known to a finite number of digits."""

    __slots__ = ("field", "_v", "_unit", "_prec")

    # Construction -----------------------------------------------------

    @classmethod
    def _raw(cls, field: FieldParams, v, unit: int, prec) -> "PadicScalar":
        obj = object.__new__(cls)
        obj.field = field
        obj._v = v
        obj._unit = unit
        obj._prec = prec
        return obj

    @classmethod
    def _zero(cls, field: FieldParams, abs_prec) -> "PadicScalar":
        return cls._raw(field, None, 0, abs_prec)

    @classmethod
    def _normalize(cls, field: FieldParams, v: int, n: int, prec) -> "PadicScalar":
        # value p^v * n, known modulo p^(v + prec)
        p = field.p
        if prec <= 0:
            return cls._zero(field, v + prec)
        n %= p**prec
        if n == 0:
            return cls._zero(field, v + prec)
        while n % p == 0:
            n //= p
            v += 1
            prec -= 1
        if prec > field.N:
            prec = field.N
            n %= p**prec
        return cls._raw(field, v, n, prec)

    @classmethod
    def from_digits(cls, field: FieldParams, v: int, digits) -> "PadicScalar":
        p = field.p
        n = sum(int(d) * p**i for i, d in enumerate(digits))
        return cls._normalize(field, v, n, len(digits))

    def _coerce(self, other):
        if isinstance(other, PadicScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def coerce(self, value: Number) -> "PadicScalar":
        """Bring an int, Fraction or scalar into this field."""
        out = self._coerce(value)
        if out is NotImplemented:
            raise TypeError(f"cannot coerce {type(value).__name__} into Q_{self.field.p}")
        return out

    def rebase(self, field: FieldParams, exact: bool = False) -> "PadicScalar":
        """Move into ``field`` (same p, other N).

        With ``exact`` the stored digits are taken at face value and the
        value gets the full precision of ``field``.
        """
        if self._v is None:
            return PadicScalar._zero(field, INF if exact else self._prec)
        prec = field.N if exact else min(self._prec, field.N)
        return PadicScalar._raw(field, self._v, self._unit % field.p**prec, prec)

    # Inspection -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self._v is None

    @property
    def is_exact_zero(self) -> bool:
        return self._v is None and self._prec == INF

    @property
    def valuation(self):
        """Valuation, with zero mapped to +inf."""
        return INF if self._v is None else self._v

    @property
    def order(self):
        """Valuation known for this value: the valuation, or the O(p^k) of a zero."""
        return self._prec if self._v is None else self._v

    @property
    def prec(self) -> int:
        """Effective relative precision (number of trustworthy digits)."""
        return 0 if self._v is None else self._prec

    @property
    def abs_prec(self):
        return self._prec if self._v is None else self._v + self._prec

    @property
    def unit(self) -> int:
        return self._unit

    @property
    def digits(self) -> list:
        """The N stored base-p digits; digits lost to cancellation read as 0."""
        p, out, n = self.field.p, [], self._unit
        for _ in range(self.field.N):
            out.append(n % p)
            n //= p
        return out

    @property
    def fval(self):
        return self.valuation

    def to_fraction(self) -> Fraction:
        if self._v is None:
            return Fraction(0)
        return Fraction(self._unit) * Fraction(self.field.p) ** self._v

    # Arithmetic -------------------------------------------------------

    def _truncate_abs(self, abs_prec) -> "PadicScalar":
        if abs_prec >= self.abs_prec:
            return self
        if self._v is None:
            return PadicScalar._zero(self.field, abs_prec)
        return PadicScalar._normalize(self.field, self._v, self._unit, abs_prec - self._v)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self._v is None:
            return other._truncate_abs(self._prec)
        if other._v is None:
            return self._truncate_abs(other._prec)
        p = self.field.p
        va, vb = self._v, other._v
        abs_prec = min(va + self._prec, vb + other._prec)
        if va <= vb:
            n, v = self._unit + other._unit * p ** (vb - va), va
        else:
            n, v = other._unit + self._unit * p ** (va - vb), vb
        return PadicScalar._normalize(self.field, v, n, abs_prec - v)

    __radd__ = __add__

    def __neg__(self) -> "PadicScalar":
        if self._v is None:
            return self
        return PadicScalar._raw(self.field, self._v, (-self._unit) % self.field.p**self._prec, self._prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self._v is None or other._v is None:
            if self.is_exact_zero or other.is_exact_zero:
                return PadicScalar._zero(self.field, INF)
            return PadicScalar._zero(self.field, self.order + other.order)
        prec = min(self._prec, other._prec)
        return PadicScalar._raw(
            self.field, self._v + other._v, (self._unit * other._unit) % self.field.p**prec, prec
        )

    __rmul__ = __mul__

    def inverse(self) -> "PadicScalar":
        if self._v is None:
            if self._prec == INF:
                raise DivisionByZero("inverse of 0")
            raise PrecisionExhausted(f"inverse of O({self.field.p}^{self._prec})")
        mod = self.field.p**self._prec
        return PadicScalar._raw(self.field, -self._v, pow(self._unit, -1, mod), self._prec)

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

    def __pow__(self, k: int) -> "PadicScalar":
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "PadicScalar":
        return self

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero

    __hash__ = None

    # Rendering --------------------------------------------------------

    def compact(self) -> str:
        if self._v is None:
            return "0" if self._prec == INF else f"O({self.field.p}^{self._prec})"
        return f"{self._v}:[{','.join(str(d) for d in self.digits[: self._prec])}]"

    def __str__(self) -> str:
        if self._v is None:
            return self.compact()
        p = self.field.p
        terms = []
        for i, d in enumerate(self.digits[: self._prec]):
            terms.append(str(d) if i == 0 else f"{d}*{p}" if i == 1 else f"{d}*{p}^{i}")
        return f"{p}^{self._v} * ({' + '.join(terms)})"

    def __repr__(self) -> str:
        return f"PadicScalar({self.compact()}, p={self.field.p})"


def from_rational(num: int, den: int, params: FieldParams) -> PadicScalar:
    if den == 0:
        raise ZeroDenominator("denominator is 0")
    if num == 0:
        return params.zero()
    p, N = params.p, params.N
    if den < 0:
        num, den = -num, -den
    kn, kd = vp(num, p), vp(den, p)
    num //= p**kn
    den //= p**kd
    mod = p**N
    return PadicScalar._raw(params, kn - kd, (num * pow(den, -1, mod)) % mod, N)


def arith(op: str, a: PadicScalar, b: Optional[PadicScalar] = None) -> PadicScalar:
    """Dispatch one of add/sub/mul/div/neg/inv by name."""
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    return {
        "add": lambda: a + b,
        "sub": lambda: a - b,
        "mul": lambda: a * b,
        "div": lambda: a / b,
    }[op]()


def square_class(a: PadicScalar) -> SquareClass:
    if a.is_zero:
        raise ZeroArgument("square class of 0")
    return SquareClass.from_bits(not a.field.is_residue(a.unit), a.valuation % 2 == 1)


def sqrt(a: PadicScalar) -> Optional[PadicScalar]:
    """Square root by residue root and digit-by-digit Hensel lifting.

    Returns None when ``a`` is not a square.  Of the two roots, the one with
    leading digit at most (p-1)/2 is returned.
    """
    F = a.field
    p = F.p
    if a.is_zero:
        k = a.order
        return PadicScalar._zero(F, k if k == INF else -(-k // 2))
    if square_class(a) is not SquareClass.ONE:
        return None
    u, prec = a.unit, a.prec
    u0 = u % p
    r = next(x for x in range(1, (p - 1) // 2 + 1) if (x * x - u0) % p == 0)
    inv2r = pow(2 * r, -1, p)
    pk = p
    for _ in range(1, prec):
        t = ((u - r * r) // pk) * inv2r % p
        r += t * pk
        pk *= p
    return PadicScalar._raw(F, a.valuation // 2, r % p**prec, prec)


def agreement(a, b):
    """Digits of agreement between two scalars, relative to the larger one.

    Works for any scalar type with ``order``/``fval`` (F or its extensions).
    An inexact-zero difference contributes its known precision.
    """
    diff = a - b
    if diff.is_exact_zero:
        return INF
    scale = min(a.fval, b.fval)
    if scale == INF:
        scale = 0
    return diff.order - scale


def random_scalar(rng, field: FieldParams, vmin: int = -2, vmax: int = 2) -> PadicScalar:
    """Nonzero scalar with valuation drawn uniformly from [vmin, vmax]."""
    p, N = field.p, field.N
    unit = rng.randrange(1, p) + p * rng.randrange(p ** (N - 1))
    return PadicScalar._raw(field, rng.randint(vmin, vmax), unit, N)
