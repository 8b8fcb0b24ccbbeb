"""Involutions of SL(2), their twisted actions on P(End) and stabilizers.

Three families are supported:

* ``DiagonalSwap`` -- (g1, g2) -> (g2, g1) on SL(2,F) x SL(2,F), acting by
  D -> g1 D g2^-1.
* ``GaloisConj`` -- entrywise conjugation of SL(2,E) for E = F(alpha).
* ``Inner`` -- conjugation by A_m = [0, 1; m, 0] on SL(2,F).

For every family ``g . D = g D theta(g)^-1`` (read componentwise for pairs),
and ``psi(g) = [g . Id]``.  Group elements are in SL(2), so g^-1 is taken to
be the adjugate; this avoids inverting a determinant that is 1 only up to
rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Union

from .errors import DegenerateSampler, UnsupportedFamily
from .extension import ExtField, ExtKind
from .matgroup import (
    MAX_RETRIES,
    Mat2,
    Shape,
    antidiag,
    borel_plus,
    mat_depth,
    sample_sl2,
    uplus,
)
from .padic import FieldParams, PadicScalar, SquareClass, agreement, random_scalar, sqrt
from .projective import ProjEnd, canonicalize, proj_depth, proj_point

GroupElement = Union[Mat2, tuple]


class Mode(Enum):
    PROJECTIVE = "projective"
    EXACT = "exact"


@dataclass(frozen=True)
class DiagonalSwap:
    field: FieldParams
    name = "diag"

    @property
    def ring(self):
        return self.field

    @property
    def base_point(self) -> ProjEnd:
        return proj_point(self.field, 1, 0, 0, 0)

    cell = 0

    def apply(self, g):
        g1, g2 = g
        return (g2, g1)

    def twisted(self, g, D: Mat2) -> Mat2:
        g1, g2 = g
        return g1 @ D @ g2.adjugate()

    def identity(self):
        one = Mat2.identity(self.field)
        return (one, one)

    def mul(self, g, h):
        return (g[0] @ h[0], g[1] @ h[1])

    def describe(self) -> dict:
        return {"involution": "diag"}


@dataclass(frozen=True)
class GaloisConj:
    ext: ExtField
    name = "conj"

    @property
    def field(self) -> FieldParams:
        return self.ext.base

    @property
    def ring(self):
        return self.ext

    @property
    def base_point(self) -> ProjEnd:
        return proj_point(self.ext, 0, 1, 0, 0)

    cell = 1

    def apply(self, g: Mat2) -> Mat2:
        return g.conj()

    def twisted(self, g: Mat2, D: Mat2) -> Mat2:
        return g @ D @ g.adjugate().conj()

    def identity(self) -> Mat2:
        return Mat2.identity(self.ext)

    def mul(self, g, h):
        return g @ h

    def describe(self) -> dict:
        return {"involution": "conj", "ext": self.ext.kind.value}


@dataclass(frozen=True)
class Inner:
    field: FieldParams
    m: PadicScalar
    square_class: SquareClass
    name = "inner"

    @property
    def ring(self):
        return self.field

    @property
    def A(self) -> Mat2:
        return antidiag(self.m)

    @property
    def A_inv(self) -> Mat2:
        z = self.m.coerce(0)
        return Mat2(z, self.m.inverse(), self.m.coerce(1), z)

    @property
    def base_point(self) -> ProjEnd:
        return proj_point(self.field, 1, 0, 0, 0)

    cell = 0

    def apply(self, g: Mat2) -> Mat2:
        return self.A @ g @ self.A_inv

    def twisted(self, g: Mat2, D: Mat2) -> Mat2:
        return g @ D @ self.apply(g.adjugate())

    def identity(self) -> Mat2:
        return Mat2.identity(self.field)

    def mul(self, g, h):
        return g @ h

    def describe(self) -> dict:
        return {"involution": "inner", "m": self.square_class.value}


InvolutionSpec = Union[DiagonalSwap, GaloisConj, Inner]


def inner(F: FieldParams, cls: SquareClass) -> Inner:
    return Inner(F, F.class_rep(cls), cls)


def galois(F: FieldParams, kind: ExtKind) -> GaloisConj:
    return GaloisConj(ExtField(F, kind))


def _components(g) -> tuple:
    return g if isinstance(g, tuple) else (g,)


def element_depth(g, h):
    return min(mat_depth(x, y) for x, y in zip(_components(g), _components(h)))


def apply_involution(spec: InvolutionSpec, g: GroupElement) -> GroupElement:
    return spec.apply(g)


def act(spec: InvolutionSpec, g: GroupElement, D) -> ProjEnd:
    mat = D.mat if isinstance(D, ProjEnd) else D
    return canonicalize(spec.twisted(g, mat))


def psi(spec: InvolutionSpec, g: GroupElement) -> ProjEnd:
    return act(spec, g, Mat2.identity(spec.ring))


def fixed_group_member(spec: InvolutionSpec, g: GroupElement) -> bool:
    return element_depth(spec.apply(g), g) >= spec.field.N - 2


def sample_group(spec: InvolutionSpec, rng, shape: Shape = Shape.GENERIC, shape2: Shape = None):
    if isinstance(spec, DiagonalSwap):
        return (sample_sl2(rng, spec.field, shape), sample_sl2(rng, spec.field, shape2 or shape))
    return sample_sl2(rng, spec.ring, shape)


def sample_fixed_group(spec: InvolutionSpec, rng) -> GroupElement:
    """Random element of the fixed-point group H of ``spec``."""
    F = spec.field
    if isinstance(spec, DiagonalSwap):
        g = sample_sl2(rng, F)
        return (g, g)
    if isinstance(spec, GaloisConj):
        return sample_sl2(rng, F).to_ext(spec.ext)
    m = spec.m
    for _ in range(MAX_RETRIES):
        y = random_scalar(rng, F)
        x = sqrt(m * y * y + 1)
        if x is None or x.is_zero:
            continue
        return Mat2(x, y, m * y, x)
    raise DegenerateSampler(f"no square 1 + m*y^2 in {MAX_RETRIES} draws")


def twisted_product(spec: InvolutionSpec, g: GroupElement, target: ProjEnd) -> Mat2:
    """The un-normalised product g T theta(g)^-1 for the pivot-1 representative T."""
    return spec.twisted(g, target.mat)


def rounding_loss(g: GroupElement) -> int:
    """Digits of absolute precision lost in g D theta(g)^-1 for |D| = 1."""
    comps = _components(g)
    scales = [min(0, min(x.fval for x in h.entries() if not x.is_zero)) for h in comps]
    return sum(scales) if len(comps) == 2 else 2 * scales[0]


def stabilizer_residual(spec: InvolutionSpec, target: ProjEnd, g: GroupElement, mode: Mode):
    """Order of the residual of the stabilizer equation, relative to |g|^2.

    Exact mode compares g T theta(g)^-1 with T itself; projective mode with
    its own multiple P_i T, i the pivot of T.
    """
    P = twisted_product(spec, g, target)
    if mode is Mode.EXACT:
        ref = target.mat
    else:
        pi = P.entries()[target.pivot]
        if pi.is_zero:
            return 0
        ref = target.mat.scale(pi)
    r = min((x - y).order for x, y in zip(P.entries(), ref.entries()))
    return max(0, r - rounding_loss(g))


def stabilizer_membership(spec: InvolutionSpec, target: ProjEnd, g: GroupElement, mode: Mode) -> bool:
    return stabilizer_residual(spec, target, g, mode) >= spec.field.N - 2


def _negligible(x, g: Mat2, depth) -> bool:
    if x.is_zero:
        return True
    scale = min(e.fval for e in g.entries() if not e.is_zero)
    return x.order - scale >= depth


def _target_kind(spec: InvolutionSpec, target: ProjEnd) -> str:
    ring = spec.ring
    if proj_depth(target, spec.base_point) >= spec.field.N - 2 and target.pivot == spec.base_point.pivot:
        return "base"
    if proj_depth(target, proj_point(ring, 1, 0, 0, 1)) >= spec.field.N - 2 and target.pivot == 0:
        return "identity"
    raise UnsupportedFamily(f"no closed-form stabilizer for target {target.render()}")


def predicted_stabilizer(spec: InvolutionSpec, target: ProjEnd, mode: Mode, g: GroupElement) -> bool:
    """Closed-form membership test for the stabilizer of ``target``.

    Base point ([1,0;0,0], or [0,1;0,0] for Galois conjugation):
      inner     exact: c = 0 and a^2 = 1        projective: c = 0
      conj      exact: c = 0 and N(a) = 1       projective: c = 0
      diag      exact: c1 = 0, b2 = 0, a1 = a2  projective: c1 = 0 and b2 = 0
    [Id]: theta(g) = g exactly, theta(g) = +-g projectively.
    """
    depth = spec.field.N - 2
    kind = _target_kind(spec, target)
    if kind == "identity":
        fixed = spec.apply(g)
        if element_depth(fixed, g) >= depth:
            return True
        if mode is Mode.EXACT:
            return False
        neg = tuple(-x for x in _components(g))
        return element_depth(_components(fixed), neg) >= depth
    if isinstance(spec, DiagonalSwap):
        g1, g2 = g
        ok = _negligible(g1.c, g1, depth) and _negligible(g2.b, g2, depth)
        if mode is Mode.EXACT:
            ok = ok and agreement(g1.a, g2.a) >= depth
        return ok
    ok = _negligible(g.c, g, depth)
    if mode is Mode.PROJECTIVE or not ok:
        return ok
    if isinstance(spec, GaloisConj):
        return agreement(g.a.norm(), spec.field.one()) >= depth
    return agreement(g.a * g.a, spec.field.one()) >= depth


def _predicted_samples(spec: InvolutionSpec, rng, n: int) -> list:
    """Elements drawn from the predicted exact stabilizer of the base point."""
    F = spec.field
    out = []
    for i in range(n):
        sign = 1 if i % 2 == 0 else -1
        if isinstance(spec, Inner):
            out.append(uplus(random_scalar(rng, F)).scale(F(sign)))
        elif isinstance(spec, GaloisConj):
            E = spec.ext
            w = sample_sl2(rng, E, Shape.TORUS).a
            u = w / w.conj()
            z = sample_sl2(rng, E, Shape.TORUS).a
            out.append(Mat2(u, z, E.zero(), u.inverse()))
        else:
            g1 = borel_plus(random_scalar(rng, F), random_scalar(rng, F))
            g2 = sample_sl2(rng, F, Shape.BOREL_MINUS)
            g2 = Mat2(g1.a, g2.b, g2.c, g1.d)
            out.append((g1, g2))
    return out


def shaped_samples(spec: InvolutionSpec, rng, n: int) -> list:
    """A mix of Borel, torus, predicted-stabilizer and fixed-group samples."""
    out = []
    per = max(1, n // 5)
    for _ in range(per):
        out.append(("borel-plus", sample_group(spec, rng, Shape.BOREL_PLUS, Shape.BOREL_MINUS)))
        out.append(("borel-minus", sample_group(spec, rng, Shape.BOREL_MINUS, Shape.BOREL_PLUS)))
        out.append(("torus", sample_group(spec, rng, Shape.TORUS)))
        out.append(("fixed-group", sample_fixed_group(spec, rng)))
    out.extend(("predicted", g) for g in _predicted_samples(spec, rng, n - len(out)))
    return out[:n]


@dataclass
class StabilizerProfile:
    trials: int = 0
    members: int = 0
    agreements: int = 0
    by_shape: dict = field(default_factory=dict)
    counterexample: object = None

    @property
    def disagreements(self) -> int:
        return self.trials - self.agreements


def stabilizer_profile(
    spec: InvolutionSpec, target: ProjEnd, mode: Mode, trials: int, rng, shaped: int = None
) -> StabilizerProfile:
    """Compare computed membership with the closed-form prediction.

    ``trials`` generic samples plus ``shaped`` structured ones (default
    trials // 2).
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    shaped = trials // 2 if shaped is None else shaped
    samples = [("generic", sample_group(spec, rng)) for _ in range(trials)]
    samples += shaped_samples(spec, rng, shaped)
    prof = StabilizerProfile()
    for shape, g in samples:
        member = stabilizer_membership(spec, target, g, mode)
        predicted = predicted_stabilizer(spec, target, mode, g)
        prof.trials += 1
        prof.members += member
        counts = prof.by_shape.setdefault(shape, [0, 0])
        counts[0] += 1
        counts[1] += member
        if member == predicted:
            prof.agreements += 1
        elif prof.counterexample is None:
            prof.counterexample = g
    return prof
