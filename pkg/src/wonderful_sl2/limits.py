"""psi-orbits along powers of the uniformizer and their limits in P(End)."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional

from .boundary import conj_representatives
from .errors import NotRankOne, TooFewPoints, UnsupportedFamily
from .involution import DiagonalSwap, GaloisConj, Inner, InvolutionSpec, act
from .matgroup import Mat2, Shape, borel_minus, sample_sl2, uplus
from .projective import INF, ProjEnd, RankClass, canonicalize, proj_depth, rank_class


class Direction(Enum):
    CONTRACTING = "contract"  # x_n = p^-n
    EXPANDING = "expand"  # x_n = p^n


@dataclass(frozen=True)
class LimitFamily:
    """Points psi(borel_minus(x_n, a_n) g_i) with a_n = b x_n.

    For the diagonal swap the pair is (borel_minus(x_n, a x_n), uplus(b)),
    a two-parameter family whose slice a = b is the default.
    """

    spec: InvolutionSpec
    b: Any
    direction: Direction = Direction.CONTRACTING
    gi: Any = None
    a: Any = None

    @property
    def representative(self):
        return default_representative(self.spec) if self.gi is None else self.gi


def default_representative(spec: InvolutionSpec):
    """Id (or (Id, Id)), except g_1 = [1, -1/alpha; 0, 1] for Galois conjugation.

    For Galois conjugation the coset of Id gives a constant sequence, since
    borel_minus(x, bx) with x in F only moves b.
    """
    if isinstance(spec, DiagonalSwap):
        return spec.identity()
    if isinstance(spec, GaloisConj):
        return conj_representatives(spec.ext)[1][1]
    return spec.identity()


def family_element(fam: LimitFamily, n: int):
    spec = fam.spec
    F = spec.field
    k = -n if fam.direction is Direction.CONTRACTING else n
    x = F(F.p) ** k if k >= 0 else F(1, F.p ** (-k))
    gi = fam.representative
    if isinstance(spec, DiagonalSwap):
        a = fam.b if fam.a is None else fam.a
        return (borel_minus(x, a * x) @ gi[0], uplus(fam.b) @ gi[1])
    if isinstance(spec, GaloisConj):
        x = spec.ext.embed(x)
    b = x.coerce(fam.b)
    return borel_minus(x, b * x) @ gi


def family_point(fam: LimitFamily, n: int) -> ProjEnd:
    """The n-th point; n = 0 is the orbit point of borel_minus(1, b) g_i."""
    return act(fam.spec, family_element(fam, n), Mat2.identity(fam.spec.ring))


def limit_sequence(fam: LimitFamily, n_max: int) -> list:
    N = fam.spec.field.N
    if n_max > N - 2:
        raise ValueError(f"n_max = {n_max} exceeds N - 2 = {N - 2}")
    return [family_point(fam, n) for n in range(1, n_max + 1)]


@dataclass(frozen=True)
class Converged:
    limit: ProjEnd
    depths: list


@dataclass(frozen=True)
class Diverged:
    evidence: str
    depths: list


def _cap(depth, N: int):
    return N if depth == INF else min(depth, N)


def detect_limit(points: list, cell: Optional[int] = None):
    """Decide whether ``points`` settle down.

    Depths are taken against the last point.  Converged needs them to grow
    strictly until they reach N - 4 and to end there; with ``cell`` given
    the limit must also have a nonzero entry at that position.
    """
    if len(points) < 3:
        raise TooFewPoints(f"{len(points)} points, need 3")
    N = points[-1].field.N
    bar = N - 4
    last = points[-1]
    depths = [_cap(proj_depth(last, P), N) for P in points[:-1]]
    pivots = {P.pivot for P in points[len(points) // 2:]}
    if len(pivots) > 1:
        return Diverged(f"pivot moves among {sorted(pivots)}", depths)
    if max(depths) <= 1:
        return Diverged("depths stay <= 1", depths)
    grows = all(d1 > d0 or d0 >= bar for d0, d1 in zip(depths, depths[1:]))
    if not grows or depths[-1] < bar:
        return Diverged(f"depths {depths} do not reach {bar}", depths)
    limit = last.rounded(depths[-1])
    if cell is not None and not limit.in_cell(cell):
        return Diverged(f"limit {limit.render()} leaves the big cell", depths)
    return Converged(limit, depths)


def predicted_accumulation(spec: InvolutionSpec, b, a=None, gi=None) -> ProjEnd:
    """[1,-b;a,-ab], [-theta(b),1;-b theta(b),b] or [1,-b/m;b,-b^2/m]."""
    ring = spec.ring
    if isinstance(spec, DiagonalSwap):
        a = b if a is None else a
        return canonicalize(Mat2(ring.one(), -b, a, -(a * b)))
    if isinstance(spec, GaloisConj):
        if gi is not None and gi.b.is_zero:
            raise UnsupportedFamily("the Id coset of Galois conjugation has no limit along x in F")
        b = ring.one().coerce(b)
        tb = b.conj()
        return canonicalize(Mat2(-tb, ring.one(), -(b * tb), b))
    if isinstance(spec, Inner):
        b = ring.one().coerce(b)
        minv = spec.m.inverse()
        return canonicalize(Mat2(ring.one(), -b * minv, b, -(b * b) * minv))
    raise UnsupportedFamily(type(spec).__name__)


def closed_orbit_base(spec: InvolutionSpec) -> ProjEnd:
    return spec.base_point


def _witness(spec: InvolutionSpec, P: ProjEnd):
    """Solve g . base = P from the closed-form parametrisation of the orbit."""
    ring = spec.ring
    one, zero = ring.one(), ring.zero()
    e = P.entries
    if isinstance(spec, DiagonalSwap):
        # g1 E11 g2^-1 = (first column of g1) (first row of g2^-1)
        col = (e[0], e[2]) if not (e[0].is_zero and e[2].is_zero) else (e[1], e[3])
        row = (e[0], e[1]) if not (e[0].is_zero and e[1].is_zero) else (e[2], e[3])
        u1, u2 = col
        g1 = Mat2(u1, zero, u2, u1.inverse()) if not u1.is_zero else Mat2(zero, -u2.inverse(), u2, zero)
        v1, v2 = row
        g2inv = Mat2(v1, v2, zero, v1.inverse()) if not v1.is_zero else Mat2(zero, v2, -v2.inverse(), zero)
        return (g1, g2inv.adjugate())
    if isinstance(spec, GaloisConj):
        # g = [1, 0; c, 1] gives [-theta(c), 1; -c theta(c), c]
        if e[1].is_zero:
            return Mat2(zero, -one, one, zero)
        return Mat2(one, zero, e[3] / e[1], one)
    # inner: g = [1, 0; c, 1] gives [1, -c/m; c, -c^2/m]
    if e[0].is_zero:
        return Mat2(zero, -one, one, zero)
    return Mat2(one, zero, e[2] / e[0], one)


def closed_orbit_membership(spec: InvolutionSpec, P: ProjEnd, trials: int = 0, rng=None, depth=None) -> tuple:
    """(True, g) when g . base = P at ``depth`` (default N - 4), else (False, None).

    The closed-form witness is tried first, then ``trials`` sampled
    unipotent corrections of it.
    """
    N = spec.field.N
    if rank_class(P) is not RankClass.RANK_ONE:
        raise NotRankOne(f"{P.render()} is invertible")
    depth = N - 4 if depth is None else depth
    base = closed_orbit_base(spec)
    g = _witness(spec, P)
    if proj_depth(P, act(spec, g, base)) >= depth:
        return True, g
    for _ in range(trials):
        h = sample_sl2(rng, spec.ring, Shape.BOREL_PLUS)
        cand = spec.mul(g, (h, h) if isinstance(spec, DiagonalSwap) else h)
        if proj_depth(P, act(spec, cand, base)) >= depth:
            return True, cand
    return False, None
