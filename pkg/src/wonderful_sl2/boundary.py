"""Orbits on the tree boundary P^1 and double cosets B^- \\ SL(2) / H."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import NotUnimodular, SolverFailed
from .extension import ExtField, ExtKind, ExtScalar
from .involution import Inner, sample_fixed_group
from .matgroup import Mat2, is_sl2, mat_depth, torus, uminus, uplus
from .padic import FieldParams, PadicScalar, SquareClass, guarded, random_scalar, square_class, sqrt
from .projective import ProjLine, line_depth, line_point, make_line, moebius

END0 = "End0"
END_INF = "EndInf"
CLOSED = "ClosedRealOrbit"

DIAG_LABELS = (END0, END_INF) + tuple(c.value for c in SquareClass)


def open_label(cls: SquareClass) -> str:
    return f"Open({cls.value})"


SLF_LABELS = (CLOSED,) + tuple(open_label(c) for c in SquareClass)


def cayley(F: FieldParams) -> Mat2:
    """C = [1, -1; 1, 1]; it conjugates the diagonal torus onto H_{sigma_1}."""
    return Mat2.of(F, 1, -1, 1, 1)


def cayley_inv(F: FieldParams) -> Mat2:
    return Mat2.of(F, 1, 1, -1, 1).scale(F(1, 2))


def diag_orbit_class(xi: ProjLine) -> str:
    if xi.y.is_zero:
        return END0
    if xi.x.is_zero:
        return END_INF
    return square_class(xi.y / xi.x).value


def hsigma1_orbit_class(xi: ProjLine) -> str:
    return diag_orbit_class(moebius(cayley_inv(xi.x.field), xi))


def hsigma1_element(d: PadicScalar) -> Mat2:
    """C diag(d, 1/d) C^-1, a generic element of H_{sigma_1}."""
    F = d.field
    return cayley(F) @ torus(d) @ cayley_inv(F)


def slf_orbit_on_ext_boundary(xi: ProjLine) -> str:
    if xi.x.is_zero:
        return CLOSED
    t = xi.y / xi.x
    if t.b.is_zero:
        return CLOSED
    return open_label(square_class(t.b))


def _lower_fix_check(b: Mat2, depth: int) -> None:
    """b must fix [0:1], i.e. be lower triangular up to rounding."""
    if b.b.is_zero:
        return
    scale = min(x.fval for x in b.entries() if not x.is_zero)
    if b.b.order - scale < depth:
        raise SolverFailed(f"b = {b.render()} does not fix [0:1]")


# -- representatives for SL(2,F) = disjoint union B^- g_i H_{sigma_1} ------------


def inner_representatives(F: FieldParams) -> list:
    """(label, g_i) pairs; index i is the position in this list."""
    reps = [
        (SquareClass.ONE.value, Mat2.identity(F)),
        (END_INF, Mat2.of(F, -1, -1, 2, 1)),
        (END0, Mat2.of(F, 1, -1, 1, 0)),
    ]
    for cls in (SquareClass.U, SquareClass.PI, SquareClass.UPI):
        m = F.class_rep(cls)
        reps.append((cls.value, Mat2(m + 1, m - 1, m / (m - 1), F.one())))
    return reps


def start_point(g: Mat2) -> ProjLine:
    """g^-1 [0:1] = [-b : a] for g in SL(2)."""
    return make_line(-g.b, g.a)


def _lower_part(b: Mat2, depth: int) -> Mat2:
    _lower_fix_check(b, depth)
    return Mat2(b.a, b.a.coerce(0), b.c, b.d)


def double_coset_decompose_inner(g: Mat2) -> tuple:
    """Return (i, b, h) with g = b g_i h, b in B^-, h in H_{sigma_1}.

    The orbit label is read at working precision.  The solve then takes the
    stored digits of g as exact and runs with guard digits, and b and h are
    returned with those digits: near the two ends the factors are large,
    and rounding them to N digits would lose the product.
    """
    if not is_sl2(g):
        raise NotUnimodular(f"det = {g.det().compact()}")
    F = g.field
    G = guarded(F)
    label = hsigma1_orbit_class(start_point(g))
    g = g.rebase(G, exact=True)
    reps = inner_representatives(G)
    i = next(k for k, (lab, _) in enumerate(reps) if lab == label)
    gi = reps[i][1]
    Cinv = cayley_inv(G)
    src = moebius(Cinv, start_point(g))
    dst = moebius(Cinv, start_point(gi))
    if label in (END0, END_INF):
        d = G.one()
    else:
        # torus(d) sends [1:r] to [1:r/d^2]
        d = sqrt((src.y / src.x) / (dst.y / dst.x))
        if d is None:
            raise SolverFailed("diagonal witness is not a square")
    h = hsigma1_element(d)
    b = _lower_part(g @ hsigma1_element(d.inverse()) @ gi.inv(), F.N - 2)
    return i, b, h


# -- representatives for SL(2,E) = B_E^- SL(2,F) u (disjoint) B_E^- g_m SL(2,F) ---


def conj_representatives(ext: ExtField) -> list:
    """(label, g) pairs: Id for the closed orbit, then g_m = [1, -1/(m alpha); 0, 1]."""
    F = ext.base
    reps = [(CLOSED, Mat2.identity(ext))]
    for cls in SquareClass:
        m = ext.embed(F.class_rep(cls))
        reps.append((open_label(cls), Mat2(ext.one(), -(m * ext.alpha()).inverse(), ext.zero(), ext.one())))
    return reps


def double_coset_decompose_conj(g: Mat2) -> tuple:
    """Return (i, b, h) with g = b g_i h, b in B_E^-, h in SL(2,F) (embedded in E).

    Solved with guard digits like the inner decomposition.
    """
    if not is_sl2(g):
        raise NotUnimodular(f"det = {g.det().compact()}")
    F = g.field
    G = guarded(F)
    label = slf_orbit_on_ext_boundary(start_point(g))
    g = g.rebase(G, exact=True)
    ext = g.ring
    xi = start_point(g)
    reps = conj_representatives(ext)
    i = next(k for k, (lab, _) in enumerate(reps) if lab == label)
    gi = reps[i][1]
    if label == CLOSED:
        if xi.x.is_zero:
            h = Mat2.identity(G)
        else:
            t = (xi.y / xi.x).a
            h = Mat2(t, -G.one(), G.one(), G.zero())
        hinv = h.adjugate()
    else:
        t = xi.y / xi.x
        m = G.class_rep(square_class(t.b))
        d = sqrt(t.b / m)
        if d is None:
            raise SolverFailed("no d with d^2 m = w")
        # h0 = [1/d, 0; c, d] sends [1 : m alpha] to [1 : dc + d^2 m alpha]
        hinv = Mat2(d.inverse(), G.zero(), t.a / d, d)
        h = hinv.adjugate()
    b = _lower_part(g @ hinv.to_ext(ext) @ gi.inv(), F.N - 2)
    return i, b, h.to_ext(ext)


def reconstruction_depth(g: Mat2, decomposition: tuple, conj: bool = False) -> int:
    """Agreement depth of b g_i h with g; the product is formed at the factors' precision."""
    i, b, h = decomposition
    reps = conj_representatives(b.ring) if conj else inner_representatives(b.field)
    return mat_depth(b @ reps[i][1] @ h, g.rebase(b.field))


# -- SL(2,F) orbits on the boundary of the tree of E ------------------------------


def open_merge_witness(ext: ExtField, src: SquareClass, dst: SquareClass, rng, budget: int = 200):
    """Search g in SL(2,F) carrying [1 : m alpha] into the open label of m'.

    With a' + b' m alpha of norm N, g = [a', b'; b' m^2 alpha^2 / N, a'/N]
    sends [1 : m alpha] to [1 : (m/N) alpha].  Returns g or None.
    """
    F = ext.base
    m = F.class_rep(src)
    m2a2 = m * m * ext.alpha_sq
    target = SquareClass.from_bits(src.has_u != dst.has_u, src.has_pi != dst.has_pi)
    xi = line_point(ext, 1, ext.embed(m) * ext.alpha())
    for k in range(budget):
        a = F.one() if k == 0 else random_scalar(rng, F, -1, 1)
        b = F.zero() if k == 0 else random_scalar(rng, F, -1, 1)
        n = a * a - b * b * m2a2
        if n.is_zero or square_class(n) is not target:
            continue
        g = Mat2(a, b, b * m2a2 / n, a / n)
        if slf_orbit_on_ext_boundary(moebius(g, xi)) == open_label(dst):
            return g
    return None


def slf_orbit_partition(ext: ExtField, rng, budget: int = 200) -> list:
    """Group the open labels into classes joined by explicit witnesses."""
    blocks: list = []
    for cls in SquareClass:
        for block in blocks:
            if open_merge_witness(ext, block[0], cls, rng, budget) is not None:
                block.append(cls)
                break
        else:
            blocks.append([cls])
    return [[CLOSED]] + [[open_label(c) for c in block] for block in blocks]


# -- H_{sigma_m} orbits for m != 1 ------------------------------------------------


@dataclass(frozen=True)
class SameOrbitWitness:
    h: Mat2


@dataclass(frozen=True)
class Undetermined:
    trials: int


def hsigma_m_invariant(m: PadicScalar, xi: ProjLine) -> SquareClass:
    """Class of m x^2 - y^2, preserved by every [x, y; my, x] with x^2 - my^2 = 1."""
    return square_class(m * xi.x * xi.x - xi.y * xi.y)


def _constructive_witness(m: PadicScalar, xi: ProjLine, eta: ProjLine) -> Optional[Mat2]:
    X = m * xi.x * eta.x - xi.y * eta.y
    Y = xi.x * eta.y - xi.y * eta.x
    q = X * X - m * Y * Y
    if q.is_zero:
        return None
    lam = sqrt(q.inverse())
    if lam is None:
        return None
    X, Y = X * lam, Y * lam
    return Mat2(X, Y, m * Y, X)


def hsigma_m_orbit_probe(spec: Inner, xi: ProjLine, eta: ProjLine, rng, budget: int = 2000):
    """Look for h in H_{sigma_m} with h xi = eta.

    The closed-form solve is tried first; sampled elements of H are the
    fallback.
    """
    if spec.square_class is SquareClass.ONE:
        raise ValueError("the probe is for m != 1")
    depth = spec.field.N - 3
    h = _constructive_witness(spec.m, xi, eta)
    if h is not None and line_depth(moebius(h, xi), eta) >= depth:
        return SameOrbitWitness(h)
    for _ in range(budget):
        h = sample_fixed_group(spec, rng)
        if line_depth(moebius(h, xi), eta) >= depth:
            return SameOrbitWitness(h)
    return Undetermined(budget)


def cluster_hsigma_m_orbits(spec: Inner, points: list, rng, budget: int = 2000) -> list:
    """Greedy clustering of ``points`` by probe witnesses; returns representatives."""
    reps: list = []
    for xi in points:
        if not any(isinstance(hsigma_m_orbit_probe(spec, r, xi, rng, budget), SameOrbitWitness) for r in reps):
            reps.append(xi)
    return reps


_EXT_FOR_CLASS = {
    SquareClass.U: ExtKind.UNRAMIFIED,
    SquareClass.PI: ExtKind.RAMIFIED_PI,
    SquareClass.UPI: ExtKind.RAMIFIED_SPI,
}


def fixed_ends(spec: Inner) -> tuple:
    """The two ends [1 : +-sqrt(m)] fixed by H_{sigma_m}, over F(sqrt m) when m != 1."""
    F = spec.field
    if spec.square_class is SquareClass.ONE:
        return line_point(F, 1, 1), line_point(F, 1, -1)
    ext = ExtField(F, _EXT_FOR_CLASS[spec.square_class])
    # m = alpha^2 for the matching extension kind
    r = ext.alpha()
    return line_point(ext, 1, r), line_point(ext, 1, -r)


# -- samplers ---------------------------------------------------------------------


def sample_p1(rng, F: FieldParams) -> ProjLine:
    """Random point of P^1(F); one draw in ten is one of the four special ends."""
    if rng.random() < 0.1:
        x, y = rng.choice(((1, 0), (0, 1), (1, 1), (1, -1)))
        return line_point(F, x, y)
    t = random_scalar(rng, F)
    return make_line(F.one(), t) if rng.random() < 0.5 else make_line(t, F.one())


def sample_ext_p1(rng, ext: ExtField) -> ProjLine:
    """Random point of P^1(E); a quarter of draws are F-rational."""
    F = ext.base
    u = random_scalar(rng, F)
    w = F.zero() if rng.random() < 0.25 else random_scalar(rng, F)
    if rng.random() < 0.05:
        return line_point(ext, 0, 1)
    return make_line(ext.one(), ExtScalar(ext, u, w))


def structured_inner_sample(rng, F: FieldParams, index: int) -> Mat2:
    """b g_i h with b in B^- and h in H_{sigma_1}, so the coset index is known.

    The two end cosets are one-point orbits, so any rounding would push the
    sample off them; there b has entries +-p^j, k p^j and h = +-Id, which
    keeps every product exact.
    """
    gi = inner_representatives(F)[index][1]
    if index in (1, 2):
        x = F(rng.choice((1, -1))) * F(F.p) ** rng.randint(-1, 1)
        c = F(rng.randint(0, F.p - 1)) * F(F.p) ** rng.randint(-1, 1)
        h = Mat2.identity(F).scale(F(rng.choice((1, -1))))
    else:
        x = random_scalar(rng, F, -1, 1)
        c = random_scalar(rng, F, -1, 1)
        h = hsigma1_element(random_scalar(rng, F, -1, 1))
    b = Mat2(x, F.zero(), c, x.inverse())
    return b @ gi @ h


def structured_conj_sample(rng, ext: ExtField) -> Mat2:
    """b h with b in B_E^- and h in SL(2,F): a sample of the closed coset.

    Its start point is F-rational, which rounding would destroy, so all
    entries are small integers times powers of p and the products are exact.
    """
    F = ext.base

    def pw():
        return F(F.p) ** rng.randint(-1, 1)

    x = ext.embed(F(rng.choice((1, -1))) * pw())
    c = ExtScalar(ext, F(rng.randint(0, F.p - 1)) * pw(), F(rng.randint(0, F.p - 1)) * pw())
    b = Mat2(x, ext.zero(), c, x.inverse())
    h = uplus(F(rng.randint(-3, 3))) @ torus(pw()) @ uminus(F(rng.randint(-3, 3)))
    return b @ h.to_ext(ext)
