"""Verification suites: each check samples with its own seeded generator."""

from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

from .boundary import (
    CLOSED,
    DIAG_LABELS,
    cluster_hsigma_m_orbits,
    diag_orbit_class,
    double_coset_decompose_conj,
    double_coset_decompose_inner,
    fixed_ends,
    hsigma1_element,
    hsigma1_orbit_class,
    hsigma_m_invariant,
    reconstruction_depth,
    sample_ext_p1,
    sample_p1,
    slf_orbit_on_ext_boundary,
    slf_orbit_partition,
    structured_conj_sample,
    structured_inner_sample,
)
from .errors import ConfigError, PivotZero
from .extension import ExtField, ExtKind, ExtScalar
from .involution import (
    DiagonalSwap,
    GaloisConj,
    Mode,
    element_depth,
    galois,
    inner,
    psi,
    sample_fixed_group,
    stabilizer_membership,
    stabilizer_profile,
)
from .limits import (
    Converged,
    Direction,
    LimitFamily,
    closed_orbit_membership,
    detect_limit,
    limit_sequence,
    predicted_accumulation,
)
from .matgroup import Mat2, base_field, is_sl2, ldu_decompose, mat_depth, sample_sl2, torus
from .padic import SquareClass, agreement, make_field, random_scalar, square_class, sqrt
from .projective import RankClass, line_point, moebius, proj_depth, rank_class
from .report import Check, Report, render

SUITES = ("square-classes", "limits", "stabilizers", "orbits", "cosets", "rank-dichotomy")

M_NAMES = {"one": SquareClass.ONE, "u": SquareClass.U, "pi": SquareClass.PI, "upi": SquareClass.UPI}
EXT_NAMES = {k.value: k for k in ExtKind}


@dataclass(frozen=True)
class Config:
    prime: int = 5
    precision: int = 12
    seed: int = 0
    trials: int = 1000
    involution: str = "inner"
    m: str = "one"
    ext: str = "unram"
    b: str = "2"
    n_max: Optional[int] = None
    direction: str = "contract"
    tau: Optional[int] = None

    @property
    def field(self):
        return make_field(self.prime, self.precision)

    def validate(self) -> None:
        self.field
        if self.trials < 1:
            raise ConfigError("trials must be positive")
        if self.involution not in ("diag", "conj", "inner"):
            raise ConfigError(f"unknown involution {self.involution!r}")
        if self.m not in M_NAMES:
            raise ConfigError(f"unknown m {self.m!r}")
        if self.ext not in EXT_NAMES:
            raise ConfigError(f"unknown extension {self.ext!r}")
        if self.n_max is not None and not 3 <= self.n_max <= self.precision - 2:
            raise ConfigError(f"n-max must lie in [3, {self.precision - 2}]")
        parse_b(self, self.spec())

    def params(self) -> dict:
        return {
            "p": self.prime,
            "N": self.precision,
            "seed": self.seed,
            "involution": self.involution,
            "m": self.m,
            "ext": self.ext,
        }

    def spec(self):
        F = self.field
        if self.involution == "diag":
            return DiagonalSwap(F)
        if self.involution == "conj":
            return galois(F, EXT_NAMES[self.ext])
        return inner(F, M_NAMES[self.m])

    def rng(self, check_id: str) -> random.Random:
        return random.Random(f"{self.seed}:{check_id}")


def parse_b(config: Config, spec):
    """'2', '1/5', or 'u,w' for u + w alpha over an extension."""
    F = spec.field
    try:
        parts = [Fraction(s) for s in config.b.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse b = {config.b!r}") from exc
    if len(parts) > 2 or (len(parts) == 2 and not isinstance(spec, GaloisConj)):
        raise ConfigError(f"b = {config.b!r} has too many parts")
    if isinstance(spec, GaloisConj):
        return spec.ext(F(parts[0]), F(parts[1] if len(parts) == 2 else 0))
    return F(parts[0])


def all_specs(F) -> list:
    return [DiagonalSwap(F)] + [galois(F, k) for k in ExtKind] + [inner(F, c) for c in SquareClass]


def spec_name(spec) -> str:
    if isinstance(spec, DiagonalSwap):
        return "diag"
    if isinstance(spec, GaloisConj):
        return f"conj-{spec.ext.kind.value}"
    return f"inner-{spec.square_class.value}"


def _random_b(rng, spec):
    F = spec.field
    if isinstance(spec, GaloisConj):
        return ExtScalar(spec.ext, random_scalar(rng, F), random_scalar(rng, F))
    return random_scalar(rng, F)


# -- square classes ---------------------------------------------------------------

REF_CLASSES = "F*/(F*)^2 = {1, p, S, Sp} for a nonsquare unit S"
REF_SQRT = "x^2 - m y^2 = 1 is solved through Hensel square roots"


def check_classes(config: Config) -> list:
    out = []
    for p in (3, 5, 7, 13):
        F = make_field(p, config.precision)
        rng = config.rng(f"sq.classes.p{p}")
        xs = [random_scalar(rng, F) for _ in range(config.trials)]
        seen = Counter(square_class(x).value for x in xs)
        out.append(Check(f"sq.classes.p{p}", REF_CLASSES, len(seen) == 4, 4, {"classes": len(seen), "counts": dict(sorted(seen.items()))}))
        fails, witness = 0, None
        for _ in range(config.trials):
            a, b = random_scalar(rng, F), random_scalar(rng, F)
            if square_class(a * b) is not square_class(a) * square_class(b):
                fails += 1
                witness = witness or [a.compact(), b.compact()]
        out.append(Check(f"sq.homomorphism.p{p}", REF_CLASSES, fails == 0, "0 failures", {"failures": fails, "pairs": config.trials}, witness))
    table = {f"{a.value}*{b.value}": (a * b).value for a in SquareClass for b in SquareClass}
    klein = table["U*U"] == "One" and table["Pi*Pi"] == "One" and table["U*Pi"] == "UPi"
    klein = klein and all(table[f"{a.value}*One"] == a.value for a in SquareClass)
    out.append(Check("sq.klein-table", REF_CLASSES, klein, "U*U = Pi*Pi = One, U*Pi = UPi", table))
    return out


def check_sqrt(config: Config) -> list:
    F = config.field
    rng = config.rng("sq.sqrt")
    fails, witness = 0, None
    for _ in range(config.trials):
        a = random_scalar(rng, F)
        r = sqrt(a)
        good = (r is None) == (square_class(a) is not SquareClass.ONE)
        if r is not None:
            good = good and agreement(r * r, a) >= F.N - 1
        if not good:
            fails += 1
            witness = witness or a.compact()
    return [Check("sq.sqrt", REF_SQRT, fails == 0, "sqrt(a)^2 = a at depth >= N-1; absent iff class != One", {"failures": fails}, witness)]


# -- limits -----------------------------------------------------------------------

REF_LIMIT = {
    "diag": "accumulation points of the diagonal case are [1,-b;a,-ab]",
    "conj": "accumulation points of the conjugation case are [-theta(b),1;-b theta(b),b]",
    "inner-one": "accumulation points for m = 1 are [1,-b;b,-b^2]",
    "inner": "accumulation points for m != 1 are [1,-z/m;z,-z^2/m]",
}
REF_DIVERGE = "along x_n = p^n the sequences have no limit in the big cell"
REF_CLOSED = "the boundary is the closed rank-one orbit of [1,0;0,0] (or [0,1;0,0])"


def _limit_ref(spec) -> str:
    if isinstance(spec, DiagonalSwap):
        return REF_LIMIT["diag"]
    if isinstance(spec, GaloisConj):
        return REF_LIMIT["conj"]
    return REF_LIMIT["inner-one" if spec.square_class is SquareClass.ONE else "inner"]


def family_run(spec, b, n_max: int, a=None) -> dict:
    """Contracting and expanding runs of one family with their verdicts."""
    N = spec.field.N
    fam = LimitFamily(spec, b, a=a)
    pts = limit_sequence(fam, n_max)
    pred = predicted_accumulation(spec, b, a=a, gi=fam.representative)
    res = detect_limit(pts, spec.cell)
    pred_depths = [min(proj_depth(pred, P), N) for P in pts]
    growth = all(d1 - d0 >= 2 or d0 >= N - 4 for d0, d1 in zip(pred_depths, pred_depths[1:]))
    exp = detect_limit(limit_sequence(LimitFamily(spec, b, Direction.EXPANDING, a=a), n_max), spec.cell)
    converged = isinstance(res, Converged)
    final = min(proj_depth(pred, res.limit), N) if converged else 0
    return {
        "result": res,
        "predicted": pred,
        "depths": pred_depths,
        "converged": converged and final >= N - 4 and growth,
        "diverged": not isinstance(exp, Converged),
        "final": final,
        "expand_evidence": getattr(exp, "evidence", None),
    }


def check_configured_limit(config: Config) -> list:
    spec = config.spec()
    b = parse_b(config, spec)
    N = spec.field.N
    n_max = config.n_max or N - 2
    fam = LimitFamily(spec, b, Direction(config.direction))
    pts = limit_sequence(fam, n_max)
    res = detect_limit(pts, spec.cell)
    if fam.direction is Direction.EXPANDING:
        ok = not isinstance(res, Converged)
        return [Check("limits.configured", REF_DIVERGE, ok, "Diverged", {"result": type(res).__name__, "depths": res.depths})]
    pred = predicted_accumulation(spec, b, gi=fam.representative)
    ok = isinstance(res, Converged) and proj_depth(pred, res.limit) >= N - 4
    observed = {
        "result": type(res).__name__,
        "limit": res.limit.render() if isinstance(res, Converged) else None,
        "depths": res.depths,
    }
    return [Check("limits.configured", _limit_ref(spec), ok, pred.render(), observed)]


def check_limit_sweep(config: Config) -> list:
    F = config.field
    n_max = config.n_max or F.N - 2
    out = []
    for spec in all_specs(F):
        name = spec_name(spec)
        rng = config.rng(f"limits.sweep.{name}")
        rows, bad = [], None
        for _ in range(20):
            b = _random_b(rng, spec)
            run = family_run(spec, b, n_max)
            rows.append(run["depths"])
            if not (run["converged"] and run["diverged"]) and bad is None:
                bad = {"b": b.compact(), "depths": run["depths"], "expand": run["expand_evidence"]}
        ok = bad is None
        out.append(Check(
            f"limits.sweep.{name}",
            _limit_ref(spec) + "; " + REF_DIVERGE,
            ok,
            f"20 contracting runs converge at depth >= {F.N - 4} growing >= 2 per step; expanding runs diverge",
            {"runs": len(rows), "depth_profiles": rows},
            bad,
        ))
    spec = DiagonalSwap(F)
    rng = config.rng("limits.diag-two-parameter")
    bad = None
    for _ in range(10):
        a, b = random_scalar(rng, F), random_scalar(rng, F)
        run = family_run(spec, b, n_max, a=a)
        if not (run["converged"] and run["diverged"]) and bad is None:
            bad = {"a": a.compact(), "b": b.compact(), "depths": run["depths"]}
    out.append(Check("limits.diag-two-parameter", REF_LIMIT["diag"], bad is None, "10 random (a, b) converge to [1,-b;a,-ab]", {"pairs": 10}, bad))
    return out


def _detected_limits(config: Config, tag: str) -> list:
    F = config.field
    n_max = config.n_max or F.N - 2
    out = []
    for spec in all_specs(F):
        rng = config.rng(f"{tag}.{spec_name(spec)}")
        for _ in range(20):
            res = detect_limit(limit_sequence(LimitFamily(spec, _random_b(rng, spec)), n_max), spec.cell)
            if isinstance(res, Converged):
                out.append((spec, res.limit))
    return out


def check_closed_orbit(config: Config) -> list:
    limits = _detected_limits(config, "limits.closed-orbit")
    bad = None
    cells = True
    for spec, L in limits:
        ok, _ = closed_orbit_membership(spec, L)
        cells = cells and L.in_cell(spec.cell)
        if not ok and bad is None:
            bad = {"family": spec_name(spec), "limit": L.render()}
    return [
        Check("limits.closed-orbit", REF_CLOSED, bad is None, "every limit lies in the closed orbit", {"limits": len(limits)}, bad),
        Check("limits.big-cell", "big cells [1,x2;x3,x4] and [x1,1;x3,x4]", cells, "limits have a nonzero entry at the cell position", {"limits": len(limits)}),
    ]


# -- stabilizers and H_sigma -------------------------------------------------------

REF_STAB = {
    "inner-exact": "the stabilizer of [1,0;0,0] is {+-1} x U+",
    "inner-proj": "the stabilizer of [1,0;0,0] is {+-1} x U+",
    "conj-exact": "the stabilizer of [0,1;0,0] is {(a, z; 0, 1/a) : a^2 - alpha^2 b^2 = 1, z in E}",
    "diag-proj": "the stabilizer of [1,0;0,0] is B+ x B-",
}
REF_COMPACT = "for m != 1, H_sigma is compact and abelian"
REF_NONCOMPACT = "for m = 1, H_sigma is noncompact and abelian"
REF_ENDS = "H_sigma fixes exactly the two ends [1 : +-sqrt(m)]"


def _profile_check(config: Config, cid: str, spec, mode: Mode, ref: str, expected: str) -> Check:
    rng = config.rng(cid)
    prof = stabilizer_profile(spec, spec.base_point, mode, config.trials, rng, shaped=config.trials // 2)
    witness = None if prof.counterexample is None else render(prof.counterexample)
    observed = {"trials": prof.trials, "members": prof.members, "counterexamples": prof.disagreements, "by_shape": prof.by_shape}
    return Check(cid, ref, prof.disagreements == 0, expected, observed, witness)


def check_stab_inner(config: Config) -> list:
    F = config.field
    out = []
    for cls in SquareClass:
        spec = inner(F, cls)
        out.append(_profile_check(config, f"stab.inner-{cls.value}.exact", spec, Mode.EXACT, REF_STAB["inner-exact"], "member iff c = 0 and a^2 = 1"))
        out.append(_profile_check(config, f"stab.inner-{cls.value}.projective", spec, Mode.PROJECTIVE, REF_STAB["inner-proj"], "member iff c = 0"))
    return out


def check_stab_discrepancy(config: Config) -> list:
    """torus(p) scales [1,0;0,0] by p^2: a projective member that is not an exact one."""
    F = config.field
    spec = inner(F, M_NAMES[config.m])
    g = torus(F(F.p))
    proj = stabilizer_membership(spec, spec.base_point, g, Mode.PROJECTIVE)
    exact = stabilizer_membership(spec, spec.base_point, g, Mode.EXACT)
    return [Check(
        "stab.discrepancy",
        REF_STAB["inner-proj"],
        proj and not exact,
        "projective stabilizer is all of B+, exact stabilizer is mu_2 U+",
        {"projective_member": proj, "exact_member": exact},
        g.render(),
    )]


def check_stab_conj(config: Config) -> list:
    F = config.field
    out = []
    for kind in ExtKind:
        spec = galois(F, kind)
        out.append(_profile_check(config, f"stab.conj-{kind.value}.exact", spec, Mode.EXACT, REF_STAB["conj-exact"], "member iff c = 0 and N(a) = 1"))
    return out


def check_stab_diag(config: Config) -> list:
    spec = DiagonalSwap(config.field)
    return [
        _profile_check(config, "stab.diag.projective", spec, Mode.PROJECTIVE, REF_STAB["diag-proj"], "member iff g1 in B+ and g2 in B-"),
        _profile_check(config, "stab.diag.exact", spec, Mode.EXACT, REF_STAB["diag-proj"], "member iff g1 in B+, g2 in B- and a1 = a2"),
    ]


def _size(g: Mat2) -> int:
    return min(0, min(x.fval for x in g.entries() if not x.is_zero))


def _commutes(g: Mat2, h: Mat2, depth: int) -> bool:
    """gh = hg up to rounding, measured against |g| |h| as in membership tests."""
    diff = min((x - y).order for x, y in zip((g @ h).entries(), (h @ g).entries()))
    return diff - _size(g) - _size(h) >= depth


def _fixes(h: Mat2, xi, depth: int) -> bool:
    """h [x : y] = [x : y], as the cross product of h (x, y) with (x, y) relative to |h|."""
    if isinstance(xi.x, ExtScalar):
        h = h.to_ext(xi.x.ext)
    u = h.a * xi.x + h.b * xi.y
    v = h.c * xi.x + h.d * xi.y
    return (u * xi.y - v * xi.x).order - _size(h) >= depth


def check_hsigma(config: Config) -> list:
    F = config.field
    depth = F.N - 2
    out = []
    for cls in SquareClass:
        spec = inner(F, cls)
        rng = config.rng(f"hsigma.{cls.value}")
        hs = [sample_fixed_group(spec, rng) for _ in range(config.trials)]
        vals = [x.valuation for h in hs for x in h.entries() if not x.is_zero]
        comm = sum(not _commutes(g, h, depth) for g, h in zip(hs, hs[1:] + hs[:1]))
        ends = fixed_ends(spec)
        moved = sum(not _fixes(h, e, depth) for h in hs for e in ends)
        if cls is SquareClass.ONE:
            spread = max(abs(v) for v in vals[: 4 * 100])
            out.append(Check("hsigma.one.noncompact", REF_NONCOMPACT, comm == 0 and spread >= 2,
                             "pairs commute; max |v(entry)| >= 2 within 100 samples", {"commute_failures": comm, "valuation_spread": spread}))
        else:
            out.append(Check(f"hsigma.{cls.value}.compact", REF_COMPACT, comm == 0 and min(vals) >= 0,
                             "pairs commute; every entry integral", {"commute_failures": comm, "min_valuation": min(vals)}))
        out.append(Check(f"hsigma.{cls.value}.fixed-ends", REF_ENDS, moved == 0, "both ends fixed by every sample",
                         {"ends": [e.render() for e in ends], "moved": moved}))
    return out


# -- boundary orbits --------------------------------------------------------------

REF_DIAG6 = "there are 6 orbits of the diagonal torus on the boundary"
REF_H6 = "H_{sigma_1} has 6 orbits on the boundary"
REF_SLF5 = "there are at most 5 orbits of SL(2,F) on the boundary of the tree of E"
REF_H8 = "for m != 1, H_{sigma_m} has at most 8 orbits on the boundary"


def check_orbits_diag(config: Config) -> list:
    F = config.field
    rng = config.rng("orbits.diag")
    pts = [sample_p1(rng, F) for _ in range(config.trials)]
    hist = Counter(diag_orbit_class(x) for x in pts)
    moved = 0
    for xi in pts:
        d = random_scalar(rng, F)
        moved += diag_orbit_class(moebius(torus(d), xi)) != diag_orbit_class(xi)
    return [
        Check("orbits.diag.labels", REF_DIAG6, set(hist) == set(DIAG_LABELS), sorted(DIAG_LABELS), {"histogram": dict(sorted(hist.items()))}),
        Check("orbits.diag.invariance", REF_DIAG6, moved == 0, "labels fixed by torus(d)", {"changed": moved, "samples": len(pts)}),
    ]


def check_orbits_h1(config: Config) -> list:
    F = config.field
    rng = config.rng("orbits.h1")
    pts = [sample_p1(rng, F) for _ in range(config.trials)]
    hist = Counter(hsigma1_orbit_class(x) for x in pts)
    moved = sum(hsigma1_orbit_class(moebius(hsigma1_element(random_scalar(rng, F, -1, 1)), x)) != hsigma1_orbit_class(x) for x in pts)
    reps = [line_point(F, 1, -1), line_point(F, 1, 1)]
    reps += [line_point(F, 1 - m, 1 + m) for m in (F.class_rep(c) for c in SquareClass)]
    rep_labels = [hsigma1_orbit_class(x) for x in reps]
    return [
        Check("orbits.h1.labels", REF_H6, len(hist) == 6, 6, {"histogram": dict(sorted(hist.items()))}),
        Check("orbits.h1.representatives", REF_H6, len(set(rep_labels)) == 6, "6 distinct labels",
              {x.render(): lab for x, lab in zip(reps, rep_labels)}),
        Check("orbits.h1.invariance", REF_H6, moved == 0, "labels fixed by H_{sigma_1}", {"changed": moved}),
    ]


def check_orbits_slf(config: Config) -> list:
    F = config.field
    out = []
    for kind in ExtKind:
        E = ExtField(F, kind)
        rng = config.rng(f"orbits.slf.{kind.value}")
        pts = [sample_ext_p1(rng, E) for _ in range(config.trials)]
        hist = Counter(slf_orbit_on_ext_boundary(x) for x in pts)
        closed_moved = open_moved = 0
        for xi in pts[:500]:
            g = sample_sl2(rng, F).to_ext(E)
            closed_moved += (slf_orbit_on_ext_boundary(moebius(g, xi)) == CLOSED) != (slf_orbit_on_ext_boundary(xi) == CLOSED)
            d = random_scalar(rng, F, -1, 1)
            bsub = Mat2(d.inverse(), F.zero(), random_scalar(rng, F), d).to_ext(E)
            open_moved += slf_orbit_on_ext_boundary(moebius(bsub, xi)) != slf_orbit_on_ext_boundary(xi)
        blocks = slf_orbit_partition(E, rng)
        out.append(Check(f"orbits.slf.{kind.value}.labels", REF_SLF5, len(hist) <= 5, "<= 5 labels", {"histogram": dict(sorted(hist.items()))}))
        out.append(Check(f"orbits.slf.{kind.value}.closed-invariance", REF_SLF5, closed_moved == 0,
                         "ClosedRealOrbit preserved by 500 SL(2,F) samples", {"changed": closed_moved}))
        out.append(Check(f"orbits.slf.{kind.value}.open-invariance", REF_SLF5, open_moved == 0,
                         "open labels preserved by [1/d,0;c,d]", {"changed": open_moved}))
        out.append(Check(f"orbits.slf.{kind.value}.merges", REF_SLF5, len(blocks) <= 5,
                         "orbit count <= 5 (open labels joined by explicit witnesses)", {"orbits": len(blocks), "blocks": blocks}))
    return out


def check_orbits_hm(config: Config) -> list:
    cls = M_NAMES[config.m] if config.m != "one" else SquareClass.U
    F = config.field
    spec = inner(F, cls)
    rng = config.rng("orbits.hm")
    pts = [sample_p1(rng, F) for _ in range(500)]
    reps = cluster_hsigma_m_orbits(spec, pts, rng, budget=20)
    return [Check(f"orbits.hm-{cls.value}.probe", REF_H8, len(reps) <= 8, "<= 8 empirical classes",
                  {"classes": len(reps), "representatives": [r.render() for r in reps]})]


# -- double cosets ----------------------------------------------------------------

REF_LDU = "g = [1,0;c/a,1][a,0;0,1/a][1,b/a;0,1] whenever a != 0"
REF_DEC_INNER = "SL(2,F) is the disjoint union of B- g_i H_{sigma_1} over six representatives"
REF_DEC_CONJ = "SL(2,E) = B_E- SL(2,F) together with the open cells B_E- g_m SL(2,F)"
REF_COUNT = "|B+ \\ SL(2,Q_p) / H_sigma| is 6 for m = 1 and 2 otherwise"


def check_ldu(config: Config) -> list:
    F = config.field
    rng = config.rng("cosets.ldu")
    worst, bad = F.N, None
    for _ in range(config.trials):
        g = sample_sl2(rng, F)
        L, D, U = ldu_decompose(g)
        d = mat_depth(L @ D @ U, g)
        if d < worst:
            worst = d
            if d < F.N - 2:
                bad = g.render()
    raised = 0
    for g in (Mat2.of(F, 0, 1, -1, 0), Mat2(F.zero(), F(F.p), F(-1, F.p), random_scalar(rng, F))):
        try:
            ldu_decompose(g)
        except PivotZero:
            raised += 1
    return [
        Check("cosets.ldu", REF_LDU, worst >= F.N - 2, f"reconstruction depth >= {F.N - 2}", {"worst_depth": worst, "samples": config.trials}, bad),
        Check("cosets.ldu.pivot-zero", REF_LDU, raised == 2, "PivotZero on a = 0", {"raised": raised}),
    ]


def _coset_check(config: Config, cid: str, ref: str, samples: list, conj: bool, n_labels: int) -> Check:
    F = config.field
    worst, bad, seen = F.N, None, Counter()
    h_bad = 0
    for g in samples:
        dec = double_coset_decompose_conj(g) if conj else double_coset_decompose_inner(g)
        i, b, h = dec
        seen[i] += 1
        d = min(reconstruction_depth(g, dec, conj), F.N)
        if conj:
            h_ok = all(x.b.is_zero for x in h.entries()) and is_sl2(h, F.N - 2)
        else:
            h_ok = element_depth(inner(h.field, SquareClass.ONE).apply(h), h) >= F.N - 2
        h_bad += not h_ok
        if d < worst:
            worst = d
        if (d < F.N - 2 or not b.b.is_exact_zero or not h_ok) and bad is None:
            bad = {"g": g.render(), "index": i, "b": b.render(), "h": h.render(), "depth": d}
    ok = worst >= F.N - 2 and bad is None and len(seen) == n_labels
    observed = {"worst_depth": worst, "indices": dict(sorted(seen.items())), "h_not_in_H": h_bad}
    return Check(cid, ref, ok, f"depth >= {F.N - 2}, b fixes [0:1], h in H, {n_labels} indices seen", observed, bad)


def check_cosets_inner(config: Config) -> list:
    F = config.field
    rng = config.rng("cosets.inner")
    samples = []
    for k in range(config.trials):
        samples.append(sample_sl2(rng, F) if k % 2 else structured_inner_sample(rng, F, (k // 2) % 6))
    return [_coset_check(config, "cosets.inner", REF_DEC_INNER, samples, False, 6)]


def check_cosets_conj(config: Config) -> list:
    F = config.field
    out = []
    for kind in ExtKind:
        E = ExtField(F, kind)
        rng = config.rng(f"cosets.conj.{kind.value}")
        samples = []
        for k in range(config.trials):
            if k % 4 == 0:
                samples.append(structured_conj_sample(rng, E))
            else:
                samples.append(sample_sl2(rng, E))
        out.append(_coset_check(config, f"cosets.conj.{kind.value}", REF_DEC_CONJ, samples, True, 5))
    return out


def check_coset_counts(config: Config) -> list:
    out = []
    n = max(60, config.trials // 5)
    for p in (3, 5, 7):
        F = make_field(p, config.precision)
        for cls in SquareClass:
            cid = f"cosets.count.p{p}.{cls.value}"
            rng = config.rng(cid)
            if cls is SquareClass.ONE:
                idx = {double_coset_decompose_inner(sample_sl2(rng, F) if k % 2 else structured_inner_sample(rng, F, (k // 2) % 6))[0]
                       for k in range(n)}
                count = len(idx)
                expected = 6
            else:
                spec = inner(F, cls)
                # B- g H <-> H-orbit of g^-1 [0:1]
                pts = [sample_p1(rng, F) for _ in range(n)]
                reps = cluster_hsigma_m_orbits(spec, pts, rng, budget=20)
                count = len(reps)
                expected = 2
                inv = sorted({hsigma_m_invariant(spec.m, x).value for x in pts})
            observed = {"cosets": count}
            if cls is not SquareClass.ONE:
                observed["invariant_classes"] = inv
            out.append(Check(cid, REF_COUNT, count == expected, expected, observed))
    return out


# -- rank dichotomy ---------------------------------------------------------------

REF_DICHOTOMY = "the compactification is the open orbit of [Id] together with the closed rank-one orbit"


def _cartan_sample(rng, ring) -> Mat2:
    """k1 diag(p^j, p^-j) k2 with k1, k2 integral and |j| <= 1.

    psi of an element of size p^-j has determinant of order about 4j after
    scaling, so large elements already look rank one at tau = N - 2.  Those
    are the points the limits are made of; here we stay in the interior.
    """
    F = base_field(ring)
    k1, k2 = sample_sl2(rng, ring, vmin=0, vmax=0), sample_sl2(rng, ring, vmin=0, vmax=0)
    t = torus(F(F.p) ** rng.randint(-1, 1))
    return k1 @ (t.to_ext(ring) if isinstance(ring, ExtField) else t) @ k2


def check_rank(config: Config) -> list:
    F = config.field
    tau = config.tau
    rng = config.rng("rank.psi")
    bad, count, orders = None, 0, Counter()
    for spec in all_specs(F):
        for _ in range(max(1, config.trials // 8)):
            if isinstance(spec, DiagonalSwap):
                g = (_cartan_sample(rng, F), _cartan_sample(rng, F))
            else:
                g = _cartan_sample(rng, spec.ring)
            P = psi(spec, g)
            count += 1
            orders[P.mat.det().order] += 1
            if rank_class(P, tau) is not RankClass.INVERTIBLE and bad is None:
                bad = {"family": spec_name(spec), "point": P.render()}
    limits = _detected_limits(config, "rank.limits")
    wrong = [L.render() for _, L in limits if rank_class(L, tau) is not RankClass.RANK_ONE]
    return [
        Check("rank.psi-invertible", REF_DICHOTOMY, bad is None, "every psi point Invertible", {"points": count, "det_orders": dict(sorted(orders.items()))}, bad),
        Check("rank.limits-rank-one", REF_DICHOTOMY, not wrong, "every limit RankOne", {"limits": len(limits), "misclassified": len(wrong)},
              wrong[0] if wrong else None),
    ]


REGISTRY = {
    "square-classes": [check_classes, check_sqrt],
    "limits": [check_configured_limit, check_limit_sweep, check_closed_orbit],
    "stabilizers": [check_stab_inner, check_stab_discrepancy, check_stab_conj, check_stab_diag, check_hsigma],
    "orbits": [check_orbits_diag, check_orbits_h1, check_orbits_slf, check_orbits_hm],
    "cosets": [check_ldu, check_cosets_inner, check_cosets_conj, check_coset_counts],
    "rank-dichotomy": [check_rank],
}


def _tasks(name: str) -> list:
    if name == "all":
        return [(s, i) for s in SUITES for i in range(len(REGISTRY[s]))]
    if name not in REGISTRY:
        raise ConfigError(f"unknown suite {name!r}")
    return [(name, i) for i in range(len(REGISTRY[name]))]


def _run_task(config: Config, suite: str, index: int) -> list:
    return REGISTRY[suite][index](config)


def run_suite(name: str, config: Config, parallel: bool = False) -> Report:
    """Run every check of ``name`` (or of all suites); failures are report entries."""
    config.validate()
    tasks = _tasks(name)
    if parallel and len(tasks) > 1:
        with ProcessPoolExecutor() as pool:
            futures = [pool.submit(_run_task, config, s, i) for s, i in tasks]
            results = [f.result() for f in futures]
    else:
        results = [_run_task(config, s, i) for s, i in tasks]
    report = Report(name, config.params())
    for checks in results:
        report.checks.extend(checks)
    for c in report.checks:
        c.expected, c.observed, c.witness = render(c.expected), render(c.observed), render(c.witness)
    return report


def config_dict(config: Config) -> dict:
    return asdict(config)
