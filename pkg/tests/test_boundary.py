import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wonderful_sl2.boundary import (
    CLOSED,
    END0,
    END_INF,
    SameOrbitWitness,
    cluster_hsigma_m_orbits,
    conj_representatives,
    diag_orbit_class,
    double_coset_decompose_conj,
    double_coset_decompose_inner,
    fixed_ends,
    hsigma1_element,
    hsigma1_orbit_class,
    hsigma_m_invariant,
    hsigma_m_orbit_probe,
    inner_representatives,
    open_label,
    reconstruction_depth,
    sample_ext_p1,
    sample_p1,
    slf_orbit_on_ext_boundary,
    slf_orbit_partition,
    structured_conj_sample,
    structured_inner_sample,
)
from wonderful_sl2.extension import ExtField, ExtKind, ExtScalar
from wonderful_sl2.involution import inner, sample_fixed_group
from wonderful_sl2.matgroup import Mat2, mat_depth, sample_sl2, torus
from wonderful_sl2.padic import SquareClass, make_field, random_scalar
from wonderful_sl2.projective import line_depth, line_point, moebius

F = make_field(5, 12)
E = ExtField(F, ExtKind.UNRAMIFIED)


def test_diag_labels():
    assert diag_orbit_class(line_point(F, 1, 0)) == END0
    assert diag_orbit_class(line_point(F, 0, 1)) == END_INF
    assert diag_orbit_class(line_point(F, 1, 4)) == "One"
    assert diag_orbit_class(line_point(F, 1, 10)) == "UPi"


def test_hsigma1_representatives_are_distinct():
    ends = {hsigma1_orbit_class(line_point(F, 1, 1)), hsigma1_orbit_class(line_point(F, 1, -1))}
    assert ends == {END0, END_INF}
    m = F.class_rep(SquareClass.PI)
    assert hsigma1_orbit_class(line_point(F, 1 - m, 1 + m)) == "Pi"
    labels = {hsigma1_orbit_class(line_point(F, 1 - m, 1 + m)) for m in (F.class_rep(c) for c in SquareClass)}
    assert len(labels | ends) == 6


def test_slf_labels():
    assert slf_orbit_on_ext_boundary(line_point(E, 1, 3)) == CLOSED
    assert slf_orbit_on_ext_boundary(line_point(E, 1, E.alpha())) == open_label(SquareClass.ONE)
    assert slf_orbit_on_ext_boundary(line_point(E, 1, E(2, 5))) == open_label(SquareClass.PI)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_diag_label_is_torus_invariant(seed):
    rng = random.Random(seed)
    xi = sample_p1(rng, F)
    assert diag_orbit_class(moebius(torus(random_scalar(rng, F)), xi)) == diag_orbit_class(xi)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_hsigma1_label_is_invariant(seed):
    rng = random.Random(seed)
    xi = sample_p1(rng, F)
    h = hsigma1_element(random_scalar(rng, F, -1, 1))
    assert hsigma1_orbit_class(moebius(h, xi)) == hsigma1_orbit_class(xi)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from(list(ExtKind)))
def test_closed_orbit_is_slf_invariant(seed, kind):
    rng = random.Random(seed)
    ext = ExtField(F, kind)
    xi = sample_ext_p1(rng, ext)
    g = sample_sl2(rng, F).to_ext(ext)
    assert (slf_orbit_on_ext_boundary(moebius(g, xi)) == CLOSED) == (slf_orbit_on_ext_boundary(xi) == CLOSED)


@pytest.mark.parametrize("kind", list(ExtKind))
def test_open_labels_merge_in_pairs(kind):
    blocks = slf_orbit_partition(ExtField(F, kind), random.Random(1))
    assert len(blocks) <= 5
    assert sum(len(b) for b in blocks) == 5


# -- double cosets ---------------------------------------------------------------


def test_inner_trivial_decompositions():
    b = Mat2.of(F, 2, 0, 3, F(1, 2))
    i, bb, h = double_coset_decompose_inner(b)
    assert i == 0 and reconstruction_depth(b, (i, bb, h)) >= F.N - 2
    g1 = inner_representatives(F)[1][1]
    i, bb, h = double_coset_decompose_inner(g1)
    assert i == 1
    assert mat_depth(bb @ h, Mat2.identity(bb.field)) >= F.N - 2 or mat_depth(bb @ h, -Mat2.identity(bb.field)) >= F.N - 2


def test_conj_trivial_decompositions():
    for k, (label, gm) in enumerate(conj_representatives(E)):
        i, b, h = double_coset_decompose_conj(gm)
        assert i == k
        assert reconstruction_depth(gm, (i, b, h), conj=True) >= F.N - 2


@pytest.mark.parametrize("index", range(6))
def test_structured_inner_samples_land_in_their_coset(index):
    rng = random.Random(index)
    for _ in range(40):
        g = structured_inner_sample(rng, F, index)
        dec = double_coset_decompose_inner(g)
        assert dec[0] == index
        assert dec[1].b.is_exact_zero
        assert reconstruction_depth(g, dec) >= F.N - 2


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_inner_decomposition_reconstructs(seed):
    g = sample_sl2(random.Random(seed), F)
    dec = double_coset_decompose_inner(g)
    assert reconstruction_depth(g, dec) >= F.N - 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from(list(ExtKind)), st.booleans())
def test_conj_decomposition_reconstructs(seed, kind, closed):
    rng = random.Random(seed)
    ext = ExtField(F, kind)
    g = structured_conj_sample(rng, ext) if closed else sample_sl2(rng, ext)
    dec = double_coset_decompose_conj(g)
    assert (dec[0] == 0) == closed
    assert reconstruction_depth(g, dec, conj=True) >= F.N - 2
    assert all(x.b.is_zero for x in dec[2].entries())


# -- H_{sigma_m} -----------------------------------------------------------------


def test_probe_examples():
    spec = inner(F, SquareClass.U)
    rng = random.Random(2)
    xi = sample_p1(rng, F)
    res = hsigma_m_orbit_probe(spec, xi, xi, rng, budget=10)
    assert isinstance(res, SameOrbitWitness)
    h0 = sample_fixed_group(spec, rng)
    res = hsigma_m_orbit_probe(spec, xi, moebius(h0, xi), rng, budget=50)
    assert isinstance(res, SameOrbitWitness)
    assert line_depth(moebius(res.h, xi), moebius(h0, xi)) >= F.N - 3
    with pytest.raises(ValueError):
        hsigma_m_orbit_probe(inner(F, SquareClass.ONE), xi, xi, rng)


@pytest.mark.parametrize("cls", [SquareClass.U, SquareClass.PI, SquareClass.UPI])
def test_orbit_experiment_respects_bound(cls):
    spec = inner(F, cls)
    rng = random.Random(5)
    pts = [sample_p1(rng, F) for _ in range(150)]
    reps = cluster_hsigma_m_orbits(spec, pts, rng, budget=20)
    assert len(reps) <= 8
    assert len(reps) == len({hsigma_m_invariant(spec.m, x) for x in pts})


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([SquareClass.U, SquareClass.PI, SquareClass.UPI]))
def test_invariant_is_constant_on_orbits(seed, cls):
    spec = inner(F, cls)
    rng = random.Random(seed)
    xi = sample_p1(rng, F)
    h = sample_fixed_group(spec, rng)
    assert hsigma_m_invariant(spec.m, moebius(h, xi)) is hsigma_m_invariant(spec.m, xi)


@pytest.mark.parametrize("cls", list(SquareClass))
def test_fixed_ends(cls):
    spec = inner(F, cls)
    rng = random.Random(3)
    for _ in range(30):
        h = sample_fixed_group(spec, rng)
        scale = min(0, min(x.fval for x in h.entries()))
        for e in fixed_ends(spec):
            g = h.to_ext(e.x.ext) if isinstance(e.x, ExtScalar) else h
            u, v = g.a * e.x + g.b * e.y, g.c * e.x + g.d * e.y
            # h (x, y) is parallel to (x, y), relative to |h|
            assert (u * e.y - v * e.x).order - scale >= F.N - 2
