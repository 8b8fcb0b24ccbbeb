import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wonderful_sl2.errors import NonInvertibleDiagonal, PivotZero
from wonderful_sl2.extension import ExtField, ExtKind
from wonderful_sl2.matgroup import (
    Mat2,
    Shape,
    antidiag,
    det,
    is_sl2,
    ldu_decompose,
    mat_depth,
    mat_inv,
    sample_sl2,
    torus,
    uplus,
)
from wonderful_sl2.padic import make_field

F = make_field(5, 12)


def test_small_oracles():
    I = Mat2.identity(F)
    assert det(I) == F(1)
    assert mat_depth(mat_inv(Mat2.of(F, 0, 1, -1, 0)), Mat2.of(F, 0, -1, 1, 0)) >= F.N
    assert mat_depth(torus(F(1)), I) >= F.N
    assert mat_depth(uplus(F(0)), I) >= F.N
    A = antidiag(F(1))
    assert mat_depth(A @ A, I) >= F.N
    with pytest.raises(NonInvertibleDiagonal):
        torus(F(0))


def test_ldu_oracles():
    L, D, U = ldu_decompose(Mat2.identity(F))
    assert all(mat_depth(X, Mat2.identity(F)) >= F.N for X in (L, D, U))
    L, D, U = ldu_decompose(Mat2.of(F, 2, 1, 3, 2))
    assert mat_depth(L, Mat2.of(F, 1, 0, F(3, 2), 1)) >= F.N
    assert mat_depth(D, Mat2.of(F, 2, 0, 0, F(1, 2))) >= F.N
    assert mat_depth(U, Mat2.of(F, 1, F(1, 2), 0, 1)) >= F.N
    with pytest.raises(PivotZero):
        ldu_decompose(Mat2.of(F, 0, 1, -1, 0))


def test_torus_shape():
    rng = random.Random(1)
    for _ in range(50):
        g = sample_sl2(rng, F, Shape.TORUS)
        assert g.b.is_exact_zero and g.c.is_exact_zero
        assert g.d == g.a.inverse()


def test_sampler_is_deterministic():
    def run():
        rng = random.Random(42)
        return [sample_sl2(rng, F).render() for _ in range(20)]

    assert run() == run()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([None] + list(ExtKind)), st.sampled_from(list(Shape)))
def test_samples_are_unimodular(seed, kind, shape):
    ring = F if kind is None else ExtField(F, kind)
    g = sample_sl2(random.Random(seed), ring, shape)
    assert is_sl2(g)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_ldu_reconstructs(seed):
    g = sample_sl2(random.Random(seed), F)
    L, D, U = ldu_decompose(g)
    assert mat_depth(L @ D @ U, g) >= F.N - 2


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_adjugate_inverts(seed):
    g = sample_sl2(random.Random(seed), F)
    assert mat_depth(g @ g.adjugate(), Mat2.identity(F)) >= F.N - 2 + 2 * min(0, min(x.fval for x in g.entries() if not x.is_zero))
