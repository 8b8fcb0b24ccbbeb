import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wonderful_sl2.errors import SingularMatrix, ZeroArgument, ZeroMatrix
from wonderful_sl2.matgroup import Mat2, sample_sl2
from wonderful_sl2.padic import make_field, random_scalar
from wonderful_sl2.projective import (
    RankClass,
    canonicalize,
    line_depth,
    line_point,
    moebius,
    proj_depth,
    proj_point,
    rank_class,
)

F = make_field(5, 12)


def P(a, b, c, d):
    return proj_point(F, a, b, c, d)


def test_canonicalize_oracles():
    assert proj_depth(canonicalize(Mat2.of(F, 5, 0, 0, 5)), P(1, 0, 0, 1)) >= F.N
    assert proj_depth(canonicalize(Mat2.of(F, 0, 3, 0, 0)), P(0, 1, 0, 0)) >= F.N
    A = canonicalize(Mat2.of(F, 2, 1, 0, 0))
    assert A.pivot == 0
    assert proj_depth(A, P(1, F(1, 2), 0, 0)) >= F.N
    with pytest.raises(ZeroMatrix):
        canonicalize(Mat2.of(F, 0, 0, 0, 0))


def test_depth_oracles():
    assert proj_depth(P(1, -2, 2, 621), P(1, -2, 2, -4)) == 4
    assert proj_depth(P(1, 0, 0, 0), P(0, 1, 0, 0)) == 0
    A = P(1, 2, 3, 4)
    assert proj_depth(A, A) >= F.N


def test_rank_oracles():
    assert rank_class(P(1, 0, 0, 1)) is RankClass.INVERTIBLE
    assert rank_class(P(1, 0, 0, 0)) is RankClass.RANK_ONE
    rng = random.Random(3)
    for _ in range(50):
        b = random_scalar(rng, F)
        assert rank_class(P(1, -b, b, -b * b)) is RankClass.RANK_ONE


def test_line_oracles():
    assert line_depth(line_point(F, 1, 0), line_point(F, 0, 1)) == 0
    assert line_depth(line_point(F, 1, 1), line_point(F, 1, 6)) == 1
    xi = line_point(F, 1, 7)
    assert line_depth(xi, xi) >= F.N
    with pytest.raises(ZeroArgument):
        line_point(F, 0, 0)
    with pytest.raises(SingularMatrix):
        moebius(Mat2.of(F, 1, 1, 1, 1), xi)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_canonical_form_is_scale_invariant(seed):
    rng = random.Random(seed)
    M = sample_sl2(rng, F)
    s = random_scalar(rng, F)
    A, B = canonicalize(M), canonicalize(M.scale(s))
    assert A.pivot == B.pivot
    assert proj_depth(A, B) >= F.N - 2


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_moebius_is_an_action(seed):
    rng = random.Random(seed)
    g, h = sample_sl2(rng, F, vmin=-1, vmax=1), sample_sl2(rng, F, vmin=-1, vmax=1)
    xi = line_point(F, 1, random_scalar(rng, F, 0, 2))
    assert line_depth(moebius(g @ h, xi), moebius(g, moebius(h, xi))) >= F.N - 8
