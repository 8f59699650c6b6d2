from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atiyah_sasaki.algebra import (AtiyahFrame, ExactnessError, FiberPair, exact_sqrt, inner_k, orthonormalize,
                                   to_fraction, wedge)

floats = st.floats(-10, 10, allow_nan=False)


def test_wedge_example():
    # (e1∧e2)(e2) = e1, (e1∧e2)(e1) = -e2
    W = wedge(np.array([1, 0]), np.array([0, 1]))
    assert np.array_equal(W @ np.array([0, 1]), [1, 0])
    assert np.array_equal(W @ np.array([1, 0]), [0, -1])


def test_wedge_dimension_mismatch():
    with pytest.raises(ValueError):
        wedge(np.zeros(2), np.zeros(3))


@given(st.lists(floats, min_size=3, max_size=3), st.lists(floats, min_size=3, max_size=3),
       st.lists(floats, min_size=3, max_size=3))
def test_wedge_properties(x, y, z):
    X, Y, Z = map(np.array, (x, y, z))
    W = wedge(X, Y)
    assert np.allclose(W, -W.T)
    assert np.allclose(W, -wedge(Y, X))
    assert np.allclose(W @ Z, (Y @ Z) * X - (X @ Z) * Y)


@pytest.mark.parametrize("v,q", [("3/4", F(3, 4)), (2, F(2)), (0.5, F(1, 2)), (F(1, 3), F(1, 3)), ("-1/2", F(-1, 2))])
def test_to_fraction(v, q):
    assert to_fraction(v) == q


def test_exact_sqrt():
    assert exact_sqrt(F(9, 4)) == F(3, 2)
    with pytest.raises(ExactnessError):
        exact_sqrt(2)
    with pytest.raises(ExactnessError):
        exact_sqrt(F(-1))


def test_inner_k_rejects_nonpositive():
    xi = FiberPair(np.zeros(2), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        inner_k(xi, xi, 0)


def test_fiber_pair_shape_check():
    with pytest.raises(ValueError):
        FiberPair(np.zeros(3), np.zeros((2, 2)))


@settings(max_examples=50)
@given(st.integers(2, 5), st.floats(0.1, 5), st.integers(0, 2**31))
def test_frame_is_orthonormal_for_inner_k(n, k, seed):
    fr = AtiyahFrame(n, k)
    rng = np.random.default_rng(seed)
    I = np.eye(fr.m)
    G = np.array([[inner_k(fr.split(I[p]), fr.split(I[q]), k) for q in range(fr.m)] for p in range(fr.m)])
    assert np.allclose(G, np.eye(fr.m))
    v = rng.standard_normal(fr.m)
    assert np.allclose(fr.join(fr.split(v)), v)
    # flat coordinates are isometric
    w = rng.standard_normal(fr.m)
    assert np.isclose(inner_k(fr.split(v), fr.split(w), k), v @ w)


def test_frame_exact():
    fr = AtiyahFrame(3, F(1, 2), exact=True)
    assert fr.m == 6
    assert all(isinstance(x, F) for x in fr.basis[0].ravel())
    with pytest.raises(ExactnessError):
        AtiyahFrame(3, F(1), exact=True)


def test_frame_opmat_identity():
    fr = AtiyahFrame(3, 2.0)
    M = fr.opmat(lambda Z, Fm: (Z, Fm))
    assert np.allclose(M, np.eye(6))


@given(st.integers(0, 2**31))
def test_orthonormalize(seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((3, 4))
    Q = np.array(orthonormalize(list(A)))
    assert np.allclose(Q @ Q.T, np.eye(3))


def test_orthonormalize_exact_and_degenerate():
    Q = orthonormalize([np.array([F(3), F(4)]), np.array([F(1), F(0)])])
    assert Q[0][0] == F(3, 5) and Q[1][1] == F(-3, 5)
    with pytest.raises(ValueError):
        orthonormalize([np.array([1.0, 0.0]), np.array([2.0, 0.0])])
