from fractions import Fraction as F

import numpy as np
import pytest

from atiyah_sasaki.algebra import FiberPair, inner_k
from atiyah_sasaki.atiyah import (AtiyahSpec, H, nabla_supra, supra_bound_K, supra_curvature, supra_vanishes,
                                  varpi_space_form, xi_closed_space_form)
from atiyah_sasaki.base_geometry import (ComplexProjective, ModelError, Product, SpaceForm, Surface2D,
                                         SymmetricSpace, Unimodular3)

CLOSED = [
    (SpaceForm(3, 1.3), 0.7), (SpaceForm(4, -1.0), 2.0), (Surface2D(0.8, np.array([0.2, 0.5])), 1.5),
    (ComplexProjective(2), 0.4), (SymmetricSpace.complex_projective(2), 0.9), (SymmetricSpace.sphere(3, 1.0), 1.2),
    (Product((SpaceForm(2, 1.0), SpaceForm(2, -0.5))), 1.0), (Product((SpaceForm(2, 1.0), SpaceForm(1, 0.0))), 2.0),
]


def _rand_fp(spec, rng):
    return spec.frame.split(rng.standard_normal(spec.m))


@pytest.mark.parametrize("base,k", CLOSED, ids=lambda x: type(x).__name__ if not isinstance(x, float) else str(x))
def test_closed_form_matches_generic(base, k, rng):
    spec = AtiyahSpec(base, k)
    for _ in range(20):
        X, Y = rng.standard_normal((2, spec.n))
        xi = rng.standard_normal(spec.m)
        a = supra_curvature(spec, X, Y, xi, "closed")
        b = supra_curvature(spec, X, Y, xi, "generic")
        assert np.allclose(a, b, atol=1e-11)


@pytest.mark.parametrize("base,k", CLOSED + [(Unimodular3(1, 2, -1), 0.5)],
                         ids=lambda x: type(x).__name__ if not isinstance(x, float) else str(x))
def test_supra_is_skew(base, k):
    S = np.asarray(AtiyahSpec(base, k).S, float)
    assert np.allclose(S, -S.transpose(0, 1, 3, 2))
    assert np.allclose(S, -S.transpose(1, 0, 2, 3))


def test_H_is_skew_adjoint_for_inner_k(rng):
    spec = AtiyahSpec(SpaceForm(3, 2.0), 0.6)
    for _ in range(10):
        X = rng.standard_normal(3)
        u, v = _rand_fp(spec, rng), _rand_fp(spec, rng)
        assert np.isclose(inner_k(H(spec, X, u), v, spec.k), -inner_k(u, H(spec, X, v), spec.k))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_xi_closed_form(n, rng):
    c, k = 1.7, 0.45
    spec = AtiyahSpec(SpaceForm(n, c), k)
    S = spec.S
    G = np.einsum("ijua,ijub->ab", S, S)
    for _ in range(10):
        v = rng.standard_normal(spec.m)
        assert np.isclose(v @ G @ v, xi_closed_space_form(n, c, k, spec.frame.split(v)))


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("k", [0.5, 1.0, 3.0])
def test_vanishing_iff_c_is_2_over_k(n, k):
    assert supra_vanishes(AtiyahSpec(SpaceForm(n, 2 / k), k))
    assert supra_vanishes(AtiyahSpec(SpaceForm(n, 0.0), k))
    r = supra_vanishes(AtiyahSpec(SpaceForm(n, 1 / k), k))
    assert not r and r.witness["varpi"] != 0
    S = np.asarray(AtiyahSpec(SpaceForm(n, 1 / k), k).S, float)
    assert np.max(np.abs(S)) > 1e-3


def test_vanishing_other_bases():
    assert not supra_vanishes(AtiyahSpec(ComplexProjective(1), 1.0))
    assert not supra_vanishes(AtiyahSpec(Product((SpaceForm(2, 2.0), SpaceForm(2, 2.0))), 1.0))
    assert supra_vanishes(AtiyahSpec(Product((SpaceForm(2, 0.0), SpaceForm(1, 0.0))), 1.0))
    # a product is never supra-flat once a curved factor sits next to another one
    r = supra_vanishes(AtiyahSpec(Product((SpaceForm(2, 2.0), SpaceForm(1, 0.0))), 1.0))
    assert not r
    assert supra_vanishes(AtiyahSpec(SpaceForm(3, F(4)), F(1, 2), exact=True))


@pytest.mark.parametrize("c,k", [(1.0, 0.5), (1.0, 1.0), (-1.0, 2.0), (3.0, 0.25)])
def test_bound_K_dominates(c, k, rng):
    spec = AtiyahSpec(SpaceForm(3, c), k)
    K = supra_bound_K(spec)
    assert np.isclose(K, 8 * abs(varpi_space_form(c, k)))
    S = np.asarray(spec.S, float)
    X, Y = rng.standard_normal((2, 2000, 3))
    xi = rng.standard_normal((2000, spec.m))
    v = np.einsum("qa,qb,abij,qj->qi", X, Y, S, xi)
    ratio = np.linalg.norm(v, axis=1) / (np.linalg.norm(X, axis=1) * np.linalg.norm(Y, axis=1) * np.linalg.norm(xi, axis=1))
    assert ratio.max() <= K + 1e-12
    with pytest.raises(ModelError):
        supra_bound_K(AtiyahSpec(ComplexProjective(1), 1.0))


def test_exact_space_form_tables():
    spec = AtiyahSpec(SpaceForm(2, F(1)), F(1, 2), exact=True)
    assert spec.S.dtype == object
    X, Y = np.array([F(1), F(0)]), np.array([F(0), F(1)])
    xi = FiberPair(np.array([F(1), F(2)]), np.array([[F(0), F(1)], [F(-1), F(0)]]))
    out = supra_curvature(spec, X, Y, xi)
    gen = supra_curvature(spec, X, Y, xi, "generic")
    assert np.all(out.tangent == gen.tangent) and np.all(out.skew == gen.skew)


def test_nabla_supra_parallel_base(rng):
    # with nabla R^M = 0 only the H part of the connection acts: D_w = [H_w, S]
    for base in (SpaceForm(3, 1.0), ComplexProjective(2), SymmetricSpace.sphere(3)):
        spec = AtiyahSpec(base, 0.8)
        Hm, S, D = (np.asarray(t, float) for t in (spec.H, spec.S, spec.D))
        comm = np.einsum("wij,abjk->wabik", Hm, S) - np.einsum("abij,wjk->wabik", S, Hm)
        assert np.allclose(D, comm, atol=1e-12)
        W, X, Y = rng.standard_normal((3, spec.n))
        xi = rng.standard_normal(spec.m)
        assert np.allclose(nabla_supra(spec, W, X, Y, xi), np.einsum("w,a,b,wabij,j->i", W, X, Y, comm, xi))
    assert np.max(np.abs(AtiyahSpec(SpaceForm(3, 2.0), 1.0).D)) < 1e-12


def test_nabla_supra_surface_gradient():
    flat = AtiyahSpec(Surface2D(1.0), 1.0)
    spec = AtiyahSpec(Surface2D(1.0, np.array([0.3, 0.0])), 1.0)
    D = np.asarray(spec.D, float)
    assert D.shape == (2, 2, 2, 3, 3)
    assert np.allclose(D, -D.transpose(0, 1, 2, 4, 3))
    # the gradient only changes the e_1 derivative
    assert np.allclose(D[1], np.asarray(flat.D, float)[1])
    assert not np.allclose(D[0], np.asarray(flat.D, float)[0])


def test_errors():
    with pytest.raises(ValueError):
        AtiyahSpec(SpaceForm(2, 1.0), 0)
    spec = AtiyahSpec(SpaceForm(2, 1.0), 1.0)
    with pytest.raises(ModelError):
        supra_curvature(spec, np.ones(3), np.ones(2), np.ones(3))
    with pytest.raises(ValueError):
        supra_curvature(spec, np.ones(2), np.ones(2), np.ones(3), "magic")
    with pytest.raises(ModelError):
        supra_curvature(AtiyahSpec(Unimodular3(1, 1, 1), 1.0), *np.eye(3)[:2], np.ones(6), "closed")
