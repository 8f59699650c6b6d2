import json
import os
import subprocess
import sys
from fractions import Fraction as F

import numpy as np
import pytest

from atiyah_sasaki import kernels
from atiyah_sasaki.base_geometry import (ComplexProjective, Generic, ModelError, Product, SpaceForm, Surface2D,
                                         Unimodular3, curvature_jet, sectional_base)
from atiyah_sasaki.kernels import _fallback
from atiyah_sasaki.sphere_bundle import (AtiyahBundle, BoundsError, GenericBundle, PlaneError, PlaneSpec,
                                         SphereBundleModel, TangentBundle, constant_scalar_check, default_constants,
                                         einstein_check, is_normalized, normalize_batch, normalize_plane,
                                         oneill_B, oneill_B_mixed, positivity_bounds, ricci, ricci_form, ricci_matrix,
                                         ricci_trace, sample_planes, scalar, sectional, sectional_batch,
                                         sectional_normalized_batch, sectional_rank2)


def unit(v, r=1.0):
    v = np.asarray(v, float)
    return r * v / np.linalg.norm(v)


@pytest.fixture
def models(rng):
    return [
        SphereBundleModel(SpaceForm(3, 1.0), AtiyahBundle(0.7), 1.3, unit(rng.standard_normal(6), 1.3)),
        SphereBundleModel(Surface2D(0.6, np.array([0.5, -0.2]), np.array([[0.3, 0.1], [0.1, -0.4]])),
                          AtiyahBundle(1.4), 0.8, unit(rng.standard_normal(3), 0.8)),
        SphereBundleModel(ComplexProjective(1), AtiyahBundle(0.5), 1.0, unit(rng.standard_normal(3))),
        SphereBundleModel(Product((SpaceForm(2, 1.0), SpaceForm(1, 0.0))), TangentBundle(), 2.0,
                          unit(rng.standard_normal(3), 2.0)),
        SphereBundleModel(Unimodular3(1, -1, 2), TangentBundle(), 1.0, unit(rng.standard_normal(3))),
    ]


def test_vertical_planes_have_curvature_one_over_r2(models, rng):
    for M in models:
        if M.m < 3:
            continue
        _, al, _, be = sample_planes(M, 50, rng)
        z = np.zeros((50, M.n))
        K = sectional_batch(M, z, al, z, be)
        assert np.allclose(K, 1 / float(M.r) ** 2)


def test_flat_base_product_structure(rng):
    # flat base: E^(r) is locally R^3 x S^5(r)
    M = SphereBundleModel(SpaceForm(3, 0.0), AtiyahBundle(1.0), 2.0, unit(rng.standard_normal(6), 2.0))
    X, al, Y, be = sample_planes(M, 200, rng)
    K = sectional_batch(M, X, al, Y, be)
    # K = |alpha_perp wedge beta_perp|^2 / r^2 after normalization; never negative and at most 1/r^2
    assert K.min() >= -1e-12 and K.max() <= 0.25 + 1e-12
    z = np.zeros_like(al)
    assert np.allclose(sectional_batch(M, X, z, Y, z), 0)
    assert np.allclose(sectional_batch(M, X, z, np.zeros_like(Y), be), 0)


def test_horizontal_planes_follow_oneill(models, rng):
    for M in models:
        for _ in range(5):
            X, Y = rng.standard_normal((2, M.n))
            z = np.zeros(M.m)
            K = sectional(M, PlaneSpec(X, z, Y, z))
            B = oneill_B(M, X, Y)
            den = (X @ X) * (Y @ Y) - (X @ Y) ** 2
            assert np.isclose(K, sectional_base(np.asarray(M.R, float), X, Y) - 3 * (B @ B) / den)


def test_oneill_mixed_tangent_bundle(rng):
    M = SphereBundleModel(Unimodular3(1, 2, -1), TangentBundle(), 1.0, unit(rng.standard_normal(3)))
    R = np.asarray(M.R, float)
    for _ in range(5):
        X = rng.standard_normal(3)
        al = M.projector() @ rng.standard_normal(3)
        al = np.asarray(al, float)
        # <R(X,X_i)alpha, a> = <R(alpha,a)X, X_i>
        expect = np.einsum("a,b,abij,j->i", al, np.asarray(M.a, float), R, X) / 2
        assert np.allclose(np.asarray(oneill_B_mixed(M, X, al), float), expect)
    with pytest.raises(PlaneError):
        oneill_B_mixed(M, np.ones(3), np.asarray(M.a, float))


def test_rank2_branch_matches_transcription(rng):
    for base in (SpaceForm(2, 1.0), Surface2D(-0.5, np.array([1.0, 0.3]), np.array([[0.2, 0.0], [0.0, 0.7]]))):
        M = SphereBundleModel(base, TangentBundle(), 1.7, unit(rng.standard_normal(2), 1.7))
        X, al, Y, be = sample_planes(M, 100, rng)
        Xn, aln, Yn, ben = normalize_batch(M, X, al, Y, be)
        assert np.allclose(ben, 0)
        K = sectional_normalized_batch(M, Xn, aln, Yn, ben)
        K2 = [sectional_rank2(M, Xn[q], aln[q], Yn[q]) for q in range(100)]
        assert np.allclose(K, K2)


def test_unit_tangent_sphere_quarter(rng):
    M = SphereBundleModel(SpaceForm(2, 1.0), TangentBundle(), 1.0, unit(rng.standard_normal(2)))
    assert np.allclose(sectional_batch(M, *sample_planes(M, 300, rng)), 0.25, atol=1e-12)


def test_normalization_relations(models, rng):
    for M in models:
        X, al, Y, be = sample_planes(M, 50, rng)
        for variant in (0, 1):
            Xn, aln, Yn, ben = normalize_batch(M, X, al, Y, be, variant)
            for q in range(50):
                P = PlaneSpec(Xn[q], aln[q], Yn[q], ben[q])
                assert is_normalized(M, P, 1e-10)
                # same plane: the new pair lies in the span of the old pair
                B = np.column_stack([np.r_[X[q], al[q]], np.r_[Y[q], be[q]]])
                for v in (np.r_[Xn[q], aln[q]], np.r_[Yn[q], ben[q]]):
                    c = np.linalg.lstsq(B, v, rcond=None)[0]
                    assert np.allclose(B @ c, v, atol=1e-10)


def test_sectional_rotation_invariance(models, rng):
    for M in models:
        Q, _ = np.linalg.qr(rng.standard_normal((M.n, M.n)))
        Mr = M.rotated(Q)
        X, al, Y, be = sample_planes(M, 50, rng)
        K = sectional_batch(M, X, al, Y, be)
        if isinstance(M.bundle, TangentBundle):
            Kr = sectional_batch(Mr, X @ Q, al @ Q, Y @ Q, be @ Q)
        else:
            Kr = sectional_batch(Mr, X @ Q, al, Y @ Q, be)
        assert np.allclose(K, Kr)


def test_plane_errors(rng):
    M = SphereBundleModel(SpaceForm(3, 1.0), AtiyahBundle(1.0), 1.0, np.eye(6)[0])
    z3, z6 = np.zeros(3), np.zeros(6)
    with pytest.raises(PlaneError):
        normalize_plane(M, PlaneSpec(z3, np.eye(6)[0], np.ones(3), z6))
    with pytest.raises(PlaneError):
        normalize_plane(M, PlaneSpec(z3, z6, np.ones(3), z6))
    with pytest.raises(PlaneError):
        normalize_plane(M, PlaneSpec(np.ones(3), z6, 2 * np.ones(3), z6))


def test_model_errors():
    with pytest.raises(ModelError):
        SphereBundleModel(SpaceForm(2, 1.0), TangentBundle(), 0.0, np.zeros(2))
    with pytest.raises(ModelError):
        SphereBundleModel(SpaceForm(2, 1.0), TangentBundle(), 1.0, np.array([1.0, 1.0]))
    with pytest.raises(ModelError):
        SphereBundleModel(SpaceForm(2, 1.0), TangentBundle(), 1.0, np.array([1.0, 0.0, 0.0]))
    with pytest.raises(ModelError):
        SphereBundleModel(SpaceForm(1, 0.0), TangentBundle(), 1.0, np.array([1.0]))
    R = curvature_jet(SpaceForm(2, 1.0)).R
    with pytest.raises(ModelError):
        SphereBundleModel(Generic(R), TangentBundle(), 1.0, np.array([1.0, 0.0]))
    with pytest.raises(ModelError):
        SphereBundleModel(SpaceForm(2, 1.0), GenericBundle(np.zeros((3, 3, 2, 2))), 1.0, np.array([1.0, 0.0]))


def test_generic_bundle_equals_tangent(rng):
    base = Surface2D(0.9, np.array([0.2, 0.1]))
    jet = curvature_jet(base)
    a = unit(rng.standard_normal(2))
    M1 = SphereBundleModel(base, TangentBundle(), 1.0, a)
    M2 = SphereBundleModel(base, GenericBundle(jet.R, jet.dR), 1.0, a)
    planes = sample_planes(M1, 40, rng)
    assert np.allclose(sectional_batch(M1, *planes), sectional_batch(M2, *planes))
    assert np.allclose(ricci_form(M1), ricci_form(M2))


def test_ricci_literal_matches_form(models, rng):
    for M in models:
        G = np.asarray(ricci_form(M), float)
        for _ in range(5):
            X, Y = rng.standard_normal((2, M.n))
            P = np.asarray(M.projector(), float)
            al, be = P @ rng.standard_normal(M.m), P @ rng.standard_normal(M.m)
            lit = ricci(M, (X, al), (Y, be))
            assert np.isclose(lit, np.r_[X, al] @ G @ np.r_[Y, be])
            assert np.isclose(lit, ricci(M, (Y, be), (X, al)))


def test_trace_identity_models(models):
    for M in models:
        assert abs(ricci_trace(M) - scalar(M)) < 1e-10
        assert np.isclose(np.trace(ricci_matrix(M)), scalar(M))


def test_exact_mode():
    a = np.array([F(3, 5), F(4, 5)])
    M = SphereBundleModel(SpaceForm(2, F(1)), TangentBundle(), F(1), a, exact=True)
    P = PlaneSpec(np.array([F(1), F(0)]), np.array([F(0), F(0)]), np.array([F(0), F(1)]), np.array([F(0), F(0)]))
    K = sectional(M, P)
    assert K == F(1, 4) and isinstance(K, F)
    assert scalar(M) == ricci_trace(M) == F(3, 2)
    A = SphereBundleModel(SpaceForm(3, F(1)), AtiyahBundle(F(1, 2)), F(1), np.array([F(0)] * 5 + [F(1)]), exact=True)
    e = [np.array([F(int(i == j)) for i in range(3)]) for j in range(3)]
    f = [np.array([F(int(i == j)) for i in range(6)]) for j in range(6)]
    z3, z6 = np.array([F(0)] * 3), np.array([F(0)] * 6)
    assert sectional(A, PlaneSpec(z3, f[0], z3, f[1])) == 1
    Kh = sectional(A, PlaneSpec(e[0], z6, e[1], z6))
    assert isinstance(Kh, F)
    assert np.isclose(float(Kh), sectional(A, PlaneSpec(*(np.asarray(v, float) for v in (e[0], z6, e[1], z6)))))
    v = constant_scalar_check(A)
    assert v.s1 and v.spread == 0


def test_einstein_witness():
    M = SphereBundleModel(SpaceForm(2, 1.0), AtiyahBundle(1.0), 1.0, np.eye(3)[0])
    v = einstein_check(M)
    assert not v.einstein and v.method == "analytic" and "curvature_nonzero_at" in v.witness
    # unit tangent bundle of S^2(1) is a round RP^3 of curvature 1/4; other radii are Berger spheres
    T = SphereBundleModel(SpaceForm(2, 1.0), TangentBundle(), 1.0, np.eye(2)[0])
    v = einstein_check(T)
    assert v.einstein and v.method == "frame" and np.isclose(v.constant, 0.5)
    v = einstein_check(SphereBundleModel(SpaceForm(2, 1.0), TangentBundle(), 2.0, 2 * np.eye(2)[0]))
    assert not v.einstein and v.witness["low"]["ric"] < v.witness["high"]["ric"]


def test_bounds():
    M = SphereBundleModel(SpaceForm(2, 1.0), TangentBundle(), 0.5, np.array([0.5, 0.0]))
    b = positivity_bounds(M, {"C": 1.0, "K": 2.0}, ["thek_rank2"])["thek_rank2"]
    assert np.isclose(b["r2_max"], 2 / 3) and b["holds"]
    b = positivity_bounds(M, {"C": 1.0, "K": 0.0}, ["thek_rank2"])["thek_rank2"]
    assert b["r2_max"] == np.inf and b["holds"]
    with pytest.raises(BoundsError):
        positivity_bounds(M, {"C": 1.0}, ["thek_rank2"])
    with pytest.raises(BoundsError):
        positivity_bounds(M, {"C": 1.0, "K": 1.0}, ["nope"])
    A = SphereBundleModel(SpaceForm(3, 1.0), AtiyahBundle(1.0), 1.0, np.eye(6)[0])
    with pytest.raises(BoundsError):
        positivity_bounds(A, {"C": 1.0, "K": 1.0}, ["thek_rank2"])
    c = default_constants(A)
    assert c["C"] == 1.0 and np.isclose(c["K"], 2.0) and np.isclose(c["rho"], 2.0)
    small = {"eps": 1.0, "L1": 1.0, "L2": 1.0}
    for name in ("thriccib", "thscalar"):
        r_sup = positivity_bounds(A, small, [name])[name]["r_sup"]
        inside, outside = (SphereBundleModel(SpaceForm(3, 1.0), AtiyahBundle(1.0), t * r_sup, t * r_sup * np.eye(6)[0])
                           for t in (0.9, 1.1))
        assert positivity_bounds(inside, small, [name])[name]["holds"]
        assert not positivity_bounds(outside, small, [name])[name]["holds"]
    assert positivity_bounds(A, {}, ["vertical"])["vertical"]["holds"]
    e = positivity_bounds(A, {"C": 1.0, "K": 0.1}, ["eqcurv1"])["eqcurv1"]
    assert e["holds"] and 1 < e["r_max"] < np.inf


def test_kernels_agree(rng):
    M = SphereBundleModel(Surface2D(0.3, np.array([0.4, 0.1]), np.eye(2)), AtiyahBundle(0.9), 1.1,
                          unit(rng.standard_normal(3), 1.1))
    planes = normalize_batch(M, *sample_planes(M, 500, rng))
    R, S, D, r, a = M.float_tables
    assert np.allclose(kernels.sectional_batch(R, S, D, r, a, *planes),
                       _fallback.sectional_batch(R, S, D, r, a, *planes), atol=1e-13)
    X, Y = rng.standard_normal((2, 500, 2))
    xi = rng.standard_normal((500, 3))
    assert np.allclose(kernels.curvature_apply_batch(S, X, Y, xi), _fallback.curvature_apply_batch(S, X, Y, xi))
    # strided inputs are accepted
    assert np.allclose(kernels.curvature_apply_batch(S, X[::2], Y[::2], xi[::2]),
                       _fallback.curvature_apply_batch(S, X[::2], Y[::2], xi[::2]))


def test_pure_backend_subprocess():
    code = ("import json, numpy as np\n"
            "from atiyah_sasaki import kernels\n"
            "from atiyah_sasaki.base_geometry import SpaceForm\n"
            "from atiyah_sasaki.sphere_bundle import *\n"
            "M = SphereBundleModel(SpaceForm(3, 1.0), AtiyahBundle(0.5), 1.0, np.eye(6)[2])\n"
            "K = sectional_batch(M, *sample_planes(M, 20, np.random.default_rng(1)))\n"
            "print(json.dumps([kernels.BACKEND, K.tolist()]))\n")
    out = {}
    for pure in ("1", ""):
        env = dict(os.environ)
        env.pop("ATIYAH_SASAKI_PURE", None)
        if pure:
            env["ATIYAH_SASAKI_PURE"] = pure
        res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        out[pure] = json.loads(res.stdout)
    assert out["1"][0] == "numpy"
    assert np.allclose(out["1"][1], out[""][1], atol=1e-13)


def test_ricci_flat_supra_examples(rng):
    # R^E = 0 (c = 2/k): ric(X,X) = ric^M(X,X), ric(alpha,alpha) = (m-2)/r^2 |alpha|^2, mixed terms vanish
    M = SphereBundleModel(SpaceForm(3, 2.0), AtiyahBundle(1.0), 0.8, unit(rng.standard_normal(6), 0.8))
    X = rng.standard_normal(3)
    al = np.asarray(M.projector(), float) @ rng.standard_normal(6)
    z3, z6 = np.zeros(3), np.zeros(6)
    assert np.isclose(ricci(M, (X, z6), (X, z6)), 4 * (X @ X))
    assert np.isclose(ricci(M, (z3, al), (z3, al)), 4 / 0.64 * (al @ al))
    assert np.isclose(ricci(M, (X, z6), (z3, al)), 0)


def test_ricci_mixed_terms(rng):
    # tangent bundle of a space form: nabla R = 0 so ric(X^h, alpha^t) = 0
    T = SphereBundleModel(SpaceForm(3, 1.5), TangentBundle(), 1.0, unit(rng.standard_normal(3)))
    X = rng.standard_normal(3)
    al = np.asarray(T.projector(), float) @ rng.standard_normal(3)
    assert np.isclose(ricci(T, (X, np.zeros(3)), (np.zeros(3), al)), 0)
    # Atiyah bundle over the same base: the H part of the connection keeps a mixed term
    A = SphereBundleModel(SpaceForm(3, 1.5), AtiyahBundle(0.5), 1.0, unit(rng.standard_normal(6)))
    G = np.asarray(ricci_form(A), float)
    assert np.max(np.abs(G[:3, 3:])) > 1e-3
