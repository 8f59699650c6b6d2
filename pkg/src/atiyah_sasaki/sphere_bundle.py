"""Curvature of the sphere bundle E^(r) = {|a| = r} with the Sasaki metric h.

A model fixes a point (x, a) and the pointwise tables

    R[a,b]   base curvature R^M(e_a, e_b)          (n x n)
    S[a,b]   bundle curvature R^E(e_a, e_b)        (m x m)
    D[w,a,b] (nabla^{M,E}_{e_w} R^E)(e_a, e_b)     (m x m)

in orthonormal frames of T_xM and E_x.  Tangent vectors of E^(r) are pairs
(X, alpha) = X^h + alpha^t with alpha orthogonal to a; h is the product of
the two Euclidean metrics on such pairs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from . import kernels
from .algebra import DEFAULT_TOL, as_exact, is_exact, to_fraction, zeros
from .atiyah import AtiyahSpec, supra_bound_K
from .base_geometry import (ModelError, SpaceForm, curvature_jet, ricci_tensor,
                            sectional_lower_bound)


class PlaneError(ValueError):
    pass


@dataclass(frozen=True)
class AtiyahBundle:
    k: Any

    kind = "atiyah"


@dataclass(frozen=True)
class TangentBundle:
    """TM with its Levi-Civita connection (the classical Sasaki case)."""

    kind = "tangent"


@dataclass(frozen=True, eq=False)
class GenericBundle:
    """User supplied curvature tables; D = None means parallel curvature."""

    S: np.ndarray
    D: np.ndarray | None = None

    kind = "generic"


class SphereBundleModel:
    def __init__(self, base, bundle, r, a, exact: bool = False, tol: float = DEFAULT_TOL):
        self.base = base
        self.bundle = bundle
        self.exact = exact
        self.tol = tol
        self.r = to_fraction(r) if exact else float(r)
        if self.r <= 0:
            raise ModelError(f"radius must be positive, got {r}")
        jet = curvature_jet(base, exact)
        self.R = jet.R
        self.n = jet.n
        if isinstance(bundle, AtiyahBundle):
            self.spec = AtiyahSpec(base, bundle.k, exact)
            self.S, self.D = self.spec.S, self.spec.D
        elif isinstance(bundle, TangentBundle):
            self.spec = None
            self.S = jet.R
            if jet.dR is None:
                raise ModelError("tangent bundle needs derivative data on the base model")
            self.D = jet.dR
        elif isinstance(bundle, GenericBundle):
            self.spec = None
            self.S = as_exact(bundle.S) if exact else np.asarray(bundle.S, dtype=float)
            m = self.S.shape[-1]
            if self.S.shape != (self.n, self.n, m, m):
                raise ModelError(f"generic bundle table has shape {self.S.shape}, expected (n,n,m,m) with n={self.n}")
            if bundle.D is None:
                self.D = zeros((self.n,) * 3 + (m, m), exact)
            else:
                self.D = as_exact(bundle.D) if exact else np.asarray(bundle.D, dtype=float)
                if self.D.shape != (self.n,) * 3 + (m, m):
                    raise ModelError("generic bundle derivative table must have shape (n,n,n,m,m)")
        else:
            raise ModelError(f"unknown bundle kind {bundle!r}")
        self.m = self.S.shape[-1]
        if self.m < 2:
            raise ModelError("bundle rank must be at least 2")
        self.a = as_exact(a) if exact else np.asarray(a, dtype=float)
        if self.a.shape != (self.m,):
            raise ModelError(f"fiber point has length {len(self.a)}, bundle rank is {self.m}")
        err = self.a @ self.a - self.r ** 2
        if (err != 0) if exact else abs(err) > 1e-9 * max(1.0, self.r ** 2):
            raise ModelError(f"|a|^2 = {self.a @ self.a} but r^2 = {self.r ** 2}")
        self.ric_M = ricci_tensor(self.R)
        self.s_M = np.trace(self.ric_M)

    def with_point(self, a) -> "SphereBundleModel":
        return SphereBundleModel(self.base, self.bundle, self.r, a, self.exact, self.tol)

    def rotated(self, Q) -> "SphereBundleModel":
        """Same point, base tables expressed in the orthonormal frame X_i = Q e_i."""
        Q = np.asarray(Q, dtype=float)
        out = object.__new__(SphereBundleModel)
        out.__dict__.update(self.__dict__)
        out.exact = False
        out.R = np.einsum("ca,db,cdij,ik,jl->abkl", Q, Q, np.asarray(self.R, float), Q, Q)
        out.S = np.einsum("ca,db,cdij->abij", Q, Q, np.asarray(self.S, float))
        out.D = np.einsum("ew,ca,db,ecdij->wabij", Q, Q, Q, np.asarray(self.D, float))
        out.a = np.asarray(self.a, float)
        out.r = float(self.r)
        out.ric_M = ricci_tensor(out.R)
        out.s_M = float(np.trace(out.ric_M))
        if isinstance(self.bundle, TangentBundle):
            # fiber is TM itself, so it turns with the frame too
            out.S = np.einsum("abij,ik,jl->abkl", out.S, Q, Q)
            out.D = np.einsum("wabij,ik,jl->wabkl", out.D, Q, Q)
            out.a = Q.T @ out.a
        return out

    @property
    def float_tables(self):
        f = lambda x: np.asarray(x, dtype=float)
        return f(self.R), f(self.S), f(self.D), float(self.r), f(self.a)

    def projector(self):
        P = np.eye(self.m) if not self.exact else as_exact(np.eye(self.m, dtype=int))
        return P - np.outer(self.a, self.a) / self.r ** 2

    def describe(self) -> dict:
        return {"base": repr(self.base), "bundle": getattr(self.bundle, "kind", "?"),
                "n": self.n, "m": self.m, "r": str(self.r), "exact": self.exact}


@dataclass(frozen=True)
class PlaneSpec:
    X: np.ndarray
    alpha: np.ndarray
    Y: np.ndarray
    beta: np.ndarray


def curvature_apply(model: SphereBundleModel, X, Y, xi):
    return np.einsum("a,b,abij,j->i", X, Y, model.S, xi)


def oneill_B(model: SphereBundleModel, X, Y):
    """B_{X^h} Y^h = 1/2 (R^E(X,Y)a)^t, returned as a fiber vector."""
    v = curvature_apply(model, X, Y, model.a) / 2
    return model.projector() @ v


def oneill_B_mixed(model: SphereBundleModel, X, alpha):
    """B_{X^h} alpha^t = 1/2 sum_i <R^E(X,X_i)alpha, a> X_i, returned as a base vector."""
    alpha = np.asarray(alpha)
    if _bad(alpha @ model.a, model):
        raise PlaneError("alpha must be orthogonal to a")
    return np.einsum("w,wiuv,u,v->i", X, model.S, model.a, alpha) / 2


def _bad(x, model) -> bool:
    if model.exact and is_exact(x):
        return x != 0
    return abs(float(x)) > 1e-9 * max(1.0, float(model.r))


def sample_planes(model: SphereBundleModel, count: int, rng: np.random.Generator):
    """Gaussian raw planes, fiber parts projected orthogonal to a."""
    n, m = model.n, model.m
    P = np.asarray(model.projector(), dtype=float)
    X = rng.standard_normal((count, n))
    Y = rng.standard_normal((count, n))
    al = rng.standard_normal((count, m)) @ P
    be = rng.standard_normal((count, m)) @ P
    return X, al, Y, be


def normalize_batch(model: SphereBundleModel, X, al, Y, be, variant: int = 0):
    """Vectorized plane normalization in floats.

    Gram-Schmidt in h, then the rotation by mu/2 (variant 1: mu/2 + pi/2),
    where (|X|^2-|Y|^2)/2 + i<X,Y> = rho e^{i mu}.  For rank 2 the output is
    ordered so that beta = 0.
    """
    n = model.n
    a = np.asarray(model.a, float)
    X, al, Y, be = (np.atleast_2d(np.asarray(v, dtype=float)) for v in (X, al, Y, be))
    tang = np.max(np.abs(np.concatenate([al @ a, be @ a]))) if len(X) else 0.0
    if tang > 1e-8 * max(1.0, float(model.r)):
        raise PlaneError("fiber parts must be orthogonal to a")
    u = np.hstack([X, al])
    v = np.hstack([Y, be])
    nu = np.linalg.norm(u, axis=1)
    if np.any(nu < 1e-12):
        raise PlaneError("degenerate plane: zero vector")
    u = u / nu[:, None]
    v = v - np.sum(u * v, axis=1)[:, None] * u
    nv = np.linalg.norm(v, axis=1)
    if np.any(nv < 1e-10 * np.linalg.norm(np.hstack([Y, be]), axis=1)):
        raise PlaneError("degenerate plane: vectors are linearly dependent")
    v = v / nv[:, None]
    Xu, Xv = u[:, :n], v[:, :n]
    A = (np.sum(Xu * Xu, 1) - np.sum(Xv * Xv, 1)) / 2
    B = np.sum(Xu * Xv, 1)
    th = np.arctan2(B, A) / 2 + (np.pi / 2 if variant else 0.0)
    c, s = np.cos(th)[:, None], np.sin(th)[:, None]
    U = c * u + s * v
    V = -s * u + c * v
    if model.m == 2:
        # one of the two fiber parts vanishes; put it second
        swap = np.linalg.norm(U[:, n:], axis=1) < np.linalg.norm(V[:, n:], axis=1)
        U2 = np.where(swap[:, None], V, U)
        V = np.where(swap[:, None], -U, V)
        U = U2
        V[:, n:] = 0.0
    return U[:, :n], U[:, n:], V[:, :n], V[:, n:]


def normalize_plane(model: SphereBundleModel, raw: PlaneSpec, variant: int = 0) -> PlaneSpec:
    X, al, Y, be = normalize_batch(model, raw.X, raw.alpha, raw.Y, raw.beta, variant)
    return PlaneSpec(X[0], al[0], Y[0], be[0])


def is_normalized(model: SphereBundleModel, P: PlaneSpec, tol: float = 1e-10) -> bool:
    X, al, Y, be = P.X, P.alpha, P.Y, P.beta
    vals = [X @ X + al @ al - 1, Y @ Y + be @ be - 1, X @ Y, al @ be, al @ model.a, be @ model.a]
    if model.exact and is_exact(X, al, Y, be):
        return all(v == 0 for v in vals)
    return all(abs(float(v)) <= tol for v in vals)


def sectional_normalized_batch(model: SphereBundleModel, X, al, Y, be):
    if model.exact and is_exact(X, al, Y, be):
        return kernels._fallback.sectional_batch(model.R, model.S, model.D, model.r, model.a, X, al, Y, be)
    R, S, D, r, a = model.float_tables
    return kernels.sectional_batch(R, S, D, r, a, X, al, Y, be)


def sectional(model: SphereBundleModel, P: PlaneSpec, variant: int = 0):
    """Sectional curvature of h at the plane P (normalized internally if needed).

    Already normalized exact planes are evaluated exactly.
    """
    if model.exact and is_exact(P.X, P.alpha, P.Y, P.beta) and is_normalized(model, P):
        if model.m == 2 and np.any(P.beta != 0):
            P = normalize_plane(model, P, variant)
        else:
            return sectional_normalized_batch(model, *(np.array([v]) for v in (P.X, P.alpha, P.Y, P.beta)))[0]
    Q = normalize_plane(model, P, variant)
    return float(sectional_normalized_batch(model, *(v[None, :] for v in (Q.X, Q.alpha, Q.Y, Q.beta)))[0])


def sectional_batch(model: SphereBundleModel, X, al, Y, be, variant: int = 0) -> np.ndarray:
    return sectional_normalized_batch(model, *normalize_batch(model, X, al, Y, be, variant))


def sectional_rank2(model: SphereBundleModel, X, alpha, Y):
    """The rank-2 branch written out on its own, for a basis (X+alpha, Y)."""
    S, R, D, a = model.S, model.R, model.D, model.a
    RXY = np.einsum("a,b,abij->ij", X, Y, S)
    t = np.einsum("a,b,abij,j,i->", X, Y, R, X, Y) - 3 * np.sum((RXY @ a) ** 2) / 4
    t = t + sum((a @ np.einsum("w,wij->ij", Y, S[:, i]) @ alpha) ** 2 for i in range(model.n)) / 4
    return t + a @ np.einsum("w,a,b,wabij,j->i", Y, X, Y, D, alpha)


def ricci(model: SphereBundleModel, u, v):
    """ric(X^h + alpha^t, Y^h + beta^t), term by term."""
    (X, al), (Y, be) = u, v
    S, D, a, r, n, m = model.S, model.D, model.a, model.r, model.n, model.m
    P = model.projector()
    t = (m - 2) / r ** 2 * ((P @ al) @ (P @ be)) + X @ model.ric_M @ Y
    for i in range(n):
        SXi = np.einsum("w,wij->ij", X, S[:, i])
        SYi = np.einsum("w,wij->ij", Y, S[:, i])
        t = t - (SXi @ a) @ (SYi @ a) / 2
        DX = np.einsum("b,bij->ij", X, D[i, i])
        DY = np.einsum("b,bij->ij", Y, D[i, i])
        t = t - a @ (DX @ be + DY @ al) / 2
    for i in range(n):
        for j in range(n):
            w = S[i, j] @ a
            t = t + (w @ al) * (w @ be) / 4
    return t


def ricci_form(model: SphereBundleModel) -> np.ndarray:
    """The Ricci form as an (n+m) x (n+m) matrix on pairs (X, alpha), alpha orthogonal to a."""
    S, D, a, r, n, m = model.S, model.D, model.a, model.r, model.n, model.m
    Sa = np.einsum("xiuv,v->xiu", S, a)
    HH = model.ric_M - np.einsum("xiu,yiu->xy", Sa, Sa) / 2
    # -1/2 sum_i a . D[i,i](X) beta
    HV = -np.einsum("iixuv,u->xv", D, a) / 2
    W = np.einsum("ijuv,v->iju", S, a).reshape(n * n, m)
    VV = (m - 2) / r ** 2 * model.projector() + W.T @ W / 4
    top = np.concatenate([HH, HV], axis=1)
    bot = np.concatenate([HV.T, VV], axis=1)
    return np.concatenate([top, bot], axis=0)


def tangent_frame(model: SphereBundleModel) -> np.ndarray:
    """Orthonormal frame of T_(x,a)E^(r) as columns in (X, alpha) coordinates (floats)."""
    n, m = model.n, model.m
    a = np.asarray(model.a, float)
    # complete a/r to an orthonormal basis and drop it
    Qf, _ = np.linalg.qr(np.column_stack([a / float(model.r), np.eye(m)]))
    V = Qf[:, 1:m]
    F = np.zeros((n + m, n + m - 1))
    F[:n, :n] = np.eye(n)
    F[n:, n:] = V
    return F


def ricci_matrix(model: SphereBundleModel) -> np.ndarray:
    F = tangent_frame(model)
    return F.T @ np.asarray(ricci_form(model), dtype=float) @ F


def xi_matrix(model: SphereBundleModel) -> np.ndarray:
    """Gram matrix G with xi(a,b) = a^T G b = sum_ij <R^E(X_i,X_j)a, R^E(X_i,X_j)b>."""
    return np.einsum("ijua,ijub->ab", model.S, model.S)


def xi_form(model: SphereBundleModel, a, b):
    return a @ xi_matrix(model) @ b


def scalar(model: SphereBundleModel):
    m, r = model.m, model.r
    return model.s_M + (m - 1) * (m - 2) / r ** 2 - xi_form(model, model.a, model.a) / 4


def ricci_trace(model: SphereBundleModel):
    """Trace of the Ricci form over T_(x,a)E^(r), exact in exact mode."""
    M = ricci_form(model)
    n = model.n
    return np.trace(M[:n, :n]) + np.trace(M[n:, n:] @ model.projector())


@dataclass
class EinsteinVerdict:
    einstein: bool
    constant: Any = None
    method: str = ""
    witness: dict = field(default_factory=dict)
    spread: float = 0.0
    sampled_spread: float | None = None


def einstein_check(model: SphereBundleModel, samples: int = 1000, seed: int = 0,
                   tol: float = 1e-9) -> EinsteinVerdict:
    n, m, r = model.n, model.m, model.r
    Mr = ricci_matrix(model)
    ev, vecs = np.linalg.eigh(Mr)
    spread = float(ev[-1] - ev[0])
    sampled = None
    if samples:
        rng = np.random.default_rng(seed)
        U = rng.standard_normal((samples, Mr.shape[0]))
        q = np.einsum("si,ij,sj->s", U, Mr, U) / np.sum(U * U, axis=1)
        sampled = float(q.max() - q.min())
    if m - 1 > n * (n - 1) / 2:
        S = np.asarray(model.S, float)
        ricM = np.asarray(model.ric_M, float)
        lam = (m - 2) / r ** 2
        smax = float(np.max(np.abs(S), initial=0.0))
        ok_base = float(np.max(np.abs(ricM - float(lam) * np.eye(n)), initial=0.0)) <= tol * max(1.0, abs(float(lam)))
        if smax <= tol and ok_base:
            return EinsteinVerdict(True, lam, "analytic", {}, spread, sampled)
        wit: dict = {}
        if smax > tol:
            idx = np.unravel_index(np.argmax(np.abs(S)), S.shape)
            wit["curvature_nonzero_at"] = [int(i) for i in idx[:2]]
            wit["curvature_max"] = smax
        if not ok_base:
            wit["base_ricci_eigenvalues"] = [float(x) for x in np.linalg.eigvalsh(ricM)]
            wit["required"] = float(lam)
        return EinsteinVerdict(False, None, "analytic", wit, spread, sampled)
    scale = max(1.0, float(np.max(np.abs(ev))))
    if spread <= tol * scale:
        return EinsteinVerdict(True, float(np.mean(ev)), "frame", {}, spread, sampled)
    F = tangent_frame(model)
    lo, hi = F @ vecs[:, 0], F @ vecs[:, -1]
    wit = {"low": {"X": lo[:n].tolist(), "alpha": lo[n:].tolist(), "ric": float(ev[0])},
           "high": {"X": hi[:n].tolist(), "alpha": hi[n:].tolist(), "ric": float(ev[-1])}}
    return EinsteinVerdict(False, None, "frame", wit, spread, sampled)


@dataclass
class ConstantScalarVerdict:
    s1: bool
    ratio: Any
    spread: Any
    s2: Any
    witness: dict = field(default_factory=dict)


def constant_scalar_check(model: SphereBundleModel, rel_tol: float = 1e-7) -> ConstantScalarVerdict:
    """Is xi a multiple of the fiber metric (so tau does not depend on a)?

    Also reports s2 = 4 m s^M - r^2 |R^E|^2 for comparison across points.
    """
    G = xi_matrix(model)
    m = model.m
    normR = np.trace(G)
    ratio = normR / m
    s2 = 4 * m * model.s_M - model.r ** 2 * normR
    if model.exact:
        diff = G - ratio * as_exact(np.eye(m, dtype=int))
        ok = bool(np.all(diff == 0))
        ev, vecs = np.linalg.eigh(np.asarray(G, dtype=float))
        spread = to_fraction(0) if ok else float(ev[-1] - ev[0])
    else:
        ev, vecs = np.linalg.eigh(G)
        spread = float(ev[-1] - ev[0])
        ok = spread <= rel_tol * max(1.0, float(np.max(np.abs(ev))))
    wit = {}
    if not ok:
        r = float(model.r)
        fm = _float_model(model)
        a1, a2 = r * vecs[:, 0], r * vecs[:, -1]
        wit = {"a1": a1.tolist(), "a2": a2.tolist(),
               "tau1": float(scalar(fm.with_point(a1))), "tau2": float(scalar(fm.with_point(a2)))}
    return ConstantScalarVerdict(ok, ratio, spread, s2, wit)


def _float_model(model):
    if not model.exact:
        return model
    return SphereBundleModel(model.base, model.bundle, float(model.r), np.asarray(model.a, float), False, model.tol)


class BoundsError(ValueError):
    pass


def _need(constants, *names):
    miss = [k for k in names if constants.get(k) is None]
    if miss:
        raise BoundsError(f"missing constants: {', '.join(miss)}")
    return [float(constants[k]) for k in names]


def eqcurv1(C, K, r, n) -> float:
    """C - 3/4 r^2 K^2 (4 + 3 r^2 (n-2) K + 3/4 r^4 (n-2)^2 K^2), taken as written."""
    return C - 0.75 * r ** 2 * K ** 2 * (4 + 3 * r ** 2 * (n - 2) * K + 0.75 * r ** 4 * (n - 2) ** 2 * K ** 2)


def _largest_r(pred, hi=1e6):
    """Largest r with pred(r) true, pred monotone (true near 0)."""
    if not pred(1e-12):
        return 0.0
    if pred(hi):
        return math.inf
    lo = 1e-12
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14 * hi:
            break
    return lo


def _pos_root(a, b, c):
    """Positive root of a s^2 + b s + c = 0 with a >= 0, c < 0."""
    if a == 0:
        return math.inf if b <= 0 else -c / b
    return (-b + math.sqrt(b * b - 4 * a * c)) / (2 * a)


def positivity_bounds(model: SphereBundleModel, constants: dict, which=None) -> dict:
    """Evaluate the sufficient conditions for positivity as predicates of r.

    constants: C (sectional lower bound), K (|R^E(X,Y)xi| <= K|X||Y||xi|),
    rho (Ricci lower bound), eps, L1, L2 (compactness constants).
    """
    n, m, r = model.n, model.m, float(model.r)
    which = which or (["thek_rank2"] if m == 2 else ["eqcurv1"]) + ["thricci"]
    out = {}
    for name in which:
        if name == "thek_rank2":
            if m != 2:
                raise BoundsError("thek_rank2 applies to rank 2 bundles")
            C, K = _need(constants, "C", "K")
            r2max = math.inf if K == 0 else 4 * C / (3 * K)
            raw = (constants["C"], constants["K"], model.r)
            if all(isinstance(v, (int, Fraction)) for v in raw):
                # exact comparison, so boundary points of a rational grid are decided correctly
                Cq, Kq, rq = (Fraction(v) for v in raw)
                holds = Kq == 0 or rq * rq <= 4 * Cq / (3 * Kq)
            else:
                holds = r * r <= r2max
            out[name] = {"r2_max": r2max, "holds": bool(holds)}
        elif name == "eqcurv1":
            C, K = _need(constants, "C", "K")
            val = eqcurv1(C, K, r, n)
            rmax = _largest_r(lambda s: eqcurv1(C, K, s, n) >= 0)
            out[name] = {"value": val, "holds": val >= 0, "r_max": rmax,
                         "note": "predicate evaluated exactly as written; mixed powers of K"}
        elif name == "thricci":
            rho, K = _need(constants, "rho", "K")
            r2max = math.inf if K == 0 else 2 * rho / (n * K * K)
            holds = r * r <= r2max if m == 2 else r * r < r2max
            out[name] = {"r2_max": r2max, "holds": holds, "strict": m > 2}
        elif name == "thriccib":
            eps, L1, L2 = _need(constants, "eps", "L1", "L2")
            # A = eps - r^2 n L1^2 / 2 > 0 and (m-2)/r^2 - B^2/(4A) > 0 with B = r n L2;
            # in s = r^2 the second is n^2 L2^2 s^2 + 2(m-2) n L1^2 s - 4(m-2) eps < 0
            sA = math.inf if L1 == 0 else 2 * eps / (n * L1 * L1)
            sQ = _pos_root(n * n * L2 * L2, 2 * (m - 2) * n * L1 * L1, -4 * (m - 2) * eps) if eps > 0 else 0.0
            smax = min(sA, sQ) if eps > 0 else 0.0
            A = eps - 0.5 * r * r * n * L1 * L1
            B = r * n * L2
            holds = A > 0 and (m - 2) / r ** 2 - B * B / (4 * A) > 0
            out[name] = {"r_sup": math.sqrt(smax), "holds": holds, "A": A, "B": B}
        elif name == "thscalar":
            L1, L2 = _need(constants, "L1", "L2")
            # tau >= (m-1)(m-2)/r^2 - n(n-1) L1 - r^2 n(n-1) L2^2 / 4
            lower = (m - 1) * (m - 2) / r ** 2 - n * (n - 1) * L1 - r * r * n * (n - 1) * L2 * L2 / 4
            c0 = (m - 1) * (m - 2)
            smax = _pos_root(n * (n - 1) * L2 * L2 / 4, n * (n - 1) * L1, -c0) if c0 > 0 else 0.0
            out[name] = {"lower_bound": lower, "holds": lower > 0, "r_sup": math.sqrt(smax)}
        elif name == "vertical":
            out[name] = {"K_vertical": 1 / r ** 2 if m >= 3 else None, "holds": m >= 3}
        else:
            raise BoundsError(f"unknown bound {name!r}")
    return out


def default_constants(model: SphereBundleModel) -> dict:
    """Constants computable from the model itself; K falls back to a Frobenius bound."""
    C = sectional_lower_bound(model.base)
    if model.spec is not None and isinstance(model.base, SpaceForm):
        K = float(supra_bound_K(model.spec))
    else:
        S = np.asarray(model.S, float)
        K = float(np.sqrt(np.sum(S * S)))
    rho = float(np.min(np.linalg.eigvalsh(np.asarray(model.ric_M, float))))
    return {"C": None if C is None else float(C), "K": K, "rho": rho}
