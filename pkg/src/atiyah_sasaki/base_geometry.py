"""Pointwise models of the base manifold.

Every model produces a CurvatureJet at its point: the curvature tensor
R[a,b] = R^M(e_a, e_b) as an n x n matrix (row = output coordinate), and
where available its first and second covariant derivatives

    dR[w,a,b]    = (nabla_{e_w} R)(e_a, e_b)
    ddR[v,w,a,b] = (nabla^2_{e_v,e_w} R)(e_a, e_b).

Sign convention: R(X,Y) = nabla_[X,Y] - [nabla_X, nabla_Y], so the round
sphere of curvature c has R(X,Y)Z = -c X∧Y(Z).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .algebra import DEFAULT_TOL, as_exact, bracket, eye, is_exact, to_fraction, wedge, zeros


class ModelError(ValueError):
    pass


def _scalar(v, exact: bool):
    return to_fraction(v) if exact else float(v)


def _arr(v, exact: bool):
    return as_exact(v) if exact else np.asarray(v, dtype=float)


@dataclass(frozen=True)
class SpaceForm:
    n: int
    c: object

    def __post_init__(self):
        if self.n < 1:
            raise ModelError("SpaceForm needs n >= 1")

    @property
    def dim(self):
        return self.n


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if len(self.factors) < 1:
            raise ModelError("Product needs at least one factor")

    @property
    def dim(self):
        return sum(f.dim for f in self.factors)

    def offsets(self):
        out, o = [], 0
        for f in self.factors:
            out.append((o, o + f.dim))
            o += f.dim
        return out


@dataclass(frozen=True, eq=False)
class SymmetricSpace:
    """g = k ⊕ p with [p,p] ⊂ k, tables in orthonormal frames.

    pp[i,j,s]: [X_i,X_j] = sum_s pp[i,j,s] K_s
    kp[s,i,j]: [K_s,X_i] = sum_j kp[s,i,j] X_j
    kk[s,t,u]: [K_s,K_t] = sum_u kk[s,t,u] K_u
    """

    pp: np.ndarray
    kp: np.ndarray
    kk: np.ndarray
    name: str = ""

    def __post_init__(self):
        dp = self.pp.shape[0]
        dk = self.kk.shape[0]
        if self.pp.shape != (dp, dp, dk) or self.kp.shape != (dk, dp, dp) or self.kk.shape != (dk, dk, dk):
            raise ModelError("SymmetricSpace: inconsistent bracket table shapes")

    @property
    def dim(self):
        return self.pp.shape[0]

    @property
    def dim_k(self):
        return self.kk.shape[0]

    def structure_constants(self) -> np.ndarray:
        """Full structure constants of g in the basis (X_1..X_dp, K_1..K_dk)."""
        dp, dk = self.dim, self.dim_k
        N = dp + dk
        C = zeros((N, N, N), self.pp.dtype == object)
        C[:dp, :dp, dp:] = self.pp
        C[dp:, :dp, :dp] = self.kp
        C[:dp, dp:, :dp] = -self.kp.transpose(1, 0, 2)
        C[dp:, dp:, dp:] = self.kk
        return C

    def validate(self, tol: float = 1e-9) -> list[str]:
        C = self.structure_constants()
        errs = []
        anti = C + C.transpose(1, 0, 2)
        if np.max(np.abs(anti.astype(float)), initial=0) > tol:
            errs.append("bracket tables are not antisymmetric")
        # Jacobi: [[x,y],z] + [[y,z],x] + [[z,x],y] = 0
        J = (np.einsum("xyw,wzv->xyzv", C, C) + np.einsum("yzw,wxv->xyzv", C, C)
             + np.einsum("zxw,wyv->xyzv", C, C))
        if np.max(np.abs(J.astype(float)), initial=0) > tol:
            errs.append("bracket tables violate the Jacobi identity")
        return errs

    def phi(self, s_coords) -> np.ndarray:
        """ad_K restricted to p, K = sum s_coords[s] K_s."""
        return np.einsum("s,sij->ji", s_coords, self.kp)

    @classmethod
    def from_matrices(cls, P: Sequence, K: Sequence, name: str = "") -> "SymmetricSpace":
        """Tables from matrix realizations; P and K must be orthonormal for -1/2 Re tr(AB)."""
        P = [np.asarray(x) for x in P]
        K = [np.asarray(x) for x in K]

        def coords(M, basis):
            A = np.array([np.concatenate([b.real.ravel(), b.imag.ravel()]) for b in basis]).T
            y = np.concatenate([M.real.ravel(), M.imag.ravel()])
            sol, *_ = np.linalg.lstsq(A, y, rcond=None)
            if np.linalg.norm(A @ sol - y) > 1e-9:
                raise ModelError("bracket does not close on the supplied basis")
            return sol

        dp, dk = len(P), len(K)
        pp = np.array([[coords(bracket(P[i], P[j]), K) for j in range(dp)] for i in range(dp)]).reshape(dp, dp, dk)
        kp = np.array([[coords(bracket(K[s], P[i]), P) for i in range(dp)] for s in range(dk)]).reshape(dk, dp, dp)
        kk = np.array([[coords(bracket(K[s], K[t]), K) for t in range(dk)] for s in range(dk)]).reshape(dk, dk, dk)
        clean = lambda a: np.where(np.abs(a) < 1e-13, 0.0, a)
        return cls(clean(pp), clean(kp), clean(kk), name)

    @classmethod
    def sphere(cls, n: int, c: float = 1.0) -> "SymmetricSpace":
        """so(n+1) = so(n) ⊕ p realizing the round n-sphere of curvature c."""
        N = n + 1

        def E(a, b):
            M = np.zeros((N, N))
            M[a, b], M[b, a] = 1.0, -1.0
            return M

        s = np.sqrt(c)
        P = [s * E(0, i) for i in range(1, N)]
        K = [E(i, j) for i in range(1, N) for j in range(i + 1, N)]
        return cls.from_matrices(P, K, name=f"S^{n}")

    @classmethod
    def complex_projective(cls, nc: int) -> "SymmetricSpace":
        """su(nc+1) = s(u(1) ⊕ u(nc)) ⊕ p."""
        N = nc + 1
        ip = lambda A, B: -0.5 * np.real(np.trace(A @ B))
        P = []
        for j in range(1, N):
            M = np.zeros((N, N), complex)
            M[0, j], M[j, 0] = 1, -1
            P.append(M)
            M = np.zeros((N, N), complex)
            M[0, j], M[j, 0] = 1j, 1j
            P.append(M)
        cand = []
        for i in range(1, N):
            for j in range(i + 1, N):
                M = np.zeros((N, N), complex)
                M[i, j], M[j, i] = 1, -1
                cand.append(M)
                M = np.zeros((N, N), complex)
                M[i, j], M[j, i] = 1j, 1j
                cand.append(M)
        for i in range(N):
            M = np.zeros((N, N), complex)
            M[i, i] = 1j
            cand.append(M)
        K = []
        for M in cand:
            M = M - np.trace(M) / N * np.eye(N)
            for Q in K:
                M = M - ip(M, Q) * Q
            if ip(M, M) > 1e-12:
                K.append(M / np.sqrt(ip(M, M)))
        return cls.from_matrices(P, K, name=f"CP^{nc}")


def standard_J(n_complex: int, exact: bool = False) -> np.ndarray:
    n = 2 * n_complex
    J = zeros((n, n), exact)
    for i in range(n_complex):
        J[2 * i + 1, 2 * i] = 1
        J[2 * i, 2 * i + 1] = -1
    return J


@dataclass(frozen=True, eq=False)
class ComplexProjective:
    n: int
    J: np.ndarray | None = None

    def __post_init__(self):
        if self.J is None:
            object.__setattr__(self, "J", standard_J(self.n))
        J = np.asarray(self.J)
        d = 2 * self.n
        if J.shape != (d, d):
            raise ModelError("ComplexProjective: J has the wrong shape")
        Jf = J.astype(float)
        if np.max(np.abs(Jf + Jf.T)) > 1e-12 or np.max(np.abs(Jf @ Jf + np.eye(d))) > 1e-12:
            raise ModelError("ComplexProjective: J must be skew with J^2 = -Id")

    @property
    def dim(self):
        return 2 * self.n


@dataclass(frozen=True, eq=False)
class Surface2D:
    """Pointwise data of a surface with R(X,Y) = -C X∧Y.

    hessC (covariant Hessian of C in the frame) is only needed for the
    derivative of the supra-curvature; it defaults to zero.
    """

    C: object
    gradC: np.ndarray = field(default_factory=lambda: np.zeros(2))
    hessC: np.ndarray = field(default_factory=lambda: np.zeros((2, 2)))

    def __post_init__(self):
        if np.shape(self.gradC) != (2,) or np.shape(self.hessC) != (2, 2):
            raise ModelError("Surface2D: gradC must have length 2 and hessC shape (2,2)")
        h = np.asarray(self.hessC, dtype=float)
        if np.max(np.abs(h - h.T)) > 1e-12:
            raise ModelError("Surface2D: hessC must be symmetric")

    @property
    def dim(self):
        return 2


@dataclass(frozen=True)
class Unimodular3:
    """Milnor frame: [X1,X2] = m X3, [X1,X3] = n X2, [X2,X3] = p X1."""

    m: object
    n: object
    p: object

    @property
    def dim(self):
        return 3

    def structure_constants(self, exact: bool = True) -> np.ndarray:
        m, n, p = (_scalar(v, exact) for v in (self.m, self.n, self.p))
        C = zeros((3, 3, 3), exact)
        C[0, 1, 2], C[1, 0, 2] = m, -m
        C[0, 2, 1], C[2, 0, 1] = n, -n
        C[1, 2, 0], C[2, 1, 0] = p, -p
        return C


@dataclass(frozen=True, eq=False)
class Generic:
    R_table: np.ndarray
    nablaR_table: np.ndarray | None = None
    nabla2R_table: np.ndarray | None = None
    validate_tables: bool = True

    def __post_init__(self):
        R = np.asarray(self.R_table)
        n = R.shape[0]
        if R.shape != (n, n, n, n):
            raise ModelError("Generic: R_table must have shape (n,n,n,n)")
        if self.nablaR_table is not None and np.shape(self.nablaR_table) != (n,) * 5:
            raise ModelError("Generic: nablaR_table must have shape (n,n,n,n,n)")
        if self.nabla2R_table is not None and np.shape(self.nabla2R_table) != (n,) * 6:
            raise ModelError("Generic: nabla2R_table must have shape (n,)*6")
        if self.validate_tables:
            errs = check_curvature_symmetries(R)
            if errs:
                raise ModelError("Generic: " + "; ".join(errs))

    @property
    def dim(self):
        return np.asarray(self.R_table).shape[0]


PointModel = Union[SpaceForm, Product, SymmetricSpace, ComplexProjective, Surface2D, Unimodular3, Generic]


def check_curvature_symmetries(R, tol: float = DEFAULT_TOL) -> list[str]:
    R = np.asarray(R)
    errs = []
    exact = R.dtype == object
    bad = lambda A: bool(np.any(A != 0)) if exact else float(np.max(np.abs(A), initial=0)) > tol
    if bad(R + R.transpose(1, 0, 2, 3)):
        errs.append("R(X,Y) != -R(Y,X)")
    if bad(R + R.transpose(0, 1, 3, 2)):
        errs.append("R(X,Y) is not skew-adjoint")
    return errs


@dataclass(frozen=True, eq=False)
class CurvatureJet:
    R: np.ndarray
    dR: np.ndarray | None = None
    ddR: np.ndarray | None = None

    @property
    def n(self):
        return self.R.shape[0]

    @property
    def exact(self):
        return self.R.dtype == object


def space_form_R(n: int, c, exact: bool = False) -> np.ndarray:
    I = eye(n, exact)
    R = zeros((n, n, n, n), exact)
    for a in range(n):
        for b in range(n):
            R[a, b] = -c * wedge(I[a], I[b])
    return R


def cp_R(J) -> np.ndarray:
    """R(X,Y) = -(X∧Y + JX∧JY + 2<JY,X> J)."""
    J = np.asarray(J)
    n = J.shape[0]
    exact = J.dtype == object
    I = eye(n, exact)
    R = zeros((n, n, n, n), exact)
    for a in range(n):
        for b in range(n):
            X, Y = I[a], I[b]
            R[a, b] = -(wedge(X, Y) + wedge(J @ X, J @ Y) + 2 * ((J @ Y) @ X) * J)
    return R


def left_invariant_connection(C) -> np.ndarray:
    """Koszul formula for a left-invariant orthonormal frame, [X_i,X_j] = sum_k C[i,j,k] X_k.

    Returns G with G[i] the matrix of nabla_{X_i} (column j = nabla_{X_i} X_j).
    """
    C = np.asarray(C)
    # <nabla_i X_j, X_k> = 1/2 (C_ijk - C_jki + C_kij)
    Gam = (C - C.transpose(2, 0, 1) + C.transpose(1, 2, 0)) / 2
    return Gam.transpose(0, 2, 1)


def left_invariant_jet(C, order: int = 2) -> CurvatureJet:
    """Jet of a left-invariant metric with orthonormal frame structure constants C[i,j,k]."""
    C = np.asarray(C)
    G = left_invariant_connection(C)
    R = np.einsum("ijl,lab->ijab", C, G) - (np.einsum("iac,jcb->ijab", G, G) - np.einsum("jac,icb->ijab", G, G))
    dR = _nabla_const(G, R) if order >= 1 else None
    ddR = _nabla_const(G, dR) if order >= 2 else None
    return CurvatureJet(R, dR, ddR)


def _nabla_const(G, T):
    """Covariant derivative of an End-valued tensor with constant frame components.

    T has shape (n,)*q + (n, n): q covector slots then an endomorphism.
    Returns shape (n,)*(q+1) + (n,n) with the derivative slot first.
    """
    n = G.shape[0]
    q = T.ndim - 2
    out = []
    for w in range(n):
        Gw = G[w]
        D = np.einsum("ab,...bc->...ac", Gw, T) - np.einsum("...ab,bc->...ac", T, Gw)
        for s in range(q):
            # -T(..., nabla_w e_x, ...): slot s gets G[w][c, x] T[..., c, ...]
            Tm = np.moveaxis(T, s, 0)
            corr = np.tensordot(Gw, Tm, axes=([0], [0]))
            D = D - np.moveaxis(corr, 0, s)
        out.append(D)
    return np.stack(out)


def curvature_jet(model: PointModel, exact: bool = False, order: int = 2) -> CurvatureJet:
    """order < 2 lets expensive models skip the higher derivatives."""
    if isinstance(model, SpaceForm):
        n = model.n
        R = space_form_R(n, _scalar(model.c, exact), exact)
        return CurvatureJet(R, zeros((n,) * 5, exact), zeros((n,) * 6, exact))
    if isinstance(model, Product):
        n = model.dim
        R, dR, ddR = zeros((n,) * 4, exact), zeros((n,) * 5, exact), zeros((n,) * 6, exact)
        have_d = have_dd = True
        for f, (lo, hi) in zip(model.factors, model.offsets()):
            j = curvature_jet(f, exact, order)
            s = slice(lo, hi)
            R[s, s, s, s] = j.R
            if j.dR is None:
                have_d = False
            else:
                dR[s, s, s, s, s] = j.dR
            if j.ddR is None:
                have_dd = False
            else:
                ddR[s, s, s, s, s, s] = j.ddR
        return CurvatureJet(R, dR if have_d else None, ddR if have_dd else None)
    if isinstance(model, SymmetricSpace):
        pp = _arr(model.pp, exact)
        kp = _arr(model.kp, exact)
        n = model.dim
        # R(X_i,X_j)X_l = [[X_i,X_j],X_l]
        R = np.einsum("ijs,slo->ijol", pp, kp)
        return CurvatureJet(R, zeros((n,) * 5, exact), zeros((n,) * 6, exact))
    if isinstance(model, ComplexProjective):
        n = model.dim
        R = cp_R(_arr(model.J, exact))
        return CurvatureJet(R, zeros((n,) * 5, exact), zeros((n,) * 6, exact))
    if isinstance(model, Surface2D):
        C = _scalar(model.C, exact)
        g = _arr(model.gradC, exact)
        h = _arr(model.hessC, exact)
        W = wedge(*eye(2, exact))
        R = space_form_R(2, C, exact)
        dR = np.einsum("w,ab,ij->wabij", -g, W, W)
        ddR = np.einsum("vw,ab,ij->vwabij", -h, W, W)
        return CurvatureJet(R, dR, ddR)
    if isinstance(model, Unimodular3):
        return left_invariant_jet(model.structure_constants(exact), order)
    if isinstance(model, Generic):
        R = _arr(model.R_table, exact)
        dR = None if model.nablaR_table is None else _arr(model.nablaR_table, exact)
        ddR = None if model.nabla2R_table is None else _arr(model.nabla2R_table, exact)
        return CurvatureJet(R, dR, ddR)
    raise ModelError(f"unsupported model variant {type(model).__name__}")


def riemann(model: PointModel, X, Y, Z, jet: CurvatureJet | None = None):
    jet = jet or curvature_jet(model, is_exact(X, Y, Z), order=0)
    n = jet.n
    for v in (X, Y, Z):
        if np.shape(v) != (n,):
            raise ModelError(f"vector of length {np.shape(v)} for a model of dimension {n}")
    return np.einsum("a,b,abij,j->i", X, Y, jet.R, Z)


def ricci_tensor(R) -> np.ndarray:
    """ric(X,Y) = sum_i <R(X,e_i)Y, e_i>."""
    return np.einsum("xiiy->xy", R)


@dataclass(frozen=True)
class BaseContractions:
    ricci: np.ndarray
    scalar: object
    K_lower_bound: object | None


def sectional_lower_bound(model: PointModel, exact: bool = False):
    if isinstance(model, SpaceForm):
        return _scalar(model.c, exact) if model.n >= 2 else None
    if isinstance(model, Surface2D):
        return _scalar(model.C, exact)
    if isinstance(model, ComplexProjective):
        return _scalar(1, exact)
    if isinstance(model, Unimodular3):
        from .unimodular3 import MilnorConstants, mu_verbatim
        mu = mu_verbatim(MilnorConstants(model.m, model.n, model.p))
        vals = [-v for v in mu]
        return min(vals) if exact else float(min(vals))
    if isinstance(model, Product):
        bounds = []
        for f in model.factors:
            if f.dim >= 2:
                b = sectional_lower_bound(f, exact)
                if b is None:
                    return None
                bounds.append(b)
        zero = _scalar(0, exact)
        if len(model.factors) == 1:
            return bounds[0] if bounds else None
        return min([zero] + bounds)
    return None


def base_contractions(model: PointModel, exact: bool = False, jet: CurvatureJet | None = None) -> BaseContractions:
    jet = jet or curvature_jet(model, exact)
    ric = ricci_tensor(jet.R)
    return BaseContractions(ric, np.trace(ric), sectional_lower_bound(model, exact))


def sectional_base(R, X, Y):
    """<R(X,Y)X,Y> / |X∧Y|^2."""
    num = np.einsum("a,b,abij,j,i->", X, Y, R, X, Y)
    den = (X @ X) * (Y @ Y) - (X @ Y) ** 2
    return num / den


def nabla_R(model: PointModel, X, Y, Z, xi, k=None):
    """nabla^{M,E}_X (R^E)(Y, Z, xi).

    k is None: the tangent bundle with its Levi-Civita connection, xi a vector.
    k given: the Atiyah bundle E(M,k), xi a flat fiber vector or FiberPair.
    """
    if k is None:
        jet = curvature_jet(model, is_exact(X, Y, Z, xi))
        if jet.dR is None:
            raise ModelError("model lacks derivative data")
        return np.einsum("w,a,b,wabij,j->i", X, Y, Z, jet.dR, xi)
    from .atiyah import AtiyahSpec, nabla_supra
    return nabla_supra(AtiyahSpec(model, k), X, Y, Z, xi)
