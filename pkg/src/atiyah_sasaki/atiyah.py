"""The Atiyah Euclidean bundle E(M,k) = TM ⊕ so(TM) and its supra-curvature.

The connection is nabla^E_X = nabla^M_X + H_X with

    H_X Y = -1/2 R(X,Y),      <H_X F, Y> = -k/2 tr(F R(X,Y)).

Tables are built in the flat orthonormal frame of AtiyahFrame:

    S[a,b]   = R^E(e_a, e_b)                       (m x m)
    D[w,a,b] = nabla^{M,E}_{e_w}(R^E)(e_a, e_b)     (m x m)
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import AtiyahFrame, FiberPair, bracket, eye, is_exact, to_fraction, wedge, zeros
from .base_geometry import (ComplexProjective, CurvatureJet, ModelError, PointModel, Product,
                            SpaceForm, Surface2D, SymmetricSpace, curvature_jet)


def varpi_space_form(c, k):
    """The space-form coefficient 1/4 c (2 - c k)."""
    return c * (2 - c * k) / 4


def varpi_surface(C, k):
    """The 2D coefficient 1/2 C (2 - k C); twice the space-form one."""
    return C * (2 - k * C) / 2


class AtiyahSpec:
    def __init__(self, base: PointModel, k, exact: bool = False):
        if k <= 0:
            raise ValueError(f"k must be positive, got {k}")
        self.base = base
        self.exact = exact
        self.k = to_fraction(k) if exact else float(k)
        self.n = base.dim
        self.frame = AtiyahFrame(self.n, self.k, exact)
        self.m = self.frame.m

    def __repr__(self):
        return f"AtiyahSpec({self.base!r}, k={self.k})"

    @cached_property
    def jet(self) -> CurvatureJet:
        return curvature_jet(self.base, self.exact)

    def _fp(self, xi) -> FiberPair:
        return xi if isinstance(xi, FiberPair) else self.frame.split(xi)

    # operator pieces -------------------------------------------------
    def _H_from(self, R) -> np.ndarray:
        k = self.k
        out = []
        for a in range(self.n):
            Ra = R[a]

            def f(Z, F, Ra=Ra):
                HF = -k / 2 * np.einsum("pq,jqp->j", F, Ra)
                HZ = -np.einsum("b,bij->ij", Z, Ra) / 2
                return HF, HZ

            out.append(self.frame.opmat(f))
        return np.stack(out)

    def _rho(self, A) -> np.ndarray:
        return self.frame.opmat(lambda Z, F: (A @ Z, bracket(A, F)))

    def _P(self, dRab) -> np.ndarray:
        """The nabla R part of R^E(a,b); dRab[c] = (nabla_c R)(a,b)."""
        k = self.k

        def f(Z, F):
            t = -k / 2 * np.einsum("jqp,pq->j", dRab, F)
            s = -np.einsum("c,cij->ij", Z, dRab) / 2
            return t, s

        return self.frame.opmat(f)

    @cached_property
    def H(self) -> np.ndarray:
        """H[a] = matrix of H_{e_a} in the flat frame."""
        return self._H_from(self.jet.R)

    @cached_property
    def S(self) -> np.ndarray:
        jet, n, H = self.jet, self.n, self.H
        if jet.dR is None:
            raise ModelError("supra-curvature needs nabla R data for this base")
        S = zeros((n, n, self.m, self.m), self.exact)
        for a in range(n):
            for b in range(a + 1, n):
                M = (self._rho(jet.R[a, b]) + H[b] @ H[a] - H[a] @ H[b]
                     + self._P(jet.dR[:, a, b]))
                S[a, b] = M
                S[b, a] = -M
        return S

    @cached_property
    def D(self) -> np.ndarray:
        jet, n, H, S = self.jet, self.n, self.H, self.S
        if jet.ddR is None:
            raise ModelError("the derivative of the supra-curvature needs nabla^2 R data")
        D = zeros((n, n, n, self.m, self.m), self.exact)
        for w in range(n):
            Hp = self._H_from(jet.dR[w])
            for a in range(n):
                for b in range(a + 1, n):
                    M = (self._rho(jet.dR[w, a, b]) + Hp[b] @ H[a] + H[b] @ Hp[a]
                         - Hp[a] @ H[b] - H[a] @ Hp[b] + self._P(jet.ddR[w, :, a, b])
                         + H[w] @ S[a, b] - S[a, b] @ H[w])
                    D[w, a, b] = M
                    D[w, b, a] = -M
        return D


def H(spec: AtiyahSpec, X, xi):
    """H_X xi; xi a FiberPair or a flat frame vector."""
    v = spec.frame.join(xi) if isinstance(xi, FiberPair) else np.asarray(xi)
    out = np.einsum("a,aij,j->i", X, spec.H, v)
    return spec.frame.split(out) if isinstance(xi, FiberPair) else out


# closed forms -----------------------------------------------------------

def _closed_space_form(spec, c, X, Y, Z, F):
    w = varpi_space_form(c, spec.k)
    W = wedge(X, Y)
    return FiberPair(-2 * w * (W @ Z), -2 * w * bracket(W, F))


def _closed_surface(spec, base: Surface2D, X, Y, Z, F):
    ex = spec.exact
    C = to_fraction(base.C) if ex else float(base.C)
    g = np.array([to_fraction(v) for v in base.gradC], dtype=object) if ex else np.asarray(base.gradC, float)
    w2 = varpi_surface(C, spec.k)
    W = wedge(X, Y)
    t = -w2 * (W @ Z) + spec.k * ((F @ X) @ Y) * g
    s = (Z @ g) / 2 * W - w2 * bracket(W, F)
    return FiberPair(t, s)


def _closed_cp(spec, base: ComplexProjective, X, Y, Z, F):
    J = np.asarray(base.J, dtype=object if spec.exact else float)
    k, nc = spec.k, base.n
    JX, JY, JZ = J @ X, J @ Y, J @ Z
    jyx = JY @ X
    t = ((k - 1) * ((Y @ Z) * X - (X @ Z) * Y + 2 * jyx * JZ)
         + ((2 * nc + 3) * k - 1) * ((JZ @ X) * JY - (JZ @ Y) * JX))
    XY, JXJY = wedge(X, Y), wedge(JX, JY)
    # coefficient (1 - k/2): the printed (k/2 - 1) disagrees with the assembly
    s = ((1 - k / 2) * bracket(F, XY + JXJY) + 2 * jyx * bracket(F, J)
         + k / 2 * (bracket(J @ F @ J, XY) - wedge(J @ F @ X, JY) - wedge(JX, J @ F @ Y)))
    return FiberPair(t, s)


def phi_decompose(base: SymmetricSpace, F):
    """F = Phi_{X^F} + F_perp, orthogonal for -tr(AB); returns (k-coords of X^F, F_perp)."""
    kp = np.asarray(base.kp, dtype=float)
    basis = [base.phi(np.eye(base.dim_k)[s]) for s in range(base.dim_k)]
    G = np.array([[-np.trace(A @ B) for B in basis] for A in basis])
    rhs = np.array([-np.trace(A @ F) for A in basis])
    coef, *_ = np.linalg.lstsq(G, rhs, rcond=None)
    proj = np.einsum("s,sij->ij", coef, np.array(basis)) if basis else np.zeros_like(F)
    return coef, F - proj


def _closed_symmetric(spec, base: SymmetricSpace, X, Y, Z, F):
    pp = np.asarray(base.pp, float)
    k = spec.k
    br_pp = lambda U, V: np.einsum("i,j,ijs->s", U, V, pp)   # [U,V] in k-coords
    phi = base.phi
    U_of = lambda G: np.einsum("ji,ijs->s", G, pp)            # U(G) = sum_i [X_i, G X_i]
    pk = lambda P, s: -phi(s) @ P                             # [P, K] = -[K, P]
    # the k/4 terms carry the opposite sign to the printed formula
    t = (phi(br_pp(X, Y)) @ Z
         + k / 4 * (pk(Y, U_of(phi(br_pp(X, Z)))) - pk(X, U_of(phi(br_pp(Y, Z))))))
    R_XY = phi(br_pp(X, Y))
    xF, Fperp = phi_decompose(base, F)
    s = bracket(R_XY, phi(xF - k / 4 * U_of(F))) + bracket(R_XY, Fperp)
    return FiberPair(t, s)


def _closed_product(spec, base: Product, X, Y, Z, F):
    n = base.dim
    t = zeros(n, spec.exact)
    s = zeros((n, n), spec.exact)
    offs = base.offsets()
    for f, (lo, hi) in zip(base.factors, offs):
        sub = AtiyahSpec(f, spec.k, spec.exact)
        out = supra_curvature(sub, X[lo:hi], Y[lo:hi], FiberPair(Z[lo:hi], F[lo:hi, lo:hi]))
        t[lo:hi] = out.tangent
        s[lo:hi, lo:hi] = out.skew
    # off-diagonal blocks of F only see [R^M(X,Y), F]
    Foff = F.copy()
    for lo, hi in offs:
        Foff[lo:hi, lo:hi] = 0
    RXY = np.einsum("a,b,abij->ij", X, Y, spec.jet.R)
    s = s + bracket(RXY, Foff)
    return FiberPair(t, s)


def supra_closed(spec: AtiyahSpec, X, Y, xi: FiberPair) -> FiberPair | None:
    base = spec.base
    Z, F = xi.tangent, xi.skew
    if isinstance(base, SpaceForm):
        c = to_fraction(base.c) if spec.exact else float(base.c)
        return _closed_space_form(spec, c, X, Y, Z, F)
    if isinstance(base, Surface2D):
        return _closed_surface(spec, base, X, Y, Z, F)
    if isinstance(base, ComplexProjective):
        return _closed_cp(spec, base, X, Y, Z, F)
    if isinstance(base, SymmetricSpace) and not spec.exact:
        return _closed_symmetric(spec, base, X, Y, Z, F)
    if isinstance(base, Product):
        return _closed_product(spec, base, X, Y, Z, F)
    return None


def supra_generic(spec: AtiyahSpec, X, Y, xi):
    v = spec.frame.join(xi) if isinstance(xi, FiberPair) else np.asarray(xi)
    out = np.einsum("a,b,abij,j->i", X, Y, spec.S, v)
    return spec.frame.split(out) if isinstance(xi, FiberPair) else out


def supra_curvature(spec: AtiyahSpec, X, Y, xi, method: str = "auto"):
    """R^E(X,Y) xi.  xi may be a FiberPair or a flat frame vector; the output matches."""
    n = spec.n
    if np.shape(X) != (n,) or np.shape(Y) != (n,):
        raise ModelError("supra_curvature: tangent vectors of the wrong dimension")
    if method not in ("auto", "closed", "generic"):
        raise ValueError(f"unknown method {method!r}")
    if method != "generic":
        fp = spec._fp(xi)
        out = supra_closed(spec, X, Y, fp)
        if out is not None:
            return out if isinstance(xi, FiberPair) else spec.frame.join(out)
        if method == "closed":
            raise ModelError(f"no closed form for {type(spec.base).__name__}")
    return supra_generic(spec, X, Y, xi)


def nabla_supra(spec: AtiyahSpec, W, X, Y, xi):
    v = spec.frame.join(xi) if isinstance(xi, FiberPair) else np.asarray(xi)
    out = np.einsum("w,a,b,wabij,j->i", W, X, Y, spec.D, v)
    return spec.frame.split(out) if isinstance(xi, FiberPair) else out


@dataclass(frozen=True)
class VanishResult:
    vanishes: bool
    method: str
    witness: dict | None = None

    def __bool__(self):
        return self.vanishes


def _is_flat_space_form(f) -> bool:
    return isinstance(f, SpaceForm) and (f.c == 0 or f.n == 1)


def supra_vanishes(spec: AtiyahSpec, tol: float = 1e-12) -> VanishResult:
    base, k = spec.base, spec.k
    eq = (lambda u, v: u == v) if spec.exact else (lambda u, v: abs(float(u) - float(v)) <= tol * max(1.0, abs(float(v))))
    if isinstance(base, SpaceForm):
        c = to_fraction(base.c) if spec.exact else float(base.c)
        if base.n == 1 or c == 0 or eq(c, 2 / k):
            return VanishResult(True, "analytic")
        return VanishResult(False, "analytic", {"factor": repr(base), "varpi": varpi_space_form(c, k)})
    if isinstance(base, Product) and all(isinstance(f, SpaceForm) for f in base.factors):
        if len(base.factors) == 1:
            return supra_vanishes(AtiyahSpec(base.factors[0], k, spec.exact), tol)
        bad = [f for f in base.factors if not _is_flat_space_form(f)]
        if not bad:
            return VanishResult(True, "analytic")
        # a curved factor next to any other factor: [R(X,Y), F_off] != 0
        return VanishResult(False, "analytic", {"factor": repr(bad[0]), "reason": "cross-factor block"})
    S = spec.S
    absS = np.abs(S.astype(float))
    idx = np.unravel_index(np.argmax(absS), absS.shape) if absS.size else None
    if idx is None or absS[idx] <= tol:
        return VanishResult(True, "frame-grid")
    a, b, i, j = (int(v) for v in idx)
    return VanishResult(False, "frame-grid", {"X": a, "Y": b, "component": i, "input": j, "value": float(S[idx])})


def supra_bound_K(spec: AtiyahSpec):
    """A constant K with |R^E(X,Y)xi| <= K |X||Y||xi|: 8|varpi| for space forms."""
    if not isinstance(spec.base, SpaceForm):
        raise ModelError("supra_bound_K is only available for space forms")
    c = to_fraction(spec.base.c) if spec.exact else float(spec.base.c)
    return 8 * abs(varpi_space_form(c, spec.k))


def xi_closed_space_form(n, c, k, xi: FiberPair):
    """xi(Z+F, Z+F) for a space form, in terms of the 1/4 c(2-ck) coefficient.

    Written as 2w^2(n-1)|Z+F|^2 + 2w^2(n-3)|F|^2 this needs w = 1/2 c(2-ck);
    with the 1/4 coefficient the prefactor is 8w^2.
    """
    w = varpi_space_form(c, k)
    nZ = xi.tangent @ xi.tangent
    nF = -k * np.trace(xi.skew @ xi.skew)
    return 8 * w * w * ((n - 1) * (nZ + nF) + (n - 3) * nF)
