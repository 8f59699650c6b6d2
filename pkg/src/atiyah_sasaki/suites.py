"""Named property suites, shared by the command line and the tests."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .atiyah import AtiyahSpec, supra_vanishes
from .base_geometry import ComplexProjective, SpaceForm, curvature_jet
from .io import builtin_model_paths, load_model
from .kernels import curvature_apply_batch
from .sphere_bundle import (SphereBundleModel, _float_model, normalize_batch, ricci_trace,
                            sample_planes, scalar, sectional_normalized_batch, xi_matrix)
from .unimodular3 import check_printed_cases, mu_from_connection, mu_verbatim, riemann_check


@dataclass
class Check:
    label: str
    ok: bool
    detail: dict = field(default_factory=dict)


@dataclass
class SuiteResult:
    name: str
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]


def builtin_models(float_only: bool = True):
    out = []
    for p in builtin_model_paths():
        m = load_model(p).model
        out.append((p.stem, _float_model(m) if float_only else m))
    return out


def random_point(model: SphereBundleModel, rng) -> np.ndarray:
    a = rng.standard_normal(model.m)
    return float(model.r) * a / np.linalg.norm(a)


def trace_identity(samples=20, seed=0, tol=1e-8, models=None) -> SuiteResult:
    rng = np.random.default_rng(seed)
    checks = []
    for name, model in models or builtin_models():
        worst = 0.0
        for _ in range(samples):
            M = model.with_point(random_point(model, rng))
            worst = max(worst, abs(float(ricci_trace(M) - scalar(M))))
        checks.append(Check(name, worst < tol, {"max_error": worst}))
    return SuiteResult("trace-identity", checks)


def milnor_tables(grid_size=9) -> SuiteResult:
    checks = []
    for cc in check_printed_cases():
        ok = cc.matches or cc.index > 3
        det = {"params": [str(x) for x in cc.params.as_tuple()], "computed": [str(x) for x in cc.computed.lam],
               "printed": [str(x) for x in cc.printed], "matches": cc.matches, "verdict": cc.verdict}
        if not cc.matches:
            det["flag"] = "printed values disagree with the recomputation"
        checks.append(Check(f"case {cc.index} {cc.label}", ok, det))
    vals = [Fraction(i - grid_size // 2, 4) for i in range(grid_size)]
    bad = [t for t in itertools.product(vals, repeat=3) if mu_verbatim(t) != mu_from_connection(t)]
    checks.append(Check("double-entry mu", not bad, {"grid": len(vals) ** 3,
                                                      "mismatches": [[str(x) for x in t] for t in bad[:5]]}))
    rc = [t for t in itertools.product(vals[::2], repeat=3) if not riemann_check(t)]
    checks.append(Check("riemann agreement", not rc, {"mismatches": len(rc)}))
    return SuiteResult("milnor-tables", checks)


def skew_adjoint(models=None, corrupt: bool = False, tol=1e-10) -> SuiteResult:
    checks = []
    models = list(models or builtin_models())
    for q, (name, model) in enumerate(models):
        S = np.array(model.S, dtype=float)
        if corrupt and q == 0:
            S[0, 1, 0, 1] += 0.1
        err_adj = S + S.transpose(0, 1, 3, 2)
        err_anti = S + S.transpose(1, 0, 2, 3)
        det = {}
        ok = True
        for label, E in (("not skew-adjoint", err_adj), ("not antisymmetric in X,Y", err_anti)):
            mx = float(np.max(np.abs(E), initial=0.0))
            if mx > tol:
                ok = False
                idx = np.unravel_index(np.argmax(np.abs(E)), E.shape)
                det[label] = {"index": [int(i) for i in idx], "error": mx}
        checks.append(Check(name, ok, det))
    return SuiteResult("skew-adjoint", checks)


def basis_invariance(samples=500, seed=0, tol=1e-8, models=None) -> SuiteResult:
    rng = np.random.default_rng(seed)
    checks = []
    for name, model in models or builtin_models():
        X, al, Y, be = sample_planes(model, samples, rng)
        K0 = sectional_normalized_batch(model, *normalize_batch(model, X, al, Y, be, 0))
        # a different spanning pair of the same plane, then the other rotation branch
        t = rng.uniform(0, 2 * np.pi, samples)[:, None]
        s = rng.uniform(0.5, 2.0, samples)[:, None]
        c_, s_ = np.cos(t), np.sin(t)
        X2, al2 = c_ * X + s_ * Y, c_ * al + s_ * be
        Y2, be2 = s * (-s_ * X + c_ * Y) + 0.3 * X2, s * (-s_ * al + c_ * be) + 0.3 * al2
        K1 = sectional_normalized_batch(model, *normalize_batch(model, X2, al2, Y2, be2, 1))
        err = float(np.max(np.abs(K0 - K1)))
        checks.append(Check(name, err < tol, {"max_error": err}))
    return SuiteResult("basis-invariance", checks)


def xi_psd(models=None, tol=1e-10) -> SuiteResult:
    checks = []
    for name, model in models or builtin_models():
        ev = np.linalg.eigvalsh(np.asarray(xi_matrix(model), float))
        checks.append(Check(name, ev[0] > -tol, {"min_eigenvalue": float(ev[0])}))
    return SuiteResult("xi-psd", checks)


def cp_trace(samples=1000, seed=0, tol=1e-10, dims=(1, 2, 3)) -> SuiteResult:
    """tr(J R(X,Y)) = 4(n+1) <JY, X> on CP^n."""
    rng = np.random.default_rng(seed)
    checks = []
    for n in dims:
        cp = ComplexProjective(n)
        R = curvature_jet(cp).R
        J = np.asarray(cp.J, float)
        X = rng.standard_normal((samples, 2 * n))
        Y = rng.standard_normal((samples, 2 * n))
        lhs = np.einsum("ij,qa,qb,abji->q", J, X, Y, R)
        rhs = 4 * (n + 1) * np.einsum("qi,qi->q", Y @ J.T, X)
        err = float(np.max(np.abs(lhs - rhs)))
        checks.append(Check(f"CP^{n}", err < tol, {"max_error": err}))
    return SuiteResult("cp-trace", checks)


def supra_vanishing(samples=10000, seed=0, tol=1e-12, dims=(2, 3, 4), ks=(0.5, 1.0, 3.0)) -> SuiteResult:
    rng = np.random.default_rng(seed)
    checks = []
    for n in dims:
        for k in ks:
            spec = AtiyahSpec(SpaceForm(n, 2 / k), k)
            S = spec.S
            X = rng.standard_normal((samples, n))
            Y = rng.standard_normal((samples, n))
            xi = rng.standard_normal((samples, spec.m))
            v = curvature_apply_batch(np.asarray(S, float), X, Y, xi)
            err = float(np.max(np.abs(v)))
            an = supra_vanishes(spec)
            checks.append(Check(f"n={n} k={k}", err < tol and an.vanishes,
                                {"max_norm": err, "analytic": an.vanishes, "method": an.method}))
    return SuiteResult("supra-vanishing", checks)


SUITES = {
    "trace-identity": trace_identity,
    "milnor-tables": milnor_tables,
    "skew-adjoint": skew_adjoint,
    "basis-invariance": basis_invariance,
    "xi-psd": xi_psd,
    "cp-trace": cp_trace,
    "supra-vanishing": supra_vanishing,
}
