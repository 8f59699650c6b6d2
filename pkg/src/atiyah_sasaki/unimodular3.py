"""Three dimensional unimodular Lie groups in a Milnor frame.

Everything here is exact: inputs are coerced to Fraction and no float ever
enters a computation.  Frame relations:

    [X1,X2] = m X3,   [X1,X3] = n X2,   [X2,X3] = p X1.

Curvature convention R(X,Y) = nabla_[X,Y] - [nabla_X, nabla_Y]; in this frame
R(X_i,X_j) = mu_ij X_i∧X_j, so R(X_i,X_j)X_j = mu_ij X_i and the sectional
curvature of the plane (X_i,X_j) is -mu_ij.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Iterable, Sequence

import numpy as np

from .algebra import to_fraction, wedge, eye, zeros
from .base_geometry import Unimodular3, curvature_jet, left_invariant_connection

PAIRS = ((0, 1), (0, 2), (1, 2))


@dataclass(frozen=True)
class MilnorConstants:
    m: Fraction
    n: Fraction
    p: Fraction

    def __post_init__(self):
        for name in ("m", "n", "p"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))

    def as_tuple(self):
        return (self.m, self.n, self.p)

    def structure_constants(self) -> np.ndarray:
        return Unimodular3(self.m, self.n, self.p).structure_constants(exact=True)


@dataclass(frozen=True)
class CurvatureConstants:
    mu12: Fraction
    mu13: Fraction
    mu23: Fraction
    lam1: Fraction
    lam2: Fraction
    lam3: Fraction

    @property
    def mu(self):
        return (self.mu12, self.mu13, self.mu23)

    @property
    def lam(self):
        return (self.lam1, self.lam2, self.lam3)

    def lambda_sum_ok(self) -> bool:
        a, b, c = self.mu
        return sum(self.lam) == 2 * (a * a + b * b + c * c) + 12 * (a + b + c - 1)


def _mc(c) -> MilnorConstants:
    return c if isinstance(c, MilnorConstants) else MilnorConstants(*c)


def mu_verbatim(c) -> tuple[Fraction, Fraction, Fraction]:
    """The three mu expressions, transcribed term by term."""
    c = _mc(c)
    m, n, p = c.m, c.n, c.p
    mu12 = Fraction(1, 4) * ((p + n + m) * (-n - p + m) + (-p + m + n) * (-n - p + m) + (-p + n + m) * (p + n + m))
    mu13 = -Fraction(1, 4) * ((-p + n + m) * (-n - p + m) + (p + n + m) * (-n - p + m) - (-p + m + n) * (p + n + m))
    mu23 = -Fraction(1, 4) * ((-p + m + n) * (p + n + m) - (-p + m + n) * (-n - p + m) + (p + n + m) * (-n - p + m))
    return mu12, mu13, mu23


def milnor_connection(c) -> list[np.ndarray]:
    """nabla_{X_1}, nabla_{X_2}, nabla_{X_3} from the Koszul formula (exact skew matrices)."""
    G = left_invariant_connection(_mc(c).structure_constants())
    return [G[i] for i in range(3)]


def printed_connection(c) -> list[np.ndarray]:
    """The closed-form coefficients (m+n-p), (m+n+p), (-m+n+p) on X2∧X3, X1∧X3, X1∧X2.

    Kept for comparison only; these do not satisfy the Koszul formula in
    general (see connection_coefficients).
    """
    c = _mc(c)
    I = eye(3, exact=True)
    return [(c.m + c.n - c.p) * wedge(I[1], I[2]),
            (c.m + c.n + c.p) * wedge(I[0], I[2]),
            (-c.m + c.n + c.p) * wedge(I[0], I[1])]


def connection_coefficients(c) -> tuple[Fraction, Fraction, Fraction]:
    """Coefficients of nabla_{X_1} on X2∧X3, nabla_{X_2} on X1∧X3, nabla_{X_3} on X1∧X2."""
    G = milnor_connection(c)
    # (X_a∧X_b)[a, b] = +1
    return G[0][1, 2], G[1][0, 2], G[2][0, 1]


def _curvature_from_connection(G: Sequence[np.ndarray], C: np.ndarray) -> np.ndarray:
    R = zeros((3, 3, 3, 3), exact=True)
    for i in range(3):
        for j in range(3):
            R[i, j] = sum(C[i, j, l] * G[l] for l in range(3)) - (G[i] @ G[j] - G[j] @ G[i])
    return R


def mu_from_connection(c) -> tuple[Fraction, Fraction, Fraction]:
    """mu_ij rederived as the X_i component of R(X_i,X_j)X_j."""
    c = _mc(c)
    R = _curvature_from_connection(milnor_connection(c), c.structure_constants())
    return tuple(R[i, j][i, j] for i, j in PAIRS)


def lambda_verbatim(mu) -> tuple[Fraction, Fraction, Fraction]:
    a, b, c = mu
    t = 4 * (a + b + c - 1)
    return a * a + b * b + t, a * a + c * c + t, b * b + c * c + t


def curvature_constants(c) -> CurvatureConstants:
    mu = mu_verbatim(c)
    return CurvatureConstants(*mu, *lambda_verbatim(mu))


def positive_scalar_verdict(c) -> bool:
    return all(v < 0 for v in curvature_constants(c).lam)


def xi_diag(mu) -> tuple[Fraction, Fraction, Fraction]:
    """xi(X_i, X_i) for i = 1, 2, 3."""
    a, b, c = mu
    return 2 * (a * a + b * b), 2 * (a * a + c * c), 2 * (b * b + c * c)


def unimodular_scalar(c, a, form: str = "consistent") -> Fraction:
    """Scalar curvature of the unit tangent bundle at (x, a), |a| = 1.

    form="consistent": tau = s^G + 2 - xi(a,a)/4 with s^G = -2(mu12+mu13+mu23),
    which is what the general sphere bundle scalar gives for rank 3, r = 1.
    form="printed": tau = 1 - (mu12+mu13+mu23) - xi(a,a)/4, the other
    normalisation; its sign is not equivalent to the lambda criterion.
    """
    a = [to_fraction(x) for x in a]
    if len(a) != 3:
        raise ValueError("a must have three components")
    if sum(x * x for x in a) != 1:
        raise ValueError("unimodular_scalar needs |a| = 1")
    mu = mu_verbatim(c)
    # R(X_i,X_j) = mu_ij X_i∧X_j so |R(X_i,X_j)a|^2 = mu_ij^2 (a_i^2 + a_j^2)
    xi = 2 * sum(mu[q] ** 2 * (a[i] ** 2 + a[j] ** 2) for q, (i, j) in enumerate(PAIRS))
    smu = sum(mu)
    if form == "consistent":
        return 2 - 2 * smu - xi / 4
    if form == "printed":
        return 1 - smu - xi / 4
    raise ValueError(f"unknown form {form!r}")


def base_scalar(c) -> Fraction:
    return -2 * sum(mu_verbatim(c))


def riemann_check(c) -> bool:
    """curvature_constants vs the base model's curvature tensor, exactly."""
    c = _mc(c)
    R = curvature_jet(Unimodular3(*c.as_tuple()), exact=True, order=0).R
    mu = mu_verbatim(c)
    I = eye(3, exact=True)
    for q, (i, j) in enumerate(PAIRS):
        if not np.all(R[i, j] == mu[q] * wedge(I[i], I[j])):
            return False
    return True


# printed cases: parameters, label, printed lambda triple
PRINTED_CASES = [
    ((Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)), "SO(3) / SU(2)",
     (Fraction(-543127, 165888), Fraction(-545675, 165888), Fraction(-542035, 165888))),
    ((Fraction(1, 2), Fraction(1, 3), Fraction(-1, 4)), "SL(2,R)",
     (Fraction(-505879, 165888), Fraction(-504059, 165888), Fraction(-522259, 165888))),
    ((Fraction(1, 2), Fraction(1, 3), Fraction(0)), "E(2)",
     (Fraction(-33547, 10368), Fraction(-33347, 10368), Fraction(-33847, 10368))),
    ((Fraction(1, 2), Fraction(1, 3), Fraction(0)), "E(1,1)",
     (Fraction(-33547, 10368), Fraction(-33347, 10368), Fraction(-33847, 10368))),
    ((Fraction(1, 2), Fraction(-1, 3), Fraction(0)), "H(3,R)",
     (Fraction(-33547, 10368), Fraction(-33347, 10368), Fraction(-33847, 10368))),
]


@dataclass(frozen=True)
class CaseCheck:
    index: int
    label: str
    params: MilnorConstants
    printed: tuple
    computed: CurvatureConstants
    verdict: bool

    @property
    def matches(self) -> bool:
        return tuple(self.printed) == self.computed.lam


def check_printed_cases() -> list[CaseCheck]:
    """Recompute every printed case.  Mismatches are reported, not raised."""
    out = []
    for idx, (params, label, printed) in enumerate(PRINTED_CASES, start=1):
        c = MilnorConstants(*params)
        cc = curvature_constants(c)
        out.append(CaseCheck(idx, label, c, printed, cc, all(v < 0 for v in cc.lam)))
    return out


@dataclass(frozen=True)
class ScanRow:
    params: MilnorConstants
    constants: CurvatureConstants
    verdict: bool


def _row(t) -> ScanRow:
    c = MilnorConstants(*t)
    cc = curvature_constants(c)
    return ScanRow(c, cc, all(v < 0 for v in cc.lam))


def grid_points(ranges=None, step=None, points: Iterable | None = None) -> list[tuple]:
    """Expand a grid spec.  ranges = {"m": (lo, hi), ...} with a common rational step,
    or an explicit list of (m, n, p) points."""
    if points is not None:
        pts = [tuple(to_fraction(x) for x in t) for t in points]
        for t in pts:
            if len(t) != 3:
                raise ValueError(f"grid point {t} does not have three entries")
        return pts
    if ranges is None or step is None:
        raise ValueError("grid needs either explicit points or ranges and a step")
    step = to_fraction(step)
    if step <= 0:
        raise ValueError("grid step must be positive")
    axes = []
    for name in ("m", "n", "p"):
        lo, hi = (to_fraction(x) for x in ranges[name])
        vals, v = [], lo
        while v <= hi:
            vals.append(v)
            v += step
        axes.append(vals)
    return list(iproduct(*axes))


@dataclass
class ScanResult:
    rows: list[ScanRow]

    @property
    def positive_fraction(self) -> float:
        return sum(r.verdict for r in self.rows) / len(self.rows)

    def summary(self) -> dict:
        pos = [r for r in self.rows if r.verdict]
        out = {"rows": len(self.rows), "positive": len(pos)}
        if pos:
            for q, name in enumerate("mnp"):
                vals = [r.params.as_tuple()[q] for r in pos]
                out[f"{name}_range"] = [str(min(vals)), str(max(vals))]
        return out


def scan_parameters(ranges=None, step=None, points=None, workers: int = 1) -> ScanResult:
    pts = grid_points(ranges, step, points)
    if not pts:
        raise ValueError("empty grid")
    pts = sorted(set(pts)) if points is None else pts
    if workers > 1 and len(pts) > 256:
        with ProcessPoolExecutor(workers) as ex:
            rows = list(ex.map(_row, pts, chunksize=64))
    else:
        rows = [_row(t) for t in pts]
    return ScanResult(rows)


def fmt_fraction(q) -> str:
    q = to_fraction(q)
    return f"{q.numerator}/{q.denominator}"


CSV_HEADER = ["m", "n", "p", "mu12", "mu13", "mu23", "lambda1", "lambda2", "lambda3", "verdict"]


def write_scan_csv(result: ScanResult, fh=None) -> str:
    buf = io.StringIO() if fh is None else fh
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in result.rows:
        w.writerow([fmt_fraction(x) for x in r.params.as_tuple() + r.constants.mu + r.constants.lam]
                   + ["true" if r.verdict else "false"])
    return buf.getvalue() if fh is None else ""


def relabel_frame(c, perm, signs=(1, 1, 1)) -> MilnorConstants:
    """Constants in the frame Y_a = signs[a] X_perm[a].

    Raises ValueError if the new frame is not of Milnor form (it always is
    for a permutation with signs, but the check is cheap).
    """
    c = _mc(c)
    C = c.structure_constants()
    P = zeros((3, 3), exact=True)
    for a in range(3):
        P[perm[a], a] = to_fraction(signs[a])
    Cn = np.einsum("ia,jb,ijk,kc->abc", P, P, C, P)
    out = MilnorConstants(Cn[0, 1, 2], Cn[0, 2, 1], Cn[1, 2, 0])
    if not np.all(Cn == out.structure_constants()):
        raise ValueError("relabelled frame is not a Milnor frame")
    return out
