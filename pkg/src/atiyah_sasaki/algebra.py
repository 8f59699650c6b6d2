"""Pointwise linear algebra over an orthonormal frame.

Vectors are 1-d numpy arrays, skew endomorphisms are full n x n arrays.
Two scalar modes exist: float64 arrays, and object arrays of Fraction
(exact mode).  The mode is carried by the array dtype and never mixed
inside one computation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from numbers import Rational
from typing import Callable, Sequence

import numpy as np

DEFAULT_TOL = 1e-9


class ExactnessError(ValueError):
    """An exact computation would need an irrational number."""


@dataclass(frozen=True)
class Numeric:
    exact: bool = False
    tol: float = DEFAULT_TOL

    def array(self, x) -> np.ndarray:
        return as_exact(x) if self.exact else np.asarray(x, dtype=float)

    def zeros(self, shape) -> np.ndarray:
        return zeros(shape, self.exact)


FLOAT = Numeric()
EXACT = Numeric(exact=True, tol=0.0)


def to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, Rational):
        return Fraction(v.numerator, v.denominator)
    # floats are converted through their shortest repr, so 0.25 -> 1/4
    return Fraction(repr(float(v)))


def as_exact(x) -> np.ndarray:
    arr = np.asarray(x, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(arr.shape):
        out[idx] = to_fraction(arr[idx])
    return out


def is_exact(*arrays) -> bool:
    return any(isinstance(a, np.ndarray) and a.dtype == object for a in arrays) or any(
        isinstance(a, Fraction) for a in arrays)


def zeros(shape, exact: bool = False) -> np.ndarray:
    if not exact:
        return np.zeros(shape)
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def eye(n: int, exact: bool = False) -> np.ndarray:
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def to_float(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


def exact_sqrt(q) -> Fraction:
    """Square root of a nonnegative rational, or ExactnessError."""
    q = to_fraction(q)
    if q < 0:
        raise ExactnessError(f"negative radicand {q}")
    a, b = q.numerator, q.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra != a or rb * rb != b:
        raise ExactnessError(f"sqrt({q}) is irrational")
    return Fraction(ra, rb)


def sqrt(q, exact: bool):
    return exact_sqrt(q) if exact else float(np.sqrt(float(q)))


def wedge(X, Y) -> np.ndarray:
    """X∧Y as a matrix: Z -> <Y,Z> X - <X,Z> Y."""
    X = np.asarray(X)
    Y = np.asarray(Y)
    if X.shape != Y.shape or X.ndim != 1:
        raise ValueError(f"wedge: dimension mismatch {X.shape} vs {Y.shape}")
    return np.outer(X, Y) - np.outer(Y, X)


def bracket(A, B) -> np.ndarray:
    return A @ B - B @ A


def is_skew(A, tol: float = DEFAULT_TOL) -> bool:
    A = np.asarray(A)
    if A.dtype == object:
        return bool(np.all(A + A.T == 0))
    return bool(np.max(np.abs(A + A.T), initial=0.0) <= tol)


def skew_part(A) -> np.ndarray:
    return (A - A.T) / 2


@dataclass(frozen=True)
class FiberPair:
    """Element Z + F of TM ⊕ so(TM)."""

    tangent: np.ndarray
    skew: np.ndarray

    def __post_init__(self):
        n = len(self.tangent)
        if self.skew.shape != (n, n):
            raise ValueError("FiberPair: skew part must be n x n")

    def __add__(self, other):
        return FiberPair(self.tangent + other.tangent, self.skew + other.skew)

    def __sub__(self, other):
        return FiberPair(self.tangent - other.tangent, self.skew - other.skew)

    def scale(self, s):
        return FiberPair(self.tangent * s, self.skew * s)


def inner_k(xi: FiberPair, eta: FiberPair, k):
    """<X+F, Y+G>_k = <X,Y> - k tr(F G)."""
    if k <= 0:
        raise ValueError(f"inner_k needs k > 0, got {k}")
    return xi.tangent @ eta.tangent - k * np.trace(xi.skew @ eta.skew)


def skew_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


class AtiyahFrame:
    """Orthonormal frame of TM ⊕ so(TM) for <,>_k.

    Tangent part e_1..e_n first, then B_p = e_i∧e_j / sqrt(2k) for i<j in
    lexicographic order.  Flat coordinates of F are f_p = -k tr(F B_p).
    """

    def __init__(self, n: int, k, exact: bool = False):
        if k <= 0:
            raise ValueError(f"k must be positive, got {k}")
        self.n = n
        self.exact = exact
        self.k = to_fraction(k) if exact else float(k)
        self.pairs = skew_pairs(n)
        self.m = n + len(self.pairs)
        s = sqrt(2 * self.k, exact)
        I = eye(n, exact)
        self.basis = [wedge(I[i], I[j]) / s for i, j in self.pairs]
        self._s = s

    def flat(self, Z, F) -> np.ndarray:
        out = zeros(self.m, self.exact)
        out[:self.n] = Z
        # tr(F e_i∧e_j) = F[j,i] - F[i,j]
        for p, (i, j) in enumerate(self.pairs):
            out[self.n + p] = -self.k * (F[j, i] - F[i, j]) / self._s
        return out

    def split(self, v) -> FiberPair:
        v = np.asarray(v)
        Z = v[:self.n].copy()
        F = zeros((self.n, self.n), self.exact)
        for p, (i, j) in enumerate(self.pairs):
            F[i, j] += v[self.n + p] / self._s
            F[j, i] -= v[self.n + p] / self._s
        return FiberPair(Z, F)

    def join(self, xi: FiberPair) -> np.ndarray:
        return self.flat(xi.tangent, xi.skew)

    def opmat(self, f: Callable[[np.ndarray, np.ndarray], tuple]) -> np.ndarray:
        """Matrix of a linear map (Z, F) -> (Z', F') in the flat frame."""
        M = zeros((self.m, self.m), self.exact)
        for q in range(self.m):
            e = zeros(self.m, self.exact)
            e[q] = 1
            xi = self.split(e)
            Zo, Fo = f(xi.tangent, xi.skew)
            M[:, q] = self.flat(Zo, Fo)
        return M


def orthonormalize(vectors: Sequence, inner: Callable | None = None, tol: float = DEFAULT_TOL) -> list:
    """Gram-Schmidt.  Exact inputs need rational norms, otherwise ExactnessError."""
    vecs = [np.asarray(v) for v in vectors]
    exact = is_exact(*vecs)
    if inner is None:
        inner = lambda u, v: u @ v
    out: list = []
    for v in vecs:
        w = v.copy()
        for q in out:
            w = w - inner(q, w) * q
        nn = inner(w, w)
        if exact:
            if nn == 0:
                raise ValueError("orthonormalize: rank deficient input")
            w = w / exact_sqrt(nn)
        else:
            if nn <= tol * tol:
                raise ValueError(f"orthonormalize: rank deficient input (norm^2={nn:.3g})")
            w = w / np.sqrt(nn)
        out.append(w)
    return out
