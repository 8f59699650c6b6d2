"""numpy reference implementations of the hot kernels.

Also the only path for object (Fraction) arrays.
"""
import numpy as np


def curvature_apply_batch(S, X, Y, xi):
    """out[q] = R(X[q], Y[q]) xi[q] for tables S[a,b] (m x m)."""
    return np.einsum("qa,qb,abij,qj->qi", X, Y, S, xi)


def sectional_batch(R, S, D, r, a, X, al, Y, be):
    """Sectional curvature of normalized planes (X+al, Y+be), one per row.

    Rows must satisfy |X|^2+|al|^2 = |Y|^2+|be|^2 = 1, <X,Y> = <al,be> = 0
    and al, be orthogonal to a.  beta = 0 rows give the rank-2 branch.
    """
    RXY = np.einsum("qa,qb,abij->qij", X, Y, S)
    base = np.einsum("qa,qb,abij,qj,qi->q", X, Y, R, X, Y)
    Ra = RXY @ a
    t = base + np.sum(al * al, axis=1) * np.sum(be * be, axis=1) / r ** 2
    t = t + 3 * np.einsum("qij,qj,qi->q", RXY, al, be) - 3 * np.sum(Ra * Ra, axis=1) / 4
    # aS[q, i, v] = sum_u a_u S(X_q, e_i)_{uv}
    aSX = np.einsum("qw,wiuv,u->qiv", X, S, a)
    aSY = np.einsum("qw,wiuv,u->qiv", Y, S, a)
    p = np.einsum("qiv,qv->qi", aSX, be)
    q_ = np.einsum("qiv,qv->qi", aSY, al)
    s = np.einsum("qiv,qv->qi", aSX, al)
    u = np.einsum("qiv,qv->qi", aSY, be)
    t = t + np.sum((p + q_) ** 2, axis=1) / 4 - np.sum(s * u, axis=1)
    if D is not None:
        aD = np.einsum("wabuv,u->wabv", D, a)
        DY = np.einsum("qw,qa,qb,wabv,qv->q", Y, X, Y, aD, al)
        DX = np.einsum("qw,qa,qb,wabv,qv->q", X, X, Y, aD, be)
        t = t + DY - DX
    return t
