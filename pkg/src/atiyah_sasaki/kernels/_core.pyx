# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled float64 versions of the sectional and curvature-apply kernels."""
import numpy as np
cimport cython


def curvature_apply_batch(double[:, :, :, ::1] S, double[:, ::1] X, double[:, ::1] Y, double[:, ::1] xi):
    cdef Py_ssize_t N = X.shape[0], n = X.shape[1], m = xi.shape[1]
    cdef Py_ssize_t q, a, b, i, j
    cdef double w
    out_arr = np.zeros((N, m))
    cdef double[:, ::1] out = out_arr
    for q in range(N):
        for a in range(n):
            for b in range(n):
                w = X[q, a] * Y[q, b]
                if w == 0.0:
                    continue
                for i in range(m):
                    for j in range(m):
                        out[q, i] += w * S[a, b, i, j] * xi[q, j]
    return out_arr


def sectional_batch(double[:, :, :, ::1] R, double[:, :, :, ::1] S, D, double r, double[::1] a,
                    double[:, ::1] X, double[:, ::1] al, double[:, ::1] Y, double[:, ::1] be):
    cdef Py_ssize_t N = X.shape[0], n = X.shape[1], m = a.shape[0]
    cdef Py_ssize_t q, w, i, j, u, v, b
    cdef double t, x, aa, bb, RXa_i, s1, s2, p, qq, s, uu, dy, dx, coef
    cdef bint have_d = D is not None
    cdef double[:, :, :, :, ::1] Dv
    if have_d:
        Dv = D
    # aS[w, i, v] = sum_u a_u S[w, i, u, v]
    aS_arr = np.einsum("wiuv,u->wiv", np.asarray(S), np.asarray(a))
    cdef double[:, :, ::1] aS = aS_arr
    out_arr = np.empty(N)
    cdef double[::1] out = out_arr
    RXY_arr = np.empty((m, m))
    cdef double[:, ::1] RXY = RXY_arr
    aSX_arr = np.empty((n, m))
    aSY_arr = np.empty((n, m))
    cdef double[:, ::1] aSX = aSX_arr
    cdef double[:, ::1] aSY = aSY_arr
    for q in range(N):
        # base term <R(X,Y)X, Y>
        t = 0.0
        for w in range(n):
            for b in range(n):
                coef = X[q, w] * Y[q, b]
                if coef == 0.0:
                    continue
                for i in range(n):
                    x = 0.0
                    for j in range(n):
                        x += R[w, b, i, j] * X[q, j]
                    t += coef * x * Y[q, i]
        aa = 0.0
        bb = 0.0
        for i in range(m):
            aa += al[q, i] * al[q, i]
            bb += be[q, i] * be[q, i]
        t += aa * bb / (r * r)
        for i in range(m):
            for j in range(m):
                RXY[i, j] = 0.0
        for w in range(n):
            for b in range(n):
                coef = X[q, w] * Y[q, b]
                if coef == 0.0:
                    continue
                for i in range(m):
                    for j in range(m):
                        RXY[i, j] += coef * S[w, b, i, j]
        s1 = 0.0
        for i in range(m):
            RXa_i = 0.0
            x = 0.0
            for j in range(m):
                RXa_i += RXY[i, j] * a[j]
                x += RXY[i, j] * al[q, j]
            t += 3.0 * x * be[q, i] - 0.75 * RXa_i * RXa_i
        for i in range(n):
            for v in range(m):
                x = 0.0
                s = 0.0
                for w in range(n):
                    x += X[q, w] * aS[w, i, v]
                    s += Y[q, w] * aS[w, i, v]
                aSX[i, v] = x
                aSY[i, v] = s
        s1 = 0.0
        s2 = 0.0
        for i in range(n):
            p = 0.0
            qq = 0.0
            s = 0.0
            uu = 0.0
            for v in range(m):
                p += aSX[i, v] * be[q, v]
                qq += aSY[i, v] * al[q, v]
                s += aSX[i, v] * al[q, v]
                uu += aSY[i, v] * be[q, v]
            s1 += (p + qq) * (p + qq)
            s2 += s * uu
        t += 0.25 * s1 - s2
        if have_d:
            dy = 0.0
            dx = 0.0
            for w in range(n):
                for i in range(n):
                    for b in range(n):
                        coef = X[q, i] * Y[q, b]
                        if coef == 0.0:
                            continue
                        for u in range(m):
                            if a[u] == 0.0:
                                continue
                            x = 0.0
                            s = 0.0
                            for v in range(m):
                                x += Dv[w, i, b, u, v] * al[q, v]
                                s += Dv[w, i, b, u, v] * be[q, v]
                            dy += Y[q, w] * coef * a[u] * x
                            dx += X[q, w] * coef * a[u] * s
            t += dy - dx
        out[q] = t
    return out_arr
