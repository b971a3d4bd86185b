"""Compiled inner loops for long runs.

Each kernel computes the same update as the array code in fluctuation.py /
flux.py, one interface at a time, and reports the largest relative
violation of D- + D+ = A~ dU - dV it met (the flux kernel also reports the
Roe residual |dF - M~ dU_bar|). The tests check both paths agree.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

ZERO_TOL = 1e-12


@njit(cache=True)
def fluctuation_increment(Ue, A_tilde, Mm, Mp, Nm, Np, s0, G, dx, dt, balanced, out):
    """out <- -dt/dx (D-_{i+1/2} + D+_{i-1/2}); returns the identity residual.

    ``Ue`` holds the cells with one ghost row on each side.
    """
    N = Ue.shape[0] - 2
    n = Ue.shape[1]
    out[:, :] = 0.0
    dU = np.empty(n)
    dV = np.empty(n)
    SL = np.empty(n)
    SR = np.empty(n)
    worst = 0.0
    c = dt / dx
    for j in range(N + 1):
        for a in range(n):
            dU[a] = Ue[j + 1, a] - Ue[j, a]
        if balanced:
            for a in range(n):
                sl = s0[j, a]
                sr = s0[j + 1, a]
                for b in range(n):
                    sl += G[j, a, b] * Ue[j, b]
                    sr += G[j + 1, a, b] * Ue[j + 1, b]
                SL[a] = sl
                SR[a] = sr
            for a in range(n):
                dV[a] = 0.5 * (SL[a] + SR[a]) * dx
        else:
            for a in range(n):
                dV[a] = 0.0
        res = 0.0
        scale = 1.0
        for a in range(n):
            dm = 0.0
            dp = 0.0
            adu = 0.0
            for b in range(n):
                dm += Mm[j, a, b] * dU[b]
                dp += Mp[j, a, b] * dU[b]
                adu += A_tilde[j, a, b] * dU[b]
            if balanced:
                for b in range(n):
                    dm -= Nm[j, a, b] * dV[b]
                    dp -= Np[j, a, b] * dV[b]
            if j >= 1:
                out[j - 1, a] -= c * dm
            if j <= N - 1:
                out[j, a] -= c * dp
            res = max(res, abs(dm + dp - (adu - dV[a])))
            scale = max(scale, abs(adu), abs(dV[a]))
        worst = max(worst, res / scale)
    return worst


@njit(cache=True)
def heat_flux_increment(Ue, r, eps, s0, G, dx, dt, out):
    """Flux-form update of [u, q, k] with the closed-form eigenvectors.

    ``Ue`` holds [u, q, k] rows with one ghost row on each side.
    Returns (identity residual, Roe residual).
    """
    N = Ue.shape[0] - 2
    out[:, :] = 0.0
    P = np.zeros((3, 3))
    Pinv = np.zeros((3, 3))
    lam = np.zeros(3)
    dUb = np.zeros(3)
    rhs = np.zeros(3)
    Fm = np.zeros(3)
    Fp = np.zeros(3)
    worst = 0.0
    worst_roe = 0.0
    c = dt / dx
    for j in range(N + 1):
        uL = Ue[j, 0]
        qL = Ue[j, 1]
        kl = Ue[j, 2]
        uR = Ue[j + 1, 0]
        qR = Ue[j + 1, 1]
        kr = Ue[j + 1, 2]
        kb = 0.5 * (kl + kr)
        ub = 0.5 * (uL + uR)
        # source of each cell and its interface integral
        SL0 = s0[j, 0] + G[j, 0, 0] * uL + G[j, 0, 1] * qL
        SL1 = s0[j, 1] + G[j, 1, 0] * uL + G[j, 1, 1] * qL
        SR0 = s0[j + 1, 0] + G[j + 1, 0, 0] * uR + G[j + 1, 0, 1] * qR
        SR1 = s0[j + 1, 1] + G[j + 1, 1, 0] * uR + G[j + 1, 1, 1] * qR
        dV0 = 0.5 * (SL0 + SR0) * dx
        dV1 = 0.5 * (SL1 + SR1) * dx
        dUb[0] = uR - uL
        dUb[1] = qR - qL
        dUb[2] = kr - kl
        # K~ dU_bar + dV_bar
        rhs[0] = dV0
        rhs[1] = ub / eps * dUb[2] + dV1
        rhs[2] = 0.0
        s = math.sqrt(eps * r / kb)
        w = math.sqrt(kb / (eps * r))
        cs = math.sqrt(kb * r / eps)
        v = ub / math.sqrt(eps * kb * r)
        lam[0] = -cs
        lam[1] = 0.0
        lam[2] = cs
        P[0, 0] = -s
        P[0, 1] = -ub / kb
        P[0, 2] = s
        P[1, 0] = 1.0
        P[1, 2] = 1.0
        P[2, 1] = 1.0
        Pinv[0, 0] = -0.5 * w
        Pinv[0, 1] = 0.5
        Pinv[0, 2] = -0.5 * v
        Pinv[1, 2] = 1.0
        Pinv[2, 0] = 0.5 * w
        Pinv[2, 1] = 0.5
        Pinv[2, 2] = 0.5 * v
        lmax = max(1.0, cs)
        FL0 = r * qL
        FL1 = kl / eps * uL
        FR0 = r * qR
        FR1 = kr / eps * uR
        Dm0 = 0.0
        Dm1 = 0.0
        Dm2 = 0.0
        Dp0 = 0.0
        Dp1 = 0.0
        Dp2 = 0.0
        for m in range(3):
            alpha = Pinv[m, 0] * dUb[0] + Pinv[m, 1] * dUb[1] + Pinv[m, 2] * dUb[2]
            beta = Pinv[m, 0] * rhs[0] + Pinv[m, 1] * rhs[1] + Pinv[m, 2] * rhs[2]
            if abs(lam[m]) <= ZERO_TOL * lmax:
                coef = -beta
                wm = 0.5
                wp = 0.5
            else:
                coef = lam[m] * alpha - beta
                wm = 1.0 if lam[m] < 0 else 0.0
                wp = 1.0 - wm
            Dm0 += P[0, m] * (wm * coef)
            Dm1 += P[1, m] * (wm * coef)
            Dm2 += P[2, m] * (wm * coef)
            Dp0 += P[0, m] * (wp * coef)
            Dp1 += P[1, m] * (wp * coef)
            Dp2 += P[2, m] * (wp * coef)
        Fm[0] = FL0 + Dm0
        Fm[1] = FL1 + Dm1
        Fm[2] = 0.0 + Dm2
        Fp[0] = FR0 - Dp0
        Fp[1] = FR1 - Dp1
        Fp[2] = 0.0 - Dp2
        if j >= 1:
            for a in range(3):
                out[j - 1, a] -= c * Fm[a]
        if j <= N - 1:
            for a in range(3):
                out[j, a] += c * Fp[a]
        # diagnostics
        t0 = r * dUb[1] - dV0
        t1 = kb / eps * dUb[0] - dV1
        scale = max(1.0, abs(t0 + dV0), abs(t1 + dV1), abs(dV0), abs(dV1))
        res = max(abs(Dm0 + Dp0 - t0), abs(Dm1 + Dp1 - t1))
        worst = max(worst, res / scale)
        fscale = max(1.0, abs(FL0), abs(FL1), abs(FR0), abs(FR1))
        roe0 = (FR0 - FL0) - r * dUb[1]
        roe1 = (FR1 - FL1) - (kb / eps * dUb[0] + ub / eps * dUb[2])
        worst_roe = max(worst_roe, max(abs(roe0), abs(roe1)) / fscale)
    return worst, worst_roe
