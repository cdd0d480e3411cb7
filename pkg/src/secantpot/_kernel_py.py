"""Vectorized numpy implementation of the per-pixel orbit kernel.

Result codes in ``basin``: ``k >= 0`` converged to root ``k``, ``-1`` no
convergence within the budget (or escape), ``-2`` indeterminate step.
``logh`` holds log of the potential. With ``m`` the first orbit index whose
distance to the root is at most ``near[k]``, it is ``phi^-m log h(S^m p)``,
where ``log h(q) = (1/phi) log Hhat(q) + (1/sqrt5) log|x - z0|
+ (1/(phi sqrt5)) log|y - z0|`` and ``log Hhat`` is the series
``(1/sqrt5) sum_j phi^-j log|G(S^j q)|`` along the stored orbit, closed with
its geometric tail once the orbit has converged. Starting the sum at ``m``
avoids cancellation when h is close to 1.
"""

import math

import numpy as np

from .polyform import bivariate_eval, poly_eval

PHI = (1.0 + math.sqrt(5.0)) / 2.0
INV_SQRT5 = 1.0 / math.sqrt(5.0)
POLE_TOL = 1e-300


def compute_chunk(x0, y0, step_num, step_den, den, zr, g_num, g_den, g0, series_ok, near,
                  budget, conv_tol, escape):
    n = x0.shape[0]
    basin = np.full(n, -1, dtype=np.int32)
    steps = np.zeros(n, dtype=np.int32)
    logh = np.full(n, np.nan)
    hist_x = np.zeros((budget + 1, n), dtype=complex)
    hist_y = np.zeros((budget + 1, n), dtype=complex)
    tols = conv_tol * np.maximum(1.0, np.abs(zr))
    idx = np.arange(n)
    x = x0.astype(complex).copy()
    y = y0.astype(complex).copy()
    polynomial = den.shape[0] == 1

    with np.errstate(all="ignore"):
        for it in range(budget + 1):
            hist_x[it, idx] = x
            hist_y[it, idx] = y
            live = np.ones(idx.shape[0], dtype=bool)
            for k in range(zr.shape[0]):
                hit = live & (np.abs(x - zr[k]) <= tols[k]) & (np.abs(y - zr[k]) <= tols[k])
                basin[idx[hit]] = k
                steps[idx[hit]] = it
                live &= ~hit
            if it == budget:
                steps[idx[live]] = budget
                break
            ok = (np.abs(x) <= escape) & (np.abs(y) <= escape)
            steps[idx[live & ~ok]] = it
            live &= ok
            if not polynomial:
                pole = (np.abs(poly_eval(den, x)) <= POLE_TOL) | (np.abs(poly_eval(den, y)) <= POLE_TOL)
                bad = live & pole
                basin[idx[bad]] = -2
                steps[idx[bad]] = it
                live &= ~pole
            q = bivariate_eval(step_den, x, y)
            bad = live & ~(np.abs(q) > POLE_TOL)
            basin[idx[bad]] = -2
            steps[idx[bad]] = it
            live &= ~bad
            idx, x, y, q = idx[live], x[live], y[live], q[live]
            if idx.shape[0] == 0:
                break
            x, y = bivariate_eval(step_num, x, y) / q, x

        for k in range(zr.shape[0]):
            if not series_ok[k]:
                continue
            sel = np.nonzero(basin == k)[0]
            if sel.shape[0] == 0:
                continue
            K = steps[sel]
            # first orbit index inside the small neighbourhood of the root
            dev = np.maximum(np.abs(hist_x[:, sel] - zr[k]), np.abs(hist_y[:, sel] - zr[k]))
            rows = np.arange(budget + 1)[:, None]
            inside = (dev <= near[k]) & (rows <= K[None, :])
            m = np.where(inside.any(axis=0), inside.argmax(axis=0), K)
            total = np.zeros(sel.shape[0])
            weight = np.ones(sel.shape[0])
            for j in range(int(K.max())):
                act = (j >= m) & (j < K)
                if not act.any():
                    continue
                u = hist_x[j, sel[act]] - zr[k]
                v = hist_y[j, sel[act]] - zr[k]
                g = np.abs(bivariate_eval(g_num[k], u, v)) / np.abs(bivariate_eval(g_den[k], u, v))
                total[act] += weight[act] * np.log(g)
                weight[act] /= PHI
            total += math.log(abs(g0[k])) * weight * PHI * PHI
            um = np.abs(hist_x[m, sel] - zr[k])
            vm = np.abs(hist_y[m, sel] - zr[k])
            at_m = INV_SQRT5 * (total / PHI + np.log(um) + np.log(vm) / PHI)
            out = PHI ** (-m.astype(float)) * at_m
            on_axes = (hist_x[0, sel] == zr[k]) | (hist_y[0, sel] == zr[k])
            logh[sel] = np.where(on_axes, -np.inf, out)
    return basin, steps, logh
