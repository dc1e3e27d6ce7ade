"""Pure-numpy reference implementation of the hot kernels.

The compiled extension (`native`) mirrors these routines expression for
expression; the two backends must agree on every label and to a few ULP on
every float. Keep arithmetic here in the same order as the Cython source.
"""

from __future__ import annotations

import math

import numpy as np

TWO_PI = 2.0 * math.pi

NAME = "python"


def planar_region_codes(a, v, azimuths, arc_basic_codes, arc_comp_codes, neutral_rho):
    """Angular-partition labels for in-plane points.

    Arc k spans [azimuths[k], azimuths[k+1]) (the last arc wraps). Arcs with
    a compound split quarter/half/quarter; arcs without split at the
    bisector. Points with norm below neutral_rho get code 0.
    """
    a = np.asarray(a, dtype=float)
    v = np.asarray(v, dtype=float)
    r = np.sqrt(a * a + v * v)
    phi = np.arctan2(v, a)
    phi = np.where(phi < 0.0, phi + TWO_PI, phi)

    lo_all = azimuths
    hi_all = np.concatenate([azimuths[1:], [azimuths[0] + TWO_PI]])
    k = np.searchsorted(azimuths, phi, side="right") - 1
    wrap = k < 0
    k = np.where(wrap, azimuths.shape[0] - 1, k)
    phi = np.where(wrap, phi + TWO_PI, phi)

    lo = lo_all[k]
    hi = hi_all[k]
    delta = hi - lo
    next_basic = arc_basic_codes[(k + 1) % azimuths.shape[0]]
    this_basic = arc_basic_codes[k]
    comp = arc_comp_codes[k]

    b1 = lo + 0.25 * delta
    b2 = hi - 0.25 * delta
    mid = lo + 0.5 * delta
    with_comp = np.where(phi < b1, this_basic, np.where(phi <= b2, comp, next_basic))
    without_comp = np.where(phi < mid, this_basic, next_basic)
    codes = np.where(comp >= 0, with_comp, without_comp)
    return np.where(r < neutral_rho, 0, codes).astype(np.int64)


def argmax_codes(a, v, z, dirs, dir_codes, neutral_rho):
    """Nearest-direction labels: argmax of the dot product against unit
    candidate directions (equivalent to cosine similarity), first-wins ties.
    Points with norm below neutral_rho get code 0."""
    a = np.asarray(a, dtype=float)
    v = np.asarray(v, dtype=float)
    z = np.asarray(z, dtype=float)
    r = np.sqrt(a * a + v * v + z * z)
    scores = a[:, None] * dirs[:, 0] + v[:, None] * dirs[:, 1] + z[:, None] * dirs[:, 2]
    best = np.argmax(scores, axis=1)
    return np.where(r < neutral_rho, 0, dir_codes[best]).astype(np.int64)


def region_codes(a, v, z, azimuths, arc_basic_codes, arc_comp_codes, dirs, dir_codes, neutral_rho):
    """Full 3D region labels: neutral below threshold, the planar angular
    partition for z == 0 rows, nearest candidate direction otherwise."""
    a = np.asarray(a, dtype=float)
    v = np.asarray(v, dtype=float)
    z = np.asarray(z, dtype=float)
    r = np.sqrt(a * a + v * v + z * z)
    planar = planar_region_codes(a, v, azimuths, arc_basic_codes, arc_comp_codes, neutral_rho)
    lifted = argmax_codes(a, v, z, dirs, dir_codes, neutral_rho)
    codes = np.where(z == 0.0, planar, lifted)
    return np.where(r < neutral_rho, 0, codes).astype(np.int64)


def sym_kl(pred, target):
    """Per-row symmetric Bernoulli KL over activation vectors, with the
    analytic gradient w.r.t. pred.

    value_row = sum_j (p - q) * (logit(p) - logit(q))
    dvalue/dp = (logit(p) - logit(q)) + (p - q) / (p * (1 - p))
    """
    p = np.asarray(pred, dtype=float)
    q = np.asarray(target, dtype=float)
    logit_p = np.log(p) - np.log(1.0 - p)
    logit_q = np.log(q) - np.log(1.0 - q)
    diff_logit = logit_p - logit_q
    diff = p - q
    values = np.sum(diff * diff_logit, axis=1)
    grads = diff_logit + diff / (p * (1.0 - p))
    return values, grads
