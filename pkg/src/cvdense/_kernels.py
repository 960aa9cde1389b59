"""Hot numeric kernels with numba and pure-numpy twins.

The random-pure-state scatter study evaluates tens of thousands of 4x4
covariance constructions, determinants and entropies; these are the only
loops in the package where interpreter overhead matters.  Both backends
implement identical arithmetic so results agree to float rounding.

Matrices here use xx|pp block ordering internally; mode blocks are read out
through fixed index maps, so no explicit permutation is materialized.
"""
from __future__ import annotations

import numpy as np

from . import _backend

_LOG2 = np.log(2.0)


def _entropy_terms_np(nu):
    """Elementwise s(nu) in bits; values at or below 1 contribute zero."""
    nu = np.asarray(nu, dtype=float)
    out = np.zeros_like(nu)
    above = nu > 1.0
    xp = (nu[above] + 1.0) / 2.0
    xm = (nu[above] - 1.0) / 2.0
    out[above] = xp * np.log2(xp) - xm * np.log2(xm)
    return out


def _orthogonal_symplectic_batch(quats):
    """(n,4) unit quaternions -> (n,4,4) orthogonal symplectics in xx|pp ordering."""
    q0, q1, q2, q3 = quats[:, 0], quats[:, 1], quats[:, 2], quats[:, 3]
    n = quats.shape[0]
    o = np.empty((n, 4, 4))
    o[:, 0, 0], o[:, 0, 1], o[:, 0, 2], o[:, 0, 3] = q0, -q2, q1, q3
    o[:, 1, 0], o[:, 1, 1], o[:, 1, 2], o[:, 1, 3] = q2, q0, q3, -q1
    o[:, 2, 0], o[:, 2, 1], o[:, 2, 2], o[:, 2, 3] = -q1, -q3, q0, -q2
    o[:, 3, 0], o[:, 3, 1], o[:, 3, 2], o[:, 3, 3] = -q3, q1, q2, q0
    return o


def scatter_pairs_numpy(quats, nbar, sigma):
    """Vectorized (sender_photons, entanglement_bits, holevo_bits) for a quaternion batch."""
    quats = np.asarray(quats, dtype=float)
    half = nbar / 2.0
    gamma = np.array([half, half, 1.0 / half, 1.0 / half])
    o = _orthogonal_symplectic_batch(quats)
    xi = np.einsum("nij,j,nkj->nik", o, gamma, o)

    # sender-mode (x_A, p_A) entries sit at xx|pp indices (0, 2)
    det_a = xi[:, 0, 0] * xi[:, 2, 2] - xi[:, 0, 2] ** 2
    nu_a = np.sqrt(np.maximum(det_a, 1.0))
    ent = _entropy_terms_np(nu_a)
    photons = (0.5 * (xi[:, 0, 0] + xi[:, 2, 2]) - 1.0) / 2.0

    infl = xi.copy()
    infl[:, 0, 0] += 4.0 * sigma * sigma
    infl[:, 2, 2] += 4.0 * sigma * sigma
    det_ai = infl[:, 0, 0] * infl[:, 2, 2] - infl[:, 0, 2] ** 2
    det_b = infl[:, 1, 1] * infl[:, 3, 3] - infl[:, 1, 3] ** 2
    det_c = infl[:, 0, 1] * infl[:, 2, 3] - infl[:, 0, 3] * infl[:, 2, 1]
    delta = det_ai + det_b + 2.0 * det_c
    det_full = np.linalg.det(infl)
    root = np.sqrt(np.maximum(delta * delta - 4.0 * det_full, 0.0))
    nu1 = np.sqrt(np.maximum((delta + root) / 2.0, 1.0))
    nu2 = np.sqrt(np.maximum((delta - root) / 2.0, 1.0))
    hol = _entropy_terms_np(nu1) + _entropy_terms_np(nu2)
    return photons, ent, hol


if _backend._HAVE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _entropy_term_jit(nu):
        if nu <= 1.0:
            return 0.0
        xp = (nu + 1.0) / 2.0
        xm = (nu - 1.0) / 2.0
        return (xp * np.log(xp) - xm * np.log(xm)) / _LOG2

    @njit(cache=True)
    def _scatter_pairs_jit(quats, nbar, sigma):
        n = quats.shape[0]
        photons = np.empty(n)
        ent = np.empty(n)
        hol = np.empty(n)
        half = nbar / 2.0
        gamma = np.empty(4)
        gamma[0] = half
        gamma[1] = half
        gamma[2] = 1.0 / half
        gamma[3] = 1.0 / half
        infl = 4.0 * sigma * sigma
        o = np.empty((4, 4))
        xi = np.empty((4, 4))
        for k in range(n):
            q0, q1, q2, q3 = quats[k, 0], quats[k, 1], quats[k, 2], quats[k, 3]
            o[0, 0] = q0; o[0, 1] = -q2; o[0, 2] = q1; o[0, 3] = q3
            o[1, 0] = q2; o[1, 1] = q0; o[1, 2] = q3; o[1, 3] = -q1
            o[2, 0] = -q1; o[2, 1] = -q3; o[2, 2] = q0; o[2, 3] = -q2
            o[3, 0] = -q3; o[3, 1] = q1; o[3, 2] = q2; o[3, 3] = q0
            for i in range(4):
                for j in range(i + 1):
                    acc = 0.0
                    for m in range(4):
                        acc += o[i, m] * gamma[m] * o[j, m]
                    xi[i, j] = acc
                    xi[j, i] = acc

            det_a = xi[0, 0] * xi[2, 2] - xi[0, 2] ** 2
            nu_a = np.sqrt(max(det_a, 1.0))
            ent[k] = _entropy_term_jit(nu_a)
            photons[k] = (0.5 * (xi[0, 0] + xi[2, 2]) - 1.0) / 2.0

            a00 = xi[0, 0] + infl
            a22 = xi[2, 2] + infl
            det_ai = a00 * a22 - xi[0, 2] ** 2
            det_b = xi[1, 1] * xi[3, 3] - xi[1, 3] ** 2
            det_c = xi[0, 1] * xi[2, 3] - xi[0, 3] * xi[2, 1]
            delta = det_ai + det_b + 2.0 * det_c
            m = xi.copy()
            m[0, 0] = a00
            m[2, 2] = a22
            det_full = np.linalg.det(m)
            root = np.sqrt(max(delta * delta - 4.0 * det_full, 0.0))
            nu1 = np.sqrt(max((delta + root) / 2.0, 1.0))
            nu2 = np.sqrt(max((delta - root) / 2.0, 1.0))
            hol[k] = _entropy_term_jit(nu1) + _entropy_term_jit(nu2)
        return photons, ent, hol

    def scatter_pairs_numba(quats, nbar, sigma):
        quats = np.ascontiguousarray(quats, dtype=np.float64)
        return _scatter_pairs_jit(quats, float(nbar), float(sigma))
else:  # pragma: no cover - exercised only without numba installed
    def scatter_pairs_numba(quats, nbar, sigma):
        raise ImportError("numba backend requested but numba is not installed")


def scatter_pairs(quats, nbar, sigma):
    """Dispatch the scatter kernel to the active backend."""
    if _backend.get_backend() == "numba":
        return scatter_pairs_numba(quats, nbar, sigma)
    return scatter_pairs_numpy(quats, nbar, sigma)
