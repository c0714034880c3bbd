"""Cyclic Jacobi diagonalisation of dense complex Hermitian matrices.

Two implementations of the same rotation live here:

* ``jacobi_numba`` is the row-cyclic scalar-loop form compiled with ``numba.njit``;
* ``jacobi_numpy`` uses the parallel (round-robin) cyclic ordering so that a
  whole round of disjoint rotations is a single matrix product.

The pivot orderings differ, so results agree to rounding, not bit for bit.

Both take a Hermitian ``complex128`` matrix and return
``(eigenvalues, eigenvectors, sweeps, converged)`` with eigenvalues in the
order they appear on the diagonal (unsorted). Sorting and phase fixing are done
by the caller so both kernels share them.

For the pivot ``a[p, q] = |a_pq| e^{i alpha}`` the rotation is

    J[p, p] = c,  J[p, q] = s e^{i alpha},
    J[q, p] = -s e^{-i alpha},  J[q, q] = c,

which reduces the 2x2 block to the real symmetric case, and ``A <- J^H A J``.
"""
import math
from functools import lru_cache

import numpy as np

from ._accel import HAS_NUMBA

# Pivots smaller than this relative to the matrix norm are skipped.
_TINY = 1e-300


@lru_cache(maxsize=64)
def _round_robin(n):
    """Pivot rounds of the parallel cyclic ordering.

    ``n - 1`` rounds (``n`` padded to even) of disjoint ``(p, q)`` pairs that
    together cover every pair once. Each round is returned as flat indices
    ``(pq, qp, pp, qq)`` into a raveled ``n x n`` matrix, plus those four
    concatenated in the order the rotation entries are scattered.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = sorted((min(p, q), max(p, q)) for p, q in pairs if p < n and q < n)
        p = np.array([x for x, _ in pairs])
        q = np.array([y for _, y in pairs])
        pq, qp, pp, qq = p * n + q, q * n + p, p * (n + 1), q * (n + 1)
        rounds.append((pq, qp, pp, qq, np.concatenate((pp, qq, pq, qp))))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _jacobi_2x2(a, tol):
    # One rotation diagonalises a 2x2 block exactly; plain scalar math.
    a00, a11, a01 = a[0, 0].real, a[1, 1].real, complex(a[0, 1])
    mag = abs(a01)
    scale = math.sqrt(a00 * a00 + a11 * a11 + 2.0 * mag * mag)
    v = np.eye(2, dtype=np.complex128)
    if mag <= tol * scale or mag <= _TINY * scale:
        return np.array([a00, a11]), v, 0, True
    theta = (a11 - a00) / (2.0 * mag)
    t = 1.0 / (abs(theta) + math.hypot(theta, 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / math.sqrt(t * t + 1.0)
    sph = t * c * (a01 / mag)
    v[0, 1] = sph
    v[1, 0] = -sph.conjugate()
    v[0, 0] = v[1, 1] = c
    return np.array([a00 - t * mag, a11 + t * mag]), v, 1, True


def jacobi_numpy(a, want_vectors=True, tol=1e-13, max_sweeps=100):
    """Parallel-ordering variant: each round applies its disjoint rotations as
    one ``J^H A J`` product instead of per-pivot row/column updates."""
    a = np.array(a, dtype=np.complex128, copy=True)
    n = a.shape[0]
    if n == 2:
        return _jacobi_2x2(a, tol)
    v = np.eye(n, dtype=np.complex128)
    scale = float(np.sqrt(np.sum(a.real**2 + a.imag**2)))
    if scale == 0.0 or n == 1:
        return a.diagonal().real.copy(), v, 0, True
    thresh = tol * scale
    rounds = _round_robin(n)
    eye = np.eye(n, dtype=np.complex128)
    diag_idx = np.arange(n) * (n + 1)
    for sweep in range(max_sweeps + 1):
        off = a.ravel().copy()
        off[diag_idx] = 0.0
        if math.sqrt(float(np.vdot(off, off).real)) <= thresh:
            return a.diagonal().real.copy(), v, sweep, True
        if sweep == max_sweeps:
            break
        for pq, qp, pp, qq, scatter in rounds:
            flat = a.ravel()
            apq = flat[pq]
            mag = np.abs(apq)
            if mag.min() <= _TINY * scale:
                live = mag > _TINY * scale
                if not live.any():
                    continue
                pq, qp, pp, qq = pq[live], qp[live], pp[live], qq[live]
                scatter = np.concatenate((pp, qq, pq, qp))
                apq, mag = apq[live], mag[live]
            theta = (flat[qq].real - flat[pp].real) / (2.0 * mag)
            t = np.copysign(1.0 / (np.abs(theta) + np.hypot(theta, 1.0)), theta)
            c = 1.0 / np.sqrt(t * t + 1.0)
            sph = (t * c / mag) * apq
            j = eye.copy()
            j.ravel()[scatter] = np.concatenate((c, c, sph, -sph.conj()))
            a = j.conj().T @ a @ j
            flat = a.ravel()
            flat[pq] = 0.0
            flat[qp] = 0.0
            flat[diag_idx] = flat[diag_idx].real
            if want_vectors:
                v = v @ j
    return a.diagonal().real.copy(), v, max_sweeps, False


def _jacobi_loops(a_in, want_vectors, tol, max_sweeps):
    a = a_in.copy()
    n = a.shape[0]
    v = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        v[i, i] = 1.0
    w = np.zeros(n)

    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j].real ** 2 + a[i, j].imag ** 2
    scale = math.sqrt(scale)
    if scale == 0.0:
        return w, v, 0, True
    thresh = tol * scale

    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if math.sqrt(off) <= thresh:
            for i in range(n):
                w[i] = a[i, i].real
            return w, v, sweep, True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= _TINY * scale:
                    continue
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = 1.0 / (abs(theta) + math.hypot(theta, 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ph = apq / mag
                sph = s * ph
                sphc = s * ph.conjugate()
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - sphc * akq
                    a[k, q] = sph * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - sph * aqk
                    a[q, k] = sphc * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if want_vectors:
                    for k in range(n):
                        vkp = v[k, p]
                        vkq = v[k, q]
                        v[k, p] = c * vkp - sphc * vkq
                        v[k, q] = sph * vkp + c * vkq
    for i in range(n):
        w[i] = a[i, i].real
    return w, v, max_sweeps, False


if HAS_NUMBA:
    from numba import njit

    _jacobi_compiled = njit(cache=True)(_jacobi_loops)

    def jacobi_numba(a, want_vectors=True, tol=1e-13, max_sweeps=100):
        a = np.ascontiguousarray(a, dtype=np.complex128)
        return _jacobi_compiled(a, want_vectors, tol, max_sweeps)

else:  # pragma: no cover
    jacobi_numba = None
