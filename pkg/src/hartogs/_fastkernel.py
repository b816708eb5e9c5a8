"""Compiled inner loops: angular sums of the closed-form kernel.

Serial loops with a fixed summation order, so results are bit-reproducible.
"""
import math

import numba
import numpy as np


@numba.njit(cache=True, inline="always")
def _k_closed(k, s, t):
    p = 0j
    qa = 0j
    qb = 0j
    sj = 1.0 + 0j
    for j in range(1, k + 1):
        p += j * (k - j) * sj
        qa += j * j * sj
        qb += (k - j) * (k - j) * sj
        sj *= s
    # sj == s**k here
    u = 1.0 - t
    v = t - sj
    den = k * math.pi**2 * (u * u) * (v * v)
    return (p * t * t + (qa + sj * qb) * t + sj * p) / den


@numba.njit(cache=True)
def kernel_fourier(k, z1, z2, r1, r2, c1, c2, e):
    """``out[c, j] = sum_a K(z, w_ca) * e[a, j]`` with
    ``w_ca = (r1[c] * c1[a], r2[c] * c2[a])`` and ``c1, c2`` unit phases."""
    nc = r1.size
    na, nm = e.shape
    out = np.zeros((nc, nm), dtype=np.complex128)
    cz1 = z1 * np.conj(c1)
    cz2 = z2 * np.conj(c2)
    for c in range(nc):
        for a in range(na):
            kv = _k_closed(k, r1[c] * cz1[a], r2[c] * cz2[a])
            for j in range(nm):
                out[c, j] += kv * e[a, j]
    return out


@numba.njit(cache=True)
def kernel_abs_power(k, z1, z2, r1, r2, c1, c2, wa, apow):
    """``out[c] = sum_a wa[a] * |K(z, w_ca)|^apow``."""
    nc = r1.size
    na = wa.size
    out = np.zeros(nc)
    cz1 = z1 * np.conj(c1)
    cz2 = z2 * np.conj(c2)
    whole = apow == 1.0 or apow == 2.0
    for c in range(nc):
        acc = 0.0
        for a in range(na):
            kv = _k_closed(k, r1[c] * cz1[a], r2[c] * cz2[a])
            if whole:
                m2 = kv.real * kv.real + kv.imag * kv.imag
                acc += wa[a] * (m2 if apow == 2.0 else math.sqrt(m2))
            else:
                acc += wa[a] * math.exp(apow * math.log(abs(kv)))
        out[c] = acc
    return out
