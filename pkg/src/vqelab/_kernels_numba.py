"""Numba statevector kernels (default backend when numba is installed).

Same contract as _kernels_numpy: flat float64 amplitudes, qubit q = bit q of
the basis index, in-place mutation. Loops are serial on purpose, results must
not depend on thread scheduling.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def apply_h(amps, q):
    inv = 1.0 / math.sqrt(2.0)
    bit = 1 << q
    step = bit << 1
    for base in range(0, amps.shape[0], step):
        for k in range(base, base + bit):
            a0 = amps[k]
            a1 = amps[k + bit]
            amps[k] = (a0 + a1) * inv
            amps[k + bit] = (a0 - a1) * inv


@njit(cache=True)
def apply_ry(amps, q, theta):
    c = math.cos(0.5 * theta)
    s = math.sin(0.5 * theta)
    bit = 1 << q
    step = bit << 1
    for base in range(0, amps.shape[0], step):
        for k in range(base, base + bit):
            a0 = amps[k]
            a1 = amps[k + bit]
            amps[k] = c * a0 - s * a1
            amps[k + bit] = s * a0 + c * a1


@njit(cache=True)
def apply_cnot(amps, control, target):
    cbit = 1 << control
    tbit = 1 << target
    for k in range(amps.shape[0]):
        if (k & cbit) != 0 and (k & tbit) == 0:
            tmp = amps[k]
            amps[k] = amps[k | tbit]
            amps[k | tbit] = tmp


@njit(cache=True)
def apply_cz(amps, qa, qb):
    abit = 1 << qa
    bbit = 1 << qb
    for k in range(amps.shape[0]):
        if (k & abit) != 0 and (k & bbit) != 0:
            amps[k] = -amps[k]


@njit(cache=True)
def apply_yz_factor(amps, yq, zq, theta):
    c = math.cos(0.5 * theta)
    s = math.sin(0.5 * theta)
    ybit = 1 << yq
    zbit = 1 << zq
    step = ybit << 1
    for base in range(0, amps.shape[0], step):
        for k in range(base, base + ybit):
            sign = -s if (k & zbit) != 0 else s
            a0 = amps[k]
            a1 = amps[k + ybit]
            amps[k] = c * a0 - sign * a1
            amps[k + ybit] = sign * a0 + c * a1


@njit(cache=True)
def scale_ite_zz(amps, qa, qb, tau_tilde):
    em = math.exp(-tau_tilde)
    ep = math.exp(tau_tilde)
    abit = 1 << qa
    bbit = 1 << qb
    for k in range(amps.shape[0]):
        if ((k & abit) != 0) == ((k & bbit) != 0):
            amps[k] *= em
        else:
            amps[k] *= ep


@njit(cache=True)
def expect_z(amps, q):
    bit = 1 << q
    acc = 0.0
    for k in range(amps.shape[0]):
        p = amps[k] * amps[k]
        acc = acc - p if (k & bit) != 0 else acc + p
    return acc


@njit(cache=True)
def expect_x(amps, q):
    bit = 1 << q
    acc = 0.0
    step = bit << 1
    for base in range(0, amps.shape[0], step):
        for k in range(base, base + bit):
            acc += amps[k] * amps[k + bit]
    return 2.0 * acc


@njit(cache=True)
def expect_zz(amps, qa, qb):
    abit = 1 << qa
    bbit = 1 << qb
    acc = 0.0
    for k in range(amps.shape[0]):
        p = amps[k] * amps[k]
        if ((k & abit) != 0) == ((k & bbit) != 0):
            acc += p
        else:
            acc -= p
    return acc


@njit(cache=True)
def expect_xx(amps, qa, qb):
    abit = 1 << qa
    bbit = 1 << qb
    mask = abit | bbit
    acc = 0.0
    for k in range(amps.shape[0]):
        if (k & abit) == 0 and (k & bbit) == 0:
            acc += amps[k] * amps[k | mask]
        elif (k & abit) == 0 and (k & bbit) != 0:
            acc += amps[k] * amps[(k | abit) & ~bbit]
    return 2.0 * acc


@njit(cache=True)
def expect_yy(amps, qa, qb):
    abit = 1 << qa
    bbit = 1 << qb
    mask = abit | bbit
    acc = 0.0
    for k in range(amps.shape[0]):
        if (k & abit) == 0 and (k & bbit) == 0:
            acc -= amps[k] * amps[k | mask]
        elif (k & abit) == 0 and (k & bbit) != 0:
            acc += amps[k] * amps[(k | abit) & ~bbit]
    return 2.0 * acc


@njit(cache=True)
def expect_xz(amps, xq, zq):
    xbit = 1 << xq
    zbit = 1 << zq
    acc = 0.0
    for k in range(amps.shape[0]):
        if (k & xbit) == 0:
            term = amps[k] * amps[k | xbit]
            acc = acc - term if (k & zbit) != 0 else acc + term
    return 2.0 * acc


@njit(cache=True)
def energy_table(h, jmat, out):
    """Gray-code walk: each step flips one bit and applies the exact energy delta.

    Deltas are sums/differences of the raw coefficients, so integer-valued
    (scaled) inputs give bitwise exact tables. out must have length 2**n.
    """
    n = h.shape[0]
    z = np.ones(n, dtype=np.float64)
    e = 0.0
    for i in range(n):
        e += h[i]
        for j in range(i + 1, n):
            e += jmat[i, j]
    out[0] = e
    g = 0
    for t in range(1, out.shape[0]):
        b = 0
        while ((t >> b) & 1) == 0:
            b += 1
        s = h[b]
        for j in range(n):
            s += jmat[b, j] * z[j]
        e -= 2.0 * z[b] * s
        z[b] = -z[b]
        g ^= 1 << b
        out[g] = e
