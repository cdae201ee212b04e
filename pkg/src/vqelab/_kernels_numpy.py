"""Pure-numpy statevector kernels (fallback backend).

All kernels take a flat float64 amplitude vector of length 2**n, with qubit q
living in bit q of the basis index (qubit 0 = least significant bit), and
mutate it in place. Slicing is done through reshaped views, so no kernel here
allocates more than O(2**n / 2) scratch.

Reduction order is numpy's pairwise summation, which is deterministic for a
fixed array size, so repeated calls give bitwise identical results.
"""

import numpy as np

_SQRT_HALF = 1.0 / np.sqrt(2.0)


def _halves(amps, q):
    # view with axis 1 equal to bit q
    return amps.reshape(-1, 2, 1 << q)


def _quadrant(amps, qa, qb, abit, bbit):
    """View of the amplitudes with bit(qa) == abit and bit(qb) == bbit."""
    hi, lo = (qa, qb) if qa > qb else (qb, qa)
    v = amps.reshape(-1, 2, 1 << (hi - lo - 1), 2, 1 << lo)
    if qa == hi:
        return v[:, abit, :, bbit, :]
    return v[:, bbit, :, abit, :]


def apply_h(amps, q):
    v = _halves(amps, q)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = (a0 + a1) * _SQRT_HALF
    v[:, 1, :] = (a0 - a1) * _SQRT_HALF


def apply_ry(amps, q, theta):
    c = np.cos(0.5 * theta)
    s = np.sin(0.5 * theta)
    v = _halves(amps, q)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = c * a0 - s * a1
    v[:, 1, :] = s * a0 + c * a1


def apply_cnot(amps, control, target):
    on0 = _quadrant(amps, control, target, 1, 0)
    on1 = _quadrant(amps, control, target, 1, 1)
    tmp = on0.copy()
    on0[...] = on1
    on1[...] = tmp


def apply_cz(amps, qa, qb):
    both = _quadrant(amps, qa, qb, 1, 1)
    both *= -1.0


def apply_yz_factor(amps, yq, zq, theta):
    """exp(-i * theta * sigma_y[yq] sigma_z[zq] / 2), real orthogonal on real amps."""
    c = np.cos(0.5 * theta)
    s = np.sin(0.5 * theta)
    for zbit, sign in ((0, 1.0), (1, -1.0)):
        a0 = _quadrant(amps, yq, zq, 0, zbit)
        a1 = _quadrant(amps, yq, zq, 1, zbit)
        t0 = a0.copy()
        a0[...] = c * t0 - sign * s * a1
        a1[...] = sign * s * t0 + c * a1


def scale_ite_zz(amps, qa, qb, tau_tilde):
    """Multiply by exp(-tau_tilde * z_a * z_b). Leaves the norm alone."""
    em = np.exp(-tau_tilde)
    ep = np.exp(tau_tilde)
    for abit, bbit in ((0, 0), (0, 1), (1, 0), (1, 1)):
        block = _quadrant(amps, qa, qb, abit, bbit)
        block *= em if abit == bbit else ep


def expect_z(amps, q):
    v = _halves(amps, q)
    return float(np.sum(v[:, 0, :] ** 2) - np.sum(v[:, 1, :] ** 2))


def expect_x(amps, q):
    v = _halves(amps, q)
    return float(2.0 * np.sum(v[:, 0, :] * v[:, 1, :]))


def expect_zz(amps, qa, qb):
    same = np.sum(_quadrant(amps, qa, qb, 0, 0) ** 2) + np.sum(_quadrant(amps, qa, qb, 1, 1) ** 2)
    diff = np.sum(_quadrant(amps, qa, qb, 0, 1) ** 2) + np.sum(_quadrant(amps, qa, qb, 1, 0) ** 2)
    return float(same - diff)


def expect_xx(amps, qa, qb):
    s = np.sum(_quadrant(amps, qa, qb, 0, 0) * _quadrant(amps, qa, qb, 1, 1))
    s += np.sum(_quadrant(amps, qa, qb, 0, 1) * _quadrant(amps, qa, qb, 1, 0))
    return float(2.0 * s)


def expect_yy(amps, qa, qb):
    s = np.sum(_quadrant(amps, qa, qb, 0, 1) * _quadrant(amps, qa, qb, 1, 0))
    s -= np.sum(_quadrant(amps, qa, qb, 0, 0) * _quadrant(amps, qa, qb, 1, 1))
    return float(2.0 * s)


def expect_xz(amps, xq, zq):
    pos = np.sum(_quadrant(amps, xq, zq, 0, 0) * _quadrant(amps, xq, zq, 1, 0))
    neg = np.sum(_quadrant(amps, xq, zq, 0, 1) * _quadrant(amps, xq, zq, 1, 1))
    return float(2.0 * (pos - neg))


def energy_table(h, jmat, out):
    """Fill out[k] with the Ising energy of basis state k.

    h: (n,) fields, jmat: (n, n) symmetric couplings with zero diagonal,
    out: (2**n,) preallocated. Spin convention z_i = 1 - 2*bit_i(k). Strided
    slice adds keep every entry an exact float sum of the coefficients, so
    integer-valued (scaled) inputs stay exact.
    """
    n = h.shape[0]
    out[:] = 0.0
    for i in range(n):
        v = out.reshape(-1, 2, 1 << i)
        v[:, 0, :] += h[i]
        v[:, 1, :] -= h[i]
    for i in range(n - 1):
        for j in range(i + 1, n):
            val = jmat[i, j]
            if val == 0.0:
                continue
            v = out.reshape(-1, 2, 1 << (j - i - 1), 2, 1 << i)
            v[:, 0, :, 0, :] += val
            v[:, 1, :, 1, :] += val
            v[:, 0, :, 1, :] -= val
            v[:, 1, :, 0, :] -= val
