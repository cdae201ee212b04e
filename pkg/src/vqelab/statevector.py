"""Real-amplitude statevector engine.

Every circuit family used here (Hadamard layer, R_y rotations, CNOT, CZ and
the two-spin YZ rotations) maps real vectors to real vectors, as does the
non-unitary imaginary-time zz factor. Amplitudes are therefore a flat float64
array of length 2**n, qubit q = bit q of the basis index, and all gates are
in-place orthogonal (or positive diagonal) maps on it.

Expectation values of Pauli strings with an odd number of Y factors vanish
identically on real states and are returned as exact 0.0 without touching the
amplitudes.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import ResourceLimitError
from .qubo import MAX_QUBITS


@dataclass(frozen=True)
class PauliString:
    """Tensor product of at most two single-qubit Paulis, e.g. ((0, "Z"), (3, "Y"))."""

    factors: tuple

    def __post_init__(self):
        factors = tuple((int(q), str(a)) for q, a in self.factors)
        object.__setattr__(self, "factors", factors)
        if len(factors) > 2:
            raise ValueError("only weight <= 2 strings are supported")
        qubits = [q for q, _ in factors]
        if len(set(qubits)) != len(qubits):
            raise ValueError("repeated qubit in Pauli string")
        for q, axis in factors:
            if q < 0:
                raise ValueError(f"negative qubit index {q}")
            if axis not in ("X", "Y", "Z"):
                raise ValueError(f"unknown Pauli axis {axis!r}")

    @property
    def y_count(self):
        return sum(1 for _, a in self.factors if a == "Y")


class State:
    """Mutable n-qubit real statevector."""

    __slots__ = ("n", "amps")

    def __init__(self, n, amps):
        amps = np.ascontiguousarray(amps, dtype=np.float64)
        if n < 1:
            raise ValueError(f"need at least 1 qubit, got n={n}")
        if amps.shape != (1 << n,):
            raise ValueError(f"amplitude vector has shape {amps.shape}, expected ({1 << n},)")
        self.n = n
        self.amps = amps

    def copy(self):
        return State(self.n, self.amps.copy())

    def norm(self):
        # np.dot is a blocked BLAS reduction, accurate to ~1e-14 even at the cap
        return float(np.sqrt(np.dot(self.amps, self.amps)))

    def probabilities(self):
        return self.amps ** 2

    def _check_qubit(self, *qs):
        for q in qs:
            if not 0 <= q < self.n:
                raise ValueError(f"qubit {q} out of range for n={self.n}")
        if len(set(qs)) != len(qs):
            raise ValueError(f"qubits must be distinct, got {qs}")

    def apply_h(self, q):
        self._check_qubit(q)
        backend.kernels().apply_h(self.amps, q)

    def apply_ry(self, q, theta):
        self._check_qubit(q)
        backend.kernels().apply_ry(self.amps, q, float(theta))

    def apply_cnot(self, control, target):
        self._check_qubit(control, target)
        backend.kernels().apply_cnot(self.amps, control, target)

    def apply_cz(self, qa, qb):
        self._check_qubit(qa, qb)
        backend.kernels().apply_cz(self.amps, qa, qb)

    def apply_yz_factor(self, y_qubit, z_qubit, theta):
        """exp(-i * theta * sigma_y[y_qubit] sigma_z[z_qubit] / 2)."""
        self._check_qubit(y_qubit, z_qubit)
        backend.kernels().apply_yz_factor(self.amps, y_qubit, z_qubit, float(theta))

    def apply_yz_pair(self, i, j, theta0, theta1):
        """Two-parameter edge rotation exp(-i(theta1 Z_i Y_j + theta0 Y_i Z_j)/2).

        The two generators commute, so the factor order is irrelevant; the
        theta0 factor (Y on i, Z on j) is applied first by convention.
        """
        self._check_qubit(i, j)
        k = backend.kernels()
        k.apply_yz_factor(self.amps, i, j, float(theta0))
        k.apply_yz_factor(self.amps, j, i, float(theta1))

    def apply_ite_zz(self, i, j, tau_tilde):
        """Multiply by exp(-tau_tilde * z_i * z_j) and renormalize."""
        self._check_qubit(i, j)
        backend.kernels().scale_ite_zz(self.amps, i, j, float(tau_tilde))
        nrm = np.sqrt(np.dot(self.amps, self.amps))
        if nrm == 0.0:
            raise FloatingPointError("state norm underflowed in imaginary-time factor")
        self.amps /= nrm


def init_plus(n, cap=MAX_QUBITS):
    """|+>^n, the uniform positive superposition."""
    if n < 1:
        raise ValueError(f"need at least 1 qubit, got n={n}")
    if n > cap:
        raise ResourceLimitError(f"n={n} exceeds the qubit cap {cap}")
    amp = 1.0 / np.sqrt(float(1 << n))
    return State(n, np.full(1 << n, amp))


def _as_factors(pauli):
    if isinstance(pauli, PauliString):
        return pauli
    return PauliString(tuple(pauli))


def expect_pauli(state, pauli):
    """<psi|P|psi> for a weight <= 2 Pauli string P on a real state."""
    ps = _as_factors(pauli)
    for q, _ in ps.factors:
        if q >= state.n:
            raise ValueError(f"qubit {q} out of range for n={state.n}")
    if ps.y_count % 2 == 1:
        return 0.0
    k = backend.kernels()
    amps = state.amps
    if len(ps.factors) == 0:
        return float(np.dot(amps, amps))
    if len(ps.factors) == 1:
        (q, a), = ps.factors
        return k.expect_z(amps, q) if a == "Z" else k.expect_x(amps, q)
    (qa, aa), (qb, ab) = ps.factors
    axes = aa + ab
    if axes == "ZZ":
        return k.expect_zz(amps, qa, qb)
    if axes == "XX":
        return k.expect_xx(amps, qa, qb)
    if axes == "YY":
        return k.expect_yy(amps, qa, qb)
    if axes == "XZ":
        return k.expect_xz(amps, qa, qb)
    if axes == "ZX":
        return k.expect_xz(amps, qb, qa)
    raise AssertionError(f"unreachable axes {axes}")


def sample_counts(state, shots, rng):
    """Multinomial measurement of `shots` computational-basis samples.

    Returns {basis_index: count} with only nonzero entries. Deterministic for
    a fixed rng state and independent of the kernel backend.
    """
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    probs = state.probabilities()
    total = probs.sum()
    if not np.isfinite(total) or total <= 0.0:
        raise FloatingPointError("state has no measurable weight")
    counts = rng.multinomial(shots, probs / total)
    hits = np.flatnonzero(counts)
    return {int(i): int(counts[i]) for i in hits}


def shot_pauli_estimate(state, pauli, shots, rng):
    """Simulate estimating <P> from `shots` single-basis measurements.

    Each measurement is a +-1 outcome with P(+1) = (1 + <P>)/2, so the
    estimate is (2k - shots)/shots for a binomial draw k. Strings with odd Y
    weight are exactly zero on real states; noise is still applied, matching
    what a measurement round would return.
    """
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    exact = expect_pauli(state, pauli)
    p_plus = min(1.0, max(0.0, 0.5 * (1.0 + exact)))
    k = int(rng.binomial(shots, p_plus))
    return (2.0 * k - shots) / shots


def fidelity(state, optimal):
    """Total probability mass on the optimal basis states."""
    states = optimal.states if hasattr(optimal, "states") else np.asarray(optimal)
    states = np.asarray(states)
    if states.size and (states.min() < 0 or states.max() >= state.amps.shape[0]):
        raise ValueError("optimal-state indices do not fit a "
                         f"{state.n}-qubit register")
    return float(np.sum(state.amps[states] ** 2))


def dump_state(state, path):
    """Binary dump: little-endian int64 qubit count, then the raw amplitudes."""
    with open(path, "wb") as fh:
        fh.write(struct.pack("<q", state.n))
        fh.write(state.amps.astype("<f8").tobytes())


def load_state(path):
    with open(path, "rb") as fh:
        (n,) = struct.unpack("<q", fh.read(8))
        data = np.frombuffer(fh.read(), dtype="<f8")
    return State(int(n), data.astype(np.float64))
