"""Imaginary-time-inspired warm starts for the graph ansatz.

The target of one normalized imaginary-time step exp(-tau * H) factorizes
over the diagonal Hamiltonian terms. The warm start walks the "yz" graph
circuit gate by gate and picks each gate's parameters to maximize its overlap
with the matching factor applied to the current state:

  * layer-1 vertex rotations reproduce the single-qubit factor on |+> exactly,
    in closed form: theta_i = 2*arctan(-exp(-2*tau*h_i)) + pi/2,
  * each edge rotation maximizes f = u^T M v over unit vectors
    u = (cos(theta1/2), sin(theta1/2)), v = (cos(theta0/2), sin(theta0/2)),
    where M collects five local expectation values of the current state; the
    maximum is the top singular value of M,
  * vertex rotations on deeper layers maximize the analogous one-dimensional
    overlap.

Expectations come either from the exact statevector ("measuring_exact"), from
simulated finite measurement rounds ("measuring_shots"), or from the fixed
|+>^n values without ever touching the state ("approximation", exact to
second order in tau and O(#gates) total work).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedAnsatzError
from .statevector import expect_pauli, init_plus, shot_pauli_estimate

MODES = ("measuring_exact", "measuring_shots", "approximation")


@dataclass(frozen=True)
class WarmStartConfig:
    tau: float = 0.2
    mode: str = "measuring_exact"
    shots_per_pauli: int = 1000
    layers: int = 1
    edge_order: tuple | None = None
    seed: int = 0

    def __post_init__(self):
        if not self.tau > 0.0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}, expected one of {MODES}")
        if self.shots_per_pauli < 1:
            raise ValueError("shots_per_pauli must be positive")
        if self.layers < 1:
            raise ValueError("layers must be >= 1")


@dataclass(frozen=True)
class OverlapCoeffs:
    """Bilinear overlap form f(u, v) = [cos u, sin u] M [cos v, sin v]^T.

    With tt = tau * J_ij, ch = cosh(tt), sh = sinh(tt) and expectations taken
    in the current state:

        a = ch - sh * <Z_i Z_j>      b = sh * <X_i>
        c = sh * <X_j>               d = -(ch * <X_i X_j> + sh * <Y_i Y_j>)

    The mixed <Z Y> terms vanish identically on real states and are dropped.
    """

    a: float
    b: float
    c: float
    d: float

    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]])

    def evaluate(self, theta0, theta1):
        u, v = 0.5 * theta1, 0.5 * theta0
        return (math.cos(u) * (self.a * math.cos(v) + self.b * math.sin(v))
                + math.sin(u) * (self.c * math.cos(v) + self.d * math.sin(v)))


def coeffs_from_expectations(tau_tilde, zz, xi, xj, xx, yy):
    ch = math.cosh(tau_tilde)
    sh = math.sinh(tau_tilde)
    return OverlapCoeffs(a=ch - sh * zz, b=sh * xi, c=sh * xj, d=-(ch * xx + sh * yy))


def plugin_coeffs(tau_tilde):
    """Coefficients with the |+>^n expectations plugged in (no measurement)."""
    return coeffs_from_expectations(tau_tilde, 0.0, 1.0, 1.0, 1.0, 0.0)


def _edge_expectations(state, i, j, mode, shots_per_pauli, rng):
    strings = (((i, "Z"), (j, "Z")), ((i, "X"),), ((j, "X"),),
               ((i, "X"), (j, "X")), ((i, "Y"), (j, "Y")))
    if mode == "measuring_exact":
        return tuple(expect_pauli(state, s) for s in strings)
    return tuple(shot_pauli_estimate(state, s, shots_per_pauli, rng) for s in strings)


def overlap_coeffs(state, i, j, tau_tilde, mode="measuring_exact",
                   shots_per_pauli=1000, rng=None):
    """Measure (or evaluate) the five expectations feeding the overlap form."""
    if mode == "approximation":
        return plugin_coeffs(tau_tilde)
    if mode == "measuring_shots" and rng is None:
        raise ValueError("measuring_shots needs an rng")
    zz, xi, xj, xx, yy = _edge_expectations(state, i, j, mode, shots_per_pauli, rng)
    return coeffs_from_expectations(tau_tilde, zz, xi, xj, xx, yy)


def maximize_overlap(coeffs, degeneracy_tol=1e-9):
    """Angles (theta0, theta1) maximizing the overlap form, and the maximum.

    The maximum of u^T M v over unit vectors is the top singular value. When
    the two singular values coincide (M is a scaled rotation or reflection)
    the maximizers form a circle; the pair with minimal theta0^2 + theta1^2 is
    returned, which splits the angle symmetrically. In the generic case the
    top singular pair is used, sign-flipped to the smaller-angle equivalent.
    """
    m = coeffs.matrix()
    u_mat, svals, vt = np.linalg.svd(m)
    s1, s2 = float(svals[0]), float(svals[1])
    if s1 <= degeneracy_tol:
        return 0.0, 0.0, float(coeffs.a)
    if s1 - s2 <= degeneracy_tol:
        r = m / s1
        phi = math.atan2(r[1, 0], r[0, 0])
        if np.linalg.det(m) >= 0.0:
            u, v = 0.5 * phi, -0.5 * phi
        else:
            u = v = 0.5 * phi
    else:
        u = math.atan2(u_mat[1, 0], u_mat[0, 0])
        v = math.atan2(vt[0, 1], vt[0, 0])
        # the antipodal pair reaches the same +s1; keep the smaller angles
        alt_u = u - math.copysign(math.pi, u)
        alt_v = v - math.copysign(math.pi, v)
        if alt_u * alt_u + alt_v * alt_v < u * u + v * v:
            u, v = alt_u, alt_v
    theta0, theta1 = 2.0 * v, 2.0 * u
    return theta0, theta1, coeffs.evaluate(theta0, theta1)


def single_qubit_angle(h_i, tau):
    """Closed-form layer-1 rotation angle 2*arctan(-exp(-2*tau*h_i)) + pi/2.

    R_y of this angle on |+> equals the normalized single-qubit factor
    exp(-tau * h_i * sigma_z)|+> exactly.
    """
    if not tau > 0.0:
        raise ValueError(f"tau must be positive, got {tau}")
    return 2.0 * math.atan(-math.exp(-2.0 * tau * h_i)) + 0.5 * math.pi


def _deeper_vertex_angle(tau_tilde, z, x):
    # one-dimensional overlap g(theta) = cos(theta/2)*A + sin(theta/2)*B
    a = math.cosh(tau_tilde) - math.sinh(tau_tilde) * z
    b = math.sinh(tau_tilde) * x
    return 2.0 * math.atan2(b, a)


def _require_graph_yz(circuit):
    if circuit.kind != "sia_yz":
        raise UnsupportedAnsatzError(
            f"warm start is defined for the 'yz' graph ansatz, got {circuit.kind!r}")
    n = circuit.n
    for g in circuit.gates[:n]:
        if g.kind != "h":
            raise UnsupportedAnsatzError("expected a leading Hadamard layer")
    for g in circuit.gates[n:]:
        if g.kind not in ("ry", "yz"):
            raise UnsupportedAnsatzError(f"unexpected {g.kind!r} gate in graph ansatz")


@dataclass(frozen=True)
class EdgeRecord:
    i: int
    j: int
    theta0: float
    theta1: float
    f_max: float


@dataclass
class WarmStartResult:
    params: np.ndarray
    per_edge: list
    mode: str
    tau: float
    state: object = None  # final walked state; None in approximation mode


def warm_start_measuring(instance, circuit, config, rng=None):
    """Sequential overlap-maximizing walk with measured expectations.

    Walks the gate list in order, fixing each gate's parameters from the
    current state and applying the gate before moving on. The first n vertex
    rotations (layer 1, still a product state) use the closed form; deeper
    vertex rotations and all edge rotations maximize their overlap form.
    """
    _require_graph_yz(circuit)
    if config.mode not in ("measuring_exact", "measuring_shots"):
        raise ValueError(f"not a measuring mode: {config.mode!r}")
    if config.mode == "measuring_shots" and rng is None:
        rng = np.random.default_rng(config.seed)
    tau = config.tau
    state = init_plus(circuit.n)
    params = np.zeros(circuit.param_count)
    per_edge = []
    vertex_rotations = 0
    for g in circuit.gates:
        if g.kind == "h":
            continue
        if g.kind == "ry":
            q = g.qubits[0]
            if vertex_rotations < circuit.n:
                theta = single_qubit_angle(instance.h[q], tau)
            else:
                tz = tau * instance.h[q]
                if config.mode == "measuring_exact":
                    z = expect_pauli(state, ((q, "Z"),))
                    x = expect_pauli(state, ((q, "X"),))
                else:
                    z = shot_pauli_estimate(state, ((q, "Z"),), config.shots_per_pauli, rng)
                    x = shot_pauli_estimate(state, ((q, "X"),), config.shots_per_pauli, rng)
                theta = _deeper_vertex_angle(tz, z, x)
            vertex_rotations += 1
            params[g.params[0]] = theta
            state.apply_ry(q, theta)
        else:
            i, j = g.qubits
            tt = tau * instance.coupling[(i, j)]
            coeffs = overlap_coeffs(state, i, j, tt, config.mode, config.shots_per_pauli, rng)
            theta0, theta1, f_max = maximize_overlap(coeffs)
            params[g.params[0]] = theta0
            params[g.params[1]] = theta1
            state.apply_yz_pair(i, j, theta0, theta1)
            per_edge.append(EdgeRecord(i=i, j=j, theta0=theta0, theta1=theta1, f_max=f_max))
    return WarmStartResult(params=params, per_edge=per_edge, mode=config.mode,
                           tau=tau, state=state)


def warm_start_approx(instance, circuit, config):
    """Measurement-free warm start from the fixed |+>^n expectations.

    Never builds a state, so it runs in O(#gates) regardless of n. Parameters
    agree with the measuring walk to second order in tau.
    """
    _require_graph_yz(circuit)
    tau = config.tau
    params = np.zeros(circuit.param_count)
    per_edge = []
    vertex_rotations = 0
    for g in circuit.gates:
        if g.kind == "h":
            continue
        if g.kind == "ry":
            q = g.qubits[0]
            if vertex_rotations < circuit.n:
                theta = single_qubit_angle(instance.h[q], tau)
            else:
                theta = _deeper_vertex_angle(tau * instance.h[q], 0.0, 1.0)
            vertex_rotations += 1
            params[g.params[0]] = theta
        else:
            i, j = g.qubits
            tt = tau * instance.coupling[(i, j)]
            theta0, theta1, f_max = maximize_overlap(plugin_coeffs(tt))
            params[g.params[0]] = theta0
            params[g.params[1]] = theta1
            per_edge.append(EdgeRecord(i=i, j=j, theta0=theta0, theta1=theta1, f_max=f_max))
    return WarmStartResult(params=params, per_edge=per_edge, mode="approximation",
                           tau=tau, state=None)


def warm_start(instance, circuit, config, rng=None):
    """Dispatch on config.mode."""
    if config.mode == "approximation":
        return warm_start_approx(instance, circuit, config)
    return warm_start_measuring(instance, circuit, config, rng=rng)
