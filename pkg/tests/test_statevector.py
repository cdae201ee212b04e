import numpy as np
import pytest

import oracles
from conftest import random_real_state
from vqelab import backend, qubo
from vqelab import statevector as sv
from vqelab.errors import ResourceLimitError
from vqelab.qubo import OptimalSet


def apply_engine(state, kind, qubits, angles):
    if kind == "h":
        state.apply_h(qubits[0])
    elif kind == "ry":
        state.apply_ry(qubits[0], angles[0])
    elif kind == "cnot":
        state.apply_cnot(*qubits)
    elif kind == "cz":
        state.apply_cz(*qubits)
    elif kind == "yz_factor":
        state.apply_yz_factor(qubits[0], qubits[1], angles[0])
    elif kind == "yz":
        state.apply_yz_pair(qubits[0], qubits[1], angles[0], angles[1])
    elif kind == "ite_zz":
        state.apply_ite_zz(qubits[0], qubits[1], angles[0])
    else:
        raise AssertionError(kind)


GATE_KINDS = [("h", 1, 0), ("ry", 1, 1), ("cnot", 2, 0), ("cz", 2, 0),
              ("yz_factor", 2, 1), ("yz", 2, 2), ("ite_zz", 2, 1)]


@pytest.mark.parametrize("kind,arity,n_angles", GATE_KINDS)
def test_gate_matches_dense_oracle(kind, arity, n_angles, rng):
    for n in (2, 3, 4):
        for _ in range(20):
            qubits = tuple(rng.choice(n, size=arity, replace=False).tolist())
            angles = tuple(rng.uniform(-2 * np.pi, 2 * np.pi, size=n_angles).tolist())
            state = random_real_state(n, rng)
            dense = oracles.gate_matrix(n, kind, qubits, angles) @ state.amps
            if kind == "ite_zz":
                dense = dense / np.linalg.norm(dense)
            assert oracles.max_imag(dense) < 1e-12
            apply_engine(state, kind, qubits, angles)
            assert np.max(np.abs(state.amps - dense.real)) < 1e-12


def test_yz_pair_factor_order_commutes(rng):
    # the two generators commute, so factor application order is irrelevant
    for _ in range(20):
        state = random_real_state(3, rng)
        other = state.copy()
        theta0, theta1 = rng.uniform(-np.pi, np.pi, size=2)
        state.apply_yz_pair(0, 2, theta0, 0.0)
        state.apply_yz_pair(0, 2, 0.0, theta1)
        other.apply_yz_pair(0, 2, 0.0, theta1)
        other.apply_yz_pair(0, 2, theta0, 0.0)
        assert np.max(np.abs(state.amps - other.amps)) < 1e-12


def test_yz_pair_dense_form_is_special_orthogonal(rng):
    for _ in range(10):
        theta0, theta1 = rng.uniform(-np.pi, np.pi, size=2)
        dense = oracles.gate_matrix(2, "yz", (0, 1), (theta0, theta1))
        assert oracles.max_imag(dense) < 1e-12
        q = dense.real
        assert np.max(np.abs(q.T @ q - np.eye(4))) < 1e-12
        assert abs(np.linalg.det(q) - 1.0) < 1e-12


def test_init_plus():
    state = sv.init_plus(4)
    assert np.all(state.amps == 0.25)
    assert state.norm() == pytest.approx(1.0, abs=1e-15)
    assert sv.init_plus(1).amps == pytest.approx([2 ** -0.5, 2 ** -0.5])
    assert sv.init_plus(20).probabilities()[155] == pytest.approx(2.0 ** -20, rel=1e-12)
    with pytest.raises(ResourceLimitError):
        sv.init_plus(12, cap=10)


def test_hadamard_layer_prepares_plus():
    amps = np.zeros(8)
    amps[0] = 1.0
    state = sv.State(3, amps)
    for q in range(3):
        state.apply_h(q)
    assert np.max(np.abs(state.amps - sv.init_plus(3).amps)) < 1e-15


def test_ry_special_angles():
    state = random_real_state(2, np.random.default_rng(0))
    before = state.amps.copy()
    state.apply_ry(1, 0.0)
    assert np.array_equal(state.amps, before)
    amps = np.zeros(2)
    amps[0] = 1.0
    one = sv.State(1, amps)
    one.apply_ry(0, np.pi)  # |0> -> |1>
    assert one.amps == pytest.approx([0.0, 1.0], abs=1e-15)


def test_cnot_cz_are_involutions(rng):
    state = random_real_state(3, rng)
    before = state.amps.copy()
    state.apply_cnot(2, 0)
    state.apply_cnot(2, 0)
    assert np.array_equal(state.amps, before)
    state.apply_cz(0, 1)
    state.apply_cz(0, 1)
    assert np.array_equal(state.amps, before)


def test_expectations_on_plus_state():
    state = sv.init_plus(4)
    assert sv.expect_pauli(state, sv.PauliString(((2, "X"),))) == pytest.approx(1.0, abs=1e-14)
    assert sv.expect_pauli(state, sv.PauliString(((0, "X"), (3, "X")))) == pytest.approx(1.0, abs=1e-14)
    assert sv.expect_pauli(state, sv.PauliString(((0, "Z"), (1, "Z")))) == pytest.approx(0.0, abs=1e-14)
    assert sv.expect_pauli(state, sv.PauliString(((1, "Y"), (2, "Y")))) == pytest.approx(0.0, abs=1e-14)


def test_odd_y_strings_are_exactly_zero(rng):
    state = random_real_state(4, rng)
    assert sv.expect_pauli(state, sv.PauliString(((1, "Y"),))) == 0.0
    assert sv.expect_pauli(state, sv.PauliString(((0, "Z"), (2, "Y")))) == 0.0
    assert sv.expect_pauli(state, sv.PauliString(((3, "Y"), (1, "X")))) == 0.0


def test_expectations_match_dense_oracle(rng):
    axes = ("X", "Y", "Z")
    for _ in range(5):
        state = random_real_state(3, rng)
        strings = [((q, a),) for q in range(3) for a in axes]
        strings += [((i, a), (j, b))
                    for i in range(3) for j in range(3) if i != j
                    for a in axes for b in axes]
        for factors in strings:
            dense = oracles.string_matrix(3, factors)
            expected = np.real(state.amps @ dense @ state.amps)
            got = sv.expect_pauli(state, sv.PauliString(factors))
            assert got == pytest.approx(expected, abs=1e-12)


def test_ite_zz_zero_tau_is_identity(rng):
    state = random_real_state(3, rng)
    before = state.amps.copy()
    state.apply_ite_zz(0, 2, 0.0)
    assert np.max(np.abs(state.amps - before)) < 1e-15


def test_ite_zz_shrinks_aligned_components():
    state = sv.init_plus(2)
    state.apply_ite_zz(0, 1, 0.7)
    probs = state.probabilities()
    # indices 1, 2 are anti-aligned (z_0 z_1 = -1), 0 and 3 aligned
    assert probs[1] > probs[0] and probs[2] > probs[3]
    assert state.norm() == pytest.approx(1.0, abs=1e-12)


def test_full_ite_projects_to_ground_state():
    inst = qubo.generate_instance(8, seed=2)
    table = qubo.energy_table(inst)
    optimal = qubo.brute_force_solve(inst)
    # e^{-tau H}|+>^n, centered so the ground amplitude is exp(0); the
    # smallest nonzero gap on the 1e-4 coefficient grid is 1e-4
    amps = sv.init_plus(8).amps * np.exp(-1e5 * (table - table.min()))
    state = sv.State(8, amps / np.linalg.norm(amps))
    assert sv.fidelity(state, optimal) > 0.999


def test_sample_counts_basis_state():
    amps = np.zeros(8)
    amps[5] = 1.0
    counts = sv.sample_counts(sv.State(3, amps), 1000, np.random.default_rng(0))
    assert counts == {5: 1000}


def test_sample_counts_uniform_within_5_sigma():
    state = sv.init_plus(2)
    shots = 10 ** 6
    counts = sv.sample_counts(state, shots, np.random.default_rng(42))
    sigma = np.sqrt(shots * 0.25 * 0.75)
    assert sum(counts.values()) == shots
    for k in range(4):
        assert abs(counts[k] - shots / 4) < 5 * sigma


def test_sample_counts_deterministic(rng):
    state = random_real_state(4, np.random.default_rng(3))
    a = sv.sample_counts(state, 5000, np.random.default_rng(7))
    b = sv.sample_counts(state, 5000, np.random.default_rng(7))
    assert a == b
    with pytest.raises(ValueError):
        sv.sample_counts(state, 0, np.random.default_rng(7))


def test_shot_pauli_estimate():
    plus = sv.init_plus(2)
    x0 = sv.PauliString(((0, "X"),))
    # eigenstate: estimate is exactly +1 for any shot count
    assert sv.shot_pauli_estimate(plus, x0, 17, np.random.default_rng(0)) == 1.0
    state = random_real_state(4, np.random.default_rng(8))
    for factors in [((0, "X"),), ((1, "Z"), (3, "X")), ((0, "Z"), (2, "Z"))]:
        p = sv.PauliString(factors)
        exact = sv.expect_pauli(state, p)
        est = sv.shot_pauli_estimate(state, p, 100_000, np.random.default_rng(1))
        assert abs(est - exact) < 4 / np.sqrt(100_000)
    odd_y = sv.PauliString(((1, "Y"),))
    est = sv.shot_pauli_estimate(state, odd_y, 100_000, np.random.default_rng(2))
    assert abs(est) < 4 / np.sqrt(100_000)


def test_fidelity():
    optimal = OptimalSet(min_energy=-1.0, states=np.array([3]))
    assert sv.fidelity(sv.init_plus(4), optimal) == pytest.approx(2.0 ** -4, abs=1e-15)
    amps = np.zeros(16)
    amps[3] = 1.0
    assert sv.fidelity(sv.State(4, amps), optimal) == 1.0
    all_states = OptimalSet(min_energy=0.0, states=np.arange(16))
    state = random_real_state(4, np.random.default_rng(1))
    assert sv.fidelity(state, all_states) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        sv.fidelity(sv.init_plus(2), OptimalSet(min_energy=0.0, states=np.array([9])))


def test_dump_load_roundtrip(tmp_path, rng):
    state = random_real_state(5, rng)
    path = tmp_path / "state.bin"
    sv.dump_state(state, path)
    loaded = sv.load_state(path)
    assert loaded.n == 5
    assert np.array_equal(loaded.amps, state.amps)


def test_numpy_and_numba_backends_agree(rng):
    if not backend.numba_available():
        pytest.skip("numba backend not importable")
    for kind, arity, n_angles in GATE_KINDS:
        qubits = tuple(rng.choice(4, size=arity, replace=False).tolist())
        angles = tuple(rng.uniform(-np.pi, np.pi, size=n_angles).tolist())
        start = random_real_state(4, rng)
        with backend.use_backend("numpy"):
            a = start.copy()
            apply_engine(a, kind, qubits, angles)
        with backend.use_backend("numba"):
            b = start.copy()
            apply_engine(b, kind, qubits, angles)
        assert np.array_equal(a.amps, b.amps), kind
    state = random_real_state(6, rng)
    for factors in [((0, "X"),), ((2, "Z"), (5, "X")), ((1, "Y"), (4, "Y")),
                    ((3, "X"), (0, "X")), ((2, "Z"), (3, "Z"))]:
        p = sv.PauliString(factors)
        with backend.use_backend("numpy"):
            a = sv.expect_pauli(state, p)
        with backend.use_backend("numba"):
            b = sv.expect_pauli(state, p)
        assert a == pytest.approx(b, abs=1e-13)


def test_norm_stable_under_long_random_circuit(rng):
    state = sv.init_plus(10)
    for _ in range(2000):
        kind = ("h", "ry", "cnot", "cz", "yz")[int(rng.integers(5))]
        if kind in ("h", "ry"):
            qubits = (int(rng.integers(10)),)
        else:
            qubits = tuple(rng.choice(10, size=2, replace=False).tolist())
        angles = tuple(rng.uniform(-np.pi, np.pi, size=2).tolist())
        if kind == "h":
            state.apply_h(qubits[0])
        elif kind == "ry":
            state.apply_ry(qubits[0], angles[0])
        elif kind == "cnot":
            state.apply_cnot(*qubits)
        elif kind == "cz":
            state.apply_cz(*qubits)
        else:
            state.apply_yz_pair(qubits[0], qubits[1], *angles)
    assert abs(1.0 - state.norm()) <= 1e-10


def test_state_validation():
    with pytest.raises(ValueError):
        sv.State(0, np.array([1.0]))
    with pytest.raises(ValueError):
        sv.State(2, np.zeros(3))
    state = sv.init_plus(3)
    with pytest.raises(ValueError):
        state.apply_ry(3, 0.1)
    with pytest.raises(ValueError):
        state.apply_cnot(1, 1)
    with pytest.raises(ValueError):
        state.apply_yz_pair(0, 0, 0.1, 0.2)
    with pytest.raises(ValueError):
        sv.PauliString(((0, "X"), (1, "Y"), (2, "Z")))
    with pytest.raises(ValueError):
        sv.PauliString(((0, "X"), (0, "Z")))
