import json
import math

import numpy as np
import pytest

from vqelab import qubo
from vqelab.errors import ResourceLimitError

# Worked 2-qubit example: h = (0.5, -0.3), J_01 = +0.2.
# By hand over all four basis states (z_i = 1 - 2*bit_i):
#   k=0: z=(+,+): 0.5 - 0.3 + 0.2 =  0.4
#   k=1: z=(-,+): -0.5 - 0.3 - 0.2 = -1.0
#   k=2: z=(+,-): 0.5 + 0.3 - 0.2 =  0.6
#   k=3: z=(-,-): -0.5 + 0.3 + 0.2 =  0.0
TWO_QUBIT_TABLE = [0.4, -1.0, 0.6, 0.0]


def two_qubit_instance():
    return qubo.QuboInstance(n=2, h=(0.5, -0.3), edges=((0, 1),), j=(0.2,))


def test_energy_two_qubit_example_by_hand():
    inst = two_qubit_instance()
    for k, expected in enumerate(TWO_QUBIT_TABLE):
        assert qubo.energy(inst, k) == expected


def test_energy_table_two_qubit_example():
    table = qubo.energy_table(two_qubit_instance())
    assert table.tolist() == TWO_QUBIT_TABLE


def test_brute_force_two_qubit_example():
    result = qubo.brute_force_solve(two_qubit_instance())
    assert result.min_energy == -1.0
    assert list(result.states) == [1]
    assert result.degeneracy == 1


def test_energy_zero_hamiltonian():
    inst = qubo.QuboInstance(n=3, h=(0.0, 0.0, 0.0),
                             edges=qubo.complete_edges(3), j=(0.0, 0.0, 0.0))
    table = qubo.energy_table(inst)
    assert np.all(table == 0.0)
    result = qubo.brute_force_solve(inst)
    assert result.min_energy == 0.0
    assert list(result.states) == list(range(8))


def test_generate_shapes_and_ranges():
    inst = qubo.generate_instance(2, seed=7)
    assert len(inst.h) == 2 and len(inst.j) == 1
    inst = qubo.generate_instance(12, seed=7)
    assert len(inst.h) == 12
    assert len(inst.j) == 66
    assert inst.edges == qubo.complete_edges(12)
    for value in list(inst.h) + list(inst.j):
        assert -1.0 <= value <= 1.0
        # exactly 4 decimal digits: value is the double closest to k/1e4
        assert float(value) == round(float(value) * 1e4) / 1e4


def test_generate_deterministic():
    a = qubo.generate_instance(9, seed=123)
    b = qubo.generate_instance(9, seed=123)
    assert np.array_equal(a.h, b.h) and np.array_equal(a.j, b.j)
    c = qubo.generate_instance(9, seed=124)
    assert not (np.array_equal(a.h, c.h) and np.array_equal(a.j, c.j))


def test_generate_matches_documented_draw_order():
    # independent reconstruction: h block first, then lexicographic edge block
    n, seed = 7, 42
    inst = qubo.generate_instance(n, seed)
    rng = np.random.default_rng(seed)
    raw_h = rng.uniform(-1.0, 1.0, size=n)
    raw_j = rng.uniform(-1.0, 1.0, size=n * (n - 1) // 2)

    def round4(x):
        return math.copysign(math.floor(abs(x) * 1e4 + 0.5) / 1e4, x)

    assert list(inst.h) == [round4(v) for v in raw_h]
    assert list(inst.j) == [round4(v) for v in raw_j]


def test_round_half_away_from_zero():
    assert qubo._round_half_away(np.array([0.12345]))[0] == 0.1235
    assert qubo._round_half_away(np.array([-0.12345]))[0] == -0.1235
    assert qubo._round_half_away(np.array([0.12344]))[0] == 0.1234
    assert qubo._round_half_away(np.array([1.0]))[0] == 1.0


def test_energy_table_matches_pointwise_energy():
    inst = qubo.generate_instance(8, seed=5)
    table = qubo.energy_table(inst)
    assert table.shape == (256,)
    for k in range(256):
        assert table[k] == qubo.energy(inst, k)


def test_table_min_equals_brute_force():
    inst = qubo.generate_instance(10, seed=11)
    table = qubo.energy_table(inst)
    result = qubo.brute_force_solve(inst)
    assert table.min() == result.min_energy
    assert np.array_equal(np.flatnonzero(table == table.min()), result.states)


def test_brute_force_against_reverse_scan_oracle():
    # independent re-implementation: exact integer arithmetic, reverse index order
    inst = qubo.generate_instance(12, seed=77)
    hs = [round(v * 1e4) for v in inst.h]
    js = {e: round(v * 1e4) for e, v in zip(inst.edges, inst.j)}
    best, argmin = None, []
    for k in range((1 << 12) - 1, -1, -1):
        z = [1 - 2 * ((k >> q) & 1) for q in range(12)]
        e = sum(h * z[q] for q, h in enumerate(hs))
        e += sum(v * z[i] * z[j] for (i, j), v in js.items())
        if best is None or e < best:
            best, argmin = e, [k]
        elif e == best:
            argmin.append(k)
    result = qubo.brute_force_solve(inst)
    assert result.min_energy == best / 1e4
    assert sorted(argmin) == list(result.states)


def test_spin_flip_symmetry():
    inst = qubo.generate_instance(6, seed=3)
    flipped = qubo.QuboInstance(n=6, h=tuple(-v for v in inst.h),
                                edges=inst.edges, j=inst.j)
    mask = (1 << 6) - 1
    table = qubo.energy_table(inst)
    table_flipped = qubo.energy_table(flipped)
    for k in range(64):
        assert table_flipped[k] == table[k ^ mask]


def test_backends_agree_on_energy_table():
    from vqelab import backend
    inst = qubo.generate_instance(9, seed=8)
    with backend.use_backend("numpy"):
        table_np = qubo.energy_table(inst)
    if backend.numba_available():
        with backend.use_backend("numba"):
            table_nb = qubo.energy_table(inst)
        # Gray-code incremental walk vs direct sums, exact on the 1e-4 grid
        assert np.array_equal(table_np, table_nb)


def test_save_load_roundtrip(tmp_path):
    inst = qubo.generate_instance(5, seed=9)
    path = tmp_path / "inst.json"
    qubo.save_instance(inst, path)
    loaded = qubo.load_instance(path)
    assert loaded.n == inst.n and loaded.seed == inst.seed
    assert np.array_equal(loaded.h, inst.h)
    assert loaded.edges == inst.edges
    assert np.array_equal(loaded.j, inst.j)


def test_save_is_byte_deterministic(tmp_path):
    inst = qubo.generate_instance(5, seed=9)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    qubo.save_instance(inst, p1)
    qubo.save_instance(inst, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_load_accepts_core_schema(tmp_path):
    # interchange files without the optional bookkeeping keys still load
    path = tmp_path / "bare.json"
    path.write_text(json.dumps({"n": 2, "seed": 4, "h": [0.5, -0.3], "j": [[0, 1, 0.2]]}))
    inst = qubo.load_instance(path)
    assert qubo.energy_table(inst).tolist() == TWO_QUBIT_TABLE
    assert inst.seed == 4


def test_validation_errors():
    with pytest.raises(ValueError):
        qubo.generate_instance(1, seed=0)
    with pytest.raises(ResourceLimitError):
        qubo.generate_instance(30, seed=0)
    with pytest.raises(ResourceLimitError):
        qubo.energy_table(qubo.generate_instance(8, seed=0), cap=6)
    with pytest.raises(ResourceLimitError):
        qubo.brute_force_solve(qubo.generate_instance(8, seed=0), cap=6)
    with pytest.raises(ValueError):
        qubo.energy(two_qubit_instance(), 4)
    with pytest.raises(ValueError):
        qubo.QuboInstance(n=2, h=(0.1, 0.2), edges=((1, 0),), j=(0.3,))  # not i<j
    with pytest.raises(ValueError):
        qubo.QuboInstance(n=2, h=(0.1, float("nan")), edges=((0, 1),), j=(0.3,))
