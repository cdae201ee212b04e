"""CVaR-VQE driver: one configured run on one instance, fully seeded.

Each objective evaluation prepares the bound circuit, computes the CVaR cost
(exactly, or from a fresh multinomial sample of `shots` measurements) and logs
cost, CVaR standard error and the exact ground-state fidelity. Success means
the fidelity exceeded the threshold (default 1%) at any recorded evaluation.

Measurement randomness is derived per evaluation from (seed, eval_index), so
a rerun with the same config reproduces the trace bit for bit and traces are
independent of how runs are scheduled across processes.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

import numpy as np

from . import ansatz as ansatz_mod
from . import warmstart as ws_mod
from .backend import active_backend
from .errors import UnsupportedAnsatzError
from .cvar import EnergyOrder, cvar_exact, cvar_sampled
from .optimizer import OptimizerOptions, minimize
from .qubo import MAX_QUBITS, OptimalSet, energy_table
from .statevector import fidelity, sample_counts
from .warmstart import WarmStartConfig

ANSATZE = ("sia_yz", "sia_yz_y", "hea_cnot", "hea_cz", "product")
INIT_MODES = ("zeros", "warm_start", "random", "explicit")


@dataclass(frozen=True)
class RunConfig:
    ansatz: str = "sia_yz"
    layers: int = 1
    alpha: float = 0.01
    shots: int | None = 10_000          # None means exact expectation-level CVaR
    init: str = "zeros"
    warm_start: WarmStartConfig | None = None
    init_params: tuple | None = None    # for init="explicit"
    init_seed: int = 0                  # for init="random"
    init_range: float = np.pi
    max_evaluations: int | None = None  # None means 50 * n
    seed: int = 0
    fidelity_threshold: float = 0.01
    edge_order: tuple | None = None

    def __post_init__(self):
        if self.ansatz not in ANSATZE:
            raise ValueError(f"unknown ansatz {self.ansatz!r}, expected one of {ANSATZE}")
        if self.init not in INIT_MODES:
            raise ValueError(f"unknown init {self.init!r}, expected one of {INIT_MODES}")
        if self.layers < 1:
            raise ValueError("layers must be >= 1")
        if self.ansatz in ("hea_cnot", "hea_cz", "product") and self.layers != 1:
            raise ValueError(f"{self.ansatz} has a fixed depth, layers must be 1")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be positive (or None for exact)")
        if self.init == "explicit" and self.init_params is None:
            raise ValueError("init='explicit' needs init_params")
        if self.seed < 0 or self.init_seed < 0:
            raise ValueError("seeds must be non-negative")

    def budget(self, n):
        return self.max_evaluations if self.max_evaluations is not None else 50 * n


@dataclass(frozen=True)
class EvalRecord:
    index: int               # 1-based evaluation counter
    cvar: float
    std_error: float | None  # None for exact mode or single-sample tails
    fidelity: float
    params_hash: str


@dataclass(frozen=True)
class RunSummary:
    success: bool
    max_fidelity: float
    iterations_to_threshold: int | None
    best_cvar: float
    best_eval_index: int
    evaluations: int


@dataclass
class VqeTrace:
    records: list
    metadata: dict
    summary: RunSummary
    wall_time_s: float = field(default=0.0, compare=False)  # never serialized


def iterations_to_threshold(records, threshold):
    """First evaluation index whose fidelity exceeds the threshold, or None."""
    for rec in records:
        if rec.fidelity > threshold:
            return rec.index
    return None


def success(records, threshold):
    """True when any recorded evaluation exceeded the fidelity threshold."""
    return any(rec.fidelity > threshold for rec in records)


def _build_circuit(instance, config):
    if config.ansatz in ("sia_yz", "sia_yz_y"):
        variant = "yz" if config.ansatz == "sia_yz" else "yz_y"
        return ansatz_mod.build_sia(instance, variant=variant, layers=config.layers,
                                    edge_order=config.edge_order)
    if config.ansatz == "hea_cnot":
        return ansatz_mod.build_hea_linear_cnot(instance.n)
    if config.ansatz == "hea_cz":
        return ansatz_mod.build_hea_parallel_cz(instance.n)
    return ansatz_mod.build_product_ansatz(instance.n)


def _initial_params(instance, circuit, config):
    if config.init == "zeros":
        return np.zeros(circuit.param_count)
    if config.init == "warm_start":
        ws_config = config.warm_start
        if ws_config is None:
            ws_config = WarmStartConfig(seed=config.seed)
        result = ws_mod.warm_start(instance, circuit, ws_config)
        return result.params
    if config.init == "random":
        rng = np.random.default_rng(config.init_seed)
        return rng.uniform(-config.init_range, config.init_range, circuit.param_count)
    params = np.asarray(config.init_params, dtype=np.float64)
    if params.shape != (circuit.param_count,):
        raise ValueError(f"init_params has shape {params.shape}, "
                         f"expected ({circuit.param_count},)")
    return params


def _params_hash(params):
    return hashlib.sha256(params.tobytes()).hexdigest()


def run_vqe(instance, config, rng=None, cap=MAX_QUBITS):
    """One full optimization run. Returns the complete evaluation trace.

    The shot-noise streams are keyed by (root, evaluation index) so a trace
    is a pure function of the instance and config. Passing a generator
    replaces the root (drawn from it once) instead of threading mutable
    state through the optimizer callbacks.
    """
    started = time.perf_counter()
    if config.init == "warm_start" and config.ansatz != "sia_yz":
        raise UnsupportedAnsatzError("warm starts are only defined for the sia_yz ansatz")
    circuit = _build_circuit(instance, config)
    table = energy_table(instance, cap=cap)
    lowest = table.min()
    optimal = OptimalSet(min_energy=float(lowest), states=np.flatnonzero(table == lowest))
    order = EnergyOrder(table) if config.shots is None else None
    x0 = _initial_params(instance, circuit, config)
    shot_root = config.seed if rng is None else int(rng.integers(1 << 63))
    records = []

    def objective(params):
        index = len(records) + 1
        state = ansatz_mod.prepare(circuit, params, cap=cap)
        fid = fidelity(state, optimal)
        if config.shots is None:
            est = cvar_exact(state, table, config.alpha, order=order)
        else:
            eval_rng = np.random.default_rng(np.random.SeedSequence((shot_root, index)))
            counts = sample_counts(state, config.shots, eval_rng)
            est = cvar_sampled(counts, table, config.alpha)
        records.append(EvalRecord(index=index, cvar=est.value, std_error=est.std_error,
                                  fidelity=fid, params_hash=_params_hash(params)))
        return est.value

    budget = config.budget(instance.n)
    result = minimize(objective, x0, OptimizerOptions(max_evaluations=budget))
    threshold = config.fidelity_threshold
    max_fid = max(rec.fidelity for rec in records)
    best_index = min(range(len(records)), key=lambda k: records[k].cvar)
    summary = RunSummary(
        success=max_fid > threshold,
        max_fidelity=max_fid,
        iterations_to_threshold=iterations_to_threshold(records, threshold),
        best_cvar=records[best_index].cvar,
        best_eval_index=records[best_index].index,
        evaluations=result.evaluations,
    )
    metadata = {
        "n": instance.n,
        "instance_seed": instance.seed,
        "min_energy": optimal.min_energy,
        "degeneracy": optimal.degeneracy,
        "budget": budget,
        "backend": active_backend(),
        "config": config_dict(config),
    }
    return VqeTrace(records=records, metadata=metadata, summary=summary,
                    wall_time_s=time.perf_counter() - started)


def config_dict(config):
    """Plain-dict form of a RunConfig (stable key order, JSON-ready)."""
    ws = config.warm_start
    return {
        "ansatz": config.ansatz,
        "layers": config.layers,
        "alpha": config.alpha,
        "shots": config.shots,
        "init": config.init,
        "warm_start": None if ws is None else {
            "tau": ws.tau,
            "mode": ws.mode,
            "shots_per_pauli": ws.shots_per_pauli,
            "layers": ws.layers,
            "edge_order": None if ws.edge_order is None else [list(e) for e in ws.edge_order],
            "seed": ws.seed,
        },
        "init_params": None if config.init_params is None else [float(v) for v in config.init_params],
        "init_seed": config.init_seed,
        "init_range": config.init_range,
        "max_evaluations": config.max_evaluations,
        "seed": config.seed,
        "fidelity_threshold": config.fidelity_threshold,
        "edge_order": None if config.edge_order is None else [list(e) for e in config.edge_order],
    }


def record_dict(rec):
    return {"index": rec.index, "cvar": rec.cvar, "std_error": rec.std_error,
            "fidelity": rec.fidelity, "params_hash": rec.params_hash}


def summary_dict(trace):
    s = trace.summary
    return {
        "success": s.success,
        "max_fidelity": s.max_fidelity,
        "iterations_to_threshold": s.iterations_to_threshold,
        "best_cvar": s.best_cvar,
        "best_eval_index": s.best_eval_index,
        "evaluations": s.evaluations,
        "metadata": trace.metadata,
    }
