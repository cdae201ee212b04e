"""Command-line interface.

Subcommands:

  generate    write seeded random instances as JSON files
  solve       exact brute-force ground energy and optimal set of an instance
  warmstart   warm-start parameters (and their per-edge overlaps) for an instance
  vqe         one optimization run, trace and summary written as files
  batch       seeded sweep over sizes x instances x init modes, with aggregate CSV
  diagnose    cost-concentration / gradient-magnitude sweep, CSV output
  resources   two-qubit gate budget of an ansatz family at a given size

Exit codes: 0 success, 2 invalid input, 3 resource limits, 4 internal errors.
Every output file starts with format_version and a provenance block (tool
version, seeds, config hash). Outputs are deterministic: rerunning a command
with the same inputs rewrites byte-identical files, independent of
--parallelism. Errors are reported as one JSON object on stderr.

The environment variable VQELAB_OUT_ROOT sets the base directory used when
--out is omitted (default: the working directory).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import hashlib
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from . import ansatz as ansatz_mod
from . import diagnostics as diag_mod
from . import qubo
from . import vqe as vqe_mod
from . import warmstart as ws_mod
from .errors import ResourceLimitError
from .statevector import fidelity

FORMAT_VERSION = 1


def _config_hash(config):
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _provenance(seeds, config):
    return {
        "tool": "vqelab",
        "tool_version": __version__,
        "seeds": seeds,
        "config_sha256": _config_hash(config),
    }


def _write_json(path, payload):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _emit_json(payload, out):
    if out is None:
        print(json.dumps(payload, indent=1, sort_keys=True))
    else:
        _write_json(out, payload)
        print(str(out))


def _out_root():
    return Path(os.environ.get("VQELAB_OUT_ROOT", "."))


def _resolve_out(value, default_name):
    return Path(value) if value else _out_root() / default_name


# ---------------------------------------------------------------- generate

def cmd_generate(args):
    out_dir = _resolve_out(args.out, "instances")
    out_dir.mkdir(parents=True, exist_ok=True)
    config = {"sizes": args.n, "count": args.count, "seed": args.seed}
    for n in args.n:
        for k in range(args.count):
            seed = args.seed + k
            instance = qubo.generate_instance(n, seed)
            path = out_dir / f"instance_n{n}_s{seed}.json"
            qubo.save_instance(instance, path,
                               provenance=_provenance({"instance_seed": seed}, config))
            print(str(path))
    return 0


# ---------------------------------------------------------------- solve

def cmd_solve(args):
    instance = qubo.load_instance(args.instance)
    optimal = qubo.brute_force_solve(instance)
    config = {"instance": Path(args.instance).name}
    payload = {
        "format_version": FORMAT_VERSION,
        "provenance": _provenance({"instance_seed": instance.seed}, config),
        "n": instance.n,
        "instance_seed": instance.seed,
        "min_energy": optimal.min_energy,
        "degeneracy": optimal.degeneracy,
        "optimal_states": [int(s) for s in optimal.states],
    }
    _emit_json(payload, args.out)
    return 0


# ---------------------------------------------------------------- warmstart

def cmd_warmstart(args):
    instance = qubo.load_instance(args.instance)
    config = ws_mod.WarmStartConfig(tau=args.tau, mode=args.mode,
                                    shots_per_pauli=args.shots_per_pauli,
                                    layers=args.layers, seed=args.seed)
    circuit = ansatz_mod.build_sia(instance, variant="yz", layers=config.layers)
    result = ws_mod.warm_start(instance, circuit, config)
    state = result.state
    if state is None:
        state = ansatz_mod.prepare(circuit, result.params)
    optimal = qubo.brute_force_solve(instance)
    config_view = {"tau": config.tau, "mode": config.mode,
                   "shots_per_pauli": config.shots_per_pauli, "layers": config.layers}
    payload = {
        "format_version": FORMAT_VERSION,
        "provenance": _provenance({"instance_seed": instance.seed, "seed": config.seed},
                                  config_view),
        "n": instance.n,
        "instance_seed": instance.seed,
        "tau": config.tau,
        "mode": config.mode,
        "layers": config.layers,
        "params": [float(v) for v in result.params],
        "per_edge": [asdict(rec) for rec in result.per_edge],
        "fidelity": fidelity(state, optimal),
    }
    _emit_json(payload, args.out)
    return 0


# ---------------------------------------------------------------- vqe

def _run_config_from_args(args):
    ws_config = None
    if args.init == "warm_start":
        ws_config = ws_mod.WarmStartConfig(tau=args.tau, mode=args.ws_mode,
                                           shots_per_pauli=args.ws_shots,
                                           layers=args.layers, seed=args.ws_seed)
    return vqe_mod.RunConfig(
        ansatz=args.ansatz, layers=args.layers, alpha=args.alpha,
        shots=None if args.exact else args.shots,
        init=args.init, warm_start=ws_config,
        init_seed=args.init_seed,
        max_evaluations=args.budget, seed=args.seed,
        fidelity_threshold=args.threshold)


def _write_trace(out_dir, stem, trace):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    provenance = _provenance(
        {"seed": trace.metadata["config"]["seed"],
         "instance_seed": trace.metadata["instance_seed"]},
        trace.metadata["config"])
    trace_path = out_dir / f"{stem}.trace.jsonl"
    with open(trace_path, "w", encoding="utf-8") as fh:
        header = {"format_version": FORMAT_VERSION, "provenance": provenance}
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for rec in trace.records:
            fh.write(json.dumps(vqe_mod.record_dict(rec), sort_keys=True) + "\n")
    summary_path = out_dir / f"{stem}.summary.json"
    payload = {"format_version": FORMAT_VERSION, "provenance": provenance}
    payload.update(vqe_mod.summary_dict(trace))
    _write_json(summary_path, payload)
    return trace_path, summary_path


def cmd_vqe(args):
    instance = qubo.load_instance(args.instance)
    config = _run_config_from_args(args)
    trace = vqe_mod.run_vqe(instance, config)
    out_dir = _resolve_out(args.out, "runs")
    stem = f"vqe_n{instance.n}_s{instance.seed}_{config.init}"
    trace_path, summary_path = _write_trace(out_dir, stem, trace)
    print(str(trace_path))
    print(str(summary_path))
    print(json.dumps({"success": trace.summary.success,
                      "max_fidelity": trace.summary.max_fidelity,
                      "best_cvar": trace.summary.best_cvar,
                      "evaluations": trace.summary.evaluations}, sort_keys=True))
    return 0


# ---------------------------------------------------------------- batch

def _batch_spec(path):
    with open(path, "r", encoding="utf-8") as fh:
        spec = json.load(fh)
    defaults = {
        "instances_per_size": 10,
        "base_seed": 0,
        "init_modes": ["zeros", "warm_start"],
        "ansatz": "sia_yz",
        "layers": 1,
        "alpha": 0.01,
        "shots": 10_000,
        "budget_factor": 50,
        "fidelity_threshold": 0.01,
        "run_seed": 0,
        "warm_start": {"tau": 0.2, "mode": "measuring_shots", "shots_per_pauli": 1000},
    }
    if "sizes" not in spec:
        raise ValueError("batch spec needs a 'sizes' list")
    merged = dict(defaults)
    merged.update(spec)
    return merged


def _batch_run_config(spec, size, index, mode):
    mode_rank = spec["init_modes"].index(mode)
    derived = np.random.SeedSequence(
        (int(spec["run_seed"]), int(size), int(index), int(mode_rank))).generate_state(2)
    ws_config = None
    if mode == "warm_start":
        ws = spec["warm_start"]
        ws_config = ws_mod.WarmStartConfig(tau=float(ws["tau"]), mode=str(ws["mode"]),
                                           shots_per_pauli=int(ws["shots_per_pauli"]),
                                           layers=int(spec["layers"]), seed=int(derived[1]))
    return vqe_mod.RunConfig(
        ansatz=str(spec["ansatz"]), layers=int(spec["layers"]), alpha=float(spec["alpha"]),
        shots=None if spec["shots"] is None else int(spec["shots"]),
        init=mode, warm_start=ws_config,
        max_evaluations=int(spec["budget_factor"]) * int(size),
        seed=int(derived[0]),
        fidelity_threshold=float(spec["fidelity_threshold"]))


def _batch_worker(task):
    spec, size, index, mode = task
    instance = qubo.generate_instance(size, int(spec["base_seed"]) + index)
    config = _batch_run_config(spec, size, index, mode)
    trace = vqe_mod.run_vqe(instance, config)
    return (size, index, mode), trace


def _batch_tasks(spec):
    return [(spec, size, index, mode)
            for size in spec["sizes"]
            for index in range(spec["instances_per_size"])
            for mode in spec["init_modes"]]


def _aggregate_rows(spec, results):
    rows = []
    for size in spec["sizes"]:
        for mode in spec["init_modes"]:
            traces = [results[(size, index, mode)]
                      for index in range(spec["instances_per_size"])]
            successes = [t.summary.success for t in traces]
            iters = [t.summary.iterations_to_threshold for t in traces
                     if t.summary.iterations_to_threshold is not None]
            rel = []
            for t in traces:
                if len(t.records) >= 10:
                    rec = t.records[9]
                    if rec.std_error is not None and rec.cvar != 0.0:
                        rel.append(rec.std_error / abs(rec.cvar))
            row = {
                "n": size,
                "init": mode,
                "runs": len(traces),
                "successes": int(sum(successes)),
                "success_rate": float(np.mean(successes)),
                "mean_iterations_to_threshold": float(np.mean(iters)) if iters else None,
                "stderr_iterations_to_threshold": (
                    float(np.std(iters, ddof=1) / np.sqrt(len(iters)))
                    if len(iters) >= 2 else None),
                "reached_threshold": len(iters),
                "mean_rel_std_error_eval10": float(np.mean(rel)) if rel else None,
                "mean_best_cvar": float(np.mean([t.summary.best_cvar for t in traces])),
            }
            rows.append(row)
    return rows


def run_batch(spec, out_dir, parallelism=1):
    """Execute a batch spec. File contents do not depend on parallelism."""
    out_dir = Path(out_dir)
    tasks = _batch_tasks(spec)
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    results = {}
    if parallelism == 1:
        for task in tasks:
            key, trace = _batch_worker(task)
            results[key] = trace
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=parallelism) as pool:
            for key, trace in pool.map(_batch_worker, tasks):
                results[key] = trace
    instances_dir = out_dir / "instances"
    instances_dir.mkdir(parents=True, exist_ok=True)
    for size in spec["sizes"]:
        for index in range(spec["instances_per_size"]):
            seed = int(spec["base_seed"]) + index
            instance = qubo.generate_instance(size, seed)
            qubo.save_instance(instance, instances_dir / f"instance_n{size}_s{seed}.json",
                               provenance=_provenance({"instance_seed": seed},
                                                      {"size": size, "base_seed": spec["base_seed"]}))
    for (size, index, mode) in sorted(results, key=lambda k: (k[0], k[1], str(k[2]))):
        trace = results[(size, index, mode)]
        stem = f"n{size}_i{index}_{mode}"
        _write_trace(out_dir / "traces", stem, trace)
    rows = _aggregate_rows(spec, results)
    fields = ["n", "init", "runs", "successes", "success_rate",
              "mean_iterations_to_threshold", "stderr_iterations_to_threshold",
              "reached_threshold", "mean_rel_std_error_eval10", "mean_best_cvar"]
    csv_path = out_dir / "aggregate.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if row[k] is None else row[k]) for k in fields})
    summary_payload = {
        "format_version": FORMAT_VERSION,
        "provenance": _provenance({"base_seed": spec["base_seed"],
                                   "run_seed": spec["run_seed"]}, spec),
        "spec": spec,
        "rows": rows,
    }
    _write_json(out_dir / "summary.json", summary_payload)
    return rows


def cmd_batch(args):
    spec = _batch_spec(args.spec)
    out_dir = _resolve_out(args.out, "batch")
    rows = run_batch(spec, out_dir, parallelism=args.parallelism)
    for row in rows:
        print(json.dumps(row, sort_keys=True))
    return 0


# ---------------------------------------------------------------- diagnose

def _diagnose_spec(path):
    with open(path, "r", encoding="utf-8") as fh:
        spec = json.load(fh)
    defaults = {
        "instances": 3,
        "base_seed": 0,
        "layers": [1, 2, 3],
        "alphas": [0.01],
        "n_samples": 500,
        "seed": 0,
        "gradient": {"enabled": True, "tau": 0.2, "fd_step": 1e-3},
    }
    if "sizes" not in spec:
        raise ValueError("diagnose spec needs a 'sizes' list")
    merged = dict(defaults)
    merged.update(spec)
    return merged


def run_diagnose(spec):
    """Cost-concentration (and optional gradient) sweep. Returns CSV-ready rows."""
    grad = spec["gradient"]
    rows = []
    for size in spec["sizes"]:
        instances = [qubo.generate_instance(size, int(spec["base_seed"]) + k)
                     for k in range(spec["instances"])]
        for layers in spec["layers"]:
            starts = []
            if grad.get("enabled", False):
                for instance in instances:
                    circuit = ansatz_mod.build_sia(instance, variant="yz", layers=layers)
                    ws_config = ws_mod.WarmStartConfig(tau=float(grad.get("tau", 0.2)),
                                                       mode="measuring_exact", layers=layers)
                    start = ws_mod.warm_start_measuring(instance, circuit, ws_config)
                    starts.append((instance, circuit, start.params))
            for alpha in spec["alphas"]:
                g_values = [
                    diag_mod.gradient_magnitude(instance, circuit, params,
                                                alpha=float(alpha),
                                                fd_step=float(grad.get("fd_step", 1e-3)))
                    for instance, circuit, params in starts]
                variances = [
                    diag_mod.cost_concentration(instance, layers=layers, alpha=float(alpha),
                                                n_samples=int(spec["n_samples"]),
                                                seed=int(spec["seed"])).var_delta_c
                    for instance in instances]
                rows.append({
                    "n": size,
                    "layers": layers,
                    "depth": 2 * size * layers,
                    "alpha": float(alpha),
                    "instances": len(instances),
                    "var_delta_c": float(np.mean(variances)),
                    "g": float(np.mean(g_values)) if g_values else None,
                })
    return rows


def cmd_diagnose(args):
    spec = _diagnose_spec(args.spec)
    rows = run_diagnose(spec)
    out_path = _resolve_out(args.out, "diagnostics.csv")
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fields = ["n", "layers", "depth", "alpha", "instances", "var_delta_c", "g"]
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if row[k] is None else row[k]) for k in fields})
    print(str(out_path))
    return 0


# ---------------------------------------------------------------- resources

def cmd_resources(args):
    estimate = ansatz_mod.resource_estimate(args.ansatz, args.n, layers=args.layers,
                                            connectivity=args.connectivity)
    print(json.dumps(asdict(estimate), sort_keys=True))
    return 0


# ---------------------------------------------------------------- parser

def build_parser():
    parser = argparse.ArgumentParser(prog="vqelab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write seeded random instances")
    p.add_argument("--n", type=int, nargs="+", required=True, help="problem sizes")
    p.add_argument("--count", type=int, default=1, help="instances per size")
    p.add_argument("--seed", type=int, default=0, help="base seed (instance k gets seed+k)")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="brute-force ground energy and optimal set")
    p.add_argument("instance", help="instance JSON file")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("warmstart", help="warm-start parameters for an instance")
    p.add_argument("instance", help="instance JSON file")
    p.add_argument("--tau", type=float, default=0.2)
    p.add_argument("--mode", default="measuring_exact", choices=ws_mod.MODES)
    p.add_argument("--layers", type=int, default=1)
    p.add_argument("--shots-per-pauli", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0, help="measurement rng seed")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_warmstart)

    p = sub.add_parser("vqe", help="one optimization run")
    p.add_argument("instance", help="instance JSON file")
    p.add_argument("--ansatz", default="sia_yz", choices=vqe_mod.ANSATZE)
    p.add_argument("--layers", type=int, default=1)
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--shots", type=int, default=10_000)
    p.add_argument("--exact", action="store_true", help="exact CVaR instead of sampling")
    p.add_argument("--init", default="zeros", choices=("zeros", "warm_start", "random"))
    p.add_argument("--init-seed", type=int, default=0, help="seed for init=random")
    p.add_argument("--tau", type=float, default=0.2, help="warm start imaginary time step")
    p.add_argument("--ws-mode", default="measuring_exact", choices=ws_mod.MODES)
    p.add_argument("--ws-shots", type=int, default=1000)
    p.add_argument("--ws-seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=None, help="evaluation budget (default 50*n)")
    p.add_argument("--seed", type=int, default=0, help="measurement rng seed")
    p.add_argument("--threshold", type=float, default=0.01, help="success fidelity threshold")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_vqe)

    p = sub.add_parser("batch", help="seeded experiment sweep")
    p.add_argument("spec", help="batch spec JSON file")
    p.add_argument("--out", help="output directory")
    p.add_argument("--parallelism", type=int, default=1,
                   help="worker processes (file contents are unaffected)")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("diagnose", help="cost concentration / gradient sweep")
    p.add_argument("spec", help="diagnose spec JSON file")
    p.add_argument("--out", help="output CSV file")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("resources", help="two-qubit gate budget of an ansatz")
    p.add_argument("--ansatz", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--layers", type=int, default=1)
    p.add_argument("--connectivity", default="all_to_all", choices=("linear", "all_to_all"))
    p.set_defaults(func=cmd_resources)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        _report_error(exc)
        return 3
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        _report_error(exc)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        _report_error(exc)
        return 4


def _report_error(exc):
    print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}),
          file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
