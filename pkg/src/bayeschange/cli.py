"""Command-line harness: configuration, experiment orchestration, result emission.

Subcommands
-----------
simulate    sample traces from the generative model and dump them as CSV
tune        grid-search each algorithm's free parameter per environment cell
benchmark   shared-trace MSE comparison of algorithms against exact inference
robustness  mean regret under a mismatched assumed change probability
predict     the two binned surprise-dissociation experiments

Every command is deterministic given its flags and seeds; re-running
overwrites byte-identical outputs.  Each CSV gets a JSON sidecar recording
the fully resolved parameter set, a git-describe string, and the seeds.
Flags override values from an optional JSON config file (``--config``).

Exit codes: 0 on success, 2 for usage errors, 3 for numeric failures.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import subprocess
import sys
from pathlib import Path

import numpy as np

from .environment import categorical_task, derive_seed, gaussian_task, simulate, write_trace_csv
from .estimators import NumericError, TUNABLE_PARAM, parse_algorithm
from .evaluation import DEFAULT_GRIDS, benchmark, desk_horizon, grid_search, robustness
from .predictions import PredictionConfig, run_prediction1, run_prediction2

_DEF_ALGORITHMS = "exact,mp20,pf20,var_smile,smile,nas10,nas12,leaky"
_PC_LEVELS = "0.1,0.05,0.01,0.005,0.001,0.0001"


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _git_describe() -> str:
    try:
        out = subprocess.run(["git", "describe", "--always", "--dirty"],
                             capture_output=True, text=True, cwd=os.path.dirname(__file__))
        if out.returncode == 0:
            return out.stdout.strip()
    except OSError:
        pass
    return "unknown"


def _write_csv(path: Path, header: list[str], rows, meta: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    sidecar = path.with_suffix(".meta.json")
    payload = dict(meta)
    payload["git_describe"] = _git_describe()
    with open(sidecar, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def _floats(text: str) -> list[float]:
    return [float(v) for v in str(text).split(",") if v != ""]


def _resolve(args: argparse.Namespace, parser: argparse.ArgumentParser) -> dict:
    """Merge config-file values under explicit flags; flags win."""
    spec = {}
    if args.config:
        try:
            with open(args.config) as fh:
                spec.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config {args.config}: {exc}")
    for key, value in vars(args).items():
        if key in ("config", "func") or value is None:
            continue
        spec[key] = value
    return spec


def _env_for(task: str, env_param: float, p_c: float, T: int, seed: int):
    if task == "gaussian":
        return gaussian_task(env_param, p_c, T, seed)
    return categorical_task(env_param, p_c, T, seed)


def _algorithm_list(spec: dict, parser) -> list[tuple[str, str, int]]:
    """Parse the --algorithms flag into (name, kind, n_particles) triples."""
    out = []
    default_n = int(spec.get("particles", 20))
    for name in str(spec.get("algorithms", _DEF_ALGORITHMS)).split(","):
        name = name.strip()
        if not name:
            continue
        try:
            kind, n = parse_algorithm(name)
        except ValueError as exc:
            parser.error(str(exc))
        out.append((name, kind, n if n is not None else default_n))
    return out


def _default_param(kind: str, p_c: float) -> float:
    """Untuned fallback parameter: the environment's own change probability."""
    if TUNABLE_PARAM[kind] == "p_c":
        return p_c
    if TUNABLE_PARAM[kind] == "m":
        return p_c / (1.0 - p_c)
    return 1.0 - p_c  # leaky leak


def _load_tuned(path: str, parser) -> dict:
    tuned = {}
    try:
        with open(path) as fh:
            for row in csv.DictReader(fh):
                key = (row["algorithm"], row["task"], float(row["env_param"]),
                       float(row["p_c"]))
                tuned[key] = float(row["param"])
    except (OSError, KeyError, ValueError) as exc:
        parser.error(f"cannot read tuned table {path}: {exc}")
    return tuned


def _check_pc(values, parser) -> None:
    for p in values:
        if not 0.0 < p < 1.0:
            parser.error(f"--pc values must lie strictly inside (0, 1), got {p}")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _cmd_simulate(args, parser) -> int:
    spec = _resolve(args, parser)
    task = spec["task"]
    p_c = _floats(spec["pc"])[0]
    _check_pc([p_c], parser)
    env_param = _floats(spec["sigma"] if task == "gaussian" else spec["s"])[0]
    env = _env_for(task, env_param, p_c, int(spec["T"]), int(spec["seed"]))
    trace = simulate(env)
    out = Path(spec.get("out", "out"))
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"trace_{task}_{_fmt(env_param)}_{_fmt(p_c)}_{spec['seed']}.csv"
    write_trace_csv(trace, path, env.model)
    with open(path.with_suffix(".meta.json"), "w") as fh:
        json.dump({"spec": spec, "git_describe": _git_describe(),
                   "seeds": [int(spec["seed"])]}, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")
    print(path)
    return 0


def _cmd_tune(args, parser) -> int:
    spec = _resolve(args, parser)
    task = spec["task"]
    pcs = _floats(spec.get("pc", _PC_LEVELS))
    _check_pc(pcs, parser)
    env_params = _floats(spec["sigma"] if task == "gaussian" else spec["s"])
    algorithms = _algorithm_list(spec, parser)
    n_seeds = int(spec.get("seeds", 3))
    seed = int(spec.get("seed", 0))
    rows, table_rows = [], []
    for env_param in env_params:
        for p_c in pcs:
            T = int(spec["T"]) if spec.get("T") else desk_horizon(p_c)
            env = _env_for(task, env_param, p_c, T, derive_seed(seed, 1))
            for name, kind, n in algorithms:
                grid = spec.get("grids", {}).get(kind, DEFAULT_GRIDS[kind])
                best, table = grid_search(kind, env, grid, n_seeds=n_seeds, n_particles=n)
                rows.append([name, task, env_param, p_c, best,
                             dict(table)[best]])
                for param, m in table:
                    table_rows.append([name, task, env_param, p_c, param, m])
    out = Path(spec.get("out", "out"))
    meta = {"spec": spec, "seeds": [seed]}
    _write_csv(out / "tuned.csv",
               ["algorithm", "task", "env_param", "p_c", "param", "mse"], rows, meta)
    _write_csv(out / "tuning_table.csv",
               ["algorithm", "task", "env_param", "p_c", "param", "mse"], table_rows, meta)
    print(out / "tuned.csv")
    return 0


def _cmd_benchmark(args, parser) -> int:
    spec = _resolve(args, parser)
    task = spec["task"]
    pcs = _floats(spec.get("pc", _PC_LEVELS))
    _check_pc(pcs, parser)
    env_params = _floats(spec["sigma"] if task == "gaussian" else spec["s"])
    algorithms = _algorithm_list(spec, parser)
    n_seeds = int(spec.get("seeds", 10))
    seed = int(spec.get("seed", 0))
    n_transient = int(spec.get("transient", 0))
    tuned = _load_tuned(spec["use_tuned"], parser) if spec.get("use_tuned") else None

    cells = [(ep, pc) for ep in env_params for pc in pcs]
    envs = []
    cell_algs = []
    for ep, pc in cells:
        T = int(spec["T"]) if spec.get("T") else desk_horizon(pc)
        envs.append(_env_for(task, ep, pc, T, derive_seed(seed, 1)))
        algs = {}
        for name, kind, n in algorithms:
            if tuned is not None:
                key = (name, task, ep, pc)
                if key not in tuned:
                    parser.error(f"tuned table has no entry for {key}")
                param = tuned[key]
            else:
                param = _default_param(kind, pc)
            algs[name] = (kind, param, n)
        cell_algs.append(algs)

    result_rows = []
    heat = {}
    transient_rows = []
    for (ep, pc), env, algs in zip(cells, envs, cell_algs):
        rows, transients = benchmark([env], algs, n_seeds=n_seeds,
                                     n_jobs=int(spec.get("jobs", 0)) or None,
                                     n_transient=n_transient)
        for r in rows:
            name = r["algorithm"]
            result_rows.append([name, ep, pc, algs[name][1], r["seed"],
                                r["mse"], r["delta_mse"]])
            heat.setdefault((name, ep, pc), []).append(r["delta_mse"])
        for (_, name), curves in transients.items():
            mean_curve = np.nanmean(np.vstack(curves), axis=0)
            for n_idx, v in enumerate(mean_curve):
                if not math.isnan(v):
                    transient_rows.append([name, ep, pc, n_idx + 1, v])

    out = Path(spec.get("out", "out"))
    meta = {"spec": spec, "seeds": [seed]}
    _write_csv(out / "results.csv",
               ["algorithm", "env_param", "p_c", "param_value", "seed", "mse", "delta_mse"],
               result_rows, meta)
    heat_rows = [[name, ep, pc, float(np.mean(v)),
                  float(np.std(v, ddof=1) / math.sqrt(len(v))) if len(v) > 1 else math.nan]
                 for (name, ep, pc), v in sorted(heat.items())]
    _write_csv(out / "heatmap.csv",
               ["algorithm", "env_param", "p_c", "mean_delta_mse", "sem_delta_mse"],
               heat_rows, meta)
    if transient_rows:
        _write_csv(out / "transient.csv",
                   ["algorithm", "env_param", "p_c", "n", "transient_mse"],
                   transient_rows, meta)
    print(out / "results.csv")
    return 0


def _cmd_robustness(args, parser) -> int:
    spec = _resolve(args, parser)
    task = spec["task"]
    pcs = _floats(spec.get("pc", _PC_LEVELS))
    _check_pc(pcs, parser)
    pc_assumed = float(spec["pc_assumed"])
    _check_pc([pc_assumed], parser)
    env_param = _floats(spec["sigma"] if task == "gaussian" else spec["s"])[0]
    algorithms = _algorithm_list(spec, parser)
    n_seeds = int(spec.get("seeds", 3))
    seed = int(spec.get("seed", 0))
    factory = gaussian_task if task == "gaussian" else categorical_task
    out = Path(spec.get("out", "out"))
    horizon = int(spec["T"]) if spec.get("T") else None

    for name, kind, n in algorithms:
        if TUNABLE_PARAM[kind] == "p_c":
            tuned_param = pc_assumed
        else:
            tune_env = _env_for(task, env_param, pc_assumed,
                                int(spec.get("tune_T", 20000)), derive_seed(seed, 1))
            tuned_param, _ = grid_search(kind, tune_env, DEFAULT_GRIDS[kind],
                                         n_seeds=n_seeds, n_particles=n)
        rows = robustness(kind, factory, env_param, pc_assumed, pcs,
                          n_seeds=n_seeds, n_particles=n, horizon=horizon,
                          n_jobs=int(spec.get("jobs", 0)) or None,
                          tuned_param=tuned_param, seed=seed)
        csv_rows = [[name, env_param, pc_assumed, pc, k, r] for pc, k, r in rows]
        _write_csv(out / f"regret_{name}.csv",
                   ["algorithm", "env_param", "pc_assumed", "p_c", "seed", "regret"],
                   csv_rows, {"spec": spec, "seeds": [seed]})
    print(out)
    return 0


def _cmd_predict(args, parser) -> int:
    spec = _resolve(args, parser)
    which = int(spec["which"])
    pc = float(spec.get("pc", 0.1))
    _check_pc([pc], parser)
    seed = int(spec.get("seed", 0))
    out = Path(spec.get("out", "out"))
    algorithms = _algorithm_list({**spec, "algorithms": spec.get("algorithms", "nas12,pf20")},
                                 parser)
    for name, kind, n in algorithms:
        config = PredictionConfig(
            kind=kind, param=_default_param(kind, pc), n_particles=n,
            sigma=float(spec.get("sigma", 0.5)), p_c=pc,
            horizon=int(spec.get("T", 500)),
            n_subjects=int(spec.get("subjects", 20)))
        if which == 1:
            rows = run_prediction1(config, seed)
            csv_rows = [[r["delta"], r["sign"], r["mean_sbf"], r["sem_sbf"],
                         r["mean_ssh"], r["sem_ssh"]] for r in rows]
            _write_csv(out / f"prediction1_{name}.csv",
                       ["delta", "sign", "mean_sbf", "sem_sbf", "mean_ssh", "sem_ssh"],
                       csv_rows, {"spec": spec, "seeds": [seed]})
        else:
            rows = run_prediction2(config, seed)
            csv_rows = [[r["p"], r["mean_sbf"], r["sem_sbf"],
                         r["mean_ssh"], r["sem_ssh"]] for r in rows]
            _write_csv(out / f"prediction2_{name}.csv",
                       ["p", "mean_sbf", "sem_sbf", "mean_ssh", "sem_ssh"],
                       csv_rows, {"spec": spec, "seeds": [seed]})
    print(out)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bayeschange",
        description="Online Bayesian estimation benchmarks for abruptly changing environments")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file with default parameter values")
        p.add_argument("--out", help="output directory (default: out)")
        p.add_argument("--seed", type=int, help="base seed (default: 0)")
        p.add_argument("--jobs", type=int, help="worker processes (default: all cores)")
        p.add_argument("--task", choices=["gaussian", "categorical"])
        p.add_argument("--sigma", help="Gaussian noise levels, comma separated")
        p.add_argument("--s", help="categorical stochasticity levels, comma separated")
        p.add_argument("--pc", help="change probabilities, comma separated")
        p.add_argument("--T", type=int, help="horizon override")
        p.add_argument("--seeds", type=int, help="number of task instances")
        p.add_argument("--algorithms", help="comma-separated algorithm names")
        p.add_argument("--particles", type=int, help="default particle count N")

    p = sub.add_parser("simulate", help="sample and dump one trace")
    common(p)
    p.set_defaults(func=_cmd_simulate, task="gaussian", sigma="1", s="1",
                   pc="0.01", T=1000, seed=0)

    p = sub.add_parser("tune", help="grid-search free parameters")
    common(p)
    p.set_defaults(func=_cmd_tune, task="gaussian", sigma="1", s="1", seed=0)

    p = sub.add_parser("benchmark", help="MSE benchmark against exact inference")
    common(p)
    p.add_argument("--use-tuned", dest="use_tuned", help="tuned.csv from the tune command")
    p.add_argument("--transient", type=int, help="emit transient MSE curves up to n")
    p.set_defaults(func=_cmd_benchmark, task="gaussian", sigma="1", s="1", seed=0)

    p = sub.add_parser("robustness", help="mean regret under mismatched p_c")
    common(p)
    p.add_argument("--pc-assumed", dest="pc_assumed", required=True,
                   help="change probability the algorithms are tuned for")
    p.add_argument("--tune-T", dest="tune_T", type=int,
                   help="horizon for tuning m/omega parameters at the assumed p_c")
    p.set_defaults(func=_cmd_robustness, task="gaussian", sigma="1", s="1", seed=0)

    p = sub.add_parser("predict", help="binned surprise-dissociation experiments")
    common(p)
    p.add_argument("--which", type=int, choices=[1, 2], required=True)
    p.add_argument("--subjects", type=int, help="number of simulated subjects")
    p.set_defaults(func=_cmd_predict, task="gaussian", seed=0)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
