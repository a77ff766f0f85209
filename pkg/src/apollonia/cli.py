"""Command line front end: generate / solve / occupancy / experiment.

One binary, subcommand style, flags only.  Every subcommand honors
``--json`` for machine-readable output.  Subcommands that write a file
drop a ``<out>.manifest.json`` next to it recording the subcommand, the
full parameter set, the seeds, SHA-256 hashes of inputs and outputs,
and the wall-clock time; re-running with the recorded parameters
reproduces the output files byte for byte (row order is fixed by
(seed, index), and the wall clock lives only in the manifest).

Exit codes: 0 success, 2 bad flags (argparse), 3 domain error,
4 capacity guard.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import sys
import time
from pathlib import Path

from .analysis import AnalysisParams, round_trial, scaling_trial
from .errors import CapacityError, DomainError
from .longest_path import (
    heuristic_long_path,
    longest_path_bruteforce,
    longest_path_exact,
)
from .occupancy import OccupancyLaw, count_tail_violations, occupancy_pmf
from .ran import adjacency, deserialize, generate, serialize

MANIFEST_FORMAT = "run-manifest-v1"


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(
    out: Path,
    subcommand: str,
    parameters: dict,
    seeds: list,
    inputs: dict,
    wall_clock: float,
) -> None:
    manifest = {
        "format": MANIFEST_FORMAT,
        "subcommand": subcommand,
        "parameters": parameters,
        "seeds": seeds,
        "inputs": inputs,
        "outputs": {out.name: _sha256(out)},
        "wall_clock_seconds": wall_clock,
    }
    sidecar = out.with_name(out.name + ".manifest.json")
    sidecar.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _emit(args: argparse.Namespace, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def _parse_seeds(text: str) -> list:
    """Seed set syntax: '7', '0..29' (inclusive), or comma-joined mix."""
    seeds: list = []
    for token in text.split(","):
        token = token.strip()
        if ".." in token:
            lo_text, hi_text = token.split("..", 1)
            lo, hi = int(lo_text), int(hi_text)
            if hi < lo:
                raise argparse.ArgumentTypeError(f"empty seed range {token!r}")
            seeds.extend(range(lo, hi + 1))
        elif token:
            seeds.append(int(token))
    if not seeds:
        raise argparse.ArgumentTypeError(f"no seeds in {text!r}")
    return seeds


def _parse_sizes(text: str) -> list:
    sizes = [int(tok) for tok in text.split(",") if tok.strip()]
    if not sizes:
        raise argparse.ArgumentTypeError(f"no sizes in {text!r}")
    return sizes


# -- generate -------------------------------------------------------------


def _cmd_generate(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    ran = generate(args.n, args.seed)
    out = Path(args.out)
    out.write_bytes(serialize(ran))
    _write_manifest(
        out,
        "generate",
        {"n": args.n, "seed": args.seed, "out": str(args.out)},
        [args.seed],
        {},
        time.perf_counter() - t0,
    )
    _emit(
        args,
        {"n": ran.n, "seed": args.seed, "out": str(out), "sha256": _sha256(out)},
        f"wrote {out} (n={ran.n}, seed={args.seed})",
    )
    return 0


# -- solve ----------------------------------------------------------------


def _cmd_solve(args: argparse.Namespace) -> int:
    data = Path(args.infile).read_bytes()
    ran = deserialize(data)
    if args.method == "exact":
        length, path = longest_path_exact(ran)
    elif args.method == "brute":
        length, path = longest_path_bruteforce(adjacency(ran))
    else:
        path = heuristic_long_path(ran)
        length = len(path) - 1
    payload: dict = {"length": length}
    if args.emit_path:
        payload["path"] = [int(v) for v in path]
    print(json.dumps(payload, sort_keys=True))
    return 0


# -- occupancy ------------------------------------------------------------


def _cmd_occupancy_pmf(args: argparse.Namespace) -> int:
    law = OccupancyLaw(faces=args.faces, marked=args.marked, insertions=args.insertions)
    ms = [args.m] if args.m is not None else list(range(args.insertions + 1))
    rows = [(m, occupancy_pmf(law, m)) for m in ms]
    if args.json:
        print(
            json.dumps(
                {
                    "faces": args.faces,
                    "marked": args.marked,
                    "insertions": args.insertions,
                    "pmf": [{"m": m, "probability": p} for m, p in rows],
                },
                sort_keys=True,
            )
        )
    else:
        print("m,probability")
        for m, p in rows:
            print(f"{m},{p!r}")
    return 0


def _cmd_occupancy_tailcheck(args: argparse.Namespace) -> int:
    ran = generate(args.sigma, args.seed)
    report = count_tail_violations(
        ran, args.sigma, args.tau, args.insertions, args.trials, args.seed
    )
    payload = {
        "violations": report.violations,
        "trials": report.trials,
        "threshold": report.threshold,
        "worst": report.worst,
        "vacuous": report.vacuous,
        "below_min_marked": report.below_min_marked,
    }
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print("violations,trials,threshold,worst,vacuous,below_min_marked")
        print(
            f"{report.violations},{report.trials},{report.threshold!r},"
            f"{report.worst},{str(report.vacuous).lower()},"
            f"{str(report.below_min_marked).lower()}"
        )
    return 0


# -- experiments ----------------------------------------------------------


def _rounds_worker(task: tuple) -> tuple:
    n, seed, alpha, c, override = task
    report = round_trial(n, seed, alpha=alpha, c=c, scale_exponent_override=override)
    rows = [
        (
            seed,
            r.index,
            r.sigma,
            r.visited_faces,
            r.ratio,
            r.rich_count,
            r.rich_long_count,
        )
        for r in report.rows
    ]
    return seed, rows


def _scaling_worker(task: tuple) -> dict:
    n, seed, alpha, c = task
    return scaling_trial(n, seed, alpha=alpha, c=c)


def _run_tasks(tasks: list, worker, parallel: int) -> list:
    if parallel <= 1:
        return [worker(t) for t in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=parallel) as pool:
        return list(pool.map(worker, tasks))


def _cmd_experiment_rounds(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    override = 1 / 3 if args.profile == "thm2" else None
    AnalysisParams(
        n=args.n, alpha=args.alpha, c=args.c, scale_exponent_override=override
    )  # validate before spawning workers
    seeds = sorted(set(args.seeds))
    tasks = [(args.n, s, args.alpha, args.c, override) for s in seeds]
    results = _run_tasks(tasks, _rounds_worker, args.parallel)
    results.sort(key=lambda item: item[0])
    out = Path(args.out)
    lines = ["seed,i,sigma_i,tau_i,ratio,J,J1"]
    for _, rows in results:
        for seed, i, sigma, tau, ratio, j, j1 in rows:
            lines.append(f"{seed},{i},{sigma},{tau},{ratio!r},{j},{j1}")
    out.write_text("\n".join(lines) + "\n")
    _write_manifest(
        out,
        "experiment rounds",
        {
            "n": args.n,
            "seeds": args.raw_seeds,
            "alpha": args.alpha,
            "c": args.c,
            "profile": args.profile,
            "out": str(args.out),
            "parallel": args.parallel,
        },
        seeds,
        {},
        time.perf_counter() - t0,
    )
    _emit(
        args,
        {"out": str(out), "rows": len(lines) - 1, "sha256": _sha256(out)},
        f"wrote {out} ({len(lines) - 1} rows, {len(seeds)} seeds)",
    )
    return 0


def _cmd_experiment_scaling(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    for n in args.sizes:
        AnalysisParams(n=n, alpha=args.alpha, c=args.c)  # validate sizes up front
    seeds = list(range(args.seeds_per_size))
    tasks = [(n, s, args.alpha, args.c) for n in sorted(set(args.sizes)) for s in seeds]
    rows = _run_tasks(tasks, _scaling_worker, args.parallel)
    rows.sort(key=lambda r: (r["n"], r["seed"]))
    out = Path(args.out)
    lines = ["n,seed,L_exact,L_heuristic,polylog,stretched_exp,rounds"]
    for r in rows:
        lines.append(
            f"{r['n']},{r['seed']},{r['L_exact']},{r['L_heuristic']},"
            f"{r['polylog']!r},{r['stretched_exp']!r},{r['rounds']!r}"
        )
    out.write_text("\n".join(lines) + "\n")
    _write_manifest(
        out,
        "experiment scaling",
        {
            "sizes": args.raw_sizes,
            "seeds_per_size": args.seeds_per_size,
            "alpha": args.alpha,
            "c": args.c,
            "out": str(args.out),
            "parallel": args.parallel,
        },
        seeds,
        {},
        time.perf_counter() - t0,
    )
    _emit(
        args,
        {"out": str(out), "rows": len(rows), "sha256": _sha256(out)},
        f"wrote {out} ({len(rows)} rows)",
    )
    return 0


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apollonia",
        description="Random Apollonian networks: generation, longest paths, "
        "occupancy laws, experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="grow an instance and write it to a file")
    p_gen.add_argument("--n", type=int, required=True, help="number of insertions")
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--out", required=True, help="output instance file (JSON)")
    p_gen.add_argument("--json", action="store_true", help="machine-readable receipt")
    p_gen.set_defaults(func=_cmd_generate)

    p_solve = sub.add_parser("solve", help="longest path of a stored instance")
    p_solve.add_argument("--in", dest="infile", required=True, help="instance file")
    p_solve.add_argument(
        "--method", choices=("exact", "brute", "heuristic"), default="exact"
    )
    p_solve.add_argument(
        "--emit-path", action="store_true", help="include the witness vertex list"
    )
    p_solve.add_argument("--json", action="store_true", help="(output is always JSON)")
    p_solve.set_defaults(func=_cmd_solve)

    p_occ = sub.add_parser("occupancy", help="marked-face occupancy laws")
    occ_sub = p_occ.add_subparsers(dest="occupancy_command", required=True)

    p_pmf = occ_sub.add_parser("pmf", help="exact occupancy pmf (CSV m,probability)")
    p_pmf.add_argument("--faces", type=int, required=True, help="total face count")
    p_pmf.add_argument("--marked", type=int, required=True, help="marked face count")
    p_pmf.add_argument("--insertions", type=int, required=True)
    p_pmf.add_argument("--m", type=int, default=None, help="single point to evaluate")
    p_pmf.add_argument("--json", action="store_true")
    p_pmf.set_defaults(func=_cmd_occupancy_pmf)

    p_tail = occ_sub.add_parser(
        "tailcheck", help="Monte Carlo check of the worst-group occupancy ceiling"
    )
    p_tail.add_argument("--sigma", type=int, required=True, help="prefix size")
    p_tail.add_argument("--tau", type=int, required=True, help="group size")
    p_tail.add_argument("--insertions", type=int, required=True)
    p_tail.add_argument("--trials", type=int, required=True)
    p_tail.add_argument("--seed", type=int, required=True)
    p_tail.add_argument("--json", action="store_true")
    p_tail.set_defaults(func=_cmd_occupancy_tailcheck)

    p_exp = sub.add_parser("experiment", help="ensemble experiment drivers")
    exp_sub = p_exp.add_subparsers(dest="experiment_command", required=True)

    p_rounds = exp_sub.add_parser(
        "rounds", help="round-decomposition experiment over a seed ensemble"
    )
    p_rounds.add_argument("--n", type=int, required=True)
    p_rounds.add_argument(
        "--seeds",
        type=_parse_seeds,
        required=True,
        help="seed set, e.g. 0..29 or 1,2,5",
    )
    p_rounds.add_argument("--alpha", type=float, default=0.3)
    p_rounds.add_argument("--c", type=float, default=0.6)
    p_rounds.add_argument(
        "--profile",
        choices=("default", "thm2"),
        default="default",
        help="thm2 switches the slow-scale exponent to 1/3",
    )
    p_rounds.add_argument("--out", required=True, help="output CSV")
    p_rounds.add_argument("--parallel", type=int, default=1, metavar="K")
    p_rounds.add_argument("--json", action="store_true")
    p_rounds.set_defaults(func=_cmd_experiment_rounds)

    p_scaling = exp_sub.add_parser(
        "scaling", help="exact vs heuristic lengths against reference bounds"
    )
    p_scaling.add_argument(
        "--sizes", type=_parse_sizes, required=True, help="comma list, e.g. 1024,2048"
    )
    p_scaling.add_argument("--seeds-per-size", type=int, required=True)
    p_scaling.add_argument("--alpha", type=float, default=0.3)
    p_scaling.add_argument("--c", type=float, default=0.6)
    p_scaling.add_argument("--out", required=True, help="output CSV")
    p_scaling.add_argument("--parallel", type=int, default=1, metavar="K")
    p_scaling.add_argument("--json", action="store_true")
    p_scaling.set_defaults(func=_cmd_experiment_scaling)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "seeds"):
        args.raw_seeds = ",".join(map(str, args.seeds))
    if hasattr(args, "sizes"):
        args.raw_sizes = ",".join(map(str, args.sizes))
    try:
        return args.func(args)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except CapacityError as e:
        print(f"error: {e}", file=sys.stderr)
        return 4
    except FileNotFoundError as e:
        print(f"error: no such file: {e.filename}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
