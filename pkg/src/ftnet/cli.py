"""Command-line front end.

Commands: solve, verify, gen, oracle, bench. Exit codes: 0 on success
or a feasible solve, 2 on proven infeasibility, 1 on any error. Reports
go to stdout as stable `key: value` lines (wall time excepted);
solution files are JSON written next to the instance with a `.sol`
suffix unless --out is given.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from .approx import approx_ftp_k, approx_ftp_kplus1
from .errors import FtnetError, InfeasibleError
from .exact import solve_1ftp, solve_kftp_dag
from .feasibility import ftf_feasible_cut, ftf_feasible_enum, ftp_feasible_cut, ftp_feasible_enum
from .flows import CapacityProfile, min_cost_flow
from .ftf import PathSystem, approx_ftf_2, approx_ftf_ellplus1, build_path_system, solve_augmentation
from .generators import GenSpec, gen_annotations, generate
from .instance import ArcSet, Instance, normalize_ids, parse_instance, serialize_instance, to_directed
from .oracles import brute_force_ftf, brute_force_ftp, brute_force_ftp_undirected
from .seriesparallel import parse_sp_tree, solve_ftp_series_parallel, sp_recognize

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2

ALGORITHMS = (
    "1ftp",
    "kftp-dag",
    "ftp-sp",
    "ftp-approx-k1",
    "ftp-approx-k",
    "ftf-approx-l1",
    "ftf-approx-2",
    "augment",
)


def fingerprint(inst: Instance) -> str:
    return hashlib.sha256(serialize_instance(inst).encode()).hexdigest()[:16]


def _emit(key: str, value) -> None:
    print(f"{key}: {value}")


def _load_instance(path: str) -> Instance:
    return parse_instance(Path(path).read_text())


def _write_solution(path: Path, ids, cost, feasible: bool, witness) -> None:
    payload = {
        "arcs": list(ids),
        "cost": str(cost),
        "feasible": feasible,
        "witness_scenario": None if witness is None else list(witness),
    }
    path.write_text(json.dumps(payload, indent=2) + "\n")


def _read_solution(path: str) -> dict:
    data = json.loads(Path(path).read_text())
    if not isinstance(data.get("arcs"), list):
        raise FtnetError("solution file lacks an 'arcs' list")
    return data


def _verify_both(inst: Instance, ids):
    """Run both verifiers; undirected instances verify on the doubled graph.

    An edge set is feasible iff the instance with both orientations of
    each member edge is: a violating undirected cut corresponds to the
    scenario removing each cut edge's outward arc, and conversely.
    """
    if not inst.directed:
        doubled, pair_map = to_directed(inst)
        arc_ids = [a for j in normalize_ids(ids) for a in pair_map[j]]
        inst, ids = doubled, arc_ids
    if inst.mode == "ftp":
        return ftp_feasible_cut(inst, ids), ftp_feasible_enum(inst, ids)
    return ftf_feasible_cut(inst, ids), ftf_feasible_enum(inst, ids)


def _run_algorithm(name: str, inst: Instance, args):
    """Returns (solution ArcSet over `inst` ids, ids to verify feasibility of)."""
    if name in ("1ftp", "kftp-dag", "ftp-sp", "ftp-approx-k1", "ftp-approx-k"):
        if inst.mode != "ftp":
            raise FtnetError(f"algorithm {name} needs an ftp instance, got {inst.mode}")
    else:
        if inst.mode != "ftf":
            raise FtnetError(f"algorithm {name} needs an ftf instance, got {inst.mode}")

    if name == "ftp-sp":
        if args.tree:
            tree = parse_sp_tree(args.tree)
        else:
            if inst.directed:
                raise FtnetError("ftp-sp expects an undirected instance or an explicit --tree")
            tree = sp_recognize(inst)
        weights = {j: a.weight for j, a in enumerate(inst.arcs)}
        vulnerable = {j for j, a in enumerate(inst.arcs) if a.vulnerable}
        per_parameter = solve_ftp_series_parallel(tree, weights, vulnerable, inst.k)
        best = per_parameter[inst.k]
        if best is None:
            raise InfeasibleError(f"series-parallel instance infeasible for k={inst.k}")
        return best, best.ids

    if name == "augment":
        if args.x0:
            ids = [int(tok) for tok in args.x0.split(",") if tok != ""]
            x0 = build_path_system(inst, ids)
        else:
            base = min_cost_flow(inst, CapacityProfile.uniform(inst, 1), inst.ell)
            x0 = PathSystem(paths=tuple(p for p, _ in base.decomposition))
        y = solve_augmentation(inst, x0)
        return y, tuple(sorted(set(y.ids) | x0.arc_ids))

    # the remaining algorithms run on directed graphs; undirected
    # instances are reduced and the support is mapped back to edges
    work, pair_map = (inst, None) if inst.directed else to_directed(inst)
    solver = {
        "1ftp": solve_1ftp,
        "kftp-dag": solve_kftp_dag,
        "ftp-approx-k1": approx_ftp_kplus1,
        "ftp-approx-k": approx_ftp_k,
        "ftf-approx-l1": approx_ftf_ellplus1,
        "ftf-approx-2": approx_ftf_2,
    }.get(name)
    if solver is None:
        raise FtnetError(f"unknown algorithm {name!r}")
    support = solver(work)
    if pair_map is None:
        return support, support.ids
    back = {}
    for edge, (fwd, rev) in enumerate(pair_map):
        back[fwd] = edge
        back[rev] = edge
    edge_ids = sorted({back[a] for a in support.ids})
    solution = ArcSet.of(inst, edge_ids)
    return solution, solution.ids


def cmd_solve(args) -> int:
    started = time.perf_counter()
    inst = _load_instance(args.instance)
    algorithm = args.algorithm_flag or args.algorithm
    if algorithm is None:
        raise FtnetError("no algorithm given")
    if algorithm not in ALGORITHMS:
        raise FtnetError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
    _emit("command", f"solve {algorithm} {args.instance}")
    _emit("instance", inst.name)
    _emit("fingerprint", fingerprint(inst))
    _emit("algorithm", algorithm)
    try:
        solution, check_ids = _run_algorithm(algorithm, inst, args)
    except InfeasibleError as exc:
        _emit("status", "infeasible")
        _emit("detail", str(exc))
        if exc.cut is not None:
            _emit("witness", " ".join(map(str, exc.cut)))
        return EXIT_INFEASIBLE

    cut_v, enum_v = _verify_both(inst, check_ids)
    if cut_v.feasible != enum_v.feasible:
        _emit("status", "error")
        _emit("detail", "internal invariant violation: verifiers disagree")
        return EXIT_ERROR
    _emit("status", "feasible")
    _emit("cost", solution.cost)
    _emit("arcs", " ".join(map(str, solution.ids)))
    _emit("verify", "cut=enum: agree")
    out = Path(args.out) if args.out else Path(args.instance).with_suffix(".sol")
    _write_solution(out, solution.ids, solution.cost, True, None)
    _emit("solution_file", out)
    if args.oracle_check:
        oracle = brute_force_ftp(inst) if inst.mode == "ftp" else brute_force_ftf(inst)
        if oracle is None:
            _emit("oracle", "infeasible")
        else:
            _emit("oracle_cost", oracle[0])
            _emit("ratio", Fraction(solution.cost) / oracle[0] if oracle[0] else "n/a")
    _emit("wall_time_s", f"{time.perf_counter() - started:.3f}")
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _load_instance(args.instance)
    data = _read_solution(args.solution)
    ids = tuple(int(i) for i in data["arcs"])
    _emit("command", f"verify {args.instance} {args.solution}")
    _emit("fingerprint", fingerprint(inst))
    cut_v, enum_v = _verify_both(inst, ids)
    if cut_v.feasible != enum_v.feasible:
        _emit("status", "error")
        _emit("detail", "internal invariant violation: verifiers disagree")
        return EXIT_ERROR
    _emit("verify", "cut=enum: agree")
    _emit("cost", inst.weight_of(ids))
    if cut_v.feasible:
        _emit("status", "feasible")
        return EXIT_OK
    _emit("status", "infeasible")
    _emit("witness", " ".join(map(str, enum_v.witness)))
    return EXIT_INFEASIBLE


def cmd_gen(args) -> int:
    spec = GenSpec(
        family=args.family,
        p=args.p,
        k=args.k,
        ell=args.ell,
        n=args.n,
        arc_count=args.arcs,
        vulnerable_fraction=args.vulnerable_fraction,
        weight_lo=args.weight_lo,
        weight_hi=args.weight_hi,
        layers=args.layers,
        depth=args.depth,
        terminals=args.terminals,
        m=args.m,
        seed=args.seed,
        mode=args.mode,
        infeasible=args.infeasible,
    )
    inst = generate(spec)
    text = serialize_instance(inst)
    annotations = gen_annotations(spec)
    comment = "".join(f"# {key} = {value}\n" for key, value in sorted(annotations.items()))
    content = comment + text
    if args.out:
        Path(args.out).write_text(content)
        _emit("instance_file", args.out)
    else:
        sys.stdout.write(content)
    return EXIT_OK


def cmd_oracle(args) -> int:
    started = time.perf_counter()
    inst = _load_instance(args.instance)
    _emit("command", f"oracle {args.instance}")
    _emit("fingerprint", fingerprint(inst))
    if not inst.directed:
        if inst.mode != "ftp":
            raise FtnetError("undirected flow instances have no oracle; reduce explicitly")
        result = brute_force_ftp_undirected(inst, max_edges=args.budget)
        if result is not None:
            result = (result[0], ArcSet.of(inst, result[1]))
    elif inst.mode == "ftp":
        result = brute_force_ftp(inst, max_arcs=args.budget)
    else:
        result = brute_force_ftf(inst, max_arcs=args.budget)
    if result is None:
        _emit("status", "infeasible")
        return EXIT_INFEASIBLE
    cost, sol = result
    _emit("status", "feasible")
    _emit("cost", cost)
    _emit("arcs", " ".join(map(str, sol.ids)))
    _emit("wall_time_s", f"{time.perf_counter() - started:.3f}")
    return EXIT_OK


def _bench_one(payload):
    algorithm, text = payload
    inst = parse_instance(text)

    class _Args:
        tree = None
        x0 = None

    solution, check_ids = _run_algorithm(algorithm, inst, _Args)
    cut_v, enum_v = _verify_both(inst, check_ids)
    oracle = brute_force_ftp(inst) if inst.mode == "ftp" else brute_force_ftf(inst)
    ok = cut_v.feasible and enum_v.feasible and oracle is not None
    ratio = str(Fraction(solution.cost) / oracle[0]) if oracle and oracle[0] else "n/a"
    return inst.name, str(solution.cost), str(oracle[0]) if oracle else "-", ratio, ok


def cmd_bench(args) -> int:
    if args.algorithm not in ALGORITHMS:
        raise FtnetError(f"unknown algorithm {args.algorithm!r}")
    instances = []
    for i in range(args.count):
        spec = GenSpec(
            family=args.family,
            n=args.n,
            k=args.k,
            ell=args.ell,
            mode=args.mode,
            arc_count=args.arcs,
            seed=args.seed + i,
        )
        instances.append(serialize_instance(generate(spec)))
    jobs = [(args.algorithm, text) for text in instances]
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_bench_one, jobs))
    else:
        rows = [_bench_one(job) for job in jobs]
    failures = 0
    for name, cost, opt, ratio, ok in rows:
        status = "ok" if ok else "FAIL"
        _emit("bench", f"{name} cost={cost} opt={opt} ratio={ratio} {status}")
        failures += 0 if ok else 1
    _emit("bench_total", f"{len(rows) - failures}/{len(rows)} ok")
    return EXIT_OK if failures == 0 else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ftnet", description=__doc__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_solve = sub.add_parser("solve", help="run a solver on an instance file")
    p_solve.add_argument("algorithm", nargs="?", help=f"one of: {', '.join(ALGORITHMS)}")
    p_solve.add_argument("instance", help="instance file")
    p_solve.add_argument("--algorithm", dest="algorithm_flag", default=None)
    p_solve.add_argument("--out", default=None, help="solution file path")
    p_solve.add_argument("--tree", default=None, help="explicit decomposition for ftp-sp")
    p_solve.add_argument("--x0", default=None, help="comma-separated arc ids for augment")
    p_solve.add_argument("--oracle-check", action="store_true")
    p_solve.set_defaults(fn=cmd_solve)

    p_verify = sub.add_parser("verify", help="check a solution file against an instance")
    p_verify.add_argument("instance")
    p_verify.add_argument("solution")
    p_verify.set_defaults(fn=cmd_verify)

    p_gen = sub.add_parser("gen", help="generate an instance")
    p_gen.add_argument("family", choices=["parallel", "random", "random_dag", "random_sp", "dst_reduction"])
    p_gen.add_argument("--p", type=int, default=None)
    p_gen.add_argument("--k", type=int, default=None)
    p_gen.add_argument("--ell", type=int, default=None)
    p_gen.add_argument("--n", type=int, default=None)
    p_gen.add_argument("--arcs", type=int, default=None)
    p_gen.add_argument("--vulnerable-fraction", type=float, default=0.5)
    p_gen.add_argument("--weight-lo", type=int, default=1)
    p_gen.add_argument("--weight-hi", type=int, default=10)
    p_gen.add_argument("--layers", type=int, default=None)
    p_gen.add_argument("--depth", type=int, default=None)
    p_gen.add_argument("--terminals", type=int, default=None)
    p_gen.add_argument("--m", type=int, default=None)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--mode", choices=["ftp", "ftf"], default="ftp")
    p_gen.add_argument("--infeasible", action="store_true")
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(fn=cmd_gen)

    p_oracle = sub.add_parser("oracle", help="brute-force optimum of an instance")
    p_oracle.add_argument("instance")
    p_oracle.add_argument("--budget", type=int, default=16, help="max arcs the oracle accepts")
    p_oracle.set_defaults(fn=cmd_oracle)

    p_bench = sub.add_parser("bench", help="batch solve+verify+oracle over generated instances")
    p_bench.add_argument("--algorithm", required=True)
    p_bench.add_argument("--family", default="random")
    p_bench.add_argument("--count", type=int, default=10)
    p_bench.add_argument("--n", type=int, default=7)
    p_bench.add_argument("--k", type=int, default=1)
    p_bench.add_argument("--ell", type=int, default=None)
    p_bench.add_argument("--arcs", type=int, default=12)
    p_bench.add_argument("--mode", choices=["ftp", "ftf"], default="ftp")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--jobs", type=int, default=1)
    p_bench.set_defaults(fn=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InfeasibleError as exc:
        _emit("status", "infeasible")
        _emit("detail", str(exc))
        return EXIT_INFEASIBLE
    except FtnetError as exc:
        _emit("status", "error")
        _emit("detail", str(exc))
        return EXIT_ERROR
    except OSError as exc:
        _emit("status", "error")
        _emit("detail", str(exc))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
