"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from .extremal import extremal_color
from .finish import BudgetExceeded, exact_chromatic_index
from .generators import (FamilySpec, complete, degenerate, generate, projective_plane, random_linear,
                         uniform_near_regular)
from .greedy import dsatur_line
from .hypercore import (EdgeColoring, Hierarchy, LinearHypergraph, dumps_coloring, dumps_lhg, loads_coloring,
                        read_lhg, verify_coloring)
from .nibble import pseudorandom_matching
from .ordering import reorder
from .pipeline import PreconditionFailed, efl_color, first_fit, stability_color, sublinear_color

ALGOS = ("pipeline", "greedy", "dsatur", "extremal", "exact", "stability", "sublinear")
BENCH_FIELDS = ["family", "n", "m", "algo", "seed", "colors", "proper", "wall_ms"]


class UsageError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_jsonable(v) for v in obj)
    if isinstance(obj, float):
        return round(obj, 12)
    return obj


def _dump(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=1) + "\n"


def _write(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load(path: str) -> LinearHypergraph:
    try:
        return read_lhg(path)
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from err
    except ValueError as err:
        raise UsageError(f"{path}: {err}") from err


def _hier(path: Optional[str]) -> Hierarchy:
    if path is None:
        return Hierarchy()
    try:
        with open(path) as fh:
            return Hierarchy(**json.load(fh)).validate()
    except (OSError, TypeError, ValueError) as err:
        raise UsageError(f"bad hierarchy profile {path}: {err}") from err


def color_with(H: LinearHypergraph, algo: str, seed: int, hier: Hierarchy, eta: float = 0.05,
               eps_target: float = 0.5, limit: int = 24, node_limit: int = 5_000_000) -> Tuple[EdgeColoring, Dict]:
    if algo == "pipeline":
        col, rep = efl_color(H, hier, seed)
        return col, rep.as_dict()
    if algo == "greedy":
        colors = [None] * H.m
        first_fit(H, colors, range(H.m))
        col = EdgeColoring(colors, max(colors, default=-1) + 1)
        return col, {"route": "size-order first fit"}
    if algo == "dsatur":
        return dsatur_line(H), {"route": "dsatur"}
    if algo == "extremal":
        col = extremal_color(H, hier.delta, seed=seed)
        return col, {"route": col.meta.get("route")}
    if algo == "exact":
        k, col = exact_chromatic_index(H, limit, node_limit)
        return col, {"chromatic_index": k}
    if algo == "stability":
        return stability_color(H, hier, seed)
    if algo == "sublinear":
        return sublinear_color(H, eta, eps_target, seed)
    raise UsageError(f"unknown algorithm {algo}")


def cmd_gen(args) -> int:
    fam = args.family
    if fam in ("random-linear", "uniform-near-regular") and args.seed is None:
        raise UsageError(f"--seed is required for {fam}")
    params: Dict[str, object] = {}
    if fam == "projective-plane":
        params = {"q": _need(args.q, "--q")}
    elif fam in ("degenerate", "complete"):
        params = {"n": _need(args.n, "--n")}
    elif fam == "random-linear":
        sizes = [int(s) for s in args.sizes.split(",")]
        params = {"n": _need(args.n, "--n"), "m": _need(args.m, "--m"), "size_law": sizes, "seed": args.seed}
    elif fam == "uniform-near-regular":
        params = {"n": _need(args.n, "--n"), "r": _need(args.r, "--r"), "D": _need(args.D, "--D"),
                  "kappa": args.kappa, "seed": args.seed}
    try:
        H = generate(FamilySpec(fam, params))
    except (ValueError, RuntimeError) as err:
        raise UsageError(str(err)) from err
    _write(dumps_lhg(H), args.out)
    return 0


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def cmd_color(args) -> int:
    H = _load(args.inp)
    hier = _hier(args.hier)
    try:
        col, report = color_with(H, args.algo, args.seed, hier, args.eta, args.eps_target, args.limit,
                                 _node_budget(args.timeout))
    except PreconditionFailed as err:
        raise UsageError(f"precondition: {err}") from err
    except BudgetExceeded as err:
        print(f"exact search gave up: {err}", file=sys.stderr)
        return 1
    col = EdgeColoring(list(col.colors), col.palette_size)
    _write(dumps_coloring(col), args.out)
    if args.report:
        _write(_dump(report), args.report)
    bad = verify_coloring(H, col)
    if bad is not None:
        print(f"improper: edges {bad[0]} and {bad[1]} share color {col.colors[bad[0]]}", file=sys.stderr)
        return 1
    print(f"colors {len(set(col.colors))} n {H.n}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    H = _load(args.inp)
    try:
        with open(args.coloring) as fh:
            col = loads_coloring(fh.read())
    except (OSError, ValueError, KeyError) as err:
        raise UsageError(f"bad coloring file {args.coloring}: {err}") from err
    try:
        bad = verify_coloring(H, col)
    except ValueError as err:
        print(f"invalid: {err}")
        return 1
    if bad is not None:
        print(f"improper: edges {bad[0]} and {bad[1]} share color {col.colors[bad[0]]}")
        return 1
    used = len(set(col.colors))
    print(f"proper, {used} colors, n = {H.n}")
    return 0


def _node_budget(timeout: Optional[float]) -> int:
    # roughly a million search nodes per second of budget
    return 5_000_000 if timeout is None else max(1, int(timeout * 1_000_000))


def cmd_exact(args) -> int:
    H = _load(args.inp)
    try:
        k, col = exact_chromatic_index(H, args.limit, _node_budget(args.timeout))
    except BudgetExceeded as err:
        _write(_dump({"status": "budget", "lower": err.lower, "upper": err.upper}), args.out)
        return 1
    _write(_dump({"status": "exact", "chromatic_index": k, "colors": col.colors, "n": H.n}), args.out)
    return 0


def cmd_order(args) -> int:
    H = _load(args.inp)
    out = reorder(H, args.tau, args.K)
    body = {"kind": out.kind, "ordering": out.ordering.perm, "window": out.window, "e_star": out.e_star,
            "stats": out.stats}
    _write(_dump(body), args.out)
    return 0


def cmd_nibble_sim(args) -> int:
    H = uniform_near_regular(args.n, args.r, args.D, args.kappa, args.seed)
    rows = []
    for s in range(args.seeds):
        res = pseudorandom_matching(H, args.gamma, args.kappa, seed=args.seed * 100_003 + s, raise_on_miss=False)
        frac = res.fractions[0]
        rows.append({"seed": s, "uncovered": round(frac, 6),
                     "in_window": int(abs(frac - args.gamma) <= 4 * args.kappa),
                     "attempts": res.attempts, "before_drop": round(res.base_uncovered, 6)})
    buf = io.StringIO()
    w = csv.DictWriter(buf, ["seed", "uncovered", "in_window", "attempts", "before_drop"], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    _write(buf.getvalue(), args.csv)
    return 0


BENCH_FAMILIES = {
    "pg": lambda seed: [("projective-plane", projective_plane(q)) for q in (2, 3, 5, 7)],
    "degenerate": lambda seed: [("degenerate", degenerate(n)) for n in (9, 30, 100)],
    "complete": lambda seed: [("complete", complete(n)) for n in (7, 20, 41)],
    "random": lambda seed: [("random-linear", random_linear(n, [2, 3, 4], 3 * n, seed)) for n in (100, 300)],
    "uniform": lambda seed: [("uniform-near-regular", uniform_near_regular(300, 3, 20, 0.1, seed))],
}


def _bench_job(job) -> List[Dict[str, object]]:
    family, seed, algos, hier = job
    rows = []
    for name, H in BENCH_FAMILIES[family](seed):
        for algo in algos:
            t0 = time.perf_counter()
            try:
                col, _ = color_with(H, algo, seed, hier)
                proper = verify_coloring(H, col) is None
                colors = len(set(col.colors))
            except (BudgetExceeded, PreconditionFailed):
                proper, colors = False, -1
            rows.append({"family": name, "n": H.n, "m": H.m, "algo": algo, "seed": seed, "colors": colors,
                         "proper": int(proper), "wall_ms": round(1000 * (time.perf_counter() - t0))})
    return rows


def cmd_bench(args) -> int:
    families = args.families.split(",")
    unknown = [f for f in families if f not in BENCH_FAMILIES]
    if unknown:
        raise UsageError(f"unknown families {unknown}; choose from {sorted(BENCH_FAMILIES)}")
    algos = args.algos.split(",")
    if any(a not in ALGOS for a in algos):
        raise UsageError(f"algorithms must be among {ALGOS}")
    hier = _hier(args.hier)
    jobs = [(f, args.seed + s, algos, hier) for f in families for s in range(args.seeds)]
    workers = max(1, int(os.environ.get("EFL_THREADS", "1")))
    if workers == 1:
        results = [_bench_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_bench_job, jobs))
    buf = io.StringIO()
    w = csv.DictWriter(buf, BENCH_FIELDS, lineterminator="\n")
    w.writeheader()
    for rows in results:
        for row in rows:
            if args.no_timing:
                row["wall_ms"] = 0
            w.writerow(row)
    _write(buf.getvalue(), args.csv)
    return 0 if all(r["proper"] or r["colors"] < 0 for rows in results for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eflcolor", description="Edge coloring of linear hypergraphs.")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("--family", required=True,
                   choices=["projective-plane", "degenerate", "complete", "random-linear", "uniform-near-regular"])
    g.add_argument("--q", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--r", type=int)
    g.add_argument("--D", type=int)
    g.add_argument("--kappa", type=float, default=0.05)
    g.add_argument("--sizes", default="2,3,4", help="comma-separated edge sizes for random-linear")
    g.add_argument("--seed", type=int)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("color", help="color an instance")
    c.add_argument("--algo", choices=ALGOS, default="pipeline")
    c.add_argument("--in", dest="inp", required=True)
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--hier", help="JSON hierarchy profile")
    c.add_argument("--report")
    c.add_argument("--out")
    c.add_argument("--eta", type=float, default=0.05)
    c.add_argument("--eps-target", type=float, default=0.5)
    c.add_argument("--limit", type=int, default=24)
    c.add_argument("--timeout", type=float)
    c.set_defaults(func=cmd_color)

    v = sub.add_parser("verify", help="check a coloring")
    v.add_argument("--in", dest="inp", required=True)
    v.add_argument("--coloring", required=True)
    v.set_defaults(func=cmd_verify)

    x = sub.add_parser("exact", help="exact chromatic index")
    x.add_argument("--in", dest="inp", required=True)
    x.add_argument("--limit", type=int, default=24)
    x.add_argument("--timeout", type=float, help="search budget in seconds (mapped to a node count)")
    x.add_argument("--out")
    x.set_defaults(func=cmd_exact)

    o = sub.add_parser("order", help="reordering outcome")
    o.add_argument("--in", dest="inp", required=True)
    o.add_argument("--tau", type=float, default=0.5)
    o.add_argument("--K", type=float, default=2.0)
    o.add_argument("--out")
    o.set_defaults(func=cmd_order)

    s = sub.add_parser("nibble-sim", help="pseudorandom matching statistics")
    s.add_argument("--n", type=int, default=2000)
    s.add_argument("--r", type=int, default=3)
    s.add_argument("--D", type=int, default=60)
    s.add_argument("--gamma", type=float, default=0.2)
    s.add_argument("--kappa", type=float, default=0.05)
    s.add_argument("--seeds", type=int, default=20)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--csv")
    s.set_defaults(func=cmd_nibble_sim)

    b = sub.add_parser("bench", help="run algorithms over instance families")
    b.add_argument("--families", default="pg,degenerate,complete")
    b.add_argument("--algos", default="pipeline,dsatur,greedy")
    b.add_argument("--seeds", type=int, default=3)
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--hier")
    b.add_argument("--no-timing", action="store_true", help="write wall_ms as 0 for byte-stable output")
    b.add_argument("--csv")
    b.set_defaults(func=cmd_bench)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except UsageError as err:
        print(f"eflcolor {args.cmd}: {err}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
