"""Compiled vs pure-Python kernels on line graphs of generated instances.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import time

from eflcolor import _pykernels, kernels
from eflcolor.finish import exact_chromatic_index
from eflcolor.generators import complete, projective_plane, random_linear
from eflcolor.hypercore import line_graph
from eflcolor.ordering import size_order


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = [("python", _pykernels)]
    if kernels.BACKEND == "cython":
        impls.insert(0, ("cython", kernels._impl))
    else:
        print("compiled kernels not built; timing the pure-Python backend only")
    cases = [
        ("random-linear n=400", random_linear(400, [2, 3, 4], 1500, 1)),
        ("random-linear n=1500", random_linear(1500, [2, 3, 5], 6000, 2)),
        ("PG(2,7)", projective_plane(7)),
        ("K_7", complete(7)),
    ]
    print(f"{'kernel':<16}{'instance':<24}" + "".join(f"{name:>12}" for name, _ in impls))
    for label, H in cases:
        adj = line_graph(H)
        pos = size_order(H).pos
        k = max(H.max_degree(), exact_chromatic_index(H, None)[0] if H.m <= 40 else 0)
        rows = {
            "forward_degrees": lambda impl: kernels.forward_degrees(adj, pos, impl),
            "dsatur": lambda impl: kernels.dsatur(adj, impl),
            "color_search": lambda impl: kernels.color_search(adj, k, 2_000_000, impl),
        }
        for kernel, fn in rows.items():
            if kernel == "color_search" and H.m > 40:
                continue
            times = []
            results = []
            for _, impl in impls:
                t, out = best_of(lambda: fn(impl), args.repeat)
                times.append(t)
                results.append(out)
            agree = all(r == results[0] for r in results) if kernel != "color_search" else \
                all(r[0] == results[0][0] for r in results)
            cells = "".join(f"{1000 * t:>10.2f}ms" for t in times)
            print(f"{kernel:<16}{label:<24}{cells}  {'agree' if agree else 'DISAGREE'}")


if __name__ == "__main__":
    main()
