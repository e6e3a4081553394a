"""Compare the compiled and pure-Python kernels on the same workloads.

    python benchmarks/bench_kernels.py [--repeat 3]

Both backends must produce identical subgroup lists and tables; the script
aborts if they disagree.
"""

import argparse
import time

from engulf import kernels
from engulf.analysis import theorem2_subgroup
from engulf.coset_enum import CosetOverflow, EnumerationLimits, enumerate_cosets
from engulf.low_index import SearchConstraint, low_index_subgroups
from engulf.words import group_B, group_G


def workloads():
    G, B = group_G(), group_B()
    K = theorem2_subgroup(G)
    for n in (8, 10, 11):
        yield f"low-index G N={n}", lambda n=n: low_index_subgroups(G, SearchConstraint(n))
    for n in (8, 10):
        yield f"low-index B N={n}", lambda n=n: low_index_subgroups(B, SearchConstraint(n))
    yield "theorem2 search N=10", lambda: low_index_subgroups(G, SearchConstraint(10, K.generators))

    def overflow():
        try:
            enumerate_cosets(G, K, EnumerationLimits(max_cosets=100_000))
        except CosetOverflow as exc:
            return str(exc)

    yield "coset enum K (100k cosets)", overflow


def summarize(result):
    if hasattr(result, "tables"):
        return (len(result.tables), result.nodes, tuple(t.key() for t in result.tables))
    return result


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only timing the pure-Python backend")
    print(f"{'workload':32s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for name, fn in workloads():
        times = {}
        answers = {}
        for b in backends:
            kernels.set_backend(b)
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                out = fn()
                best = min(best, time.perf_counter() - t0)
            times[b] = best
            answers[b] = summarize(out)
        if len(set(map(repr, answers.values()))) != 1:
            raise SystemExit(f"backends disagree on {name}")
        row = f"{name:32s}" + "".join(f"{times[b]:11.3f}s" for b in backends)
        if len(backends) == 2:
            row += f"{times['python'] / times['cython']:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
