"""Time the compiled and pure-Python Smith normal form kernels on the same matrices.

Workloads: dense random matrices, sparse 0/+-1 matrices, and the relator
matrices of symmetric automorphism presentations.  The ``int64`` column
counts matrices the compiled kernel finished without overflowing; the
rest were redone by the Python kernel inside the timed run.

Usage: python benchmarks/bench_snf.py [--sizes 10,20,30,50] [--count 20] [--seed 0]
"""

import argparse
import random
import time

from frstab import fr
from frstab.groups import builtin_group
from frstab.homology import snf as snf_mod
from frstab.homology.matrix import IntMatrix


def dense(rng, n, bound=9):
    return IntMatrix([[rng.randint(-bound, bound) if rng.random() < 0.6 else 0 for _ in range(n)] for _ in range(n)], n)


def sparse(rng, n):
    return IntMatrix([[rng.choice((-1, 1)) if rng.random() < 0.1 else 0 for _ in range(n)] for _ in range(n)], n)


def relator_matrices():
    out = []
    for g, n in (("Z2", 5), ("Z3", 4), ("Z3", 5)):
        P = fr.sigma_aut_presentation(fr.free_power(builtin_group(g), n))
        M = P.relator_matrix()
        rows = [r for r in M.data if any(r)]
        out.append(IntMatrix(rows, M.cols))
    return out


def run(backend, mats):
    t = time.perf_counter()
    diags = [snf_mod.snf(m, backend).diagonal for m in mats]
    return time.perf_counter() - t, diags


def fits(mats):
    k = snf_mod._kernels_c
    return sum(k.snf_dense(m.data, m.rows, m.cols, True) is not None for m in mats)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="10,20,30,50")
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    compiled = snf_mod.BACKEND == "cython"
    if not compiled:
        print("compiled kernel not built; only the Python kernel is timed")
    print(f"{'workload':>16} {'count':>6} {'int64':>6} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    work = []
    for n in (int(x) for x in args.sizes.split(",")):
        rng = random.Random(args.seed + n)
        work.append((f"dense {n}x{n}", [dense(rng, n) for _ in range(args.count)]))
        work.append((f"sparse {n}x{n}", [sparse(rng, n) for _ in range(args.count)]))
    work.append(("relators", relator_matrices()))
    for name, mats in work:
        tp, dp = run("python", mats)
        if compiled:
            tc, dc = run("cython", mats)
            assert dc == dp, "backends disagree"
            print(f"{name:>16} {len(mats):>6} {fits(mats):>6} {tp:>10.3f} {tc:>10.3f} {tp / tc:>8.1f}")
        else:
            print(f"{name:>16} {len(mats):>6} {'-':>6} {tp:>10.3f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
