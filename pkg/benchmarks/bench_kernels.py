"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 3] [--size 60]

Each workload runs once per available backend with the kernels swapped in
place; results are checked to agree before timings are printed.
"""
import argparse
import random
import time
from contextlib import contextmanager

from quasiwhittaker import _kernels
from quasiwhittaker import qwmodule as qw
from quasiwhittaker.catalog import build, phi_from_assignments
from quasiwhittaker.exactlinalg import SparseMatrix, rank


@contextmanager
def using(module):
    saved = _kernels.row_reduce, _kernels.act_monomial
    _kernels.row_reduce, _kernels.act_monomial = module.row_reduce, module.act_monomial
    try:
        yield
    finally:
        _kernels.row_reduce, _kernels.act_monomial = saved


def random_matrix(size, seed):
    rng = random.Random(seed)
    rows = []
    for _ in range(size):
        rows.append({j: rng.randint(-9, 9) for j in rng.sample(range(size), max(2, size // 6))})
    return SparseMatrix(rows, range(size))


def bench_rank(size, seed=0):
    m = random_matrix(size, seed)
    return lambda: rank(m)


def bench_whittaker(degree):
    pres = build("hv")
    phi = phi_from_assignments(pres, {"I0": 1, "I1": 1})

    def run():
        ctx = qw.context_for(pres, phi)
        return qw.whittaker_vectors(ctx, degree).dimension
    return run


def bench_reduce(trials):
    pres = build("hv")
    phi = phi_from_assignments(pres, {"I0": 1, "I1": -2})

    def run():
        return qw.irreducibility_probe(pres, phi, 4, trials, seed=1).found_witness
    return run


def timed(fn, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--size", type=int, default=60, help="matrix size for the rank workload")
    args = ap.parse_args(argv)
    backends = _kernels.backends()
    workloads = {
        f"rank {args.size}x{args.size}": bench_rank(args.size),
        "whittaker HV size<=4": bench_whittaker(4),
        "probe HV, 30 trials": bench_reduce(30),
    }
    print(f"{'workload':<26}" + "".join(f"{name:>12}" for name in backends) + "     speedup")
    for label, fn in workloads.items():
        times, results = {}, {}
        for name, mod in backends.items():
            with using(mod):
                times[name], results[name] = timed(fn, args.repeat)
        if len(set(map(repr, results.values()))) != 1:
            raise SystemExit(f"backends disagree on {label}: {results}")
        speed = f"{times['python'] / times['cython']:>10.2f}x" if "cython" in times else "         -"
        print(f"{label:<26}" + "".join(f"{times[n]:>11.3f}s" for n in backends) + speed)


if __name__ == "__main__":
    main()
