"""Compare the compiled and pure-Python backends.

    python3 benchmarks/bench_kernels.py [--degrees 50,100,200] [--repeat 3]

Prints one CSV row per (backend, workload, size) with the best wall time
and the speedup of the compiled core over the Python one.
"""

import argparse
import random
import sys
import timeit

from compqd import backend, oracle
from compqd.qdtable import SeriesInput


def table_workloads(degree):
    vals = oracle.gen_random_poly(degree, degree)
    s = SeriesInput.from_exact(vals)
    for alg in ("qd", "compqd", "ddqd"):
        if alg == "qd":
            yield alg, lambda core: core.qd_fill(s.hi, degree)
        elif alg == "compqd":
            yield alg, lambda core: core.compqd_fill(s.hi, s.lo, degree, "float")
        else:
            yield alg, lambda core: core.ddqd_fill(s.hi, s.lo, degree, "float")


def kernel_workloads(n=20000):
    rng = random.Random(7)
    xs = [rng.uniform(-1, 1) for _ in range(n)]
    ys = [rng.uniform(0.5, 2) for _ in range(n)]
    pairs = list(zip(xs, ys))
    for name in ("two_sum", "two_prod", "div_rem"):
        yield name, (lambda core, name=name:
                     [getattr(core, name)(a, b) for a, b in pairs])


def progressive_workload(k=35):
    lag = oracle.gen_laguerre(k)[::-1]
    hi, lo = zip(*[oracle.real_to_dd(v)[:2] for v in lag])
    return lambda core: core.compproqd_run(list(hi), list(lo), 1e-16, 5000)


def best(fn, core, repeat):
    return min(timeit.repeat(lambda: fn(core), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--degrees", default="50,100,200")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    names = backend.available()
    if "cython" not in names:
        print("compiled backend not built; timing python only", file=sys.stderr)
    jobs = []
    for d in (int(x) for x in args.degrees.split(",")):
        jobs += [(alg, d, fn) for alg, fn in table_workloads(d)]
    jobs += [(name, 20000, fn) for name, fn in kernel_workloads()]
    jobs.append(("compproqd", 35, progressive_workload()))
    print("workload,size," + ",".join(names) + ",speedup")
    for label, size, fn in jobs:
        times = [best(fn, backend.get(n), args.repeat) for n in names]
        speed = times[-1] / times[0] if len(times) > 1 else 1.0
        print("%s,%d,%s,%.1f" % (label, size,
                                 ",".join("%.5f" % t for t in times), speed))


if __name__ == "__main__":
    main()
