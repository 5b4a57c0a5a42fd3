"""Time the compiled and the pure-Python truncated path-sum kernels on the same inputs.

    python benchmarks/bench_kernels.py [--networks 20] [--repeat 5] [--seed 0]
"""
from __future__ import annotations

import argparse
import statistics
import time

from plabic import kernels
from plabic.flows import scale_to_contract, transfer_matrix
from plabic.generators import corpus, random_frame


def _time(fn, args, repeat):
    out = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        out.append(time.perf_counter() - t0)
    return statistics.median(out)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--networks", type=int, default=20)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--terms", type=int, default=4000)
    args = p.parse_args(argv)
    if kernels.compiled_neumann_series is None:
        print("compiled extension not available; build it with `pip install -e . --no-build-isolation`")
        return 1
    import random

    rng = random.Random(args.seed)
    nets = corpus(args.seed, args.networks, max_k=4, max_extra=4, moves=4)
    inputs = []
    for net in nets:
        fr = random_frame(net, rng)
        net = scale_to_contract(net, fr, 0.9)
        _o, indptr, idx, data, b = transfer_matrix(net, fr)
        inputs.append((indptr, idx, data, b, args.terms, 0.0))
    tp = sum(_time(kernels.python_neumann_series, a, args.repeat) for a in inputs)
    tc = sum(_time(kernels.compiled_neumann_series, a, args.repeat) for a in inputs)
    worst = 0.0
    for a in inputs:
        xp = kernels.python_neumann_series(*a)[0]
        xc = kernels.compiled_neumann_series(*a)[0]
        for rp, rc in zip(xp, xc):
            worst = max([worst] + [abs(float(u) - float(v)) for u, v in zip(rp, rc)])
    edges = sum(len(a[0]) - 1 for a in inputs)
    print(f"{len(inputs)} networks, {edges} edges, {args.terms} terms, median of {args.repeat}")
    print(f"python   {tp * 1e3:10.2f} ms")
    print(f"compiled {tc * 1e3:10.2f} ms")
    print(f"speed-up {tp / tc:10.1f}x   max |difference| {worst:.3g}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
