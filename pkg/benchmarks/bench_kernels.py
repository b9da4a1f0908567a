"""Compare the numba and numpy graph kernels.

Runs each kernel on the bundled example systems and on random functional
graphs, checks both backends agree, and prints median wall time.

    python3 benchmarks/bench_kernels.py --sizes 15625 250000 1000000 --repeat 5
"""

import argparse
import statistics
import time

import numpy as np

from mvlsync import kernels
from mvlsync.examples import NAMES, load_example
from mvlsync.network import augmented_from_network


def _inputs(succ, rng):
    mask = rng.random(succ.size) < 0.7
    vec = np.ones(succ.size, dtype=np.int64)
    return {
        "analyze_graph": (succ,),
        "prune_invariant": (succ, mask),
        "hitting_time": (succ, mask),
        "push_forward": (succ, vec),
    }


def _time(fn, args, repeat):
    runs = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        runs.append(time.perf_counter() - t0)
    return statistics.median(runs), out


def _same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def bench(label, succ, rng, repeat):
    rows = []
    for name, args in _inputs(succ, rng).items():
        fn = getattr(kernels, name)
        results = {}
        for backend in kernels.BACKENDS:
            with kernels.using_backend(backend):
                fn(*args)  # warm-up / JIT
                results[backend] = _time(fn, args, repeat)
        (t_nb, o_nb), (t_np, o_np) = results["numba"], results["numpy"]
        if not _same(o_nb, o_np):
            raise SystemExit(f"backends disagree on {name} for {label}")
        rows.append((label, succ.size, name, t_nb, t_np))
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="*", default=[15625, 250_000, 1_000_000])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)

    rows = []
    for name in NAMES:
        rows += bench(name, augmented_from_network(load_example(name)).succ, rng, args.repeat)
    for n in args.sizes:
        rows += bench(f"random-{n}", rng.integers(0, n, size=n, dtype=np.int64), rng, args.repeat)

    print(f"{'graph':<16}{'states':>10}  {'kernel':<16}{'numba ms':>10}{'numpy ms':>10}{'speedup':>9}")
    for label, size, name, t_nb, t_np in rows:
        print(f"{label:<16}{size:>10}  {name:<16}{t_nb * 1e3:>10.3f}{t_np * 1e3:>10.3f}{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
