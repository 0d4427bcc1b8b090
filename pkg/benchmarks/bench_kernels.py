"""Time the compiled kernels against the pure-Python fallback on float inputs.

    python3 benchmarks/bench_kernels.py --sizes 256 1024 2048 --repeat 3
"""
import argparse
import random
import timeit

from nqdelta import _pykernels, kernels


def inputs(m, seed=0):
    rng = random.Random(seed)
    a = [rng.uniform(-1, 1) for _ in range(m + 1)]
    u = [-rng.uniform(0, 2) for _ in range(m + 1)]
    v = [1 + rng.uniform(0, 2) for _ in range(m + 1)]
    rows = [[rng.uniform(-1, 1) for _ in range(n)] + [1 + rng.random()] for n in range(m // 4 + 1)]
    return a, u, v, rows


def cases(mod, m):
    a, u, v, rows = inputs(m)
    return {
        "printed_profile": lambda: mod.printed_profile(a, u, v, 0, m),
        "derived_profile": lambda: mod.derived_profile(a, u, v, 0, m),
        "derived_section": lambda: mod.derived_section(a, u, v, m),
        f"forward_substitution[{len(rows)}]": lambda: mod.forward_substitution(rows),
    }


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[256, 1024, 2048])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    if not kernels.HAVE_EXTENSION:
        raise SystemExit("compiled extension not built; run `pip install -e .` first")
    from nqdelta import _ckernels

    print(f"{'kernel':<28} {'m':>6} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>8}")
    for m in args.sizes:
        pure, comp = cases(_pykernels, m), cases(_ckernels, m)
        for name in pure:
            tp = min(timeit.repeat(pure[name], number=1, repeat=args.repeat))
            tc = min(timeit.repeat(comp[name], number=1, repeat=args.repeat))
            print(f"{name:<28} {m:>6} {tp:>10.4f} {tc:>13.5f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
