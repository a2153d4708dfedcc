"""Time the compiled kernels against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--n 2000] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from fracnls import _kernels_py

try:
    from fracnls import _kernels
except ImportError:
    _kernels = None


def cases(n):
    ts = np.linspace(0.02, 1.0, n)
    xs = np.linspace(0.1, 6.0, n)
    return {
        "gamma": lambda k: [k.gamma(float(x)) for x in xs],
        "ml_E_array(h=-0.5, c=i)": lambda k: k.ml_E_array(ts, -0.5, 1j),
        "ml_E_array(h=0.25, c=-i)": lambda k: k.ml_E_array(ts, 0.25, -1j),
        "ml_sum(0.5, 1.5, z)": lambda k: [k.ml_sum(0.5, 1.5, complex(t, -t)) for t in ts],
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=2000, help="evaluations per call")
    parser.add_argument("--repeat", type=int, default=5, help="timing repeats (best kept)")
    args = parser.parse_args(argv)

    backends = {"python": _kernels_py}
    if _kernels is not None:
        backends["cython"] = _kernels
    else:
        print("compiled kernels not built; timing the fallback only")

    print(f"{'kernel':28s}" + "".join(f"{name:>12s}" for name in backends) + "     speedup")
    for label, fn in cases(args.n).items():
        best = {
            name: min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
            for name, mod in backends.items()
        }
        row = f"{label:28s}" + "".join(f"{best[name] * 1e3:10.2f}ms" for name in backends)
        if "cython" in best:
            row += f"  {best['python'] / best['cython']:8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
