"""Compare the compiled and pure-Python dispatch kernels on the bundled year.

    python3 benchmarks/bench_dispatch.py [--repeat N]

Both kernels must return bit-identical totals; the script exits nonzero otherwise.
"""

import argparse
import sys
import timeit

from sspvb import _backend
from sspvb.data import load_bundled_year
from sspvb.model import BatterySpec, Design, PVSpec, unit_pv_profile
from sspvb.simulation import simulate_totals


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    dataset = load_bundled_year()
    pv_unit = unit_pv_profile(dataset, PVSpec())
    battery = BatterySpec()
    design = Design(376, 207, 0.7)
    backends = ["python"] + (["cython"] if _backend.compiled is not None else [])

    results = {}
    best = {}
    for name in backends:
        def call():
            return simulate_totals(design, dataset.load, pv_unit, battery, backend=name)
        results[name] = call()
        number = 3 if name == "python" else 200
        best[name] = min(timeit.repeat(call, number=number, repeat=args.repeat)) / number
        print(f"{name:>7}: {best[name] * 1e6:10.1f} us per {dataset.hours}-hour simulation")

    if "cython" not in best:
        print("compiled kernel not built; only the fallback was timed")
        return 0
    print(f"speedup: {best['python'] / best['cython']:.1f}x")
    if results["python"] != results["cython"]:
        print("MISMATCH between backends:", results, file=sys.stderr)
        return 1
    print("totals identical across backends")
    return 0


if __name__ == "__main__":
    sys.exit(main())
