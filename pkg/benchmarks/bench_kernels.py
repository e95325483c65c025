"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--max-qubits 14]

Both implementations are fed identical inputs and their outputs are
cross-checked before timing.
"""
from __future__ import annotations

import argparse
import importlib
import timeit

import numpy as np

from dsqc.qcore import cat_basis


def _load():
    mods = {"python": importlib.import_module("dsqc.qcore._kernels_py")}
    try:
        mods["cython"] = importlib.import_module("dsqc.qcore._kernels")
    except ImportError:
        pass
    return mods


def _cases(max_qubits: int, rng: np.random.Generator):
    for n in range(4, max_qubits + 1, 2):
        amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        amps /= np.linalg.norm(amps)
        mapping = rng.permutation(n).astype(np.intp)
        for k in (2, 4):
            qubits = np.sort(rng.choice(n, size=k, replace=False)).astype(np.intp)
            basis = np.ascontiguousarray(cat_basis(k).matrix)
            yield n, k, amps, mapping, qubits, basis


def _best(fn, repeat: int) -> float:
    timer = timeit.Timer(fn)
    loops, _ = timer.autorange()
    return min(timer.repeat(repeat, loops)) / loops


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--max-qubits", type=int, default=14)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    mods = _load()
    if "cython" not in mods:
        print("compiled kernels not built; only the fallback is timed")
    rng = np.random.default_rng(args.seed)
    header = f"{'kernel':<24}{'n':>4}{'k':>4}" + "".join(f"{name + ' (us)':>16}" for name in mods)
    if len(mods) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for n, k, amps, mapping, qubits, basis in _cases(args.max_qubits, rng):
        jobs = {
            "subsystem_coefficients": lambda m: m.subsystem_coefficients(amps, n, qubits, basis),
            "permute_amplitudes": lambda m: m.permute_amplitudes(amps, n, mapping),
        }
        for name, job in jobs.items():
            if name == "permute_amplitudes" and k != 2:
                continue
            outputs = [job(m) for m in mods.values()]
            for out in outputs[1:]:
                assert np.allclose(out, outputs[0], atol=1e-12), f"{name} disagrees at n={n}"
            times = [_best(lambda m=m: job(m), args.repeat) for m in mods.values()]
            row = f"{name:<24}{n:>4}{k if name.startswith('sub') else '-':>4}"
            row += "".join(f"{t * 1e6:>16.2f}" for t in times)
            if len(times) == 2:
                row += f"{times[0] / times[1]:>9.2f}x"
            print(row)


if __name__ == "__main__":
    main()
