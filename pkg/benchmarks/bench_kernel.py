"""Compare the compiled and pure-Python space kernels on the t_n family.

Usage: python3 benchmarks/bench_kernel.py [--max N] [--repeat R]
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

from iamspace import _iam_kernel_py
from iamspace.corpus import gen_tn
from iamspace.iam import code_x
from iamspace.terms import Code

try:
    from iamspace import _iam_kernel
except ImportError:
    _iam_kernel = None


def _best(fn, args, repeat: int) -> tuple[float, tuple]:
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max", type=int, default=12)
    ap.add_argument("--repeat", type=int, default=3)
    ns = ap.parse_args(argv)
    if _iam_kernel is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
    w = csv.writer(sys.stdout)
    w.writerow(["n", "transitions", "python_s", "cython_s", "speedup"])
    for n in range(1, ns.max + 1):
        code = Code.of(gen_tn(n))
        args = (list(code.kind), list(code.left), list(code.right), list(code.parent),
                list(code.binder), list(code.depth), 10**9, code_x(code))
        tp, rp = _best(_iam_kernel_py.run_space, args, ns.repeat)
        if _iam_kernel is None:
            w.writerow([n, rp[0], f"{tp:.4f}", "", ""])
            continue
        tc, rc = _best(_iam_kernel.run_space, args, ns.repeat)
        if rc != rp:
            raise SystemExit(f"kernels disagree at n={n}: {rc} != {rp}")
        w.writerow([n, rp[0], f"{tp:.4f}", f"{tc:.4f}", f"{tp / tc:.1f}" if tc else ""])
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
