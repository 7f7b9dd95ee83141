"""Compare the numba kernels with the interpreted fallback.

Each workload runs on both backends, checks that the answers agree, and
reports the best of a few repeats. Run with ``python3 benchmarks/bench_kernels.py``;
``--quick`` trims the repeat count.
"""

import argparse
import time

import numpy as np

from natdual import kernels
from natdual.algebra import _flat_ops, hom_problem, power, subalgebra
from natdual.catalog import db4, demorgan4, duplicator, two
from natdual.duplication import apply_P_Gamma


def _homs(A, B):
    prob = hom_problem(A, B).compile()
    return lambda be: kernels.csp_search(prob, 10**7, 10**9, backend=be)[0]


def _closure(A, seeds):
    tables, arities, offsets = _flat_ops(A)
    masks = []
    for s in seeds:
        m = np.zeros(A.size, dtype=np.bool_)
        m[list(s)] = True
        masks.append(m)

    def go(be):
        return np.stack([kernels.close_subset(m, tables, arities, offsets, A.size, backend=be)
                         for m in masks])
    return go


def workloads():
    D = two()
    DB = db4()
    B2, _ = subalgebra(power(DB, 2), range(16))
    rng = np.random.default_rng(0)
    P5 = power(D, 5)
    seeds = [rng.choice(P5.size, size=2, replace=False) for _ in range(200)]
    P8 = power(D, 8)
    seeds8 = [rng.choice(P8.size, size=3, replace=False) for _ in range(200)]
    DBC = apply_P_Gamma(duplicator("gamma_dbc"), demorgan4())
    return [
        ("homs 2^5 -> 2", _homs(P5, D)),
        ("homs 2^3 -> 2^2", _homs(power(D, 3), power(D, 2))),
        ("homs DB4^2 -> DB4", _homs(B2, DB)),
        ("homs DBC16 -> DBC16", _homs(DBC, DBC)),
        ("homs 2^6 -> 2^3", _homs(power(D, 6), power(D, 3))),
        ("homs DB4^2 -> DB4^2", _homs(B2, B2)),
        ("closure in 2^5 (200 seeds)", _closure(P5, seeds)),
        ("closure in 2^8 (200 seeds)", _closure(P8, seeds8)),
    ]


def best_of(fn, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args(argv)
    repeats = 1 if args.quick else 3
    if not kernels._accel.HAVE_NUMBA:
        print("numba not importable; only the python backend is available")
        return 1
    rows = []
    for name, fn in workloads():
        fn("numba")  # compile outside the timed region
        t_nb, r_nb = best_of(lambda: fn("numba"), repeats)
        t_py, r_py = best_of(lambda: fn("python"), repeats)
        if not np.array_equal(r_nb, r_py):
            raise SystemExit(f"backends disagree on {name!r}")
        rows.append((name, len(r_nb), t_py, t_nb))
    print(f"{'workload':30s} {'out':>6s} {'python s':>10s} {'numba s':>10s} {'speedup':>8s}")
    for name, n, t_py, t_nb in rows:
        print(f"{name:30s} {n:6d} {t_py:10.4f} {t_nb:10.4f} {t_py / max(t_nb, 1e-9):8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
