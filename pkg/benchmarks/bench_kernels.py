"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each row calls both flavours on identical inputs, checks that they agree,
and reports the best wall time of ``--repeat`` runs (after one warm-up
call, so JIT compilation is excluded).
"""
import argparse
import time

import numpy as np

from ncselftest import kernels
from ncselftest._accel import HAS_NUMBA
from ncselftest.graphs import Graph, stabilizer_generators
from ncselftest.inequality import build
from ncselftest.pauli import random_pauli
from ncselftest.realization import _symbolic_tables, ideal_realization


def best_time(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def case_brute_force(n):
    ineq = build(n)
    masks = ineq.label_masks()
    coeffs = np.asarray(ineq.coeffs, dtype=np.int64)
    args = (masks, coeffs, 0, 1 << (2 * n))
    return f"brute force n={n}", lambda f: f(*args), kernels.brute_force_max_nb, kernels.brute_force_max_np


def case_rref(n):
    X, Z, K = stabilizer_generators(Graph.complete(n)).arrays()
    call = lambda f: f(X.copy(), Z.copy(), K.copy(), n)
    return f"rref K_{n}", call, kernels.rref_nb, kernels.rref_np


def case_expectation(n, count):
    s = stabilizer_generators(Graph.complete(n))
    rng = np.random.default_rng(0)
    ops = [random_pauli(n, rng, hermitian=True) for _ in range(count)]
    QX = np.array([p.x for p in ops])
    QZ = np.array([p.z for p in ops])
    QK = np.array([p.phase_exp for p in ops], dtype=np.int64)
    call = lambda f: f(*s.solver, QX, QZ, QK)
    return (f"expectation K_{n} x{count}", call,
            kernels.expectation_batch_nb, kernels.expectation_batch_np)


def case_terms(n):
    ineq = build(n)
    r = ideal_realization(n)
    tables = _symbolic_tables(r)
    solver = r.state.solver
    a_idx = np.ascontiguousarray(ineq.a_index, dtype=np.int64)
    call = lambda f: f(*tables, a_idx, *solver)
    return f"term values I_{n} ({len(ineq)} terms)", call, \
        kernels.term_expectations_nb, kernels.term_expectations_np


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--quick", action="store_true", help="smaller problem sizes")
    args = p.parse_args(argv)
    if not HAS_NUMBA:
        print("numba disabled or missing: both columns run the same interpreted code")
    if args.quick:
        cases = [case_brute_force(8), case_rref(64), case_expectation(64, 2000), case_terms(40)]
    else:
        cases = [case_brute_force(10), case_rref(256), case_expectation(128, 20000),
                 case_terms(100)]
    print(f"{'kernel':36s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speedup':>8s}")
    for name, call, nb, npy in cases:
        a, b = call(nb), call(npy)
        same = all(np.array_equal(u, v) for u, v in zip(a, b)) if isinstance(a, tuple) \
            else np.array_equal(a, b)
        if not same:
            raise SystemExit(f"{name}: numba and numpy results differ")
        t_nb = best_time(lambda: call(nb), args.repeat)
        t_np = best_time(lambda: call(npy), args.repeat)
        print(f"{name:36s} {t_nb:10.4f} {t_np:10.4f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
