#!/usr/bin/env python3
"""Benchmark the compiled pairwise kernels against the pure-numpy fallback.

Usage:  python benchmarks/bench_kernels.py [--repeats N]

Covers the two hot loops behind the angular integrals: the tensor-product
pair sum (O(M^2) in the rule size) and the elementwise Monte Carlo integrand
(O(samples)).  Both backends must agree to ~1e-12; timings are best-of-N.
"""

import argparse
import time

import numpy as np

from photonmedium import kernels
from photonmedium.quadrature import make_sphere_rule


def best_of(repeats, fn, *args):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def sample_dirs(rng, m):
    z = rng.uniform(-1, 1, m)
    phi = rng.uniform(0, 2 * np.pi, m)
    r = np.sqrt(1 - z * z)
    return np.column_stack((r * np.cos(phi), r * np.sin(phi), z))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    backends = kernels.available_backends()
    if "compiled" not in backends:
        print("compiled extension not built; nothing to compare (python backend only)")
        return

    k0 = np.array([1.0, 0.0, 0.0])
    rng = np.random.default_rng(0)
    rows = []

    for order in (16, 24, 32):
        rule = make_sphere_rule(order)
        pairs = len(rule) ** 2
        call_args = (rule.nodes, rule.weights, rule.nodes, rule.weights, 1.0, k0, 2, -1.0, 1e-3)
        t_c, v_c = best_of(args.repeats, kernels.get_backend("compiled").pair_product_sum, *call_args)
        t_p, v_p = best_of(args.repeats, kernels.get_backend("python").pair_product_sum, *call_args)
        assert abs(v_c - v_p) <= 1e-10 * abs(v_p), "backend disagreement"
        rows.append((f"pair_product_sum order={order} ({pairs/1e6:.2f}M pairs)", t_c, t_p))

    for m in (10**6, 4 * 10**6):
        dirs_k, dirs_s = sample_dirs(rng, m), sample_dirs(rng, m)
        call_args = (dirs_k, dirs_s, 1.0, k0, 1, 1.0, 0.0)
        t_c, v_c = best_of(args.repeats, kernels.get_backend("compiled").pair_values, *call_args)
        t_p, v_p = best_of(args.repeats, kernels.get_backend("python").pair_values, *call_args)
        assert np.allclose(v_c, v_p, rtol=1e-12), "backend disagreement"
        rows.append((f"pair_values m={m:.0e}", t_c, t_p))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'compiled':>10}  {'python':>10}  {'speedup':>8}")
    for name, t_c, t_p in rows:
        print(f"{name:<{width}}  {t_c*1e3:>8.1f}ms  {t_p*1e3:>8.1f}ms  {t_p/t_c:>7.2f}x")


if __name__ == "__main__":
    main()
