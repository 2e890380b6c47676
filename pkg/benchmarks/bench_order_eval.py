"""Throughput comparison of the compiled vs pure-Python cut-order kernel.

Cut-order evaluation dominates the optimizer's runtime, which is why the
inner loop has a C extension. Run with:

    python3 benchmarks/bench_order_eval.py
"""

import itertools
import random
import time

from planwright.kernels import COMPILED, eval_orders_chop, eval_orders_chop_py


def make_case(rng, n_cuts, n_orders):
    stock_len = 96 * 64
    kerf = 8
    positions = sorted(rng.sample(range(1, (stock_len - kerf) // (kerf + 1)),
                                  n_cuts))
    positions = [p * (kerf + 1) for p in positions]
    orders = []
    for _ in range(n_orders):
        perm = list(range(n_cuts))
        rng.shuffle(perm)
        orders.append(tuple(perm))
    return dict(
        positions=positions, stock_len=stock_len, kerf=kerf,
        op_error_ticks=1, setup_full=60.0, setup_partial=15.0,
        op_seconds=1.0, load_seconds=55.0, orders=orders,
    )


def bench(fn, cases, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        for case in cases:
            fn(**case)
        best = min(best, time.perf_counter() - start)
    evaluated = sum(len(c["orders"]) for c in cases)
    return evaluated / best


def main():
    rng = random.Random("bench")
    print(f"compiled extension active: {COMPILED}")
    print(f"{'cuts':>5} {'orders/s (python)':>18} {'orders/s (fast)':>16} "
          f"{'speedup':>8}")
    for n_cuts in (3, 5, 7, 9):
        cases = [make_case(rng, n_cuts, 50) for _ in range(40)]
        slow = bench(eval_orders_chop_py, cases)
        fast = bench(eval_orders_chop, cases)
        print(f"{n_cuts:>5} {slow:>18,.0f} {fast:>16,.0f} {fast / slow:>7.1f}x")
    # sanity: identical outputs on one case
    case = make_case(rng, 6, 100)
    assert eval_orders_chop(**case) == eval_orders_chop_py(**case)
    print("outputs identical: True")


if __name__ == "__main__":
    main()
