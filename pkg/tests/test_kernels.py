import random

from planwright import kernels
from planwright.kernels import eval_orders_chop, eval_orders_chop_py


def random_case(rng):
    n = rng.randint(1, 6)
    stock_len = rng.choice([24, 48, 96]) * 64
    kerf = rng.choice([0, 8])
    # keep cuts spaced by more than the kerf so every order stays feasible
    positions = sorted(rng.sample(range(1, (stock_len - kerf) // (kerf + 1)), n))
    positions = [p * (kerf + 1) for p in positions]
    order_count = rng.randint(1, 12)
    orders = []
    for _ in range(order_count):
        perm = list(range(n))
        rng.shuffle(perm)
        orders.append(tuple(perm))
    return dict(
        positions=positions,
        stock_len=stock_len,
        kerf=kerf,
        op_error_ticks=rng.choice([1, 2, 4, 12]),
        setup_full=float(rng.choice([20, 60, 180])),
        setup_partial=float(rng.choice([-1, 15, 75])),
        op_seconds=rng.uniform(0.5, 10.0),
        load_seconds=float(rng.randint(2, 55)),
        orders=orders,
    )


def test_compiled_kernel_is_active():
    assert kernels.COMPILED, "compiled extension should be built in this repo"
    assert eval_orders_chop is not eval_orders_chop_py


def test_kernels_bit_identical_on_random_cases():
    rng = random.Random("kernel-parity")
    for _ in range(300):
        case = random_case(rng)
        fast = eval_orders_chop(**case)
        slow = eval_orders_chop_py(**case)
        assert fast == slow, case


def test_kernel_known_value_first_cut():
    # one chop at 30" on a 96" two-by-four: 60 setup + 55 handling + 1 op,
    # measured length 30" is on-grid so precision is just the tool error
    (fp, ft), = eval_orders_chop_py(
        positions=[30 * 64],
        stock_len=96 * 64,
        kerf=8,
        op_error_ticks=1,
        setup_full=60.0,
        setup_partial=15.0,
        op_seconds=1.0,
        load_seconds=55.0,
        orders=[(0,)],
    )
    assert (fp, ft) == (1, 116.0)


def test_kernel_partial_setup_on_repeat_measurement():
    # both cuts measure a 10" piece off an original edge, so the second
    # reuses the jig: 15 + 1 seconds instead of 60 + 1
    stock_len = 96 * 64
    results = eval_orders_chop_py(
        positions=[10 * 64, stock_len - 8 - 10 * 64],
        stock_len=stock_len,
        kerf=8,
        op_error_ticks=1,
        setup_full=60.0,
        setup_partial=15.0,
        op_seconds=1.0,
        load_seconds=55.0,
        orders=[(1, 0)],
    )
    (fp, ft), = results
    assert ft == 55.0 + (60.0 + 1.0) + (15.0 + 1.0)
    assert fp == 2
