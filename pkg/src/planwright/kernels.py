"""Select the order-evaluation kernel: compiled extension when built,
otherwise the pure-Python fallback. Both share one contract and results
are bit-identical (see tests/test_kernels.py)."""

from __future__ import annotations

from . import ordereval as _py

try:
    from . import _fastcost as _impl  # type: ignore[attr-defined]

    COMPILED = True
except ImportError:  # pragma: no cover - depends on build environment
    _impl = _py
    COMPILED = False

eval_orders_chop = _impl.eval_orders_chop
eval_orders_chop_py = _py.eval_orders_chop
