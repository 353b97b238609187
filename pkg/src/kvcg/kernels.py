"""Kernel selection: compiled C speedups when available, pure Python otherwise.

The compiled kernels work in 64-bit integers with overflow detection; any
input (or intermediate) that will not fit is routed to the pure-Python
kernels, which use arbitrary-precision ints. Set KVCG_PURE=1 to force the
pure path, e.g. for benchmarking or debugging.
"""
from __future__ import annotations

import os
from fractions import Fraction

from . import _pure
from ._pure import LP_INFEASIBLE, LP_OPTIMAL, LP_UNBOUNDED

if os.environ.get("KVCG_PURE", "") not in ("", "0"):
    _speedups = None
else:
    try:
        from . import _speedups  # type: ignore[attr-defined]
    except ImportError:
        _speedups = None

HAVE_SPEEDUPS = _speedups is not None

# Conservative magnitude cap: keeps every welfare sum and simplex input
# comfortably inside int64 for the compiled kernels.
_I64_SAFE = 1 << 60


def wd_best(values: list[list[int]], ground: int) -> tuple[int, int, list[int]]:
    if _speedups is not None:
        total = sum(max(table) for table in values) if values else 0
        if total < _I64_SAFE:
            return _speedups.wd_best(values, ground)
    return _pure.wd_best(values, ground)


def lp_solve(c: list[int], rows: list[list[int]], b: list[int]
             ) -> tuple[int, list[Fraction], Fraction]:
    if _speedups is not None and _fits_i64(c, rows, b):
        try:
            status, nums, den = _speedups.lp_solve(c, rows, b)
        except OverflowError:
            pass
        else:
            if status != LP_OPTIMAL:
                return status, [], Fraction(0)
            xs = [Fraction(x, den) for x in nums[:-1]]
            return status, xs, Fraction(nums[-1], den)
    return _pure.lp_solve(c, rows, b)


def _fits_i64(c, rows, b) -> bool:
    bound = max(
        max((abs(x) for x in c), default=0),
        max((abs(x) for x in b), default=0),
        max((abs(x) for row in rows for x in row), default=0),
    )
    return bound < _I64_SAFE
