"""Bitmask arithmetic for sets of goods.

A set of goods is a plain int: bit k set means good k is in the bundle.
Tables over all bundles are lists of length 2^m indexed by mask, which keeps
subset/superset tests, complements and submask sweeps O(1)/O(3^m).
"""
from __future__ import annotations

from typing import Iterator


def full_mask(m: int) -> int:
    return (1 << m) - 1


def complement(mask: int, m: int) -> int:
    return full_mask(m) & ~mask


def is_subset(sub: int, sup: int) -> bool:
    return sub & ~sup == 0


def popcount(mask: int) -> int:
    return mask.bit_count()


def submasks(mask: int) -> Iterator[int]:
    """All submasks of `mask`, descending, ending with 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def proper_submasks(mask: int) -> Iterator[int]:
    """All strict submasks of `mask` (excludes `mask` itself)."""
    it = submasks(mask)
    next(it)
    return it


def singles(mask: int) -> Iterator[int]:
    """The single-good masks contained in `mask`."""
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def mask_to_goods(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def format_mask(mask: int, m: int) -> str:
    if mask == 0:
        return "{}"
    return "{" + ",".join(str(g) for g in mask_to_goods(mask)) + "}"


def check_mask(mask: int, m: int) -> int:
    if not isinstance(mask, int) or isinstance(mask, bool):
        raise ValueError(f"good-set mask must be an int, got {mask!r}")
    if mask < 0 or mask >= 1 << m:
        raise ValueError(f"mask {mask} out of range for m={m}")
    return mask
