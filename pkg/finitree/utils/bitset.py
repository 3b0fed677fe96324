from typing import Iterable

from finitree.terms.term import Variable


def mask_of(variables: Iterable[Variable]) -> int:
    """Bitset with bit `v.id` set for every variable."""
    mask = 0
    for v in variables:
        mask |= 1 << v.id
    return mask


def members(mask: int, universe: Iterable[Variable]) -> frozenset:
    """Variables of `universe` whose bit is set in `mask`."""
    return frozenset(v for v in universe if mask >> v.id & 1)


def union_all(masks: Iterable[int]) -> int:
    result = 0
    for m in masks:
        result |= m
    return result


def sorted_groups(sh: Iterable[int]) -> list:
    # singletons first, then by lowest member
    return sorted(sh, key=lambda m: (bin(m).count("1"), _bits_key(m)))


def _bits_key(mask: int) -> tuple:
    bits = []
    i = 0
    while mask:
        if mask & 1:
            bits.append(i)
        mask >>= 1
        i += 1
    return tuple(bits)
