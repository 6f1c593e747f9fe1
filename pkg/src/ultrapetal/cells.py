"""Complete prefix-free binary cell partitions of the Cantor set.

A partition is a finite set of binary strings such that no string is a
prefix of another and every infinite binary sequence extends exactly one
of them.  The empty string is the one-cell partition.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, TypeVar

V = TypeVar("V")


def check_prefixes(prefixes: Iterable[str]) -> tuple[str, ...]:
    """Validate and sort a complete prefix-free set of binary strings."""
    keys = list(prefixes)
    if not keys:
        raise ValueError("cell partition must be nonempty")
    for k in keys:
        if not isinstance(k, str) or any(c not in "01" for c in k):
            raise ValueError(f"cell prefix must be a binary string, got {k!r}")
    if len(set(keys)) != len(keys):
        raise ValueError("duplicate cell prefixes")
    keys.sort()
    # extensions of a key sort contiguously right after it, so one
    # adjacent check decides prefix-freeness
    for a, b in zip(keys, keys[1:]):
        if b.startswith(a):
            raise ValueError(f"cell {a!r} is a prefix of cell {b!r}")
    total = sum(Fraction(1, 2 ** len(k)) for k in keys)
    if total != 1:
        raise ValueError(f"cells cover measure {total}, not the whole space")
    return tuple(keys)


def merge_equal_siblings(values: dict[str, V]) -> dict[str, V]:
    """Coarsest partition representing the same cell-wise assignment.

    Repeatedly replaces sibling cells carrying equal values by their
    parent; the normal form is unique.
    """
    out = dict(values)
    longest = max((len(k) for k in out), default=0)
    for length in range(longest, 0, -1):
        level = [k for k in out if len(k) == length and k[-1] == "0"]
        for key in level:
            sibling = key[:-1] + "1"
            if sibling in out and key in out and out[sibling] == out[key]:
                merged_value = out.pop(key)
                out.pop(sibling)
                out[key[:-1]] = merged_value
    return out


def refinement(keysets: Iterable[Sequence[str]]) -> list[str]:
    """Common refinement of complete prefix-free partitions.

    The refinement cells are exactly the keys of the union that no other
    key of the union properly extends.
    """
    merged = sorted(set().union(*[set(ks) for ks in keysets]))
    out: list[str] = []
    for pos, key in enumerate(merged):
        if pos + 1 == len(merged) or not merged[pos + 1].startswith(key):
            out.append(key)
    return out


def cell_owners(refined: Sequence[str], prefixes: Sequence[str]) -> list[int]:
    """Index into ``prefixes`` of the cell containing each refined cell.

    Both sequences must be lexicographically sorted; the owner of a
    refined cell is the last prefix that is <= it.
    """
    owners: list[int] = []
    i = 0
    last = len(prefixes) - 1
    for cell in refined:
        while i < last and prefixes[i + 1] <= cell:
            i += 1
        owners.append(i)
    return owners
