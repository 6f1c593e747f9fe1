"""The locally constant function model on the Cantor set.

Elements are functions from the Cantor set into the scales, constant on
the cells of a finite binary partition and taking the value 0 somewhere.
The distance of two functions is the largest value involved in any
pointwise disagreement.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cells import cell_owners, check_prefixes, merge_equal_siblings, refinement
from .extension import Inconsistent, verify_extension
from .scales import RangeSet, ScaleLike, ZERO, as_scale, max_outside, scale_str


class CantorFunction:
    """Locally constant scale-valued function with 0 in its image.

    Stored on the coarsest cell partition realising it (equal-valued
    sibling cells are merged on construction), which makes structural
    equality agree with pointwise equality.  Immutable.
    """

    __slots__ = ("cells",)

    def __init__(self, cells: Mapping[str, ScaleLike] | Iterable[tuple[str, ScaleLike]]):
        items = cells.items() if isinstance(cells, Mapping) else list(cells)
        table: dict[str, Fraction] = {}
        for key, value in items:
            if key in table:
                raise ValueError(f"duplicate cell prefix {key!r}")
            table[str(key)] = as_scale(value)
        check_prefixes(table.keys())
        if ZERO not in table.values():
            raise ValueError("the image must contain 0")
        merged = merge_equal_siblings(table)
        self.cells: tuple[tuple[str, Fraction], ...] = tuple(sorted(merged.items()))

    def prefixes(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.cells)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CantorFunction) and self.cells == other.cells

    def __hash__(self) -> int:
        return hash(self.cells)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k!r}: {v}" for k, v in self.cells)
        return "CantorFunction({%s})" % inner

    def to_json(self) -> dict:
        return {"cells": [[k, scale_str(v)] for k, v in self.cells]}

    @classmethod
    def from_json(cls, data: object) -> "CantorFunction":
        if not isinstance(data, Mapping) or "cells" not in data:
            raise ValueError('cell function file must be {"cells": [[prefix, scale], ...]}')
        pairs = data["cells"]
        if not isinstance(pairs, list) or any(len(p) != 2 for p in pairs):
            raise ValueError("cells must be a list of [prefix, scale] pairs")
        return cls((k, v) for k, v in pairs)


def zero_function() -> CantorFunction:
    """The constant-zero function (one cell, the whole space)."""
    return CantorFunction({"": ZERO})


def nabla(f: CantorFunction, g: CantorFunction) -> Fraction:
    """Distance of two functions: the top value among pointwise disagreements.

    This closed form equals the least bound epsilon with
    f <= g v epsilon and g <= f v epsilon everywhere: at a disagreement
    point the larger value forces epsilon at least that high.
    """
    if f.cells == g.cells:
        return ZERO
    pf = f.prefixes()
    pg = g.prefixes()
    refined = refinement((pf, pg))
    of = cell_owners(refined, pf)
    og = cell_owners(refined, pg)
    worst = ZERO
    for pos in range(len(refined)):
        a = f.cells[of[pos]][1]
        b = g.cells[og[pos]][1]
        if a != b:
            hi = a if a > b else b
            if hi > worst:
                worst = hi
    return worst


def trace(f: CantorFunction) -> RangeSet:
    """{0} together with every value the function takes."""
    return RangeSet(v for _, v in f.cells)


def in_petal(f: CantorFunction, s: RangeSet) -> bool:
    return trace(f).issubset(s)


def petal_distance(f: CantorFunction, s: RangeSet) -> tuple[Fraction, CantorFunction]:
    """Distance to the petal of ``s`` plus a nearest member.

    The witness keeps every cell whose value exceeds the threshold (those
    values lie in ``s``) and flattens the rest to 0, so it belongs to the
    petal and still contains 0.
    """
    u = max_outside(trace(f), s)
    if u == ZERO:
        return ZERO, f
    witness = CantorFunction(
        (k, v if v > u else ZERO) for k, v in f.cells
    )
    return u, witness


def approximate_into_petal(
    f: CantorFunction, s: RangeSet, r: ScaleLike
) -> tuple[RangeSet, CantorFunction]:
    """Flatten values below ``r`` to 0; the widened range set keeps the rest."""
    bound = as_scale(r)
    if bound <= ZERO:
        raise ValueError("approximation radius must be positive")
    widened = s.union(RangeSet(v for _, v in f.cells if v >= bound))
    g = CantorFunction((k, v if v >= bound else ZERO) for k, v in f.cells)
    return widened, g


def covering_petal(points: Sequence[CantorFunction]) -> RangeSet:
    out = RangeSet()
    for p in points:
        out = out.union(trace(p))
    return out


def one_point_extension(
    anchors: Sequence[CantorFunction], targets: Sequence[ScaleLike]
) -> CantorFunction:
    """A function at the prescribed distances from each anchor.

    With no anchors the zero function is returned, and a zero target pins
    the result to that anchor.  Otherwise let m be the least target and
    i* the first index attaining it: the first cell of the anchors'
    common refinement where anchor i* vanishes is split in two, the
    result taking the value m on one half and 0 on the other, and copying
    anchor i* elsewhere.  Anchors at distance m disagree with the result
    on one of the halves at magnitude exactly m, while larger targets
    keep their dominant disagreement with anchor i* intact.

    Raises Inconsistent (with a violating index pair) when the targets
    cannot be realised.
    """
    want = [as_scale(t) for t in targets]
    if len(want) != len(anchors):
        raise ValueError("anchors and targets must have equal length")
    if not anchors:
        return zero_function()
    theta: CantorFunction | None = None
    for idx, t in enumerate(want):
        if t == ZERO:
            theta = anchors[idx]
            break
    if theta is None:
        m = min(want)
        base = anchors[want.index(m)]
        refined = refinement(tuple(a.prefixes() for a in anchors))
        owners = cell_owners(refined, base.prefixes())
        split, zero_cell = next(
            (cell, base.cells[owner][0])
            for cell, owner in zip(refined, owners)
            if base.cells[owner][1] == ZERO
        )
        table = {k: v for k, v in base.cells if k != zero_cell}
        walk = zero_cell
        for step in split[len(zero_cell):]:
            table[walk + ("1" if step == "0" else "0")] = ZERO
            walk += step
        table[split + "0"] = m
        table[split + "1"] = ZERO
        theta = CantorFunction(table)
    verify_extension(nabla, theta, anchors, want)
    return theta


__all__ = [
    "CantorFunction",
    "zero_function",
    "nabla",
    "trace",
    "in_petal",
    "petal_distance",
    "approximate_into_petal",
    "covering_petal",
    "one_point_extension",
    "Inconsistent",
]
