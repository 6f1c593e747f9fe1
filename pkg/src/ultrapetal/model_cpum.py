"""Continuous pseudo-ultrametrics on the Cantor set.

Elements are pseudo-ultrametrics constant on the cells of a finite
binary partition: a cell set plus a symmetric matrix over the cells that
satisfies the strong triangle inequality, with vanishing off-diagonal
entries allowed.  The distance of two elements is the top value involved
in any pointwise disagreement of the induced functions on pairs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .cells import cell_owners, check_prefixes, refinement
from .scales import RangeSet, ScaleLike, ZERO, as_scale, max_outside, scale_str
from .umspace import check_matrix


class CantorPseudoUltrametric:
    """Cell partition with an exact pseudo-ultrametric matrix over the cells.

    Cells are stored in lexicographic order (the matrix is permuted to
    match).  Elements are compared up to the induced function on pairs,
    not up to cell structure; equality of elements is ``ud(d, e) == 0``.
    Immutable.
    """

    __slots__ = ("cells", "dist")

    def __init__(self, cells: Sequence[str], dist: Sequence[Sequence[ScaleLike]]):
        given = [str(c) for c in cells]
        ordered = check_prefixes(given)
        rows = check_matrix(dist, given, allow_zero=True)
        order = sorted(range(len(given)), key=lambda i: given[i])
        self.cells: tuple[str, ...] = ordered
        self.dist: tuple[tuple[Fraction, ...], ...] = tuple(
            tuple(rows[a][b] for b in order) for a in order
        )

    def __repr__(self) -> str:
        return f"CantorPseudoUltrametric({len(self.cells)} cells)"

    def spectrum(self) -> RangeSet:
        """{0} together with every matrix entry."""
        values = {ZERO}
        n = len(self.cells)
        for i in range(n):
            for j in range(i + 1, n):
                values.add(self.dist[i][j])
        return RangeSet(values)

    def to_json(self) -> dict:
        return {
            "cells": list(self.cells),
            "dist": [[scale_str(v) for v in row] for row in self.dist],
        }

    @classmethod
    def from_json(cls, data: object) -> "CantorPseudoUltrametric":
        if not isinstance(data, Mapping) or "cells" not in data or "dist" not in data:
            raise ValueError('file must be {"cells": [...], "dist": [[...]]}')
        return cls(data["cells"], data["dist"])


def ud(d: CantorPseudoUltrametric, e: CantorPseudoUltrametric) -> Fraction:
    """Distance of two pseudo-ultrametrics over the common cell refinement.

    The max over pairs where the induced values differ of the larger
    value; this equals the least bound epsilon with d <= e v epsilon and
    e <= d v epsilon on all pairs.
    """
    refined = refinement((d.cells, e.cells))
    od = cell_owners(refined, d.cells)
    oe = cell_owners(refined, e.cells)
    worst = ZERO
    n = len(refined)
    for i in range(n):
        di = d.dist[od[i]]
        ei = e.dist[oe[i]]
        for j in range(i + 1, n):
            a = di[od[j]]
            b = ei[oe[j]]
            if a != b:
                hi = a if a > b else b
                if hi > worst:
                    worst = hi
    return worst


def trace(d: CantorPseudoUltrametric) -> RangeSet:
    return d.spectrum()


def in_petal(d: CantorPseudoUltrametric, s: RangeSet) -> bool:
    return d.spectrum().issubset(s)


def petal_distance(
    d: CantorPseudoUltrametric, s: RangeSet
) -> tuple[Fraction, CantorPseudoUltrametric]:
    """Distance to the petal of ``s`` plus a nearest member.

    The witness zeroes every entry at or below the threshold; lowering
    small values to 0 cannot break the strong triangle inequality when
    all surviving entries are larger, so the witness is again a
    pseudo-ultrametric, with spectrum inside ``s``.
    """
    u = max_outside(d.spectrum(), s)
    if u == ZERO:
        return ZERO, d
    truncated = [
        [v if v > u else ZERO for v in row] for row in d.dist
    ]
    return u, CantorPseudoUltrametric(d.cells, truncated)


def approximate_into_petal(
    d: CantorPseudoUltrametric, s: RangeSet, r: ScaleLike
) -> tuple[RangeSet, CantorPseudoUltrametric]:
    """Zero the entries below ``r``; the widened range set keeps the rest."""
    bound = as_scale(r)
    if bound <= ZERO:
        raise ValueError("approximation radius must be positive")
    widened = s.union(RangeSet(v for row in d.dist for v in row if v >= bound))
    truncated = [
        [v if v >= bound else ZERO for v in row] for row in d.dist
    ]
    return widened, CantorPseudoUltrametric(d.cells, truncated)


def covering_petal(points: Sequence[CantorPseudoUltrametric]) -> RangeSet:
    out = RangeSet()
    for p in points:
        out = out.union(p.spectrum())
    return out


__all__ = [
    "CantorPseudoUltrametric",
    "ud",
    "trace",
    "in_petal",
    "petal_distance",
    "approximate_into_petal",
    "covering_petal",
]
