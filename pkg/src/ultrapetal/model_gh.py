"""The non-Archimedean Gromov-Hausdorff space over finite ultrametric spaces.

Points are isometry classes of finite ultrametric spaces.  The distance
of two classes is computed by scanning quotient scales; a brute-force
ambient-space oracle is provided for tiny instances so the scan can be
checked against the defining infimum.
"""

from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction
from typing import Iterable, Sequence

from .scales import RangeSet, ScaleLike, ZERO, as_scale, max_outside
from .umspace import FiniteUltraSpace


class TooLarge(ValueError):
    """The ambient oracle only handles very small instances."""


class GHPoint:
    """A finite ultrametric space held up to isometry.

    Equality and hashing go through the canonical form, so relabelled
    copies compare equal.  Immutable.
    """

    __slots__ = ("space", "_quotient_canon", "_spectrum")

    def __init__(self, space: FiniteUltraSpace):
        self.space = space
        self._quotient_canon: dict[Fraction, str] = {}
        self._spectrum: RangeSet | None = None

    def canonical_form(self) -> str:
        return self.space.canonical_form()

    def spectrum(self) -> RangeSet:
        if self._spectrum is None:
            self._spectrum = self.space.spectrum()
        return self._spectrum

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GHPoint) and self.canonical_form() == other.canonical_form()

    def __hash__(self) -> int:
        return hash(self.canonical_form())

    def __repr__(self) -> str:
        return f"GHPoint({len(self.space)} points)"

    def quotient_canon(self, eps: ScaleLike) -> str:
        """Canonical form of the eps-quotient.

        Quotients only change at spectrum values, so eps is floored to
        the spectrum and results are cached per floor value.
        """
        bound = as_scale(eps)
        spec = self.spectrum().elems
        key = spec[bisect_right(spec, bound) - 1]
        cached = self._quotient_canon.get(key)
        if cached is None:
            cached = self.space.quotient(key).canonical_form()
            self._quotient_canon[key] = cached
        return cached


def na_distance(x: GHPoint, y: GHPoint) -> Fraction:
    """Least candidate scale at which the two quotients become isometric.

    Candidates are 0 and the two spectra; the scan terminates because
    both spaces collapse to a point at the larger diameter.
    """
    candidates = sorted(set(x.spectrum().elems) | set(y.spectrum().elems))
    for eps in candidates:
        if x.quotient_canon(eps) == y.quotient_canon(eps):
            return eps
    raise AssertionError("quotient scan must terminate at the joint diameter")


def na_oracle(
    x: GHPoint, y: GHPoint, extra_scales: Iterable[ScaleLike] = ()
) -> Fraction:
    """Defining infimum by brute force, for |X| + |Y| <= 6.

    Enumerates pseudo-ultrametrics on the disjoint union that keep both
    internal matrices, with cross distances drawn from the grid of both
    spectra, 0, and any extra scales; returns the least Hausdorff
    distance over the valid ambients.  Zero cross distances glue points,
    so overlapping embeddings are covered.
    """
    nx, ny = len(x.space), len(y.space)
    if nx + ny > 6:
        raise TooLarge(f"oracle limited to 6 points total, got {nx + ny}")
    dx = x.space.dist
    dy = y.space.dist
    grid = sorted(
        {ZERO}
        | set(x.spectrum().elems)
        | set(y.spectrum().elems)
        | {as_scale(v) for v in extra_scales}
    )
    total = nx * ny
    cross = [[ZERO] * ny for _ in range(nx)]
    best: list[Fraction | None] = [None]

    def finish(row_floor: Fraction) -> None:
        worst = row_floor
        for j in range(ny):
            nearest = min(cross[i][j] for i in range(nx))
            if nearest > worst:
                worst = nearest
        if best[0] is None or worst < best[0]:
            best[0] = worst

    def search(k: int, row_floor: Fraction) -> None:
        if best[0] is not None and row_floor >= best[0]:
            return
        if k == total:
            finish(row_floor)
            return
        i, j = divmod(k, ny)
        forced: Fraction | None = None
        cap: Fraction | None = None
        # each already-assigned entry sharing a point forces this one to
        # the larger side, or caps it on a tie
        for jj in range(j):
            a = cross[i][jj]
            s = dy[jj][j]
            if a == s:
                if cap is None or a < cap:
                    cap = a
            else:
                need = a if a > s else s
                if forced is None:
                    forced = need
                elif forced != need:
                    return
        for ii in range(i):
            a = cross[ii][j]
            s = dx[ii][i]
            if a == s:
                if cap is None or a < cap:
                    cap = a
            else:
                need = a if a > s else s
                if forced is None:
                    forced = need
                elif forced != need:
                    return
        if forced is not None:
            if cap is not None and forced > cap:
                return
            options: Sequence[Fraction] = (forced,)
        elif cap is not None:
            options = [g for g in grid if g <= cap]
        else:
            options = grid
        closing_row = j == ny - 1
        for v in options:
            cross[i][j] = v
            if closing_row:
                nearest = min(cross[i][t] for t in range(ny))
                search(k + 1, nearest if nearest > row_floor else row_floor)
            else:
                search(k + 1, row_floor)

    search(0, ZERO)
    assert best[0] is not None  # the all-maximal assignment is always valid
    return best[0]


def trace(x: GHPoint) -> RangeSet:
    """The trace of a class is its distance spectrum."""
    return x.spectrum()


def in_petal(x: GHPoint, s: RangeSet) -> bool:
    return x.spectrum().issubset(s)


def petal_distance(x: GHPoint, s: RangeSet) -> tuple[Fraction, GHPoint]:
    """Distance to the classes with spectrum inside ``s``, with witness.

    The witness is the quotient at the threshold: its spectrum keeps
    exactly the values above the threshold (all inside ``s``) plus 0.
    """
    u = max_outside(x.spectrum(), s)
    if u == ZERO:
        return ZERO, x
    return u, GHPoint(x.space.quotient(u))


__all__ = [
    "GHPoint",
    "TooLarge",
    "na_distance",
    "na_oracle",
    "trace",
    "in_petal",
    "petal_distance",
]
