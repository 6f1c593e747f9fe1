"""The support-map model of a universal ultrametric space.

Elements are finitely supported maps from positive scales to positive
integers; the distance between two maps is the largest scale where they
disagree.  Petals are indexed by range sets: the petal of S holds the
maps supported inside S.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .extension import Inconsistent, verify_extension
from .scales import RangeSet, ScaleLike, ZERO, as_scale, max_outside, scale_str
from .umspace import FiniteUltraSpace


class SupportMap:
    """Finitely supported map from positive scales to positive integers.

    Entries are stored with descending keys; absent keys have value 0,
    and the value at 0 is always 0.  Immutable.
    """

    __slots__ = ("entries", "_map")

    def __init__(self, support: Mapping[ScaleLike, int] | Iterable[tuple[ScaleLike, int]] = ()):
        items = support.items() if isinstance(support, Mapping) else support
        table: dict[Fraction, int] = {}
        for key, value in items:
            k = as_scale(key)
            if k == ZERO:
                raise ValueError("support keys must be positive")
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ValueError(f"support value at {k} must be a positive integer")
            if k in table:
                raise ValueError(f"duplicate support key {k}")
            table[k] = value
        self.entries: tuple[tuple[Fraction, int], ...] = tuple(
            sorted(table.items(), reverse=True)
        )
        self._map = table

    def value_at(self, key: ScaleLike) -> int:
        return self._map.get(as_scale(key), 0)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SupportMap) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {v}" for k, v in self.entries)
        return "SupportMap({%s})" % inner

    def to_json(self) -> dict:
        return {"support": [[scale_str(k), v] for k, v in self.entries]}

    @classmethod
    def from_json(cls, data: object) -> "SupportMap":
        if not isinstance(data, Mapping) or "support" not in data:
            raise ValueError('support map file must be {"support": [[scale, count], ...]}')
        pairs = data["support"]
        if not isinstance(pairs, list) or any(len(p) != 2 for p in pairs):
            raise ValueError("support must be a list of [scale, count] pairs")
        return cls((k, v) for k, v in pairs)


def delta(f: SupportMap, g: SupportMap) -> Fraction:
    """Largest key where the two maps disagree; 0 when they are equal."""
    if f.entries == g.entries:
        return ZERO
    a, b = f.entries, g.entries
    i = j = 0
    while i < len(a) or j < len(b):
        if j >= len(b) or (i < len(a) and a[i][0] > b[j][0]):
            return a[i][0]
        if i >= len(a) or b[j][0] > a[i][0]:
            return b[j][0]
        if a[i][1] != b[j][1]:
            return a[i][0]
        i += 1
        j += 1
    return ZERO


def trace(f: SupportMap) -> RangeSet:
    """The smallest range set whose petal contains ``f``: {0} plus the support."""
    return RangeSet(k for k, _ in f.entries)


def in_petal(f: SupportMap, s: RangeSet) -> bool:
    return trace(f).issubset(s)


def petal_distance(f: SupportMap, s: RangeSet) -> tuple[Fraction, SupportMap]:
    """Exact distance from ``f`` to the petal of ``s`` and a nearest point.

    The distance is the largest support key outside ``s`` (0 for members);
    the witness keeps exactly the keys above that threshold, which all lie
    in ``s``.
    """
    u = max_outside(trace(f), s)
    if u == ZERO:
        return ZERO, f
    witness = SupportMap((k, v) for k, v in f.entries if k > u)
    return u, witness


def approximate_into_petal(
    f: SupportMap, s: RangeSet, r: ScaleLike
) -> tuple[RangeSet, SupportMap]:
    """Truncate ``f`` below ``r`` and widen ``s`` just enough to hold the rest.

    Returns (T, g) with g in the petal of T and delta(f, g) < r; T adds
    only the finitely many support keys >= r to ``s``.
    """
    bound = as_scale(r)
    if bound <= ZERO:
        raise ValueError("approximation radius must be positive")
    widened = s.union(RangeSet(k for k, _ in f.entries if k >= bound))
    g = SupportMap((k, v) for k, v in f.entries if k >= bound)
    return widened, g


def covering_petal(points: Sequence[SupportMap]) -> RangeSet:
    """A range set whose petal contains every given point: the traces' union."""
    out = RangeSet()
    for p in points:
        out = out.union(trace(p))
    return out


def one_point_extension(
    anchors: Sequence[SupportMap], targets: Sequence[ScaleLike]
) -> SupportMap:
    """A map at the prescribed distances from each anchor.

    With no anchors the zero map is returned.  A zero target pins the
    result to that anchor.  Otherwise, with m the least target attained
    first at index i*, the result copies anchor i* above m, takes a fresh
    value at m (one more than any competing anchor), and vanishes below.
    The construction realises every target exactly whenever the targets
    are consistent; an Inconsistent error identifies a violating pair
    otherwise.

    If every anchor lies in the petal of S and every target belongs to S,
    the result lies in the petal of S as well.
    """
    want = [as_scale(t) for t in targets]
    if len(want) != len(anchors):
        raise ValueError("anchors and targets must have equal length")
    if not anchors:
        return SupportMap()
    theta: SupportMap | None = None
    for idx, t in enumerate(want):
        if t == ZERO:
            theta = anchors[idx]
            break
    if theta is None:
        m = min(want)
        base = anchors[want.index(m)]
        fresh = 1 + max(
            anchor.value_at(m)
            for anchor, t in zip(anchors, want)
            if t == m
        )
        entries = [(k, v) for k, v in base.entries if k > m]
        entries.append((m, fresh))
        theta = SupportMap(entries)
    verify_extension(delta, theta, anchors, want)
    return theta


def embed_space(space: FiniteUltraSpace) -> dict[str, SupportMap]:
    """Isometric embedding of a finite ultrametric space.

    Points are processed in label order, the first one landing on the
    zero map and each later one placed by a one-point extension; the
    image reproduces the distance matrix exactly.
    """
    images: dict[str, SupportMap] = {}
    placed: list[str] = []
    for label in sorted(space.labels):
        anchors = [images[p] for p in placed]
        targets = [space.d(label, p) for p in placed]
        images[label] = one_point_extension(anchors, targets)
        placed.append(label)
    return images


__all__ = [
    "SupportMap",
    "delta",
    "trace",
    "in_petal",
    "petal_distance",
    "approximate_into_petal",
    "covering_petal",
    "one_point_extension",
    "embed_space",
    "Inconsistent",
]
