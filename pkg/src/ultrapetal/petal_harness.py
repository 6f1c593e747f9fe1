"""Randomised generators, axiom suites, and back-and-forth isometry runs.

Everything here is deterministic given a seed: generators draw from a
Mersenne Twister stream split per task, reports are plain text with a
fixed line format, and failures carry a reproducing seed plus a
counterexample dump.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import model_cpum, model_f, model_gh, model_maps
from .cells import cell_owners, refinement
from .extension import Inconsistent
from .model_cpum import CantorPseudoUltrametric
from .model_f import SupportMap
from .model_gh import GHPoint, na_distance, na_oracle
from .model_maps import CantorFunction
from .scales import RangeSet, ZERO, as_scale
from .umspace import FiniteUltraSpace

GENERATOR_NAME = "random.Random-MT19937"
DEFAULT_POOL = RangeSet(["0", "1/4", "1/3", "1/2", "2/3", "1", "2"])

_MASK64 = (1 << 64) - 1
_MIX = 0x9E3779B97F4A7C15


def spawn_rng(seed: int, *salts: int) -> random.Random:
    """Independent deterministic stream for (seed, salts)."""
    state = seed & _MASK64
    for salt in salts:
        state = (state * _MIX + salt + 1) & _MASK64
    return random.Random(state)


@dataclass(frozen=True)
class TrialConfig:
    """Knobs for every randomised run."""

    seed: int = 0
    trials: int = 100
    max_points: int = 6
    max_support: int = 6
    scale_pool: RangeSet = DEFAULT_POOL

    def __post_init__(self):
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        if self.max_points < 1 or self.max_support < 1:
            raise ValueError("size bounds must be at least 1")
        if len(self.scale_pool.positives()) < 2:
            raise ValueError("scale pool needs at least two positive values")


# ---------------------------------------------------------------------------
# generators


def gen_scale(rng: random.Random, pool: RangeSet) -> Fraction:
    return pool.elems[rng.randrange(len(pool.elems))]


def gen_range_set(rng: random.Random, cfg: TrialConfig) -> RangeSet:
    return RangeSet(v for v in cfg.scale_pool.positives() if rng.random() < 0.5)


def gen_support_map(
    rng: random.Random, cfg: TrialConfig, pool: RangeSet | None = None
) -> SupportMap:
    positives = (pool or cfg.scale_pool).positives()
    count = rng.randint(0, min(cfg.max_support, len(positives)))
    keys = rng.sample(positives, count)
    return SupportMap({key: rng.randint(1, 3) for key in keys})


def gen_partition(rng: random.Random, max_cells: int) -> list[str]:
    cells = [""]
    for _ in range(rng.randint(0, max(0, max_cells - 1))):
        pick = cells.pop(rng.randrange(len(cells)))
        cells.append(pick + "0")
        cells.append(pick + "1")
    return sorted(cells)


def gen_cantor_function(
    rng: random.Random, cfg: TrialConfig, pool: RangeSet | None = None
) -> CantorFunction:
    pool = pool or cfg.scale_pool
    cells = gen_partition(rng, cfg.max_support)
    values = {cell: gen_scale(rng, pool) for cell in cells}
    values[cells[rng.randrange(len(cells))]] = ZERO
    return CantorFunction(values)


def random_ultrametric_rows(
    rng: random.Random, n: int, positives: Sequence[Fraction]
) -> list[list[Fraction]]:
    """Distance rows of a random n-point ultrametric built as a dendrogram."""
    rows = [[ZERO] * n for _ in range(n)]

    def build(indices: list[int], avail: Sequence[Fraction]) -> None:
        if len(indices) <= 1:
            return
        scale = avail[rng.randrange(len(avail))]
        below = [v for v in avail if v < scale]
        nblocks = rng.randint(2, len(indices)) if below else len(indices)
        items = indices[:]
        rng.shuffle(items)
        if nblocks < len(items):
            cuts = sorted(rng.sample(range(1, len(items)), nblocks - 1))
        else:
            cuts = list(range(1, len(items)))
        blocks = [items[a:b] for a, b in zip([0] + cuts, cuts + [len(items)])]
        for bi in range(len(blocks)):
            for bj in range(bi + 1, len(blocks)):
                for a in blocks[bi]:
                    for b in blocks[bj]:
                        rows[a][b] = rows[b][a] = scale
        for block in blocks:
            build(block, below)

    build(list(range(n)), sorted(positives))
    return rows


def gen_space(
    rng: random.Random,
    cfg: TrialConfig,
    max_points: int | None = None,
    pool: RangeSet | None = None,
) -> FiniteUltraSpace:
    positives = (pool or cfg.scale_pool).positives()
    cap = max_points if max_points is not None else cfg.max_points
    if not positives:
        cap = 1
    n = rng.randint(1, cap)
    rows = random_ultrametric_rows(rng, n, positives)
    # ultrametric by construction (dendrogram sampling); validity is
    # asserted separately in the test suite
    return FiniteUltraSpace._unchecked(
        tuple(f"p{i}" for i in range(n)), tuple(tuple(row) for row in rows)
    )


def gen_cpum(
    rng: random.Random, cfg: TrialConfig, pool: RangeSet | None = None
) -> CantorPseudoUltrametric:
    positives = (pool or cfg.scale_pool).positives()
    cells = gen_partition(rng, cfg.max_support)
    n = len(cells)
    if positives and n > 1:
        rows = random_ultrametric_rows(rng, n, positives)
        if rng.random() < 0.4:
            cut = positives[rng.randrange(len(positives))]
            rows = [[v if v > cut else ZERO for v in row] for row in rows]
    else:
        rows = [[ZERO] * n for _ in range(n)]
    return CantorPseudoUltrametric(cells, rows)


# ---------------------------------------------------------------------------
# model plumbing for the generic suites


def _twin_f(rng: random.Random, x: SupportMap) -> SupportMap:
    return SupportMap(x.entries)


def _twin_maps(rng: random.Random, x: CantorFunction) -> CantorFunction:
    refined = dict(x.cells)
    for _ in range(rng.randint(1, 3)):
        keys = sorted(refined)
        pick = keys[rng.randrange(len(keys))]
        value = refined.pop(pick)
        refined[pick + "0"] = value
        refined[pick + "1"] = value
    return CantorFunction(refined)


def _twin_cpum(rng: random.Random, d: CantorPseudoUltrametric) -> CantorPseudoUltrametric:
    # split one cell in two; the induced pseudo-ultrametric is unchanged
    cells = list(d.cells)
    i = rng.randrange(len(cells))
    target = cells.pop(i)
    new_cells = cells + [target + "0", target + "1"]
    old = [j for j in range(len(d.cells)) if j != i] + [i, i]
    rows = []
    for a, oa in enumerate(old):
        row = []
        for b, ob in enumerate(old):
            row.append(ZERO if a == b or (oa == i and ob == i) else d.dist[oa][ob])
        rows.append(row)
    return CantorPseudoUltrametric(new_cells, rows)


def _twin_gh(rng: random.Random, x: GHPoint) -> GHPoint:
    order = list(range(len(x.space)))
    rng.shuffle(order)
    labels = [f"r{i}" for i in range(len(order))]
    rows = [[x.space.dist[a][b] for b in order] for a in order]
    return GHPoint(FiniteUltraSpace(labels, rows))


def _cpum_same(d: CantorPseudoUltrametric, e: CantorPseudoUltrametric) -> bool:
    refined = refinement((d.cells, e.cells))
    od = cell_owners(refined, d.cells)
    oe = cell_owners(refined, e.cells)
    n = len(refined)
    for i in range(n):
        for j in range(i + 1, n):
            if d.dist[od[i]][od[j]] != e.dist[oe[i]][oe[j]]:
                return False
    return True


@dataclass(frozen=True)
class _ModelOps:
    name: str
    gen: Callable
    member: Callable
    metric: Callable
    trace: Callable
    in_petal: Callable
    petal_distance: Callable
    equal: Callable
    twin: Callable
    to_json: Callable
    covering: Optional[Callable] = None
    approximate: Optional[Callable] = None
    extend: Optional[Callable] = None


_F = _ModelOps(
    name="f",
    gen=gen_support_map,
    member=lambda rng, cfg, s: gen_support_map(rng, cfg, pool=s),
    metric=model_f.delta,
    trace=model_f.trace,
    in_petal=model_f.in_petal,
    petal_distance=model_f.petal_distance,
    equal=lambda a, b: a == b,
    twin=_twin_f,
    to_json=lambda v: v.to_json(),
    covering=model_f.covering_petal,
    approximate=model_f.approximate_into_petal,
    extend=model_f.one_point_extension,
)

_MAPS = _ModelOps(
    name="maps",
    gen=gen_cantor_function,
    member=lambda rng, cfg, s: gen_cantor_function(rng, cfg, pool=s),
    metric=model_maps.nabla,
    trace=model_maps.trace,
    in_petal=model_maps.in_petal,
    petal_distance=model_maps.petal_distance,
    equal=lambda a, b: a == b,
    twin=_twin_maps,
    to_json=lambda v: v.to_json(),
    covering=model_maps.covering_petal,
    approximate=model_maps.approximate_into_petal,
    extend=model_maps.one_point_extension,
)

_CPUM = _ModelOps(
    name="cpum",
    gen=gen_cpum,
    member=lambda rng, cfg, s: gen_cpum(rng, cfg, pool=s),
    metric=model_cpum.ud,
    trace=model_cpum.trace,
    in_petal=model_cpum.in_petal,
    petal_distance=model_cpum.petal_distance,
    equal=_cpum_same,
    twin=_twin_cpum,
    to_json=lambda v: v.to_json(),
    covering=model_cpum.covering_petal,
    approximate=model_cpum.approximate_into_petal,
)

_GH = _ModelOps(
    name="gh",
    gen=lambda rng, cfg: GHPoint(gen_space(rng, cfg)),
    member=lambda rng, cfg, s: GHPoint(gen_space(rng, cfg, pool=s)),
    metric=na_distance,
    trace=model_gh.trace,
    in_petal=model_gh.in_petal,
    petal_distance=model_gh.petal_distance,
    equal=lambda a, b: a == b,
    twin=_twin_gh,
    to_json=lambda v: v.space.to_json(),
)

MODELS = {"f": _F, "maps": _MAPS, "cpum": _CPUM, "gh": _GH}


# ---------------------------------------------------------------------------
# property checks; each returns None on success or a counterexample dict


def _prop_metric_axioms(ops: _ModelOps, rng, cfg, n):
    for t in range(n):
        x = ops.gen(rng, cfg)
        y = ops.twin(rng, x) if t % 5 == 0 else ops.gen(rng, cfg)
        z = ops.gen(rng, cfg)
        bad = None
        dxy = ops.metric(x, y)
        if ops.metric(y, x) != dxy:
            bad = "symmetry"
        elif ops.metric(x, x) != ZERO:
            bad = "self-distance"
        elif (dxy == ZERO) != ops.equal(x, y):
            bad = "identity-of-indiscernibles"
        else:
            dxz = ops.metric(x, z)
            dzy = ops.metric(z, y)
            if dxy > (dxz if dxz > dzy else dzy):
                bad = "strong-triangle"
        if bad:
            return {
                "trial": t,
                "violated": bad,
                "x": ops.to_json(x),
                "y": ops.to_json(y),
                "z": ops.to_json(z),
            }
    return None


def _prop_p1_valued(ops: _ModelOps, rng, cfg, n):
    # distances inside one petal stay inside its range set
    for t in range(n):
        s = gen_range_set(rng, cfg)
        m1 = ops.member(rng, cfg, s)
        m2 = ops.member(rng, cfg, s)
        if ops.metric(m1, m2) not in s:
            return {"trial": t, "x": ops.to_json(m1), "y": ops.to_json(m2), "S": s.to_json()}
    return None


def _prop_p2_trace(ops: _ModelOps, rng, cfg, n):
    # every element lies in the petal of its trace, and in no smaller one
    for t in range(n):
        x = ops.gen(rng, cfg)
        tr = ops.trace(x)
        if not ops.in_petal(x, tr):
            return {"trial": t, "violated": "membership", "x": ops.to_json(x)}
        for value in tr.positives():
            smaller = RangeSet(e for e in tr.elems if e != value)
            if ops.in_petal(x, smaller):
                return {"trial": t, "violated": "minimality", "x": ops.to_json(x), "dropped": str(value)}
    return None


def _prop_p3(ops: _ModelOps, rng, cfg, n):
    for t in range(n):
        s = gen_range_set(rng, cfg)
        t2 = gen_range_set(rng, cfg)
        if t % 3 == 0:
            x = ops.member(rng, cfg, s.intersect(t2))
        elif t % 3 == 1:
            x = ops.member(rng, cfg, s)
        else:
            x = ops.gen(rng, cfg)
        both = ops.in_petal(x, s) and ops.in_petal(x, t2)
        if both != ops.in_petal(x, s.intersect(t2)):
            return {"trial": t, "x": ops.to_json(x), "S": s.to_json(), "T": t2.to_json()}
    return None


def _prop_p4(ops: _ModelOps, rng, cfg, n):
    for t in range(n):
        s = gen_range_set(rng, cfg)
        x = ops.member(rng, cfg, gen_range_set(rng, cfg)) if t % 2 else ops.gen(rng, cfg)
        u, _ = ops.petal_distance(x, s)
        tr = ops.trace(x)
        # the trace is the least range set whose petal holds x, so the
        # membership below implies it for every T with x in its petal
        big_t = tr.union(gen_range_set(rng, cfg))
        ok = u == ZERO or (u in tr and u in big_t and u not in s)
        if not ok:
            return {"trial": t, "x": ops.to_json(x), "S": s.to_json(), "T": big_t.to_json(), "value": str(u)}
    return None


def _prop_petal_formula(ops: _ModelOps, rng, cfg, n, members: int = 100):
    for t in range(n):
        s = gen_range_set(rng, cfg)
        x = ops.gen(rng, cfg)
        u, witness = ops.petal_distance(x, s)
        tr = ops.trace(x)
        expected = next(cand for cand in tr.elems if tr.tail_subset(s, cand))
        fail = None
        if u != expected:
            fail = "formula"
        elif not ops.in_petal(witness, s):
            fail = "witness-membership"
        elif ops.metric(x, witness) != u:
            fail = "witness-distance"
        else:
            for _ in range(members):
                other = ops.member(rng, cfg, s)
                if ops.metric(x, other) < u:
                    fail = "closer-member"
                    break
        if fail:
            return {"trial": t, "violated": fail, "x": ops.to_json(x), "S": s.to_json()}
    return None


def _prop_trace_tail(ops: _ModelOps, rng, cfg, n):
    for t in range(n):
        x = ops.gen(rng, cfg)
        y = ops.gen(rng, cfg)
        w = ops.metric(x, y)
        if t % 2:
            higher = [v for v in cfg.scale_pool.elems if v >= w]
            if higher:
                w = higher[rng.randrange(len(higher))]
        above_x = {e for e in ops.trace(x).elems if e > w}
        above_y = {e for e in ops.trace(y).elems if e > w}
        if above_x != above_y:
            return {"trial": t, "x": ops.to_json(x), "y": ops.to_json(y), "w": str(w)}
    return None


def _prop_covering(ops: _ModelOps, rng, cfg, n):
    for t in range(n):
        points = [ops.gen(rng, cfg) for _ in range(rng.randint(0, 4))]
        s = ops.covering(points)
        if not all(ops.in_petal(p, s) for p in points):
            return {"trial": t, "points": [ops.to_json(p) for p in points], "S": s.to_json()}
    return None


def _prop_approximate(ops: _ModelOps, rng, cfg, n):
    for t in range(n):
        x = ops.gen(rng, cfg)
        s = gen_range_set(rng, cfg)
        positives = cfg.scale_pool.positives()
        r = positives[rng.randrange(len(positives))]
        widened, g = ops.approximate(x, s, r)
        ok = (
            ops.in_petal(g, widened)
            and ops.metric(x, g) < r
            and s.issubset(widened)
        )
        if not ok:
            return {"trial": t, "x": ops.to_json(x), "S": s.to_json(), "r": str(r)}
    return None


def _prop_extension(ops: _ModelOps, rng, cfg, n):
    for t in range(n):
        if t % 3 == 2:
            # an unrealisable request must be rejected
            pair = None
            for _ in range(50):
                a = ops.gen(rng, cfg)
                b = ops.gen(rng, cfg)
                gap = ops.metric(a, b)
                if gap > ZERO:
                    pair = (a, b, gap)
                    break
            if pair is None:
                continue
            a, b, gap = pair
            try:
                ops.extend([a, b], [gap / 2, gap / 2])
            except Inconsistent:
                continue
            return {"trial": t, "violated": "missing-rejection", "x": ops.to_json(a), "y": ops.to_json(b)}
        count = rng.randint(1, 8)
        petal: RangeSet | None = None
        if t % 3 == 1:
            petal = gen_range_set(rng, cfg)
            points = [ops.member(rng, cfg, petal) for _ in range(count + 1)]
        else:
            points = [ops.gen(rng, cfg) for _ in range(count + 1)]
        omega, anchors = points[-1], points[:-1]
        targets = [ops.metric(omega, a) for a in anchors]
        theta = ops.extend(anchors, targets)
        if any(ops.metric(theta, a) != d for a, d in zip(anchors, targets)):
            return {
                "trial": t,
                "violated": "distance",
                "anchors": [ops.to_json(a) for a in anchors],
                "targets": [str(d) for d in targets],
            }
        if petal is not None and not ops.in_petal(theta, petal):
            return {"trial": t, "violated": "petal-preservation", "S": petal.to_json()}
    return None


def _prop_claim_f(rng, cfg, n):
    # the distance of two support maps is their top disagreement, both ways
    for t in range(n):
        f = gen_support_map(rng, cfg)
        if t % 2 == 0:
            g = gen_support_map(rng, cfg)
            r = model_f.delta(f, g)
            if r == ZERO:
                continue
            keys = {k for k, _ in f.entries} | {k for k, _ in g.entries}
            if f.value_at(r) == g.value_at(r) or any(
                f.value_at(k) != g.value_at(k) for k in keys if k > r
            ):
                return {"trial": t, "f": f.to_json(), "g": g.to_json(), "r": str(r)}
        else:
            positives = cfg.scale_pool.positives()
            r = positives[rng.randrange(len(positives))]
            entries = [(k, v) for k, v in f.entries if k > r]
            entries.append((r, f.value_at(r) + 1))
            for k in positives:
                if k < r and rng.random() < 0.5:
                    entries.append((k, rng.randint(1, 3)))
            g = SupportMap(entries)
            if model_f.delta(f, g) != r:
                return {"trial": t, "f": f.to_json(), "g": g.to_json(), "r": str(r)}
    return None


def _prop_embed_f(rng, cfg, n):
    for t in range(n):
        space = gen_space(rng, cfg, max_points=10)
        images = model_f.embed_space(space)
        for a in space.labels:
            for b in space.labels:
                if model_f.delta(images[a], images[b]) != space.d(a, b):
                    return {"trial": t, "space": space.to_json(), "pair": [a, b]}
    return None


def _prop_canonical_maps(rng, cfg, n):
    for t in range(n):
        f = gen_cantor_function(rng, cfg)
        g = _twin_maps(rng, f)
        if g.cells != f.cells or model_maps.nabla(f, g) != ZERO:
            return {"trial": t, "f": f.to_json()}
    return None


def _prop_cross_model(rng, cfg, n):
    # one space, embedded independently in both models, same matrix
    for t in range(n):
        space = gen_space(rng, cfg, max_points=8)
        f_images = model_f.embed_space(space)
        order = sorted(space.labels)
        m_images: dict[str, CantorFunction] = {}
        placed: list[str] = []
        for label in order:
            anchors = [m_images[p] for p in placed]
            targets = [space.d(label, p) for p in placed]
            m_images[label] = model_maps.one_point_extension(anchors, targets)
            placed.append(label)
        for a in order:
            for b in order:
                want = space.d(a, b)
                if (
                    model_f.delta(f_images[a], f_images[b]) != want
                    or model_maps.nabla(m_images[a], m_images[b]) != want
                ):
                    return {"trial": t, "space": space.to_json(), "pair": [a, b]}
    return None


def _prop_oracle_gh(rng, cfg, n):
    for x in small_corpus():
        for y in small_corpus():
            if na_distance(x, y) != na_oracle(x, y):
                return {"corpus": True, "x": x.space.to_json(), "y": y.space.to_json()}
    for t in range(n):
        nx = rng.randint(1, 5)
        ny = rng.randint(1, 6 - nx)
        x = GHPoint(gen_space(rng, cfg, max_points=nx))
        y = GHPoint(gen_space(rng, cfg, max_points=ny))
        if na_distance(x, y) != na_oracle(x, y):
            return {"trial": t, "x": x.space.to_json(), "y": y.space.to_json()}
    return None


def _prop_quotient_gh(rng, cfg, n):
    for t in range(n):
        x = GHPoint(gen_space(rng, cfg))
        spectrum = x.space.spectrum()
        choices = sorted(set(cfg.scale_pool.elems) | set(spectrum.elems))
        eps = choices[rng.randrange(len(choices))]
        q = GHPoint(x.space.quotient(eps))
        dist = na_distance(x, q)
        if dist > eps:
            return {"trial": t, "x": x.space.to_json(), "eps": str(eps)}
        if eps != ZERO and eps in spectrum and dist != eps:
            # every spectrum value of a finite space is attained
            return {"trial": t, "violated": "equality", "x": x.space.to_json(), "eps": str(eps)}
    return None


# ---------------------------------------------------------------------------
# suite registry and reports


@dataclass(frozen=True)
class PropertySpec:
    tag: str
    name: str
    factor: float
    run: Callable


SUITES: dict[str, tuple[PropertySpec, ...]] = {
    "f": (
        PropertySpec("metric-axioms", "delta_is_ultrametric", 1.0, partial(_prop_metric_axioms, _F)),
        PropertySpec("max-disagreement-law", "delta_is_top_support_disagreement", 1.0, _prop_claim_f),
        PropertySpec("piece-valuedness-P1", "petal_members_keep_distances_in_range", 0.1, partial(_prop_p1_valued, _F)),
        PropertySpec("petal-union-P2", "element_lies_in_minimal_trace_petal", 0.1, partial(_prop_p2_trace, _F)),
        PropertySpec("petal-intersection-P3", "petal_membership_intersects", 0.1, partial(_prop_p3, _F)),
        PropertySpec("petal-distance-membership-P4", "petal_distance_in_trace_gap", 0.1, partial(_prop_p4, _F)),
        PropertySpec("petal-distance-formula", "petal_distance_formula_witness_optimal", 0.1, partial(_prop_petal_formula, _F)),
        PropertySpec("trace-tail-agreement", "traces_agree_above_distance", 0.1, partial(_prop_trace_tail, _F)),
        PropertySpec("one-point-extension", "extension_exact_preserving_rejecting", 0.1, partial(_prop_extension, _F)),
        PropertySpec("finite-embedding", "embed_space_reproduces_matrix", 0.1, _prop_embed_f),
        PropertySpec("covering-petal", "covering_petal_contains_inputs", 0.1, partial(_prop_covering, _F)),
        PropertySpec("petal-approximation", "approximate_into_petal_close", 0.1, partial(_prop_approximate, _F)),
    ),
    "maps": (
        PropertySpec("metric-axioms", "nabla_is_ultrametric", 1.0, partial(_prop_metric_axioms, _MAPS)),
        PropertySpec("canonical-merge", "canonical_form_unique", 0.1, _prop_canonical_maps),
        PropertySpec("piece-valuedness-P1", "petal_members_keep_distances_in_range", 0.1, partial(_prop_p1_valued, _MAPS)),
        PropertySpec("petal-union-P2", "element_lies_in_minimal_trace_petal", 0.1, partial(_prop_p2_trace, _MAPS)),
        PropertySpec("petal-intersection-P3", "petal_membership_intersects", 0.1, partial(_prop_p3, _MAPS)),
        PropertySpec("petal-distance-membership-P4", "petal_distance_in_trace_gap", 0.1, partial(_prop_p4, _MAPS)),
        PropertySpec("petal-distance-formula", "petal_distance_formula_witness_optimal", 0.1, partial(_prop_petal_formula, _MAPS)),
        PropertySpec("trace-tail-agreement", "traces_agree_above_distance", 0.1, partial(_prop_trace_tail, _MAPS)),
        PropertySpec("one-point-extension", "extension_exact_preserving_rejecting", 0.1, partial(_prop_extension, _MAPS)),
        PropertySpec("cross-model-embedding", "embeddings_agree_across_models", 0.05, _prop_cross_model),
        PropertySpec("covering-petal", "covering_petal_contains_inputs", 0.1, partial(_prop_covering, _MAPS)),
        PropertySpec("petal-approximation", "approximate_into_petal_close", 0.1, partial(_prop_approximate, _MAPS)),
    ),
    "cpum": (
        PropertySpec("metric-axioms", "ud_is_ultrametric", 1.0, partial(_prop_metric_axioms, _CPUM)),
        PropertySpec("truncation-witness", "petal_distance_formula_witness_optimal", 0.1, partial(_prop_petal_formula, _CPUM)),
        PropertySpec("piece-valuedness-P1", "petal_members_keep_distances_in_range", 0.1, partial(_prop_p1_valued, _CPUM)),
        PropertySpec("petal-union-P2", "element_lies_in_minimal_trace_petal", 0.1, partial(_prop_p2_trace, _CPUM)),
        PropertySpec("petal-intersection-P3", "petal_membership_intersects", 0.1, partial(_prop_p3, _CPUM)),
        PropertySpec("petal-distance-membership-P4", "petal_distance_in_trace_gap", 0.1, partial(_prop_p4, _CPUM)),
        PropertySpec("trace-tail-agreement", "traces_agree_above_distance", 0.1, partial(_prop_trace_tail, _CPUM)),
        PropertySpec("covering-petal", "covering_petal_contains_inputs", 0.1, partial(_prop_covering, _CPUM)),
        PropertySpec("petal-approximation", "approximate_into_petal_close", 0.1, partial(_prop_approximate, _CPUM)),
    ),
    "gh": (
        PropertySpec("metric-axioms", "na_is_ultrametric", 0.1, partial(_prop_metric_axioms, _GH)),
        PropertySpec("oracle-agreement", "na_matches_ambient_oracle", 0.05, _prop_oracle_gh),
        PropertySpec("quotient-contraction", "quotient_within_eps", 0.1, _prop_quotient_gh),
        PropertySpec("piece-valuedness-P1", "petal_members_keep_distances_in_range", 0.1, partial(_prop_p1_valued, _GH)),
        PropertySpec("petal-union-P2", "element_lies_in_minimal_trace_petal", 0.1, partial(_prop_p2_trace, _GH)),
        PropertySpec("petal-intersection-P3", "petal_membership_intersects", 0.1, partial(_prop_p3, _GH)),
        PropertySpec("petal-distance-membership-P4", "petal_distance_in_trace_gap", 0.1, partial(_prop_p4, _GH)),
        PropertySpec("petal-distance-formula", "petal_distance_formula_witness_optimal", 0.1, partial(_prop_petal_formula, _GH)),
        PropertySpec("trace-tail-agreement", "traces_agree_above_distance", 0.1, partial(_prop_trace_tail, _GH)),
    ),
}

_MODEL_SALT = {"f": 11, "maps": 12, "cpum": 13, "gh": 14}


def run_property(
    model: str,
    name: str,
    cfg: TrialConfig,
    trials: int | None = None,
) -> tuple[bool, int, dict | None]:
    """Run one named suite property; returns (passed, trials, counterexample)."""
    for pidx, spec in enumerate(SUITES[model]):
        if spec.name == name or spec.tag == name:
            n = trials if trials is not None else max(1, round(cfg.trials * spec.factor))
            rng = spawn_rng(cfg.seed, _MODEL_SALT[model], pidx)
            failure = spec.run(rng, cfg, n)
            return failure is None, n, failure
    raise KeyError(f"no property {name!r} in model {model!r}")


def run_axiom_suite(model: str, cfg: TrialConfig, dump_dir: str | None = None) -> str:
    """Run every registered property of one model; returns the text report."""
    if model not in SUITES:
        raise KeyError(f"unknown model {model!r}")
    lines = [
        f"# axiom-suite model={model} seed={cfg.seed} trials={cfg.trials} generator={GENERATOR_NAME}"
    ]
    for spec in SUITES[model]:
        ok, n, failure = run_property(model, spec.name, cfg)
        if ok:
            lines.append(f"{spec.tag} {spec.name} PASS trials={n}")
        else:
            path = "-"
            if dump_dir is not None:
                target = Path(dump_dir) / f"{model}_{spec.name}.json"
                target.write_text(json.dumps(failure, indent=2) + "\n")
                path = str(target)
            lines.append(
                f"{spec.tag} {spec.name} FAIL trials={n} seed={cfg.seed} counterexample={path}"
            )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# back-and-forth runs


class InvariantViolation(Exception):
    """The paired lists stopped being isometric; an extension operator is wrong."""

    def __init__(self, step: int, pair: tuple[int, int]):
        self.step = step
        self.pair = pair
        super().__init__(f"partial isometry broken at step {step}, pair {pair}")


class PartialIsometry:
    """Two aligned point lists with exactly matching distance matrices."""

    def __init__(self, left: list, right: list, left_metric: Callable, right_metric: Callable):
        self.left = left
        self.right = right
        self.left_metric = left_metric
        self.right_metric = right_metric

    def __len__(self) -> int:
        return len(self.left)

    def append_checked(self, x, y, step: int) -> None:
        """Add a pair after verifying it against every existing pair."""
        for i in range(len(self.left)):
            if self.left_metric(x, self.left[i]) != self.right_metric(y, self.right[i]):
                raise InvariantViolation(step, (i, len(self.left)))
        self.left.append(x)
        self.right.append(y)

    def verify(self) -> None:
        for i in range(len(self.left)):
            for j in range(i + 1, len(self.left)):
                lhs = self.left_metric(self.left[i], self.left[j])
                rhs = self.right_metric(self.right[i], self.right[j])
                if lhs != rhs:
                    raise InvariantViolation(-1, (i, j))


def back_and_forth(cfg: TrialConfig) -> PartialIsometry:
    """Grow an exact partial isometry between the two function models.

    Each round first mirrors a fresh support map into the locally
    constant model through a one-point extension at its exact distances,
    then mirrors a fresh locally constant function back.  Every addition
    is re-verified against the whole pairing.
    """
    rng = spawn_rng(cfg.seed, 1)
    pairing = PartialIsometry([], [], model_f.delta, model_maps.nabla)
    for k in range(cfg.trials):
        x = gen_support_map(rng, cfg)
        y = model_maps.one_point_extension(
            pairing.right, [model_f.delta(x, l) for l in pairing.left]
        )
        pairing.append_checked(x, y, step=2 * k)
        g = gen_cantor_function(rng, cfg)
        f = model_f.one_point_extension(
            pairing.left, [model_maps.nabla(g, r) for r in pairing.right]
        )
        pairing.append_checked(f, g, step=2 * k + 1)
    return pairing


def ultrahomogeneity_demo(cfg: TrialConfig, subset_size: int | None = None) -> PartialIsometry:
    """Extend a random finite self-isometry of the support-map model.

    Draws a finite set, builds an isometric copy by re-embedding its
    distance matrix in a reshuffled order, then alternately extends the
    pairing over fresh random points, verifying exactness at each step.
    """
    rng = spawn_rng(cfg.seed, 2)
    size = subset_size if subset_size is not None else rng.randint(0, min(cfg.max_points, 5))
    points: list[SupportMap] = []
    attempts = 0
    while len(points) < size and attempts < 200:
        attempts += 1
        candidate = gen_support_map(rng, cfg)
        if candidate not in points:
            points.append(candidate)
    size = len(points)
    copy: list[SupportMap] = []
    if size:
        order = list(range(size))
        rng.shuffle(order)
        labels = [f"q{i}" for i in range(size)]
        rows = [
            [model_f.delta(points[order[a]], points[order[b]]) for b in range(size)]
            for a in range(size)
        ]
        images = model_f.embed_space(FiniteUltraSpace(labels, rows))
        copy = [SupportMap()] * size
        for a in range(size):
            copy[order[a]] = images[f"q{a}"]
    pairing = PartialIsometry(list(points), copy, model_f.delta, model_f.delta)
    pairing.verify()
    for k in range(cfg.trials):
        x = gen_support_map(rng, cfg)
        y = model_f.one_point_extension(
            pairing.right, [model_f.delta(x, l) for l in pairing.left]
        )
        pairing.append_checked(x, y, step=2 * k)
        z = gen_support_map(rng, cfg)
        w = model_f.one_point_extension(
            pairing.left, [model_f.delta(z, r) for r in pairing.right]
        )
        pairing.append_checked(w, z, step=2 * k + 1)
    return pairing


def backforth_report(cfg: TrialConfig) -> str:
    header = f"# backforth seed={cfg.seed} trials={cfg.trials} generator={GENERATOR_NAME}"
    try:
        pairing = back_and_forth(cfg)
        line = f"back-and-forth partial_isometry_each_step PASS trials={cfg.trials} pairs={len(pairing)}"
    except InvariantViolation as err:
        line = (
            f"back-and-forth partial_isometry_each_step FAIL trials={cfg.trials} "
            f"seed={cfg.seed} step={err.step} pair={err.pair}"
        )
    return header + "\n" + line + "\n"


# ---------------------------------------------------------------------------
# exhaustive corpus of tiny spaces

_CORPUS: list[GHPoint] | None = None


def _partitions(n: int, cap: int | None = None) -> list[tuple[int, ...]]:
    cap = cap if cap is not None else n
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, cap), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return out


def enumerate_small_spaces(
    scales: Sequence = ("1/4", "1/2", "1"), max_points: int = 3
) -> list[GHPoint]:
    """Every isometry class with <= max_points points over the given scales."""
    positives = sorted({as_scale(s) for s in scales} - {ZERO})

    def matrices(n: int, allowed: list[Fraction]) -> list[tuple[tuple[Fraction, ...], ...]]:
        if n == 1:
            return [((ZERO,),)]
        out = []
        for si, scale in enumerate(allowed):
            below = allowed[:si]
            for blocks in _partitions(n):
                if len(blocks) < 2:
                    continue
                pieces = [matrices(b, below) for b in blocks]
                for combo in itertools.product(*pieces):
                    sizes = [len(m) for m in combo]
                    total = sum(sizes)
                    rows = [[scale] * total for _ in range(total)]
                    offset = 0
                    for piece in combo:
                        w = len(piece)
                        for a in range(w):
                            for b in range(w):
                                rows[offset + a][offset + b] = piece[a][b]
                        offset += w
                    out.append(tuple(tuple(r) for r in rows))
        return out

    seen: dict[str, FiniteUltraSpace] = {}
    for n in range(1, max_points + 1):
        for rows in matrices(n, positives):
            space = FiniteUltraSpace([f"p{i}" for i in range(n)], rows)
            key = space.canonical_form()
            if key not in seen:
                seen[key] = space
    ordered = sorted(seen.values(), key=lambda s: (len(s), s.canonical_form()))
    return [GHPoint(s) for s in ordered]


def small_corpus() -> list[GHPoint]:
    """Cached exhaustive corpus used by the oracle gate."""
    global _CORPUS
    if _CORPUS is None:
        _CORPUS = enumerate_small_spaces()
    return _CORPUS
