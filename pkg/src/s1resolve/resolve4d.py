"""Reid's resolution of the cyclic quotient singularity C^2 / Z_r, type 1/r(1,a).

Charts ``Y_0..Y_n`` are copies of C^2 glued by
``f_i(xi, eta) = (eta**-1, xi * eta**b_{i+1})``.  The punctured
neighbourhood ``C^2 - 0`` (coordinates ``(v1, v2)``, before the Z_r
quotient) maps into ``Y_j`` by monomials.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import List, Tuple

import numpy as np

from . import hjarith
from .chartcore import Chart
from .hjarith import FiberLike, FiberType, HJExpansion
from .resolve5d import NothingToResolveError
from .transitions import TransitionMap, chart_c2, standard_map, za_parameters


class DegenerateReductionError(ValueError):
    """a = 1: the two-chart reduction is a single chart."""


def y_id(i: int) -> str:
    return f"Y{i}"


@dataclass(frozen=True)
class BoundaryModel:
    h1: TransitionMap
    h2: TransitionMap
    f3: TransitionMap


@dataclass(frozen=True)
class TwoChartReduction:
    """``U_p - 0 -> Y u_f (Y'/Z_a)`` for one reduction step."""

    fiber: FiberType
    a: int
    a1: int
    y: Chart
    y_prime: Chart
    f: TransitionMap
    embed1: TransitionMap
    embed2: TransitionMap
    swap: TransitionMap
    quotient: TransitionMap

    @property
    def next(self) -> FiberType:
        return FiberType(self.a, self.a1)


@dataclass(frozen=True)
class Atlas4:
    fiber: FiberType
    expansion: HJExpansion
    source: Chart
    charts: Tuple[Chart, ...]
    transitions: Tuple[TransitionMap, ...]
    embeddings: Tuple[TransitionMap, ...]

    @property
    def n(self) -> int:
        return self.expansion.n

    @property
    def self_intersections(self) -> List[int]:
        """``-b_i`` for the exceptional curves (standard theory, reported only)."""
        return [-b for b in self.expansion.b]

    @property
    def gluing_loci(self) -> List[str]:
        """The ``eta_i = 0`` curve of each ``Y_i`` that ``f_i`` does not reach."""
        return [f"eta=0 in {m.src.id}" for m in self.transitions]

    def replace_transition(self, i: int, m: TransitionMap) -> "Atlas4":
        ts = list(self.transitions)
        ts[i] = m
        return replace(self, transitions=tuple(ts))

    def to_json(self) -> dict:
        return {
            "kind": "atlas4",
            "fiber": {"r": self.fiber.r, "a": self.fiber.a},
            "expansion": {"b": list(self.expansion.b), "remainders": list(self.expansion.remainders)},
            "source": self.source.to_json(),
            "charts": [c.to_json() for c in self.charts],
            "transitions": [m.to_json() for m in self.transitions],
            "embeddings": [m.to_json() for m in self.embeddings],
            "self_intersections": self.self_intersections,
            "self_intersection_provenance": "standard theory, not derived here",
        }

    @classmethod
    def from_json(cls, d: dict) -> "Atlas4":
        source = Chart.from_json(d["source"])
        charts = tuple(Chart.from_json(c) for c in d["charts"])
        table = {c.id: c for c in (source,) + charts}
        e = d["expansion"]
        return cls(
            FiberType(d["fiber"]["r"], d["fiber"]["a"]),
            HJExpansion(tuple(e["b"]), tuple(e["remainders"])),
            source,
            charts,
            tuple(TransitionMap.from_json(m, table) for m in d["transitions"]),
            tuple(TransitionMap.from_json(m, table) for m in d["embeddings"]),
        )


def general_embedding(j: int, t: FiberLike) -> TransitionMap:
    """Embedding of ``C^2 - 0`` into ``Y_j``.

    Rows 0 and 1 use the explicit formulas; later rows use the monomial
    closed form, which agrees with ``f_{j-1} o ... o f_1 o (row 1)``.
    """
    t = hjarith.as_fiber(t)
    e = hjarith.hj_expand(t)
    if not 0 <= j <= e.n:
        raise IndexError(f"embedding index {j} outside [0, {e.n}]")
    src = chart_c2("Ubar")
    P = (("r", t.r), ("a", t.a))
    if j == 0:
        return TransitionMap("ReidEmbed0", P, src, chart_c2(y_id(0)))
    if j == 1:
        return TransitionMap("ReidEmbed1", P + (("b1", e.b[0]),), src, chart_c2(y_id(1)))
    return TransitionMap("ReidEmbedJ", P + (("j", j),), src, chart_c2(y_id(j)))


def composed_embedding(atlas: "Atlas4", j: int, V: np.ndarray) -> np.ndarray:
    """``f_{j-1} o ... o f_1`` applied after the row-1 embedding (j >= 1)."""
    Z = atlas.embeddings[1].apply(V)
    for i in range(1, j):
        Z = atlas.transitions[i].apply(Z)
    return Z


def build_atlas4(t: FiberLike) -> Atlas4:
    t = hjarith.as_fiber(t)
    if t.is_regular:
        raise NothingToResolveError("regular point (r = 1): nothing to resolve")
    e = hjarith.hj_expand(t)
    charts = tuple(chart_c2(y_id(i)) for i in range(e.n + 1))
    transitions = tuple(
        TransitionMap("ReidF", (("b", e.b[i]),), charts[i], charts[i + 1]) for i in range(e.n)
    )
    embeddings = tuple(general_embedding(j, t).with_charts(dst=charts[j]) for j in range(e.n + 1))
    return Atlas4(t, e, chart_c2("Ubar"), charts, transitions, embeddings)


def two_chart_reduction(t: FiberLike) -> TwoChartReduction:
    t = hjarith.as_fiber(t)
    if t.is_regular:
        raise NothingToResolveError("regular point (r = 1): nothing to resolve")
    if t.a == 1:
        raise DegenerateReductionError("a = 1: Y'/Z_a is smooth and the reduction is a single chart")
    a, a1 = za_parameters(t.r, t.a)
    y, yp = chart_c2("Y"), chart_c2("Y'")
    src = chart_c2("Ubar")
    P = (("r", t.r), ("a", t.a))
    return TwoChartReduction(
        fiber=t,
        a=a,
        a1=a1,
        y=y,
        y_prime=yp,
        f=TransitionMap("ReidTwoChartF", P, yp, y),
        embed1=TransitionMap("ReidEmbed0", P, src, y),
        embed2=TransitionMap("ReidEmbedPrime", P, src, yp),
        swap=TransitionMap("ReidSwap", (), yp, chart_c2("Y''")),
        quotient=TransitionMap("ReidQuotient", (("a", a), ("a1", a1)), yp, chart_c2(y_id(1))),
    )


def boundary_model(t: FiberLike) -> BoundaryModel:
    t = hjarith.as_fiber(t)
    if t.is_regular:
        raise NothingToResolveError("regular point (r = 1): nothing to resolve")
    return BoundaryModel(
        standard_map("TopModelH1", t.r, t.a),
        standard_map("TopModelH2", t.r, t.a),
        standard_map("TopModelF3", t.r, t.a),
    )
