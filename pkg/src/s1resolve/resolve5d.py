"""Equivariant resolution atlas of a singular fiber of type 1/r(1,a).

The neighbourhood ``U_S = S^1 x C^2`` (weights ``(r, -1, -a)``) minus the
fiber embeds into the chain

    X_0 u_{g_1} X_1 u ... u_{g_{n-1}} X_{n-1} u_g X'_{n-1}

with ``X_i = C x S^1 x C`` and ``X'_i = C x C x S^1`` both carrying the
weights ``(a_{i-1}, -1, -a_i)``.  ``g_i`` is ChainG(b_i) and the last
gluing ``g`` is GlueF.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

import numpy as np

from . import hjarith
from .chartcore import Chart
from .hjarith import FiberLike, FiberType, HJExpansion
from .transitions import (
    TransitionMap,
    chart_u,
    chart_x,
    chart_xp,
    model_weights,
)


class NothingToResolveError(ValueError):
    """Regular fiber (r = 1): the atlas would be empty."""


S2xS1 = "S2xS1"
S3 = "S3"


@dataclass(frozen=True)
class Locus:
    """Slot-zero pattern inside one chart: ``'0'`` zero, ``'S1'`` circle, ``'C'`` free."""

    chart: str
    pattern: Tuple[str, str, str]

    def __str__(self) -> str:
        return f"{' x '.join(self.pattern)} in {self.chart}"

    def mask(self, Z: np.ndarray, eps: float = 1e-9) -> np.ndarray:
        ok = np.ones(Z.shape[:-1], dtype=bool)
        for k, s in enumerate(self.pattern):
            if s == "0":
                ok &= np.abs(Z[..., k]) <= eps
            elif s == "S1":
                ok &= np.abs(np.abs(Z[..., k]) - 1.0) <= eps
        return ok


def R(chart: str) -> Locus:
    return Locus(chart, ("0", "S1", "C"))


def R_perp(chart: str) -> Locus:
    return Locus(chart, ("C", "S1", "0"))


def R_prime(chart: str) -> Locus:
    return Locus(chart, ("0", "C", "S1"))


def adjacency_circle(chart: str) -> Locus:
    return Locus(chart, ("0", "S1", "0"))


@dataclass(frozen=True)
class Component:
    """``Q_j``: two pieces glued by one transition, with its claimed type."""

    index: int
    first: Locus
    second: Locus
    gluing: int
    claimed_type: str


@dataclass(frozen=True)
class ExceptionalChain:
    components: Tuple[Component, ...]
    adjacency: Tuple[Tuple[int, int, Locus], ...]

    @property
    def types(self) -> List[str]:
        return [c.claimed_type for c in self.components]

    def to_json(self) -> dict:
        return {
            "components": [
                {"index": c.index, "pieces": [str(c.first), str(c.second)],
                 "gluing": c.gluing, "claimed_type": c.claimed_type}
                for c in self.components
            ],
            "adjacency": [{"between": [i, j], "circle": str(loc)} for i, j, loc in self.adjacency],
            "type_provenance": "claimed (declared metadata, not certified)",
        }


@dataclass(frozen=True)
class Atlas5:
    fiber: FiberType
    expansion: HJExpansion
    model: Chart
    charts: Tuple[Chart, ...]
    transitions: Tuple[TransitionMap, ...]
    embedding: TransitionMap

    @property
    def n(self) -> int:
        return self.expansion.n

    def chart(self, id: str) -> Chart:
        for c in (self.model,) + self.charts:
            if c.id == id:
                return c
        raise KeyError(id)

    @property
    def exceptional(self) -> "ExceptionalChain":
        return exceptional_chain(self)

    def all_maps(self) -> List[TransitionMap]:
        return [self.embedding] + list(self.transitions)

    def replace_chart(self, new: Chart) -> "Atlas5":
        """Swap in a chart with the same id everywhere it is referenced."""

        def fix(m: TransitionMap) -> TransitionMap:
            return m.with_charts(new if m.src.id == new.id else m.src,
                                 new if m.dst.id == new.id else m.dst)

        return replace(
            self,
            model=new if self.model.id == new.id else self.model,
            charts=tuple(new if c.id == new.id else c for c in self.charts),
            transitions=tuple(fix(m) for m in self.transitions),
            embedding=fix(self.embedding),
        )

    def replace_transition(self, i: int, m: TransitionMap) -> "Atlas5":
        ts = list(self.transitions)
        ts[i] = m
        return replace(self, transitions=tuple(ts))

    def to_json(self) -> dict:
        return {
            "kind": "atlas5",
            "fiber": {"r": self.fiber.r, "a": self.fiber.a},
            "expansion": {"b": list(self.expansion.b), "remainders": list(self.expansion.remainders)},
            "model": self.model.to_json(),
            "charts": [c.to_json() for c in self.charts],
            "transitions": [m.to_json() for m in self.transitions],
            "embedding": self.embedding.to_json(),
            "exceptional": self.exceptional.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "Atlas5":
        model = Chart.from_json(d["model"])
        charts = tuple(Chart.from_json(c) for c in d["charts"])
        table = {c.id: c for c in (model,) + charts}
        fiber = FiberType(d["fiber"]["r"], d["fiber"]["a"])
        e = d["expansion"]
        return cls(
            fiber,
            HJExpansion(tuple(e["b"]), tuple(e["remainders"])),
            model,
            charts,
            tuple(TransitionMap.from_json(m, table) for m in d["transitions"]),
            TransitionMap.from_json(d["embedding"], table),
        )


def x_id(i: int) -> str:
    return f"X{i}"


def xp_id(i: int) -> str:
    return f"X'{i}"


def build_atlas5(t: FiberLike) -> Atlas5:
    t = hjarith.as_fiber(t)
    if t.is_regular:
        raise NothingToResolveError("regular fiber (r = 1): nothing to resolve")
    e = hjarith.hj_expand(t)
    n = e.n
    weights = [model_weights(e.remainder(i - 1), e.remainder(i)) for i in range(n)]
    xs = [chart_x(x_id(i), weights[i]) for i in range(n)]
    last = chart_xp(xp_id(n - 1), weights[n - 1])
    model = chart_u("U_S", model_weights(t.r, t.a))
    transitions = [
        TransitionMap("ChainG", (("b", e.b[i - 1]), ("index", i)), xs[i - 1], xs[i])
        for i in range(1, n)
    ]
    transitions.append(TransitionMap("GlueF", (), last, xs[n - 1]))
    embedding = TransitionMap("EmbedE1", (), model, xs[0])
    return Atlas5(t, e, model, tuple(xs) + (last,), tuple(transitions), embedding)


def chain_transition(i: int, atlas: Atlas5) -> TransitionMap:
    """``g_i`` for ``1 <= i <= n-1``."""
    if not 1 <= i <= atlas.n - 1:
        raise IndexError(f"chain index {i} outside [1, {atlas.n - 1}]")
    return atlas.transitions[i - 1]


def exceptional_chain(atlas: Atlas5) -> ExceptionalChain:
    n = atlas.n
    comps = []
    for j in range(1, n):
        comps.append(Component(j, R(x_id(j - 1)), R_perp(x_id(j)), j - 1, S2xS1))
    comps.append(Component(n, R(x_id(n - 1)), R_prime(xp_id(n - 1)), n - 1, S3))
    adjacency = tuple((j, j + 1, adjacency_circle(x_id(j))) for j in range(1, n))
    return ExceptionalChain(tuple(comps), adjacency)


@dataclass(frozen=True)
class ReductionStep:
    """One pass of the reduction 1/r(1,a) -> 1/a(1,a_1).

    ``next`` is None when ``a == 1``: the action on ``X u_f X'`` is then free.
    """

    fiber: FiberType
    b1: int
    next: Optional[FiberType]
    x: Chart
    xp: Chart
    glue: TransitionMap
    normalize: Optional[TransitionMap]

    @property
    def free(self) -> bool:
        return self.next is None


def reduce_once(t: FiberLike) -> ReductionStep:
    t = hjarith.as_fiber(t)
    if t.is_regular:
        raise NothingToResolveError("regular fiber (r = 1): nothing to reduce")
    r, a = t.r, t.a
    b1 = -(-r // a)
    a1 = a * b1 - r
    w = model_weights(r, a)
    x, xp = chart_x("X", w), chart_xp("X'", w)
    glue = TransitionMap("GlueF", (), xp, x)
    if a == 1:
        return ReductionStep(t, b1, None, x, xp, glue, None)
    normalize = TransitionMap("NormalizeB", (("b", b1),), xp, chart_u("X''", model_weights(a, a1)))
    return ReductionStep(t, b1, FiberType(a, a1), x, xp, glue, normalize)


def reduction_sequence(t: FiberLike) -> List[ReductionStep]:
    steps = [reduce_once(t)]
    while not steps[-1].free:
        steps.append(reduce_once(steps[-1].next))
    return steps
