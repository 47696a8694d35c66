"""Charts, chart points, weighted circle actions and Z_a orbit comparison.

A chart is an ordered product of slots, each holding one complex number:
the complex plane, the punctured plane, the unit circle or the closed unit
disk. A circle action of weight vector ``w`` multiplies coordinate ``k`` by
``t**w[k]``.

Bulk evaluation works on complex arrays of shape ``(..., k)``; the
:class:`ChartPoint` API is a thin single-point wrapper on top.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

EPS_MOD = 1e-9
EPS_NUM = 1e-9


class ChartError(ValueError):
    pass


class DomainError(ChartError):
    """Point lies outside the domain of a chart or a map."""


class OutsideImageError(DomainError):
    """Inverse requested for a point not in the image of an embedding."""


class NotInvertibleError(ChartError):
    pass


class InvalidGroupElementError(ChartError):
    """Circle action applied with ``|t| != 1``."""


class NoGaugeError(ChartError):
    """Chart has no free circle slot to gauge away."""


class SlotKind(str, Enum):
    COMPLEX = "C"
    PUNCTURED = "C*"
    CIRCLE = "S1"
    DISK = "D2"


@dataclass(frozen=True)
class Chart:
    """Coordinate domain with an optional circle-action weight per slot.

    ``sphere`` lists slots whose joint Euclidean norm is pinned to 1
    (used for the C x S^3 model, which is not a product of slots).
    """

    id: str
    slots: Tuple[SlotKind, ...]
    weights: Optional[Tuple[int, ...]] = None
    sphere: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(SlotKind(s) for s in self.slots))
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
            if len(self.weights) != len(self.slots):
                raise ChartError(
                    f"chart {self.id}: {len(self.weights)} weights for {len(self.slots)} slots"
                )

    @property
    def dim(self) -> int:
        return len(self.slots)

    def with_weights(self, weights: Sequence[int]) -> "Chart":
        return Chart(self.id, self.slots, tuple(weights), self.sphere)

    def renamed(self, new_id: str) -> "Chart":
        return Chart(new_id, self.slots, self.weights, self.sphere)

    def valid_mask(self, Z: np.ndarray, eps: float = EPS_MOD) -> np.ndarray:
        Z = np.asarray(Z, dtype=complex)
        ok = np.all(np.isfinite(Z), axis=-1)
        for k, kind in enumerate(self.slots):
            m = np.abs(Z[..., k])
            if kind is SlotKind.CIRCLE:
                ok &= np.abs(m - 1.0) <= eps
            elif kind is SlotKind.PUNCTURED:
                ok &= m > eps
            elif kind is SlotKind.DISK:
                ok &= m <= 1.0 + eps
        if self.sphere:
            norm = np.sqrt(sum(np.abs(Z[..., k]) ** 2 for k in self.sphere))
            ok &= np.abs(norm - 1.0) <= eps
        return ok

    def renormalize(self, Z: np.ndarray) -> np.ndarray:
        """Snap circle slots (and the sphere block) back to modulus one."""
        Z = np.array(Z, dtype=complex, copy=True)
        for k, kind in enumerate(self.slots):
            if kind is SlotKind.CIRCLE:
                m = np.abs(Z[..., k])
                nz = m > 0
                Z[..., k] = np.where(nz, Z[..., k] / np.where(nz, m, 1.0), Z[..., k])
        if self.sphere:
            idx = list(self.sphere)
            norm = np.sqrt(np.sum(np.abs(Z[..., idx]) ** 2, axis=-1, keepdims=True))
            Z[..., idx] = Z[..., idx] / np.where(norm > 0, norm, 1.0)
        return Z

    def to_json(self) -> dict:
        out = {"id": self.id, "slots": [s.value for s in self.slots]}
        out["weights"] = list(self.weights) if self.weights is not None else None
        if self.sphere:
            out["sphere"] = list(self.sphere)
        return out

    @classmethod
    def from_json(cls, d: dict) -> "Chart":
        w = d.get("weights")
        return cls(d["id"], tuple(SlotKind(s) for s in d["slots"]),
                   tuple(w) if w is not None else None, tuple(d.get("sphere", ())))


@dataclass(frozen=True)
class ChartPoint:
    chart: str
    coords: Tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(complex(z) for z in self.coords))

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=complex)

    def to_json(self) -> dict:
        return {"chart": self.chart, "coords": [[z.real, z.imag] for z in self.coords]}

    @classmethod
    def from_json(cls, d: dict) -> "ChartPoint":
        return cls(d["chart"], tuple(complex(re, im) for re, im in d["coords"]))


def check_point(chart: Chart, p: ChartPoint, eps: float = EPS_MOD) -> None:
    if p.chart != chart.id:
        raise DomainError(f"point lives in chart {p.chart!r}, expected {chart.id!r}")
    if len(p.coords) != chart.dim:
        raise DomainError(f"chart {chart.id} has {chart.dim} slots, point has {len(p.coords)}")
    if not chart.valid_mask(p.array()[None, :], eps)[0]:
        raise DomainError(f"{p.coords} violates the slot constraints of chart {chart.id}")


# ---------------------------------------------------------------- metrics

def scaled_error(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Per-point max over coordinates of ``|x - y| / max(1, |x|, |y|)``.

    Absolute error below unit modulus, relative error above it: sampled
    coordinates reach ``10**r`` in modulus, where only relative accuracy
    is meaningful.
    """
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    scale = np.maximum(1.0, np.maximum(np.abs(X), np.abs(Y)))
    err = np.abs(X - Y) / scale
    err = np.where(np.isfinite(err), err, np.inf)
    return err.max(axis=-1)


# ---------------------------------------------------------------- circle action

def _check_unit(t, eps: float = EPS_MOD) -> np.ndarray:
    t = np.asarray(t, dtype=complex)
    if np.any(np.abs(np.abs(t) - 1.0) > eps):
        raise InvalidGroupElementError("circle group elements must have modulus 1")
    return t


def act_array(weights: Sequence[int], t, Z: np.ndarray) -> np.ndarray:
    """Apply ``t`` (scalar or broadcastable array) to coordinate arrays ``Z``."""
    t = _check_unit(t)
    Z = np.asarray(Z, dtype=complex)
    w = np.asarray(weights, dtype=int)
    if w.shape[0] != Z.shape[-1]:
        raise ChartError(f"{w.shape[0]} weights for {Z.shape[-1]} coordinates")
    return Z * np.power(t[..., None], w)


def act(weights: Sequence[int], t: complex, p: ChartPoint) -> ChartPoint:
    out = act_array(weights, complex(t), p.array())
    return ChartPoint(p.chart, tuple(out))


# ---------------------------------------------------------------- quotients

def gauge_slot(chart: Chart) -> int:
    """Index of the circle slot acted on with weight -1 (or +1)."""
    if chart.weights is None:
        raise NoGaugeError(f"chart {chart.id} carries no circle action")
    for want in (-1, 1):
        for k, (kind, w) in enumerate(zip(chart.slots, chart.weights)):
            if kind is SlotKind.CIRCLE and w == want:
                return k
    raise NoGaugeError(f"chart {chart.id} has no circle slot of weight -1 or +1")


def quotient_array(chart: Chart, Z: np.ndarray) -> np.ndarray:
    """Orbit-space coordinates: remaining slots multiplied by ``g**(-w_k * w_g)``.

    For weights ``(m, -1, -k)`` on ``C x S^1 x C`` this is
    ``(p q1**m, q2 q1**-k)``.
    """
    g = gauge_slot(chart)
    wg = chart.weights[g]
    Z = np.asarray(Z, dtype=complex)
    gauge = Z[..., g]
    cols = []
    for k, w in enumerate(chart.weights):
        if k == g:
            continue
        cols.append(Z[..., k] * np.power(gauge, -w * wg))
    return np.stack(cols, axis=-1)


def quotient_point(chart: Chart, p: ChartPoint) -> ChartPoint:
    check_point(chart, p)
    out = quotient_array(chart, p.array())
    return ChartPoint(f"{chart.id}/S1", tuple(out))


def drop_slot(Z: np.ndarray, k: int) -> np.ndarray:
    Z = np.asarray(Z)
    return np.delete(Z, k, axis=-1)


# ---------------------------------------------------------------- Z_a orbits

def za_translates(a: int, a1: int, Y: np.ndarray) -> np.ndarray:
    """All ``a`` translates ``(eps**(a1 k) y1, eps**k y2)``, stacked on axis 0."""
    Y = np.asarray(Y, dtype=complex)
    k = np.arange(a)
    eps = np.exp(2j * np.pi * k / a)
    g1 = np.exp(2j * np.pi * ((a1 * k) % a) / a)
    shape = (a,) + (1,) * (Y.ndim - 1)
    return np.stack([g1.reshape(shape) * Y[..., 0], eps.reshape(shape) * Y[..., 1]], axis=-1)


def za_orbit_distance(a: int, a1: int, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Min over the Z_a orbit of ``Y`` of :func:`scaled_error` against ``X``."""
    if a < 1:
        raise ChartError("a must be >= 1")
    trans = za_translates(a, a1, Y)
    return scaled_error(np.asarray(X, dtype=complex)[None, ...], trans).min(axis=0)


def za_orbit_equal(a: int, a1: int, x, y, tol: float = EPS_NUM) -> bool:
    d = za_orbit_distance(a, a1, np.asarray(x, dtype=complex), np.asarray(y, dtype=complex))
    return bool(np.all(d < tol))
