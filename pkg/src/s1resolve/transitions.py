"""Closed-form coordinate maps between charts.

Every map is identified by a tag plus integer parameters.  The registry
below holds, per tag, the forward formula, the domain predicate and,
where one exists, the inverse together with its image predicate.  Maps
whose formula involves ``1/a``-th powers are only defined modulo the
Z_a action; they are flagged ``za`` and use the principal branch.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Optional, Tuple

import numpy as np

from . import hjarith
from .chartcore import (
    EPS_MOD,
    Chart,
    ChartPoint,
    DomainError,
    NotInvertibleError,
    OutsideImageError,
    SlotKind,
    check_point,
)

C, CS, S1, D2 = SlotKind.COMPLEX, SlotKind.PUNCTURED, SlotKind.CIRCLE, SlotKind.DISK

Array = np.ndarray
Formula = Callable[[Array, Mapping[str, int]], Array]
Predicate = Callable[[Array, Mapping[str, int]], Array]


def _nz(z: Array) -> Array:
    return np.abs(z) > EPS_MOD


def _unit(z: Array) -> Array:
    return z / np.abs(z)


def _cols(Z: Array):
    return [Z[..., k] for k in range(Z.shape[-1])]


def _stack(*cols) -> Array:
    return np.stack(np.broadcast_arrays(*cols), axis=-1)


def _all(Z: Array, P) -> Array:
    return np.ones(Z.shape[:-1], dtype=bool)


def _slot_nonzero(*ks):
    def pred(Z, P):
        ok = np.ones(Z.shape[:-1], dtype=bool)
        for k in ks:
            ok &= _nz(Z[..., k])
        return ok
    return pred


@dataclass(frozen=True)
class MapSpec:
    forward: Formula
    domain: Predicate
    inverse: Optional[Formula] = None
    image: Optional[Predicate] = None
    za: bool = False
    note: str = ""


# ---------------------------------------------------------------- formulas
# 5-dimensional gluing of C x S^3 = X u_f X'

def _glue_f(Z, P):
    p, q1, q2 = _cols(Z)
    m = np.abs(q1)
    return _stack(p * m, q1 / m, q2 / m)


def _glue_f_inv(Z, P):
    p, q1, q2 = _cols(Z)
    m = np.abs(q2)
    return _stack(p * m, q1 / m, q2 / m)


def _iota_x(Z, P):
    p, q1, q2 = _cols(Z)
    n = np.sqrt(np.abs(q1) ** 2 + np.abs(q2) ** 2)
    return _stack(p * n, q1 / n, q2 / n)


def _iota_x_inv(Z, P):
    x, y1, y2 = _cols(Z)
    m = np.abs(y1)
    return _stack(x * m, y1 / m, y2 / m)


def _iota_xp_inv(Z, P):
    x, y1, y2 = _cols(Z)
    m = np.abs(y2)
    return _stack(x * m, y1 / m, y2 / m)


def _embed_e(Z, P):
    u, v1, v2 = _cols(Z)
    n = np.sqrt(np.abs(v1) ** 2 + np.abs(v2) ** 2)
    return _stack(u * n, v1 / n, v2 / n)


def _embed_e1(Z, P):
    u, v1, v2 = _cols(Z)
    m = np.abs(v1)
    return _stack(u * m, v1 / m, v2 / m)


def _embed_e2(Z, P):
    u, v1, v2 = _cols(Z)
    m = np.abs(v2)
    return _stack(u * m, v1 / m, v2 / m)


def _unscale_first(Z, P):
    # shared inverse of EmbedE / EmbedE1 / EmbedE2: |first| recovers the scale
    x, y1, y2 = _cols(Z)
    m = np.abs(x)
    return _stack(x / m, y1 * m, y2 * m)


def _normalize(Z, P):
    p, q1, q2 = _cols(Z)
    return _stack(q2 ** -1, q1, p * q2 ** P["b"])


def _normalize_inv(Z, P):
    u, v1, v2 = _cols(Z)
    return _stack(v2 * u ** P["b"], v1, u ** -1)


def _chain_g(Z, P):
    p, q1, q2 = _cols(Z)
    m = np.abs(q2)
    return _stack(q2 ** -1, q1, p * m ** 2 * _unit(q2) ** P["b"])


def _chain_g_inv(Z, P):
    P1, Q1, Q2 = _cols(Z)
    q2 = P1 ** -1
    m = np.abs(q2)
    return _stack(Q2 / (m ** 2 * _unit(q2) ** P["b"]), Q1, q2)


# lifts to the S^1-trivialised charts and their quotients

def _pi_tilde(Z, P):
    p, q1, q2 = _cols(Z)
    return _stack(q1 ** P["r"] * p, q1 ** -1, q2 * q1 ** -P["a"])


def _pi_tilde_inv(Z, P):
    # the same formula is an involution
    return _pi_tilde(Z, P)


def _pi_prime_tilde(Z, P):
    p, q1, s = _cols(Z)
    return _stack(s ** P["r"] * p, s ** -1 * q1, s ** -P["a"])


def _descended_g(Z, P):
    p, q1, q2 = _cols(Z)
    m = np.abs(q1)
    r, a = P["r"], P["a"]
    return _stack(p * m * _unit(q1) ** r, q2 * m / q1, q1 ** -a * m ** (a - 1))


def _descended_bar_g(Z, P):
    p, q1 = _cols(Z)
    m = np.abs(q1)
    r, a = P["r"], P["a"]
    return _stack(p * m * _unit(q1) ** r, q1 ** -a * m ** (a - 1))


def _model_u(Z, P):
    u, v1, v2 = _cols(Z)
    return _stack(u ** P["r"], u ** -1 * v1, u ** -P["a"] * v2)


def _lift_embed1(Z, P):
    u, v1, v2 = _cols(Z)
    m = np.abs(v1)
    r, a = P["r"], P["a"]
    return _stack(m * _unit(v1) ** r, m / v1 * u, v2 * v1 ** -a * m ** (a - 1))


def _lift_embed2(Z, P):
    u, v1, v2 = _cols(Z)
    m = np.abs(v2)
    r, a = P["r"], P["a"]
    root = v2 ** (-1.0 / a)
    return _stack(m * _unit(v2) ** (r / a), m ** (1.0 / a - 1) * root * v1, root * m ** (1.0 / a) * u)


def _quot_embed1(Z, P):
    v1, v2 = _cols(Z)
    m = np.abs(v1)
    r, a = P["r"], P["a"]
    return _stack(m * _unit(v1) ** r, v2 * v1 ** -a * m ** (a - 1))


def _quot_embed2(Z, P):
    v1, v2 = _cols(Z)
    m = np.abs(v2)
    r, a = P["r"], P["a"]
    return _stack(m * _unit(v2) ** (r / a), m ** (1.0 / a - 1) * v2 ** (-1.0 / a) * v1)


# 4-dimensional Reid charts

def _reid_f(Z, P):
    xi, eta = _cols(Z)
    return _stack(eta ** -1, xi * eta ** P["b"])


def _reid_f_inv(Z, P):
    xi, eta = _cols(Z)
    return _stack(eta * xi ** P["b"], xi ** -1)


def _reid_two_chart_f(Z, P):
    z1, z2 = _cols(Z)
    return _stack(z2 ** P["r"] * z1, z2 ** -P["a"])


def _reid_quotient(Z, P):
    z1, z2 = _cols(Z)
    a, a1 = P["a"], P["a1"]
    return _stack(z2 ** a, z1 * z2 ** -a1)


def _swap(Z, P):
    z1, z2 = _cols(Z)
    return _stack(z2, z1)


def _reid_embed0(Z, P):
    v1, v2 = _cols(Z)
    return _stack(v1 ** P["r"], v2 * v1 ** -P["a"])


def _reid_embed1(Z, P):
    v1, v2 = _cols(Z)
    r, a, b1 = P["r"], P["a"], P["b1"]
    return _stack(v2 ** -1 * v1 ** a, v1 ** r * (v2 * v1 ** -a) ** b1)


def reid_exponents(r: int, a: int, j: int) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """Monomial exponents of the embedding into ``Y_j``.

    ``xi_j = v1**a_{j-1} v2**-beta_{j-1}`` and ``eta_j = v1**-a_j v2**beta_j``,
    which is what composing the Reid gluings with the ``Y_0`` embedding
    produces.
    """
    e = hjarith.hj_expand((r, a))
    if not 0 <= j <= e.n:
        raise IndexError(f"chart index {j} outside [0, {e.n}]")
    beta = hjarith.dual_numerators(e)  # beta[i + 1] == beta_i
    return (e.remainder(j - 1), -beta[j]), (-e.remainder(j), beta[j + 1])


def _monomial(v1, v2, ex):
    e1, e2 = ex
    return v1 ** e1 * v2 ** e2


def _reid_embed_j(Z, P):
    v1, v2 = _cols(Z)
    ex, ey = reid_exponents(P["r"], P["a"], P["j"])
    return _stack(_monomial(v1, v2, ex), _monomial(v1, v2, ey))


def _reid_embed_j_domain(Z, P):
    ex, ey = reid_exponents(P["r"], P["a"], P["j"])
    ok = np.ones(Z.shape[:-1], dtype=bool)
    for k in range(2):
        if ex[k] < 0 or ey[k] < 0:
            ok &= _nz(Z[..., k])
    return ok


def _reid_embed_prime(Z, P):
    v1, v2 = _cols(Z)
    r, a = P["r"], P["a"]
    return _stack(v2 ** (r / a), v1 * v2 ** (-1.0 / a))


def _top_f3(Z, P):
    z1, z2 = _cols(Z)
    return _stack(z1 * z2 ** P["r"], z2 ** -P["a"])


REGISTRY: Dict[str, MapSpec] = {
    "GlueF": MapSpec(_glue_f, _slot_nonzero(1), _glue_f_inv, _slot_nonzero(2)),
    "IotaX": MapSpec(_iota_x, _all, _iota_x_inv, _slot_nonzero(1)),
    "IotaXPrime": MapSpec(_iota_x, _all, _iota_xp_inv, _slot_nonzero(2)),
    "EmbedE": MapSpec(_embed_e, lambda Z, P: _nz(np.hypot(np.abs(Z[..., 1]), np.abs(Z[..., 2]))),
                      _unscale_first, _slot_nonzero(0)),
    "EmbedE1": MapSpec(_embed_e1, _slot_nonzero(1), _unscale_first, _slot_nonzero(0)),
    "EmbedE2": MapSpec(_embed_e2, _slot_nonzero(2), _unscale_first, _slot_nonzero(0)),
    "NormalizeB": MapSpec(_normalize, _all, _normalize_inv, _all),
    "ChainG": MapSpec(_chain_g, _slot_nonzero(2), _chain_g_inv, _slot_nonzero(0)),
    "PiTilde": MapSpec(_pi_tilde, _all, _pi_tilde_inv, _all),
    "PiPrimeTilde": MapSpec(_pi_prime_tilde, _all, note="a-to-1 covering"),
    "DescendedG": MapSpec(_descended_g, _slot_nonzero(1), note="covers an a-to-1 quotient"),
    "DescendedBarG": MapSpec(_descended_bar_g, _slot_nonzero(1), note="covers an a-to-1 quotient"),
    "ModelU": MapSpec(_model_u, _all, note="r-to-1 covering"),
    "LiftEmbed1": MapSpec(_lift_embed1, _slot_nonzero(1)),
    "LiftEmbed2": MapSpec(_lift_embed2, _slot_nonzero(2), za=True),
    "QuotEmbed1": MapSpec(_quot_embed1, _slot_nonzero(0)),
    "QuotEmbed2": MapSpec(_quot_embed2, _slot_nonzero(1), za=True),
    "ReidF": MapSpec(_reid_f, _slot_nonzero(1), _reid_f_inv, _slot_nonzero(0)),
    "ReidTwoChartF": MapSpec(_reid_two_chart_f, _slot_nonzero(1), note="Z_a-invariant"),
    "ReidQuotient": MapSpec(_reid_quotient, _slot_nonzero(1), note="Z_a-invariant"),
    "ReidSwap": MapSpec(_swap, _all, _swap, _all),
    "ReidEmbed0": MapSpec(_reid_embed0, _slot_nonzero(0)),
    "ReidEmbed1": MapSpec(_reid_embed1, _slot_nonzero(0, 1)),
    "ReidEmbedJ": MapSpec(_reid_embed_j, _reid_embed_j_domain),
    "ReidEmbedPrime": MapSpec(_reid_embed_prime, _slot_nonzero(1), za=True),
    "TopModelH1": MapSpec(_reid_embed0, _all),
    "TopModelH2": MapSpec(_reid_embed_prime, _all, za=True),
    "TopModelF3": MapSpec(_top_f3, _all),
}


@dataclass(frozen=True)
class TransitionMap:
    tag: str
    params: Tuple[Tuple[str, int], ...]
    src: Chart
    dst: Chart

    def __post_init__(self):
        if self.tag not in REGISTRY:
            raise KeyError(f"unknown transition tag {self.tag!r}")
        object.__setattr__(self, "params", tuple(sorted((k, int(v)) for k, v in dict(self.params).items())))

    @property
    def spec(self) -> MapSpec:
        return REGISTRY[self.tag]

    @property
    def p(self) -> Dict[str, int]:
        return dict(self.params)

    @property
    def invertible(self) -> bool:
        return self.spec.inverse is not None

    @property
    def za(self) -> Optional[Tuple[int, int]]:
        """``(a, a1)`` for maps defined only modulo Z_a, else None."""
        if not self.spec.za:
            return None
        return za_parameters(self.p["r"], self.p["a"])

    def with_param(self, **kw) -> "TransitionMap":
        d = self.p
        d.update(kw)
        return TransitionMap(self.tag, tuple(d.items()), self.src, self.dst)

    def with_charts(self, src: Chart = None, dst: Chart = None) -> "TransitionMap":
        return TransitionMap(self.tag, self.params, src or self.src, dst or self.dst)

    def domain_mask(self, Z: Array) -> Array:
        Z = np.asarray(Z, dtype=complex)
        return self.src.valid_mask(Z) & self.spec.domain(Z, self.p)

    def image_mask(self, Z: Array) -> Array:
        if not self.invertible:
            raise NotInvertibleError(f"{self.tag} has no inverse ({self.spec.note})")
        Z = np.asarray(Z, dtype=complex)
        return self.dst.valid_mask(Z) & self.spec.image(Z, self.p)

    def apply(self, Z: Array, check: bool = True) -> Array:
        Z = np.asarray(Z, dtype=complex)
        if check:
            ok = self.domain_mask(Z)
            if not np.all(ok):
                bad = Z[~ok][0] if Z.ndim > 1 else Z
                raise DomainError(f"{self.tag}: point {tuple(bad)} outside domain in chart {self.src.id}")
        with np.errstate(all="ignore"):
            out = self.spec.forward(Z, self.p)
        return self.dst.renormalize(out)

    def apply_inverse(self, Z: Array, check: bool = True) -> Array:
        if not self.invertible:
            raise NotInvertibleError(f"{self.tag} has no inverse ({self.spec.note})")
        Z = np.asarray(Z, dtype=complex)
        if check:
            ok = self.image_mask(Z)
            if not np.all(ok):
                bad = Z[~ok][0] if Z.ndim > 1 else Z
                raise OutsideImageError(f"{self.tag}: point {tuple(bad)} outside image in chart {self.dst.id}")
        with np.errstate(all="ignore"):
            out = self.spec.inverse(Z, self.p)
        return self.src.renormalize(out)

    def to_json(self) -> dict:
        return {"tag": self.tag, "params": dict(self.params), "src": self.src.id, "dst": self.dst.id}

    @classmethod
    def from_json(cls, d: dict, charts: Mapping[str, Chart]) -> "TransitionMap":
        return cls(d["tag"], tuple(d["params"].items()), charts[d["src"]], charts[d["dst"]])

    def __str__(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.tag}({args}): {self.src.id} -> {self.dst.id}"


def za_parameters(r: int, a: int) -> Tuple[int, int]:
    """``(a, a1)`` with ``r = a b1 - a1``; ``a1 = 0`` when ``a = 1``."""
    b1 = -(-r // a)
    return a, a * b1 - r


def eval_transition(m: TransitionMap, p: ChartPoint) -> ChartPoint:
    check_point(m.src, p)
    out = m.apply(p.array()[None, :])[0]
    return ChartPoint(m.dst.id, tuple(out))


def invert_transition(m: TransitionMap, q: ChartPoint) -> ChartPoint:
    if not m.invertible:
        raise NotInvertibleError(f"{m.tag} is not invertible ({m.spec.note})")
    check_point(m.dst, q)
    out = m.apply_inverse(q.array()[None, :])[0]
    return ChartPoint(m.src.id, tuple(out))


# ---------------------------------------------------------------- charts

def chart_u(id: str, weights) -> Chart:
    """``S^1 x C x C`` (model neighbourhood U_S, or the normalised X'')."""
    return Chart(id, (S1, C, C), tuple(weights))


def chart_x(id: str, weights) -> Chart:
    return Chart(id, (C, S1, C), tuple(weights))


def chart_xp(id: str, weights) -> Chart:
    return Chart(id, (C, C, S1), tuple(weights))


def chart_cs3(id: str, weights) -> Chart:
    return Chart(id, (C, C, C), tuple(weights), sphere=(1, 2))


def chart_c2(id: str) -> Chart:
    return Chart(id, (C, C))


def model_weights(m: int, k: int) -> Tuple[int, int, int]:
    return (m, -1, -k)


def standard_map(tag: str, r: int, a: int, **extra) -> TransitionMap:
    """The map ``tag`` for fiber type 1/r(1,a) between its natural charts.

    Weighted charts use ``(r, -1, -a)``; ChainG and NormalizeB default to
    the first reduction step (``b = b_1``).
    """
    a_, a1 = za_parameters(r, a)
    b1 = -(-r // a)
    w = model_weights(r, a)
    P = {"r": r, "a": a}
    if tag == "GlueF":
        return TransitionMap(tag, (), chart_xp("X'", w), chart_x("X", w))
    if tag == "IotaX":
        return TransitionMap(tag, (), chart_x("X", w), chart_cs3("CxS3", w))
    if tag == "IotaXPrime":
        return TransitionMap(tag, (), chart_xp("X'", w), chart_cs3("CxS3", w))
    if tag == "EmbedE":
        return TransitionMap(tag, (), chart_u("U_S", w), chart_cs3("CxS3", w))
    if tag == "EmbedE1":
        return TransitionMap(tag, (), chart_u("U_S", w), chart_x("X", w))
    if tag == "EmbedE2":
        return TransitionMap(tag, (), chart_u("U_S", w), chart_xp("X'", w))
    if tag == "NormalizeB":
        b = extra.get("b", b1)
        return TransitionMap(tag, (("b", b),), chart_xp("X'", w), chart_u("X''", (a, -1, -(a * b - r))))
    if tag == "ChainG":
        b = extra.get("b", b1)
        return TransitionMap(tag, (("b", b), ("index", extra.get("index", 1))),
                             chart_x("X0", w), chart_x("X1", (a, -1, -(a * b - r))))
    if tag == "PiTilde":
        return TransitionMap(tag, tuple(P.items()), chart_x("~X", (0, 1, 0)), chart_x("X", w))
    if tag == "PiPrimeTilde":
        return TransitionMap(tag, tuple(P.items()), chart_xp("~X'", (0, 0, 1)), chart_xp("X'", w))
    if tag == "DescendedG":
        return TransitionMap(tag, tuple(P.items()), chart_xp("~X'", (0, 0, 1)), chart_x("~X", (0, 1, 0)))
    if tag == "DescendedBarG":
        return TransitionMap(tag, tuple(P.items()), chart_c2("X'bar"), chart_c2("Xbar"))
    if tag == "ModelU":
        return TransitionMap(tag, tuple(P.items()), chart_u("~U_S", (1, 0, 0)), chart_u("U_S", w))
    if tag == "LiftEmbed1":
        return TransitionMap(tag, tuple(P.items()), chart_u("~U_S", (1, 0, 0)), chart_x("~X", (0, 1, 0)))
    if tag == "LiftEmbed2":
        return TransitionMap(tag, tuple(P.items()), chart_u("~U_S", (1, 0, 0)), chart_xp("~X'", (0, 0, 1)))
    if tag == "QuotEmbed1":
        return TransitionMap(tag, tuple(P.items()), chart_c2("Ubar"), chart_c2("Xbar"))
    if tag == "QuotEmbed2":
        return TransitionMap(tag, tuple(P.items()), chart_c2("Ubar"), chart_c2("X'bar"))
    if tag == "ReidF":
        b = extra.get("b", b1)
        return TransitionMap(tag, (("b", b),), chart_c2("Y0"), chart_c2("Y1"))
    if tag == "ReidTwoChartF":
        return TransitionMap(tag, tuple(P.items()), chart_c2("Y'"), chart_c2("Y"))
    if tag == "ReidQuotient":
        return TransitionMap(tag, (("a", a_), ("a1", a1)), chart_c2("Y'"), chart_c2("Y1"))
    if tag == "ReidSwap":
        return TransitionMap(tag, (), chart_c2("Y'"), chart_c2("Y''"))
    if tag == "ReidEmbed0":
        return TransitionMap(tag, tuple(P.items()), chart_c2("Ubar"), chart_c2("Y0"))
    if tag == "ReidEmbed1":
        return TransitionMap(tag, (("r", r), ("a", a), ("b1", b1)), chart_c2("Ubar"), chart_c2("Y1"))
    if tag == "ReidEmbedJ":
        j = extra["j"]
        return TransitionMap(tag, (("r", r), ("a", a), ("j", j)), chart_c2("Ubar"), chart_c2(f"Y{j}"))
    if tag == "ReidEmbedPrime":
        return TransitionMap(tag, tuple(P.items()), chart_c2("Ubar"), chart_c2("Y'"))
    if tag == "TopModelH1":
        return TransitionMap(tag, tuple(P.items()), Chart("dU:S1xD2", (S1, D2)), Chart("dY:S1xD2", (S1, D2)))
    if tag == "TopModelH2":
        return TransitionMap(tag, tuple(P.items()), Chart("dU:D2xS1", (D2, S1)), Chart("dY':S1xD2", (S1, D2)))
    if tag == "TopModelF3":
        return TransitionMap(tag, tuple(P.items()), Chart("dY':D2xS1", (D2, S1)), Chart("dY:D2xS1", (D2, S1)))
    raise KeyError(f"unknown transition tag {tag!r}")
