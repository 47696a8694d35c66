"""Seeded sample-level verification of both atlases and their compatibility.

Every check samples points, evaluates two routes to the same quantity and
records the max over samples of :func:`~s1resolve.chartcore.scaled_error`.
Failures never raise; they are recorded together with a witness point.
Each check draws from its own RNG stream keyed on ``(seed, check name)``,
so the report does not depend on which checks run or in what order.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

import numpy as np

from . import hjarith
from .chartcore import (
    Chart,
    SlotKind,
    act_array,
    drop_slot,
    quotient_array,
    scaled_error,
    za_orbit_distance,
    za_translates,
)
from .hjarith import FiberLike, FiberType
from .resolve4d import Atlas4, build_atlas4, composed_embedding, two_chart_reduction
from .resolve5d import (
    S3,
    S2xS1,
    Atlas5,
    R,
    R_perp,
    R_prime,
    adjacency_circle,
    build_atlas5,
    exceptional_chain,
    reduce_once,
)
from .transitions import TransitionMap, standard_map, za_parameters


@dataclass(frozen=True)
class CheckConfig:
    seed: int = 0
    samples_per_check: int = 1000
    group_samples: int = 100
    tol: float = 1e-9
    radius_range: Tuple[float, float] = (0.1, 10.0)

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.samples_per_check < 1 or self.group_samples < 1:
            raise ValueError("sample counts must be positive")
        lo, hi = self.radius_range
        if not 1e-9 < lo <= hi:
            raise ValueError(f"radius_range must satisfy 1e-9 < min <= max, got {self.radius_range}")


@dataclass
class CheckRecord:
    name: str
    section: str
    samples: int
    max_error: float
    tol: float
    witness: Optional[dict] = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.max_error) and self.max_error < self.tol)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "section": self.section,
            "samples": self.samples,
            "max_error": self.max_error,
            "tol": self.tol,
            "passed": self.passed,
            "witness": self.witness,
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    fiber: FiberType
    expansion: Optional[hjarith.HJExpansion]
    config: CheckConfig
    records: List[CheckRecord] = field(default_factory=list)
    note: str = ""

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def section(self, name: str) -> List[CheckRecord]:
        return [r for r in self.records if r.section == name]

    def failures(self) -> List[CheckRecord]:
        return [r for r in self.records if not r.passed]

    def to_json(self) -> dict:
        return {
            "fiber": {"r": self.fiber.r, "a": self.fiber.a},
            "expansion": None if self.expansion is None else {
                "b": list(self.expansion.b), "remainders": list(self.expansion.remainders)},
            "config": {
                "seed": self.config.seed,
                "samples_per_check": self.config.samples_per_check,
                "group_samples": self.config.group_samples,
                "tol": self.config.tol,
                "radius_range": list(self.config.radius_range),
            },
            "checks": [r.to_json() for r in self.records],
            "note": self.note,
            "verdict": "pass" if self.passed else "fail",
        }

    def to_markdown(self) -> str:
        lines = [f"# Verification report for type {self.fiber}", ""]
        if self.expansion is not None:
            lines.append(f"- expansion: {self.expansion}")
        c = self.config
        lines.append(f"- seed {c.seed}, {c.samples_per_check} samples per check, "
                     f"{c.group_samples} group elements, tol {c.tol:.3g}")
        if self.note:
            lines.append(f"- note: {self.note}")
        lines.append(f"- verdict: **{'PASS' if self.passed else 'FAIL'}** "
                     f"({len(self.records) - len(self.failures())}/{len(self.records)} checks pass)")
        lines += ["", "| section | check | samples | max error | result |", "|---|---|---|---|---|"]
        for r in self.records:
            lines.append(f"| {r.section} | {r.name} | {r.samples} | {r.max_error:.3e} | "
                         f"{'pass' if r.passed else 'FAIL'} |")
        fails = self.failures()
        if fails:
            lines += ["", "## Failures", ""]
            for r in fails:
                lines.append(f"- `{r.name}`: max error {r.max_error:.3e} (tol {r.tol:.1e}) {r.detail}")
                if r.witness:
                    lines.append(f"  - witness: `{r.witness}`")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- sampling

def rng_for(seed: int, name: str) -> np.random.Generator:
    digest = hashlib.sha256(name.encode()).digest()
    words = [int.from_bytes(digest[i:i + 4], "little") for i in range(0, 16, 4)]
    return np.random.default_rng(np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF] + words))


class Sampler:
    """Log-uniform moduli for complex slots, uniform angles everywhere."""

    def __init__(self, cfg: CheckConfig, name: str):
        self.cfg = cfg
        self.rng = rng_for(cfg.seed, name)

    def angles(self, n: int) -> np.ndarray:
        return np.exp(2j * np.pi * self.rng.random(n))

    def complex(self, n: int, lo: float = None, hi: float = None) -> np.ndarray:
        lo = self.cfg.radius_range[0] if lo is None else lo
        hi = self.cfg.radius_range[1] if hi is None else hi
        mod = np.exp(self.rng.uniform(np.log(lo), np.log(hi), n))
        return mod * self.angles(n)

    def disk(self, n: int) -> np.ndarray:
        return np.sqrt(self.rng.random(n)) * self.angles(n)

    def group(self, n: int) -> np.ndarray:
        return self.angles(n)

    def chart(self, chart: Chart, n: int) -> np.ndarray:
        cols = []
        for kind in chart.slots:
            if kind is SlotKind.CIRCLE:
                cols.append(self.angles(n))
            elif kind is SlotKind.DISK:
                cols.append(self.disk(n))
            else:
                cols.append(self.complex(n))
        Z = np.stack(cols, axis=-1)
        if chart.sphere:
            idx = list(chart.sphere)
            Z[:, idx] /= np.linalg.norm(Z[:, idx], axis=-1, keepdims=True)
        return Z

    def domain(self, m: TransitionMap, n: int) -> np.ndarray:
        Z = self.chart(m.src, n)
        ok = m.domain_mask(Z)
        while not np.all(ok):
            Z[~ok] = self.chart(m.src, int((~ok).sum()))
            ok = m.domain_mask(Z)
        return Z


def _coords(z) -> list:
    return [[float(c.real), float(c.imag)] for c in np.atleast_1d(z)]


def _record(name: str, section: str, cfg: CheckConfig, err: np.ndarray,
            witness_of: Callable[[int], dict] = None, detail: str = "") -> CheckRecord:
    err = np.asarray(err, dtype=float).ravel()
    if err.size == 0:
        return CheckRecord(name, section, 0, 0.0, cfg.tol, None, detail or "vacuous")
    err = np.where(np.isnan(err), np.inf, err)
    worst = int(np.argmax(err))
    rec = CheckRecord(name, section, int(err.size), float(err[worst]), cfg.tol, None, detail)
    if not rec.passed and witness_of is not None:
        rec.witness = witness_of(worst)
    return rec


def _guard(name: str, section: str, cfg: CheckConfig, fn: Callable[[], CheckRecord]) -> CheckRecord:
    try:
        return fn()
    except Exception as exc:  # a crash inside a check is a failed check
        return CheckRecord(name, section, 0, float("inf"), cfg.tol, None,
                           f"{type(exc).__name__}: {exc}")


def compare(name: str, section: str, cfg: CheckConfig, X: np.ndarray,
            lhs: np.ndarray, rhs: np.ndarray, za: Tuple[int, int] = None,
            detail: str = "") -> CheckRecord:
    """Record ``max |lhs - rhs|`` over samples (modulo Z_a when ``za`` is given)."""
    if za is None:
        err = scaled_error(lhs, rhs)
    else:
        err = za_orbit_distance(za[0], za[1], lhs, rhs)

    def witness(i):
        return {"point": _coords(X[i]), "lhs": _coords(lhs[i]), "rhs": _coords(rhs[i])}

    return _record(name, section, cfg, err, witness, detail)


# ---------------------------------------------------------------- checks

def equivariance_record(m: TransitionMap, cfg: CheckConfig, label: str = None,
                        section: str = "equivariance") -> CheckRecord:
    name = f"equivariance[{label or m}]"

    def run():
        if m.src.weights is None or m.dst.weights is None:
            raise ValueError(f"{m} lacks weight vectors")
        s = Sampler(cfg, name)
        X = s.domain(m, cfg.samples_per_check)
        T = s.group(cfg.group_samples)[:, None]
        lhs = m.apply(act_array(m.src.weights, T, X[None, :, :]))
        rhs = act_array(m.dst.weights, T, m.apply(X)[None, :, :])
        err = scaled_error(lhs, rhs)  # (G, N)

        def witness(i):
            g, k = divmod(i, X.shape[0])
            return {"point": _coords(X[k]), "t": _coords(T[g, 0]),
                    "lhs": _coords(lhs[g, k]), "rhs": _coords(rhs[g, k])}

        return _record(name, section, cfg, err, witness)

    return _guard(name, section, cfg, run)


def auxiliary_maps(t: FiberType) -> List[TransitionMap]:
    """Per-step maps used by the construction that are not atlas transitions."""
    maps = []
    for tag in ("IotaX", "IotaXPrime", "EmbedE", "EmbedE2", "PiTilde", "PiPrimeTilde",
                "DescendedG", "ModelU", "LiftEmbed1", "LiftEmbed2"):
        maps.append(standard_map(tag, t.r, t.a))
    step = t
    while step.a > 1:
        rs = reduce_once(step)
        maps.append(rs.normalize)
        step = rs.next
    return maps


def check_equivariance_suite(atlas: Atlas5, cfg: CheckConfig) -> List[CheckRecord]:
    recs = [equivariance_record(m, cfg) for m in atlas.all_maps()]
    for m in auxiliary_maps(atlas.fiber):
        recs.append(equivariance_record(m, cfg, label=f"aux {m}"))
    return recs


def check_za_collapse(t: FiberLike, cfg: CheckConfig, a1: int = None) -> List[CheckRecord]:
    t = hjarith.as_fiber(t)
    name = "za_collapse[PiPrimeTilde]"
    section = "za_collapse"
    if t.a == 1:
        return [CheckRecord(name, section, 0, 0.0, cfg.tol, None, "a = 1: Z_1 is trivial")]
    a, true_a1 = za_parameters(t.r, t.a)
    a1 = true_a1 if a1 is None else a1

    def run():
        m = standard_map("PiPrimeTilde", t.r, t.a)
        s = Sampler(cfg, name)
        X = s.chart(m.src, cfg.samples_per_check)
        k = np.arange(a)[:, None]
        eps = np.exp(2j * np.pi * k / a)
        orbit = np.stack([np.exp(2j * np.pi * (a1 * k % a) / a) * X[None, :, 0],
                          eps * X[None, :, 1], eps * X[None, :, 2]], axis=-1)
        images = m.apply(orbit)
        err = scaled_error(images, images[0:1]).max(axis=0)
        return _record(name, section, cfg, err,
                       lambda i: {"point": _coords(X[i]), "images": [_coords(z) for z in images[:, i]]},
                       detail=f"rho = diag(eps^{a1}, eps), eps = exp(2 pi i/{a})")

    return [_guard(name, section, cfg, run)]


def check_compositions(atlas: Atlas5, cfg: CheckConfig) -> List[CheckRecord]:
    """``g_i == EmbedE1 o NormalizeB(b_i) o GlueF^-1`` and the C x S^3 identifications."""
    section = "composition"
    recs = []
    t = atlas.fiber
    steps = []
    step = t
    while True:
        rs = reduce_once(step)
        steps.append(rs)
        if rs.free:
            break
        step = rs.next

    def composed(rs, m, label):
        name = f"composition[{label}]"

        def run():
            s = Sampler(cfg, name)
            X = s.domain(m, cfg.samples_per_check)
            e1 = standard_map("EmbedE1", rs.next.r, rs.next.a)
            rhs = e1.apply(rs.normalize.apply(rs.glue.apply_inverse(X)))
            return compare(name, section, cfg, X, m.apply(X), rhs)

        return _guard(name, section, cfg, run)

    recs.append(_standard_chain_record(t, cfg, section))
    for i, m in enumerate(atlas.transitions[:-1], start=1):
        recs.append(composed(steps[i - 1], m, f"g_{i} = {m}"))

    for label, lhs_tags, rhs_tag in (("IotaX o GlueF = IotaXPrime", ("GlueF", "IotaX"), "IotaXPrime"),
                                     ("IotaX o EmbedE1 = EmbedE", ("EmbedE1", "IotaX"), "EmbedE")):
        name = f"composition[{label}]"

        def run(lhs_tags=lhs_tags, rhs_tag=rhs_tag, name=name):
            first, second = (standard_map(tag, t.r, t.a) for tag in lhs_tags)
            s = Sampler(cfg, name)
            X = s.domain(first, cfg.samples_per_check)
            return compare(name, section, cfg, X, second.apply(first.apply(X)),
                           standard_map(rhs_tag, t.r, t.a).apply(X))

        recs.append(_guard(name, section, cfg, run))
    return recs


def _standard_chain_record(t: FiberType, cfg: CheckConfig, section: str) -> CheckRecord:
    """ChainG(b_1) against the literal composition, on the natural charts of ``t``."""
    name = "composition[ChainG(b_1) == EmbedE1 o NormalizeB(b_1) o GlueF^-1]"

    def run():
        m = standard_map("ChainG", t.r, t.a)
        glue = standard_map("GlueF", t.r, t.a)
        norm = standard_map("NormalizeB", t.r, t.a)
        e1 = TransitionMap("EmbedE1", (), norm.dst, m.dst)
        s = Sampler(cfg, name)
        X = s.domain(m, cfg.samples_per_check)
        return compare(name, section, cfg, X, m.apply(X), e1.apply(norm.apply(glue.apply_inverse(X))))

    return _guard(name, section, cfg, run)


def check_exceptional_chain(atlas: Atlas5, cfg: CheckConfig) -> List[CheckRecord]:
    section = "exceptional_chain"
    recs = []
    n = atlas.n
    chain = exceptional_chain(atlas)

    name = "chain_structure"
    expected = [S2xS1] * (n - 1) + [S3]
    path = [(i, j) for i, j, _ in chain.adjacency] == [(j, j + 1) for j in range(1, n)]
    ok = len(chain.components) == n and chain.types == expected and path
    recs.append(CheckRecord(name, section, 1, 0.0 if ok else float("inf"), cfg.tol, None,
                            f"{n} components {chain.types}, adjacency path {path}"))

    for j, m in enumerate(atlas.transitions[:-1], start=1):
        name = f"restriction[g_{j}: R_{j - 1} -> R_{j}^perp]"

        def run(m=m, j=j, name=name):
            s = Sampler(cfg, name)
            N = cfg.samples_per_check
            lam, mu = s.angles(N), s.complex(N)
            X = np.stack([np.zeros(N, complex), lam, mu], axis=-1)
            Y = m.apply(X)
            expect = np.stack([mu ** -1, lam, np.zeros(N, complex)], axis=-1)
            err = scaled_error(Y, expect)
            err = np.where(R_perp(m.dst.id).mask(Y), err, np.inf)
            return _record(name, section, cfg, err,
                           lambda i: {"point": _coords(X[i]), "image": _coords(Y[i])},
                           "(0, l, m) -> (m^-1, l, 0)")

        recs.append(_guard(name, section, cfg, run))

    g = atlas.transitions[-1]
    name = f"restriction[g: R'_{n - 1} -> R_{n - 1}]"

    def run_final():
        s = Sampler(cfg, name)
        N = cfg.samples_per_check
        X = np.stack([np.zeros(N, complex), s.complex(N), s.angles(N)], axis=-1)
        Y = g.apply(X)
        ok = R(g.dst.id).mask(Y) & R_prime(g.src.id).mask(X)
        err = np.where(ok, 0.0, np.inf)
        return _record(name, section, cfg, err,
                       lambda i: {"point": _coords(X[i]), "image": _coords(Y[i])})

    recs.append(_guard(name, section, cfg, run_final))

    for chart in atlas.charts:
        name = f"invariant_loci[{chart.id}]"

        def run(chart=chart, name=name):
            s = Sampler(cfg, name)
            N = cfg.samples_per_check
            T = s.group(N)
            if chart.id.startswith("X'"):
                loci = [R_prime(chart.id)]
            else:
                loci = [R(chart.id), R_perp(chart.id), adjacency_circle(chart.id)]
            err = np.zeros(N)
            for loc in loci:
                cols = [np.zeros(N, complex) if p == "0" else (s.angles(N) if p == "S1" else s.complex(N))
                        for p in loc.pattern]
                X = np.stack(cols, axis=-1)
                Y = act_array(chart.weights, T, X)
                err = np.maximum(err, np.where(loc.mask(Y), 0.0, np.inf))
            return _record(name, section, cfg, err, detail="slot-zero patterns preserved by the action")

        recs.append(_guard(name, section, cfg, run))
    return recs


def check_quotient_compatibility(t: FiberLike, cfg: CheckConfig, atlas5: Atlas5 = None,
                                 atlas4: Atlas4 = None) -> List[CheckRecord]:
    t = hjarith.as_fiber(t)
    atlas5 = atlas5 or build_atlas5(t)
    atlas4 = atlas4 or build_atlas4(t)
    section = "quotient_compatibility"
    r, a = t.r, t.a
    za = za_parameters(r, a)
    N = cfg.samples_per_check
    recs = []

    def add(name, fn):
        recs.append(_guard(name, section, cfg, fn))

    def sub_a():
        name = "(a) DescendedG on |q1'|=1 == TopModelF3"
        s = Sampler(cfg, name)
        X = np.stack([s.disk(N), s.angles(N), s.angles(N)], axis=-1)
        lhs = drop_slot(standard_map("DescendedG", r, a).apply(X), 1)
        rhs = standard_map("TopModelF3", r, a).apply(X[:, :2])
        return compare(name, section, cfg, X, lhs, rhs)

    def sub_b():
        name = "(b) QuotEmbed1 on |v1|=1 == TopModelH1"
        s = Sampler(cfg, name)
        V = np.stack([s.angles(N), s.disk(N)], axis=-1)
        return compare(name, section, cfg, V, standard_map("QuotEmbed1", r, a).apply(V),
                       standard_map("TopModelH1", r, a).apply(V))

    def sub_c():
        name = "(c) QuotEmbed2 on |v2|=1 == TopModelH2 mod Z_a"
        s = Sampler(cfg, name)
        V = np.stack([s.disk(N), s.angles(N)], axis=-1)
        return compare(name, section, cfg, V, standard_map("QuotEmbed2", r, a).apply(V),
                       standard_map("TopModelH2", r, a).apply(V), za=za)

    add("(a) DescendedG on |q1'|=1 == TopModelF3", sub_a)
    add("(b) QuotEmbed1 on |v1|=1 == TopModelH1", sub_b)
    add("(c) QuotEmbed2 on |v2|=1 == TopModelH2 mod Z_a", sub_c)

    # (d) commuting squares: orbit-space coordinates of 5-d maps against 4-d maps
    ex = atlas5.transitions
    for i, g in enumerate(ex[:-1], start=1):
        name = f"(d) quotient o g_{i} == f_{i - 1} o quotient on |q2|=1"

        def run(g=g, i=i, name=name):
            s = Sampler(cfg, name)
            X = np.stack([s.complex(N), s.angles(N), s.angles(N)], axis=-1)
            lhs = quotient_array(g.dst, g.apply(X))
            rhs = atlas4.transitions[i - 1].apply(quotient_array(g.src, X))
            return compare(name, section, cfg, X, lhs, rhs)

        add(name, run)

    g = ex[-1]
    n = atlas5.n
    name = f"(d) f_{n - 1} o quotient o g == swap o quotient on |q1'|=1"

    def run_final():
        s = Sampler(cfg, name)
        X = np.stack([s.complex(N), s.angles(N), s.angles(N)], axis=-1)
        lhs = atlas4.transitions[n - 1].apply(quotient_array(g.dst, g.apply(X)))
        q = quotient_array(g.src, X)
        return compare(name, section, cfg, X, lhs, q[:, ::-1])

    add(name, run_final)

    name = "(d) quotient o e o model == ReidEmbed0 on |v1|=1"

    def run_embed_torus():
        s = Sampler(cfg, name)
        U = np.stack([s.angles(N), s.angles(N), s.complex(N)], axis=-1)
        e = atlas5.embedding
        lhs = quotient_array(e.dst, e.apply(standard_map("ModelU", r, a).apply(U)))
        return compare(name, section, cfg, U, lhs, atlas4.embeddings[0].apply(U[:, 1:]))

    add(name, run_embed_torus)

    name = "(d) quotient o e o model == QuotEmbed1"

    def run_embed():
        s = Sampler(cfg, name)
        U = np.stack([s.angles(N), s.complex(N), s.complex(N)], axis=-1)
        e = atlas5.embedding
        lhs = quotient_array(e.dst, e.apply(standard_map("ModelU", r, a).apply(U)))
        return compare(name, section, cfg, U, lhs, standard_map("QuotEmbed1", r, a).apply(U[:, 1:]))

    add(name, run_embed)

    lifts = (
        ("(d) PiTilde o LiftEmbed1 == EmbedE1 o ModelU", "LiftEmbed1", "PiTilde", "EmbedE1"),
        ("(d) PiPrimeTilde o LiftEmbed2 == EmbedE2 o ModelU", "LiftEmbed2", "PiPrimeTilde", "EmbedE2"),
    )
    for name, lift, proj, emb in lifts:
        def run(name=name, lift=lift, proj=proj, emb=emb):
            s = Sampler(cfg, name)
            lm = standard_map(lift, r, a)
            U = s.domain(lm, N)
            lhs = standard_map(proj, r, a).apply(lm.apply(U))
            rhs = standard_map(emb, r, a).apply(standard_map("ModelU", r, a).apply(U))
            return compare(name, section, cfg, U, lhs, rhs)

        add(name, run)

    name = "(d) drop o LiftEmbed2 == QuotEmbed2 mod Z_a"

    def run_lift2():
        s = Sampler(cfg, name)
        lm = standard_map("LiftEmbed2", r, a)
        U = s.domain(lm, N)
        lhs = drop_slot(lm.apply(U), 2)
        return compare(name, section, cfg, U, lhs, standard_map("QuotEmbed2", r, a).apply(U[:, 1:]), za=za)

    add(name, run_lift2)

    name = "(d) PiTilde o DescendedG == GlueF o PiPrimeTilde"

    def run_desc():
        s = Sampler(cfg, name)
        d = standard_map("DescendedG", r, a)
        X = s.domain(d, N)
        lhs = standard_map("PiTilde", r, a).apply(d.apply(X))
        rhs = standard_map("GlueF", r, a).apply(standard_map("PiPrimeTilde", r, a).apply(X))
        return compare(name, section, cfg, X, lhs, rhs)

    add(name, run_desc)

    name = "(d) drop o DescendedG == DescendedBarG o drop"

    def run_desc_bar():
        s = Sampler(cfg, name)
        d = standard_map("DescendedG", r, a)
        X = s.domain(d, N)
        lhs = drop_slot(d.apply(X), 1)
        rhs = standard_map("DescendedBarG", r, a).apply(X[:, :2])
        return compare(name, section, cfg, X, lhs, rhs)

    add(name, run_desc_bar)
    return recs


def check_reid_atlas(atlas4: Atlas4, cfg: CheckConfig) -> List[CheckRecord]:
    section = "reid"
    t = atlas4.fiber
    n = atlas4.n
    N = cfg.samples_per_check
    recs = []

    ok = len(atlas4.charts) == n + 1 and len(atlas4.transitions) == n and len(atlas4.gluing_loci) == n
    recs.append(CheckRecord("chart_count", section, 1, 0.0 if ok else float("inf"), cfg.tol, None,
                            f"{len(atlas4.charts)} charts, {len(atlas4.transitions)} gluings, n = {n}"))

    def add(name, fn):
        recs.append(_guard(name, section, cfg, fn))

    for i, f in enumerate(atlas4.transitions):
        name = f"overlap[f_{i} o embed_{i} == embed_{i + 1}]"

        def run(i=i, f=f, name=name):
            s = Sampler(cfg, name)
            V = np.stack([s.complex(N), s.complex(N)], axis=-1)
            lhs = f.apply(atlas4.embeddings[i].apply(V))
            return compare(name, section, cfg, V, lhs, atlas4.embeddings[i + 1].apply(V))

        add(name, run)

        name = f"round_trip[{f}]"

        def run_rt(f=f, name=name):
            s = Sampler(cfg, name)
            X = s.domain(f, N)
            return compare(name, section, cfg, X, f.apply_inverse(f.apply(X)), X)

        add(name, run_rt)

    for j in range(2, n + 1):
        name = f"composition[f_1..f_{j - 1} after embed_1 == embed_{j}]"

        def run(j=j, name=name):
            s = Sampler(cfg, name)
            V = np.stack([s.complex(N), s.complex(N)], axis=-1)
            return compare(name, section, cfg, V, composed_embedding(atlas4, j, V),
                           atlas4.embeddings[j].apply(V))

        add(name, run)

    if t.a == 1:
        return recs
    red = two_chart_reduction(t)

    name = "two_chart[f o embed2 == embed1]"

    def run_two():
        s = Sampler(cfg, name)
        V = np.stack([s.complex(N), s.complex(N)], axis=-1)
        return compare(name, section, cfg, V, red.f.apply(red.embed2.apply(V)), red.embed1.apply(V))

    add(name, run_two)

    name = "two_chart[f is Z_a-invariant]"

    def run_inv():
        s = Sampler(cfg, name)
        Z = np.stack([s.complex(N), s.complex(N)], axis=-1)
        images = red.f.apply(za_translates(red.a, red.a1, Z))
        return compare(name, section, cfg, Z, images, np.broadcast_to(images[0], images.shape))

    add(name, run_inv)

    name = "two_chart[Y'' identification: quotient o embed2 == embed_1]"

    def run_ident():
        s = Sampler(cfg, name)
        V = np.stack([s.complex(N), s.complex(N)], axis=-1)
        return compare(name, section, cfg, V, red.quotient.apply(red.embed2.apply(V)),
                       atlas4.embeddings[1].apply(V))

    add(name, run_ident)

    name = "two_chart[f_0 o f == quotient]"

    def run_f0():
        s = Sampler(cfg, name)
        Z = np.stack([s.complex(N), s.complex(N)], axis=-1)
        return compare(name, section, cfg, Z, atlas4.transitions[0].apply(red.f.apply(Z)),
                       red.quotient.apply(Z))

    add(name, run_f0)
    return recs


def check_hjarith(t: FiberType, cfg: CheckConfig) -> List[CheckRecord]:
    e = hjarith.hj_expand(t)
    rems = e.remainders
    ok = (
        hjarith.hj_evaluate(e.b) == Fraction(t.r, t.a)
        and all(b >= 2 for b in e.b)
        and all(x > y for x, y in zip(rems[1:], rems[2:]))
        and rems[-1] == 0
    )
    return [CheckRecord("hj_round_trip", "hjarith", 1, 0.0 if ok else float("inf"), cfg.tol, None,
                        f"{e}")]


def run_suite(t: FiberLike, cfg: CheckConfig = None, atlas5: Atlas5 = None,
              atlas4: Atlas4 = None, za_a1: int = None) -> VerificationReport:
    """Run every check for fiber type ``t``.

    Prebuilt (possibly modified) atlases may be passed in; ``za_a1`` swaps
    the Z_a representation exponent used by the collapse check.
    """
    cfg = cfg or CheckConfig()
    t = hjarith.as_fiber(t)
    if t.is_regular:
        return VerificationReport(t, None, cfg, [], "regular fiber, nothing to verify")
    atlas5 = atlas5 or build_atlas5(t)
    atlas4 = atlas4 or build_atlas4(t)
    report = VerificationReport(t, atlas5.expansion, cfg)
    report.records += check_hjarith(t, cfg)
    report.records += check_equivariance_suite(atlas5, cfg)
    report.records += check_za_collapse(t, cfg, za_a1)
    report.records += check_compositions(atlas5, cfg)
    report.records += check_exceptional_chain(atlas5, cfg)
    report.records += check_quotient_compatibility(t, cfg, atlas5, atlas4)
    report.records += check_reid_atlas(atlas4, cfg)
    return report


# ---------------------------------------------------------------- mutations

@dataclass(frozen=True)
class Mutation:
    """One integer perturbation of an atlas parameter."""

    kind: str  # "chain_b", "reid_b" or "weight"
    target: str
    slot: int
    delta: int

    def __str__(self) -> str:
        return f"{self.kind}[{self.target}:{self.slot}]{self.delta:+d}"


def mutations(t: FiberLike) -> List[Mutation]:
    """Every single +-1 perturbation of a b_i or a chart weight."""
    t = hjarith.as_fiber(t)
    a5 = build_atlas5(t)
    out = []
    for d in (-1, 1):
        for i in range(1, a5.n):
            out.append(Mutation("chain_b", f"g_{i}", i - 1, d))
        for i in range(a5.n):
            out.append(Mutation("reid_b", f"f_{i}", i, d))
        for c in (a5.model,) + a5.charts:
            for k in range(c.dim):
                out.append(Mutation("weight", c.id, k, d))
    return out


def apply_mutation(mu: Mutation, atlas5: Atlas5, atlas4: Atlas4) -> Tuple[Atlas5, Atlas4]:
    if mu.kind == "chain_b":
        m = atlas5.transitions[mu.slot]
        return atlas5.replace_transition(mu.slot, m.with_param(b=m.p["b"] + mu.delta)), atlas4
    if mu.kind == "reid_b":
        f = atlas4.transitions[mu.slot]
        return atlas5, atlas4.replace_transition(mu.slot, f.with_param(b=f.p["b"] + mu.delta))
    if mu.kind == "weight":
        c = atlas5.chart(mu.target)
        w = list(c.weights)
        w[mu.slot] += mu.delta
        return atlas5.replace_chart(c.with_weights(w)), atlas4
    raise ValueError(f"unknown mutation kind {mu.kind!r}")


def run_mutated(t: FiberLike, mu: Mutation, cfg: CheckConfig = None) -> VerificationReport:
    t = hjarith.as_fiber(t)
    a5, a4 = apply_mutation(mu, build_atlas5(t), build_atlas4(t))
    return run_suite(t, cfg, a5, a4)
