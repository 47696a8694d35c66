import json

import numpy as np
import pytest

from conftest import GRID, random_chart_points, random_complex, random_unit
from s1resolve.chartcore import (
    Chart,
    ChartPoint,
    DomainError,
    InvalidGroupElementError,
    NoGaugeError,
    NotInvertibleError,
    OutsideImageError,
    SlotKind,
    act,
    act_array,
    check_point,
    quotient_array,
    quotient_point,
    scaled_error,
    za_orbit_equal,
)
from s1resolve.transitions import (
    REGISTRY,
    TransitionMap,
    chart_x,
    eval_transition,
    invert_transition,
    standard_map,
)

EPS = np.exp(2j * np.pi / 3)
ALL_TAGS = sorted(REGISTRY)


def close(p, q, tol=1e-12):
    return np.allclose(np.array(p.coords), np.array(q), atol=tol, rtol=0)


# ---------------------------------------------------------------- act

@pytest.mark.parametrize("w,t,p,expected", [
    ((7, -1, -3), 1, (2, 1j, 5), (2, 1j, 5)),
    ((7, -1, -3), -1, (1, 1, 1), (-1, -1, -1)),
    ((2, -1, -1), 1j, (1, 1, 1), (-1, -1j, -1j)),
])
def test_act_examples(w, t, p, expected):
    assert close(act(w, t, ChartPoint("U", p)), expected)


def test_act_rejects_non_unit():
    with pytest.raises(InvalidGroupElementError):
        act((1, -1), 1.5, ChartPoint("Y", (1, 1)))


def test_act_is_a_group_action(rng):
    w = (7, -1, -3)
    Z = random_complex(rng, 300).reshape(100, 3)
    s, t = random_unit(rng, 100), random_unit(rng, 100)
    lhs = act_array(w, s * t, Z)
    rhs = act_array(w, s, act_array(w, t, Z))
    assert scaled_error(lhs, rhs).max() < 1e-13


# ---------------------------------------------------------------- eval / invert

def test_glue_f_example():
    m = standard_map("GlueF", 7, 3)
    q = eval_transition(m, ChartPoint("X'", (2, 0.5, 1j)))
    assert q.chart == "X"
    assert close(q, (1, 1, 2j))
    back = invert_transition(m, ChartPoint("X", (1, 1, 2j)))
    assert close(back, (2, 0.5, 1j))


def test_chain_g_example():
    m = standard_map("ChainG", 7, 3, b=3)
    assert close(eval_transition(m, ChartPoint("X0", (1, 1, 2))), (0.5, 1, 4))


def test_pi_tilde_examples():
    m = standard_map("PiTilde", 7, 3)
    assert close(eval_transition(m, ChartPoint("~X", (1, 1, 1))), (1, 1, 1))
    p = ChartPoint("~X", (2, 1j, 3))
    assert close(invert_transition(m, eval_transition(m, p)), p.coords)


def test_not_invertible():
    m = standard_map("PiPrimeTilde", 7, 3)
    with pytest.raises(NotInvertibleError):
        invert_transition(m, ChartPoint("X'", (1, 1, 1)))


def test_embedding_inverse_only_on_image():
    m = standard_map("EmbedE", 7, 3)
    with pytest.raises(OutsideImageError):
        invert_transition(m, ChartPoint("CxS3", (0, 0.6, 0.8)))
    p = ChartPoint("U_S", (1j, 0.3, 2 - 1j))
    assert close(invert_transition(m, eval_transition(m, p)), p.coords)


def test_domain_errors():
    with pytest.raises(DomainError):
        eval_transition(standard_map("ChainG", 7, 3), ChartPoint("X0", (1, 1, 0)))
    with pytest.raises(DomainError):
        eval_transition(standard_map("GlueF", 7, 3), ChartPoint("X'", (1, 1e-12, 1)))
    with pytest.raises(DomainError):  # circle slot off the circle
        eval_transition(standard_map("GlueF", 7, 3), ChartPoint("X'", (1, 1, 2)))
    with pytest.raises(DomainError):  # wrong chart
        eval_transition(standard_map("GlueF", 7, 3), ChartPoint("X", (1, 1, 1)))
    with pytest.raises(DomainError):  # off the boundary torus
        eval_transition(standard_map("TopModelH1", 7, 3), ChartPoint("dU:S1xD2", (0.5, 0.3)))


def test_circle_slots_renormalized(rng):
    m = standard_map("ChainG", 7, 3)
    Z = random_chart_points(rng, m.src, 50)
    out = m.apply(Z)
    assert np.abs(np.abs(out[:, 1]) - 1).max() < 4e-16


# ---------------------------------------------------------------- properties

def domain_points(m, rng, n):
    Z = random_chart_points(rng, m.src, n)
    ok = m.domain_mask(Z)
    return Z[ok]


@pytest.mark.parametrize("tag", [t for t in ALL_TAGS if REGISTRY[t].inverse is not None])
@pytest.mark.parametrize("r,a", [(7, 3), (12, 5), (2, 1)])
def test_round_trip(tag, r, a, rng):
    m = standard_map(tag, r, a)
    X = domain_points(m, rng, 1000)
    assert len(X) > 900
    assert scaled_error(m.apply_inverse(m.apply(X)), X).max() < 1e-9
    Y = m.apply(X)
    assert scaled_error(m.apply(m.apply_inverse(Y)), Y).max() < 1e-9


WEIGHTED = [t for t in ALL_TAGS if t not in ("ReidEmbedJ",)
            if standard_map(t, 7, 3).src.weights is not None]


@pytest.mark.parametrize("tag", WEIGHTED)
@pytest.mark.parametrize("r,a", [(7, 3), (13, 8), (2, 1)])
def test_equivariance(tag, r, a, rng):
    m = standard_map(tag, r, a)
    X = domain_points(m, rng, 1000)
    t = random_unit(rng, len(X))
    lhs = m.apply(act_array(m.src.weights, t, X))
    rhs = act_array(m.dst.weights, t, m.apply(X))
    assert scaled_error(lhs, rhs).max() < 1e-9


def test_weighted_tags_cover_the_5d_maps():
    assert {"GlueF", "ChainG", "NormalizeB", "EmbedE", "EmbedE1", "EmbedE2", "IotaX", "IotaXPrime",
            "PiTilde", "PiPrimeTilde", "DescendedG"} <= set(WEIGHTED)


@pytest.mark.parametrize("r,a", [(7, 3), (11, 7), (13, 8), (5, 2)])
def test_pi_prime_collapses_za_orbits(r, a, rng):
    b1 = -(-r // a)
    a1 = a * b1 - r
    m = standard_map("PiPrimeTilde", r, a)
    X = random_chart_points(rng, m.src, 1000)
    base = m.apply(X)
    for k in range(a):
        eps = np.exp(2j * np.pi * k / a)
        g = X * np.array([eps ** a1, eps, eps])
        assert scaled_error(m.apply(g), base).max() < 1e-9


@pytest.mark.parametrize("r,a", GRID)
def test_chain_g_is_the_composition(r, a, rng):
    glue, norm = standard_map("GlueF", r, a), standard_map("NormalizeB", r, a)
    chain = standard_map("ChainG", r, a)
    e1 = TransitionMap("EmbedE1", (), norm.dst, chain.dst)
    X = domain_points(chain, rng, 1000)
    assert scaled_error(chain.apply(X), e1.apply(norm.apply(glue.apply_inverse(X)))).max() < 1e-9


@pytest.mark.parametrize("r,a", GRID)
def test_descended_g_is_quotient_conjugated_glue(r, a, rng):
    d = standard_map("DescendedG", r, a)
    glue, pp = standard_map("GlueF", r, a), standard_map("PiPrimeTilde", r, a)
    X = domain_points(d, rng, 1000)
    lhs = quotient_array(glue.dst, glue.apply(pp.apply(X)))
    rhs = np.delete(d.apply(X), 1, axis=-1)
    assert scaled_error(lhs, rhs).max() < 1e-9


# ---------------------------------------------------------------- quotients

def test_quotient_point_examples():
    c = chart_x("X", (7, -1, -3))
    assert close(quotient_point(c, ChartPoint("X", (2, 1, 5))), (2, 5))
    assert close(quotient_point(c, ChartPoint("X", (1, 1j, 1))), (-1j, 1j))


def test_quotient_point_invariant(rng):
    c = chart_x("X", (7, -1, -3))
    X = random_chart_points(rng, c, 100)
    t = random_unit(rng, 100)
    err = scaled_error(quotient_array(c, act_array(c.weights, t, X)), quotient_array(c, X))
    assert err.max() < 1e-9


def test_quotient_needs_gauge_slot():
    with pytest.raises(NoGaugeError):
        quotient_array(standard_map("EmbedE1", 7, 3).src, np.ones((1, 3)))  # U_S: weight -1 slot is C
    with pytest.raises(NoGaugeError):
        quotient_array(Chart("Y", (SlotKind.COMPLEX, SlotKind.COMPLEX)), np.ones((1, 2)))


def test_za_orbit_equal_examples():
    assert za_orbit_equal(1, 0, (1, 2), (1, 2))
    assert za_orbit_equal(3, 2, (1, 1), (EPS ** 2, EPS))
    assert not za_orbit_equal(3, 2, (1, 1), (1, EPS), tol=1e-6)


def brute_orbit_equal(a, a1, x, y, tol):
    e = np.exp(2j * np.pi / a)
    return any(max(abs(x[0] - e ** (a1 * k) * y[0]), abs(x[1] - e ** k * y[1])) < tol for k in range(a))


def test_za_orbit_equal_matches_brute_force(rng):
    for _ in range(200):
        a = int(rng.integers(2, 9))
        a1 = int(rng.integers(1, a))
        x = random_complex(rng, 2, 0.2, 1.0)
        k = int(rng.integers(0, a))
        e = np.exp(2j * np.pi / a)
        y = np.array([x[0] * e ** (-a1 * k), x[1] * e ** (-k)])
        if rng.random() < 0.5:
            y = y + 1e-3
        assert za_orbit_equal(a, a1, x, y, 1e-6) == brute_orbit_equal(a, a1, x, y, 1e-6)


# ---------------------------------------------------------------- json

def test_json_round_trip():
    p = ChartPoint("X", (1 + 2j, -1j, 0.5))
    assert ChartPoint.from_json(json.loads(json.dumps(p.to_json()))) == p
    m = standard_map("ChainG", 7, 3, index=1)
    d = json.loads(json.dumps(m.to_json()))
    assert d == {"tag": "ChainG", "params": {"b": 3, "index": 1}, "src": "X0", "dst": "X1"}
    assert TransitionMap.from_json(d, {"X0": m.src, "X1": m.dst}) == m
    c = standard_map("EmbedE", 7, 3).dst
    assert Chart.from_json(json.loads(json.dumps(c.to_json()))) == c


def test_check_point_validates_slots():
    c = chart_x("X", (7, -1, -3))
    check_point(c, ChartPoint("X", (0, 1j, 0)))
    with pytest.raises(DomainError):
        check_point(c, ChartPoint("X", (0, 0.5, 0)))
