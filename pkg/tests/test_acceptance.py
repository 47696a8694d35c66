"""End-to-end acceptance criteria, one PASS/FAIL line each.

Lines are printed as the tests run and repeated in the terminal summary.
"""
import subprocess
import sys
import time
from fractions import Fraction
from math import gcd

import numpy as np
import pytest

from conftest import ACCEPTANCE, GRID
from s1resolve.hjarith import hj_evaluate, hj_expand
from s1resolve.resolve4d import build_atlas4
from s1resolve.resolve5d import S3, S2xS1, build_atlas5, exceptional_chain
from s1resolve.transitions import standard_map
from s1resolve.verifykit import (
    CheckConfig,
    Sampler,
    check_equivariance_suite,
    check_za_collapse,
    mutations,
    run_mutated,
    run_suite,
)

CFG = CheckConfig()  # 1000 points, 100 group elements, tol 1e-9


def verdict(n, title, ok, detail=""):
    line = f"criterion {n} {title}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
    print(line)
    ACCEPTANCE.append(line)
    assert ok, line


def worst(records):
    return max((r.max_error for r in records), default=0.0)


@pytest.fixture(scope="module")
def reports():
    return {t: run_suite(t, CFG) for t in GRID}


def test_1_hj_round_trip():
    start = time.perf_counter()
    count, bad = 0, []
    for r in range(2, 501):
        for a in range(1, r):
            if gcd(r, a) != 1:
                continue
            count += 1
            e = hj_expand((r, a))
            rem = e.remainders
            ok = (hj_evaluate(e.b) == Fraction(r, a) and min(e.b) >= 2
                  and all(x > y for x, y in zip(rem, rem[1:])) and rem[-1] == 0)
            if not ok:
                bad.append((r, a))
    elapsed = time.perf_counter() - start
    verdict(1, "HJ round trip", not bad and elapsed < 5,
            f"{count} pairs, {len(bad)} bad, {elapsed:.2f}s")


def test_2_equivariance():
    start = time.perf_counter()
    records = []
    for t in GRID:
        records += check_equivariance_suite(build_atlas5(t), CFG)
    elapsed = time.perf_counter() - start
    ok = (all(r.passed for r in records) and elapsed < 30
          and all(r.samples >= 1000 * 100 for r in records))
    verdict(2, "S1-equivariance", ok,
            f"{len(records)} maps, max error {worst(records):.1e}, {elapsed:.1f}s")


def test_3_za_collapse():
    records = []
    for t in GRID:
        if t[1] >= 2:
            records += check_za_collapse(t, CFG)
    verdict(3, "Z_a collapse", all(r.passed for r in records),
            f"{len(records)} pairs, max error {worst(records):.1e}")


def test_4_composition(reports):
    records = [r for rep in reports.values() for r in rep.section("composition")
               if r.name.startswith("composition[ChainG(b_1)")]
    ok = len(records) == len(GRID) and all(r.passed and r.samples >= 1000 for r in records)
    verdict(4, "composition identity", ok, f"max error {worst(records):.1e}")


def test_5_quotient_compatibility(reports):
    records = [r for rep in reports.values() for r in rep.section("quotient_compatibility")]
    subs = {r.name[:3] for r in records}
    ok = all(r.passed for r in records) and subs == {"(a)", "(b)", "(c)", "(d)"}
    # on |v1| = 1 the quotient embedding is the literal monomial map
    exact = 0.0
    for r, a in GRID:
        m = standard_map("QuotEmbed1", r, a)
        s = Sampler(CFG, f"acceptance 5 {r} {a}")
        v1, v2 = s.group(1000), s.complex(1000)
        got = m.apply(np.stack([v1, v2], -1))
        want = np.stack([v1 ** r, v2 * v1 ** -a], -1)
        exact = max(exact, float(np.max(np.abs(got - want) / np.maximum(1, np.abs(want)))))
    ok = ok and exact < 1e-13
    verdict(5, "quotient compatibility", ok,
            f"{len(records)} checks, max error {worst(records):.1e}, literal embedding {exact:.1e}")


def test_6_exceptional_chain(reports):
    ok, records = True, []
    for t in GRID:
        n = hj_expand(t).n
        chain = exceptional_chain(build_atlas5(t))
        ok &= chain.types == [S2xS1] * (n - 1) + [S3]
        ok &= [(i, j) for i, j, _ in chain.adjacency] == [(j, j + 1) for j in range(1, n)]
        records += reports[t].section("exceptional_chain")
    restrictions = [r for r in records if r.name.startswith("restriction[g_")]
    ok = ok and all(r.passed for r in records) and len(restrictions) == sum(hj_expand(t).n - 1 for t in GRID)
    verdict(6, "exceptional chain", ok, f"{len(records)} checks, max error {worst(records):.1e}")


def test_7_reid_atlas(reports):
    records = [r for rep in reports.values() for r in rep.section("reid")]
    counts = all(len(build_atlas4(t).charts) == hj_expand(t).n + 1 for t in GRID)
    verdict(7, "Reid atlas consistency", counts and all(r.passed for r in records),
            f"{len(records)} checks, max error {worst(records):.1e}")


def test_8_mutation_sensitivity():
    missed = [str(mu) for mu in mutations((7, 3)) if run_mutated((7, 3), mu, CFG).passed]
    total = len(mutations((7, 3)))
    verdict(8, "mutation sensitivity", not missed, f"{total - len(missed)}/{total} caught {missed or ''}".strip())


def test_9_determinism(tmp_path):
    cmd = [sys.executable, "-m", "s1resolve", "verify", "--r", "7", "--a", "3", "--seed", "42"]
    runs = [subprocess.run(cmd, capture_output=True, check=False) for _ in range(2)]
    ok = runs[0].returncode == runs[1].returncode == 0 and runs[0].stdout == runs[1].stdout
    verdict(9, "determinism", ok, f"{len(runs[0].stdout)} bytes")


def test_grid_suites_pass(reports):
    # everything else in the suite (hjarith, equivariance of auxiliary maps) for the grid
    failures = {t: [r.name for r in rep.failures()] for t, rep in reports.items() if not rep.passed}
    assert not failures
