"""Acceptance criteria, one test each.  Every test records a PASS/FAIL line
(shown in the pytest terminal summary) before asserting."""

import time

import numpy as np
import pytest

from slpinterp.cli import bench_rows
from slpinterp.cyclic import CyclicPoly, monomial
from slpinterp.engine import crt_exponent, meta_interpolate, sparse_interpolate
from slpinterp.ff import BaseField, canonical_encode, inv, make_tower, random_elem, random_nonzero
from slpinterp.linalg import MatModP, invert, solve_block
from slpinterp.oracle import (
    ExpansionCap,
    apply_substitution,
    brute_force_expand,
    deceptive_pair_rate,
    exponent_collision_rate,
    random_slp,
    random_sparse,
    singularity_rate,
    term_failure_rate,
)
from slpinterp.primes import compute_params, sieve_interval
from slpinterp.slp import probe_image, slp_from_sparse

WORKED_IMAGES = {
    "F11": ((1, 1), (4, 1), 5, [2, 2, 4, 0, 0]),
    "F12": ((1, 1), (2, 0), 5, [0, 4, 2, 2, 0]),
    "F21": ((1, 1), (2, 4), 7, [0, 1, 4, 0, 0, 0, 3]),
    "F22": ((1, 1), (1, 6), 7, [2, 2, 0, 0, 4, 0, 0]),
    "F111": ((6, 8), (4, 1), 5, [10, 8, 6, 0, 0]),
    "F121": ((6, 8), (2, 0), 5, [0, 6, 10, 8, 0]),
    "F211": ((6, 8), (2, 4), 7, [0, 1, 6, 0, 0, 0, 4]),
    "F221": ((6, 8), (1, 6), 7, [10, 8, 0, 0, 6, 0, 0]),
}


def record(report, number, ok, detail):
    report.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
    assert ok, detail


def random_instance(rng, q=101):
    n, D, T = int(rng.integers(1, 5)), int(rng.integers(16, 1025)), int(rng.integers(1, 9))
    return random_sparse(n, D, T, q, rng), n, D, T


def test_c1_worked_images(acceptance_report, worked_slp, f13):
    start = time.perf_counter()
    wrong = []
    for name, (a, v, p, expected) in WORKED_IMAGES.items():
        got = probe_image(worked_slp, [f13.elem(x) for x in a], v, p, f13)
        if got != CyclicPoly.from_list(f13, expected):
            wrong.append(name)
    elapsed = time.perf_counter() - start
    record(acceptance_report, 1, not wrong and elapsed < 1.0,
           f"8 worked images bit-exact ({8 - len(wrong)}/8 match, {elapsed:.3f}s < 1s)")


def test_c2_linear_algebra(acceptance_report):
    e1 = invert(MatModP.of([[4, 1], [2, 0]], 5)) @ (2, 1)
    e2 = solve_block(invert(MatModP.of([[2, 4], [1, 6]], 7)), [(2, 4)])[0]
    e = crt_exponent([(5, (3, 0)), (7, (3, 6))], 2, 21)
    record(acceptance_report, 2, (e1, e2, e) == ((3, 0), (3, 6), (3, 20)),
           f"V1^-1(2,1)={e1}, V2^-1(2,4)={e2}, CRT={e} (want (3,0), (3,6), (3,20))")


@pytest.mark.slow
def test_c3_single_run_success_rate(acceptance_report):
    rng = np.random.default_rng(3)
    start = time.perf_counter()
    ok = 0
    for _ in range(200):
        f, n, D, T = random_instance(rng)
        ok += sparse_interpolate(slp_from_sparse(f), D, T, 101, rng) == f
    record(acceptance_report, 3, ok >= 140,
           f"single-run exact recovery {ok}/200 >= 140 ({time.perf_counter() - start:.1f}s)")


@pytest.mark.slow
def test_c4_meta_algorithm(acceptance_report):
    rng = np.random.default_rng(4)
    ok = 0
    for _ in range(100):
        f, n, D, T = random_instance(rng)
        res = meta_interpolate(slp_from_sparse(f), D, T, 101, 0.05, rng)
        ok += res.ok and res.polynomial == f
    record(acceptance_report, 4, ok >= 90, f"meta-algorithm at eps=0.05 correct {ok}/100 >= 90")


def test_c5_prime_supply(acceptance_report):
    short = []
    points = 0
    for n in range(1, 9):
        for k in range(4, 33):
            for T in range(1, 65):
                P = compute_params(n, 2**k, T, 101)
                points += 1
                if len(sieve_interval(P.lam)) < P.m:
                    short.append((n, k, T))
    record(acceptance_report, 5, not short,
           f"(lambda, 2 lambda] holds >= m primes on {points - len(short)}/{points} grid points")


@pytest.mark.slow
def test_c6_collision_rates(acceptance_report):
    rng = np.random.default_rng(6)
    reports = [
        exponent_collision_rate(rng, draws=1000),
        singularity_rate(rng, trials=10**4, p=23),
        term_failure_rate(rng, draws=1000),
        deceptive_pair_rate(rng, trials=1000),
    ]
    record(acceptance_report, 6, all(r.passed for r in reports), "; ".join(map(str, reports)))


@pytest.mark.slow
def test_c7_oracle_equivalence(acceptance_report):
    rng = np.random.default_rng(7)
    cap = ExpansionCap()
    checked = mismatches = 0
    for _ in range(100):
        n = int(rng.integers(1, 4))
        slp = random_slp(n, int(rng.integers(2, 14)), rng)
        tower = make_tower(101, 1, int(rng.integers(1, 3)), rng)
        f = brute_force_expand(slp, tower, cap)
        for _ in range(20):
            p = int(rng.choice(sieve_interval(21) + [2, 3, 5, 7]))
            a = [random_nonzero(tower, rng) for _ in range(n)]
            v = [int(x) for x in rng.integers(0, p, size=n)]
            checked += 1
            mismatches += probe_image(slp, a, v, p, tower) != apply_substitution(f, a, v, p, tower)
    record(acceptance_report, 7, mismatches == 0,
           f"probe_image == apply_substitution(brute_force_expand) on {checked - mismatches}/{checked} probes")


@pytest.mark.slow
def test_c8_property_suites(acceptance_report):
    rng = np.random.default_rng(8)
    failures = []
    towers = [make_tower(13, 1, 1), make_tower(13, 1, 2, rng), make_tower(2, 1, 4, rng), make_tower(3, 2, 2, rng)]
    for t in towers:
        one, zero = t.one(), t.zero()
        for _ in range(1000):
            a, b, c = (random_elem(t, rng) for _ in range(3))
            ok = (a + b == b + a and a * b == b * a and (a + b) + c == a + (b + c)
                  and (a * b) * c == a * (b * c) and a * (b + c) == a * b + a * c
                  and a + zero == a and a * one == a and a + (-a) == zero
                  and (a.is_zero() or a * inv(a) == one)
                  and (a.is_zero() or a ** (t.order - 1) == one))
            if not ok:
                failures.append(("field", t.to_text()))
                break
        codes = {canonical_encode(x) for x in t.elements()}
        if len(codes) != t.order:
            failures.append(("encode", t.to_text()))
        for p in (5, 7):
            unit = monomial(one, 0, p)
            for _ in range(1000):
                x, y, w = (CyclicPoly.from_list(t, [random_elem(t, rng) for _ in range(p)]) for _ in range(3))
                ok = (x + y == y + x and x * y == y * x and (x * y) * w == x * (y * w)
                      and x * (y + w) == x * y + x * w and x * unit == x and x - x == CyclicPoly(t, p)
                      and (x * y).eval_at_one() == x.eval_at_one() * y.eval_at_one())
                if not ok:
                    failures.append(("cyclic", t.to_text(), p))
                    break
    record(acceptance_report, 8, not failures,
           f"field axioms, Lagrange, encode injectivity, cyclic-ring axioms on {len(towers)} towers; failures: {failures or 'none'}")


def test_c9_bench_probe_counts(acceptance_report):
    K = BaseField(101)
    rows = list(bench_rows([1, 2], [64, 256], [2, 4], K, seeds=1))
    bad = []
    for r in rows:
        P = compute_params(r["n"], r["D"], r["T"], r["q"])
        if r["probes"] != P.m * P.n * (P.s + 1):
            bad.append(r)
    record(acceptance_report, 9, not bad and len(rows) == 8,
           f"bench probes == m*n*(s+1) on {len(rows) - len(bad)}/{len(rows)} rows")
