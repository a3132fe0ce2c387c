"""Ground truth for desk-scale checks.

Brute-force expansion of an SLP into its sparse polynomial, the homomorphic
images computed directly from that polynomial, deceptive-pair detection and
the empirical collision-rate experiments behind the parameter choices.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .cyclic import CyclicPoly
from .engine import RandomChoices, make_random_choices
from .errors import InputError, ResourceLimitError
from .ff import BaseField, ExtElem, FieldTower, make_tower, random_nonzero
from .linalg import MatModP, invert
from .polynomial import Exponent, SparsePolynomial
from .primes import compute_params, sieve_interval
from .slp import Instruction, Operand, Slp, eval_in_ring


@dataclass(frozen=True)
class ExpansionCap:
    max_terms: int = 10**4
    max_degree: int = 2**32

    def __post_init__(self):
        if self.max_terms < 1 or self.max_degree < 1:
            raise InputError("expansion caps must be positive")


class SparsePolyRing:
    """Ring context over ``{exponent: coefficient}`` dicts with size caps."""

    def __init__(self, K: BaseField, n: int, cap: ExpansionCap = ExpansionCap()):
        self.K, self.n, self.cap = K, n, cap

    def var(self, j: int) -> dict[Exponent, int]:
        return {tuple(int(i == j) for i in range(self.n)): 1}

    def const(self, c: int) -> dict[Exponent, int]:
        c = self.K.reduce(c)
        return {(0,) * self.n: c} if c else {}

    def _check(self, f: dict) -> dict:
        if len(f) > self.cap.max_terms:
            raise ResourceLimitError(f"expansion exceeds {self.cap.max_terms} terms")
        return f

    def add(self, f, g):
        out = dict(f)
        for e, c in g.items():
            s = self.K.add(out.get(e, 0), c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return self._check(out)

    def sub(self, f, g):
        return self.add(f, {e: self.K.neg(c) for e, c in g.items()})

    def mul(self, f, g):
        if len(f) * len(g) > 50 * self.cap.max_terms:
            raise ResourceLimitError("expansion product too large")
        out: dict[Exponent, int] = {}
        K = self.K
        for e1, c1 in f.items():
            for e2, c2 in g.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if max(e) > self.cap.max_degree:
                    raise ResourceLimitError(f"partial degree exceeds {self.cap.max_degree}")
                out[e] = K.add(out.get(e, 0), K.mul(c1, c2))
        return self._check({e: c for e, c in out.items() if c})


def _base_field(field: BaseField | FieldTower | int) -> BaseField:
    if isinstance(field, FieldTower):
        return field.base
    if isinstance(field, BaseField):
        return field
    return BaseField(int(field))


def brute_force_expand(
    slp: Slp, field: BaseField | FieldTower | int, cap: ExpansionCap = ExpansionCap()
) -> SparsePolynomial:
    """The exact polynomial an SLP computes, by term-map arithmetic."""
    ring = SparsePolyRing(_base_field(field), slp.arity, cap)
    inputs = [ring.var(j) for j in range(slp.arity)]
    return SparsePolynomial(slp.arity, eval_in_ring(slp, inputs, ring))


def evaluate(f: SparsePolynomial, point: Sequence[ExtElem]) -> ExtElem:
    tower = point[0].tower
    total = tower.zero()
    for c, e in f.terms():
        term = tower.elem(c)
        for x, k in zip(point, e):
            if k:
                term = term * x**k
        total = total + term
    return total


def reduce_mod_ideal(f: SparsePolynomial, p: int, field: BaseField | FieldTower | int) -> SparsePolynomial:
    """Image of f modulo (z_1^p - 1, ..., z_n^p - 1)."""
    K = _base_field(field)
    out: dict[Exponent, int] = {}
    for c, e in f.terms():
        r = tuple(x % p for x in e)
        out[r] = K.add(out.get(r, 0), c)
    return SparsePolynomial(f.n, {e: c for e, c in out.items() if c})


def apply_substitution(
    f: SparsePolynomial, a: Sequence[ExtElem], v: Sequence[int], p: int, tower: FieldTower
) -> CyclicPoly:
    """sum_l c_l a^{e_l} x^{(e_l . v) mod p}, computed term by term."""
    if len(a) != f.n or len(v) != f.n:
        raise InputError("substitution vectors must match the arity")
    terms = []
    for c, e in f.terms():
        coeff = tower.elem(c)
        for x, k in zip(a, e):
            if k:
                coeff = coeff * x**k
        d = sum(k * int(vj) for k, vj in zip(e, v)) % p
        terms.append((d, coeff))
    return CyclicPoly.from_terms(tower, p, terms)


# -- deceptive pairs -----------------------------------------------------------

ImageTerm = tuple[int, int, int]  # (prime index i, substitution index j, degree d)


@dataclass(frozen=True)
class DeceptivePair:
    first: ImageTerm
    second: ImageTerm


def _image_groups(
    f: SparsePolynomial, choices: RandomChoices, k: int, tower: FieldTower
) -> dict[tuple, list[tuple[ImageTerm, frozenset[int]]]]:
    """Group the nonzero terms of every F_ij by their (b_0, ..., b_k) vectors."""
    terms = f.terms()
    # per term: (c, c a_1^e, ..., c a_k^e)
    fingerprints = []
    for c, e in terms:
        row = [tower.elem(c)]
        for a in choices.diversifiers[:k]:
            val = tower.elem(c)
            for x, deg in zip(a, e):
                if deg:
                    val = val * x**deg
            row.append(val)
        fingerprints.append(row)
    groups: dict[tuple, list] = defaultdict(list)
    for i, p in enumerate(choices.primes):
        for j, v in enumerate(choices.vectors[i]):
            by_degree: dict[int, list[int]] = defaultdict(list)
            for ell, (_, e) in enumerate(terms):
                by_degree[sum(x * y for x, y in zip(e, v)) % p].append(ell)
            for d, members in sorted(by_degree.items()):
                b = [tower.zero() for _ in range(k + 1)]
                for ell in members:
                    b = [x + y for x, y in zip(b, fingerprints[ell])]
                if b[0].is_zero():
                    continue
                key = tuple(x.coeffs for x in b)
                groups[key].append(((i, j, d), frozenset(members)))
    return groups


def find_deceptive_pairs(
    f: SparsePolynomial, choices: RandomChoices, k: int, tower: FieldTower
) -> list[DeceptivePair]:
    """Image-term pairs with equal coefficients under b_0..b_k that come from
    different sets of terms of f, i.e. deceptive pairs left unrevealed by the
    first k diversifiers."""
    if k > len(choices.diversifiers):
        raise InputError(f"only {len(choices.diversifiers)} diversifiers available")
    out = []
    for members in _image_groups(f, choices, k, tower).values():
        for (t1, s1), (t2, s2) in combinations(members, 2):
            if s1 != s2:
                out.append(DeceptivePair(t1, t2))
    return out


def has_unrevealed_pair(f: SparsePolynomial, choices: RandomChoices, k: int, tower: FieldTower) -> bool:
    for members in _image_groups(f, choices, k, tower).values():
        if len({s for _, s in members}) > 1:
            return True
    return False


# -- random instances ---------------------------------------------------------


def random_sparse(
    n: int, D: int, t: int, field: BaseField | FieldTower | int, rng: np.random.Generator
) -> SparsePolynomial:
    """t terms with distinct exponents in [0, D)^n and nonzero coefficients."""
    K = _base_field(field)
    if D**n < t:
        raise InputError(f"cannot place {t} distinct exponents in [0, {D})^{n}")
    exps: set[Exponent] = set()
    while len(exps) < t:
        exps.add(tuple(int(x) for x in rng.integers(0, D, size=n)))
    coeffs = rng.integers(1, K.order, size=t)
    return SparsePolynomial(n, {e: int(c) for e, c in zip(sorted(exps), coeffs)})


def random_slp(n: int, length: int, rng: np.random.Generator, max_const: int = 100) -> Slp:
    """A random division-free program mixing inputs, constants and earlier results."""
    ins = []
    for k in range(1, length + 1):
        ops = []
        for _ in range(2):
            r = rng.random()
            if k > 1 and r < 0.5:
                ops.append(Operand("b", int(rng.integers(1, k))))
            elif r < 0.85:
                ops.append(Operand("z", int(rng.integers(1, n + 1))))
            else:
                ops.append(Operand("c", int(rng.integers(0, max_const))))
        ins.append(Instruction(str(rng.choice(["+", "-", "*"])), ops[0], ops[1]))
    return Slp(n, tuple(ins))


# -- empirical checks of the probability bounds ----------------------------------


@dataclass(frozen=True)
class StatReport:
    """``count`` bad outcomes in ``trials``; passes if rate <= bound + 3 sigma."""

    name: str
    count: int
    trials: int
    bound: float

    @property
    def rate(self) -> float:
        return self.count / self.trials

    @property
    def sigma(self) -> float:
        return math.sqrt(self.bound * (1 - self.bound) / self.trials)

    @property
    def passed(self) -> bool:
        return self.rate <= self.bound + 3 * self.sigma

    def __str__(self) -> str:
        return (
            f"{self.name}: {self.count}/{self.trials} = {self.rate:.4f} "
            f"(bound {self.bound:.4f} + 3 sigma {3 * self.sigma:.4f})"
        )


def exponent_collision_rate(
    rng: np.random.Generator, draws: int = 1000, n: int = 2, T: int = 8, D: int = 2**16, mu: float = 1 / 40
) -> StatReport:
    """Fraction of (term, prime) pairs caught in an exponent collision, with
    primes drawn from (lambda, 2 lambda] for lambda = max(21, 5/3 (T-1) ln D / mu)."""
    lam = max(21.0, 5 / 3 * (T - 1) * math.log(D) / mu)
    pool = sieve_interval(lam)
    bad = 0
    for _ in range(draws):
        exps = np.array(sorted({tuple(r) for r in rng.integers(0, D, size=(T, n)).tolist()}))
        p = pool[int(rng.integers(0, len(pool)))]
        red = [tuple(r) for r in (exps % p).tolist()]
        counts: dict = defaultdict(int)
        for r in red:
            counts[r] += 1
        bad += sum(1 for r in red if counts[r] > 1)
    return StatReport("exponent collisions", bad, draws * T, mu)


def singularity_rate(rng: np.random.Generator, trials: int = 10**4, n: int = 2, p: int = 23) -> StatReport:
    bad = 0
    for _ in range(trials):
        V = MatModP.of(rng.integers(0, p, size=(n, n)).tolist(), p)
        bad += invert(V) is None
    return StatReport(f"singular V (n={n}, p={p})", bad, trials, 1 / 20)


def term_failure_rate(
    rng: np.random.Generator, draws: int = 1000, n: int = 2, T: int = 8, D: int = 2**16, mu: float = 1 / 40
) -> StatReport:
    """Fraction of (term, prime) trials where V is singular or the term collides
    in some F_ij; lambda = max(21, 5/6 (T-1) ln D / mu, 2n / mu)."""
    lam = max(21.0, 5 / 6 * (T - 1) * math.log(D) / mu, 2 * n / mu)
    pool = sieve_interval(lam)
    bad = trials = 0
    for _ in range(draws):
        exps = sorted({tuple(r) for r in rng.integers(0, D, size=(T, n)).tolist()})
        p = pool[int(rng.integers(0, len(pool)))]
        V = rng.integers(0, p, size=(n, n))
        singular = invert(MatModP.of(V.tolist(), p)) is None
        E = np.array(exps, dtype=object)
        degs = (E.dot(V.T.astype(object))) % p  # (t, n): degree of each term in each F_ij
        for ell in range(len(exps)):
            trials += 1
            if singular:
                bad += 1
                continue
            collided = any(
                (degs[other] == degs[ell]).any() for other in range(len(exps)) if other != ell
            )
            bad += collided
    return StatReport("term lost to collision or singular V", bad, trials, 1 / 20 + mu)


def deceptive_pair_rate(
    rng: np.random.Generator,
    trials: int = 1000,
    n: int = 2,
    D: int = 16,
    T: int = 4,
    q: int = 13,
    equal_coefficients: bool = True,
) -> StatReport:
    """Fraction of full parameter draws leaving some deceptive pair unrevealed
    by all s diversifiers.  With ``equal_coefficients`` every term of the test
    polynomial has coefficient 1, which makes equal-b_0 pairs abundant."""
    K = BaseField(q)
    params = compute_params(n, D, T, q)
    tower = make_tower(q, 1, params.u, rng)
    bad = 0
    for _ in range(trials):
        f = random_sparse(n, D, T, K, rng)
        if equal_coefficients:
            f = SparsePolynomial(n, {e: 1 for _, e in f.terms()})
        choices = make_random_choices(params, n, tower, rng)
        bad += has_unrevealed_pair(f, choices, params.s, tower)
    return StatReport("unrevealed deceptive pairs", bad, trials, 1 / 40)
