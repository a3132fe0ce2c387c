"""Monte Carlo sparse interpolation of a polynomial given by an SLP.

One run (:func:`sparse_interpolate`):

1. derive the parameters (m, lambda, s, u) and draw m primes, the
   substitution matrices V_i and s diversifying vectors a_k;
2. for every prime with invertible V_i, probe the program at
   ``a_k x^{v_ij}`` in F_{q^u}[x]/(x^{p_i} - 1) and group the terms of the
   images by their coefficient vectors ``(b_0, ..., b_s)``;
3. each group that was seen once in every one of the n images of a prime
   yields a residue vector ``e mod p_i`` by solving ``V_i e = d``;
4. groups with congruences for at least half of the primes are lifted to
   an exponent vector by Chinese remaindering.

:func:`meta_interpolate` repeats the run and takes a majority vote.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import InputError
from .ff import BaseField, ExtElem, FieldTower, make_tower, random_nonzero, residue_width
from .linalg import MatModP, invert, solve_block
from .polynomial import SparsePolynomial
from .primes import ParamSet, compute_params, draw_primes
from .slp import Slp, probe_images

CongruenceList = list[tuple[int, tuple[int, ...]]]


class CoefficientDictionary:
    """Map from encoded coefficient keys to lists of values.

    ``append_to`` creates or extends; ``get_items`` iterates in key order so
    runs are reproducible.
    """

    def __init__(self):
        self._data: dict[bytes, list] = {}

    def append_to(self, key: bytes, value) -> None:
        lst = self._data.get(key)
        if lst is None:
            self._data[key] = [value]
        else:
            lst.append(value)

    def get_items(self) -> Iterator[tuple[bytes, list]]:
        for key in sorted(self._data):
            yield key, self._data[key]

    def __len__(self) -> int:
        return len(self._data)

    def __contains__(self, key: bytes) -> bool:
        return key in self._data

    def __getitem__(self, key: bytes) -> list:
        return self._data[key]


def create_dictionary() -> CoefficientDictionary:
    return CoefficientDictionary()


@dataclass
class RandomChoices:
    primes: list[int]
    vectors: list[list[list[int]]]  # vectors[i][j] = v_ij, entries mod primes[i]
    diversifiers: list[tuple[ExtElem, ...]]  # a_1..a_s, each of length n

    @property
    def m(self) -> int:
        return len(self.primes)

    def matrix(self, i: int) -> MatModP:
        return MatModP.of(self.vectors[i], self.primes[i])


def make_random_choices(
    params: ParamSet, n: int, tower: FieldTower, rng: np.random.Generator, s: int | None = None
) -> RandomChoices:
    """Draw primes, then every v_ij row-major, then a_1..a_s."""
    if tower.u != params.u:
        raise InputError(f"tower has u={tower.u}, parameters need u={params.u}")
    s = params.s if s is None else s
    primes = draw_primes(params, rng)
    vectors = [[[int(x) for x in row] for row in rng.integers(0, p, size=(n, n))] for p in primes]
    diversifiers = [tuple(random_nonzero(tower, rng) for _ in range(n)) for _ in range(s)]
    return RandomChoices(primes, vectors, diversifiers)


def key_b0(key: bytes, tower: FieldTower) -> int:
    """The F_q code of the undiversified coefficient at the front of a key."""
    w = _width(tower)
    digits = [int.from_bytes(key[i * w : (i + 1) * w], "little") for i in range(tower.v)]
    return tower.base.from_digits(digits)


def _width(tower: FieldTower) -> int:
    return residue_width(tower.p)


def _probe_batch(slp: Slp, choices: RandomChoices, i: int, tower: FieldTower) -> np.ndarray:
    """All images F_ij and F_ijk for one prime, shape (n, s+1, p, u, v)."""
    n, p = slp.arity, choices.primes[i]
    ones = np.broadcast_to(tower.to_array(tower.one()), (n, tower.u, tower.v))
    scal = [ones] + [np.stack([tower.to_array(x) for x in a]) for a in choices.diversifiers]
    S = len(scal)
    scalings = np.stack([scal[k] for _ in range(n) for k in range(S)])
    shifts = np.array([choices.vectors[i][j] for j in range(n) for _ in range(S)], dtype=np.int64)
    imgs = probe_images(slp, scalings, shifts, p, tower)
    return imgs.reshape((n, S) + imgs.shape[1:])


def build_term_dictionary(
    slp: Slp, choices: RandomChoices, i: int, tower: FieldTower
) -> CoefficientDictionary:
    """Key every nonzero term b_0 x^d of F_ij by (b_0, ..., b_s); values are degrees in j order."""
    imgs = _probe_batch(slp, choices, i, tower)
    w = _width(tower)
    L = create_dictionary()
    for j in range(slp.arity):
        undiv = imgs[j, 0]
        nz = np.flatnonzero(undiv.reshape(undiv.shape[0], -1).any(axis=1))
        if not len(nz):
            continue
        enc = np.ascontiguousarray(np.moveaxis(imgs[j][:, nz], 1, 0).astype(f"<u{w}"))
        for t, d in enumerate(nz):
            L.append_to(enc[t].tobytes(), int(d))
    return L


def recover_congruences(
    L: CoefficientDictionary, V_inv: MatModP, p: int
) -> list[tuple[bytes, tuple[int, ...]]]:
    """``e = V^-1 d mod p`` for every key whose degree vector has length n."""
    n = V_inv.n
    keys, ds = [], []
    for key, d in L.get_items():
        if len(d) != n:
            continue
        keys.append(key)
        ds.append(d)
    return list(zip(keys, solve_block(V_inv, ds, p)))


def crt_exponent(congruences: CongruenceList, n: int, D: int) -> tuple[int, ...] | None:
    """Componentwise CRT; ``None`` if the lifted vector has an entry >= D."""
    if not congruences:
        raise InputError("need at least one congruence")
    primes = [p for p, _ in congruences]
    if len(set(primes)) != len(primes):
        raise InputError("duplicate primes in congruence set")
    e = [0] * n
    M = 1
    for p, r in congruences:
        if len(r) != n:
            raise InputError(f"residue vector of length {len(r)}, expected {n}")
        M_inv = pow(M, -1, p)
        for j in range(n):
            # lift e_j (mod M) to x (mod M p) with x = r_j (mod p)
            t = (r[j] - e[j]) * M_inv % p
            e[j] += M * t
        M *= p
    if any(x >= D for x in e):
        return None
    return tuple(e)


def _prime_pass(slp, choices, i, tower) -> list[tuple[bytes, tuple[int, ...]]] | None:
    V_inv = invert(choices.matrix(i))
    if V_inv is None:
        return None
    L = build_term_dictionary(slp, choices, i, tower)
    return recover_congruences(L, V_inv, choices.primes[i])


@dataclass
class InterpolationRun:
    polynomial: SparsePolynomial
    params: ParamSet
    tower: FieldTower
    choices: RandomChoices
    store: CoefficientDictionary
    singular_primes: list[int] = field(default_factory=list)
    rejected_keys: int = 0

    def to_json(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "field": self.tower.to_text(),
            "primes": self.choices.primes,
            "singular_primes": self.singular_primes,
            "keys": len(self.store),
            "rejected_keys": self.rejected_keys,
            "polynomial": self.polynomial.to_json(),
        }


def _resolve_field(field_spec: BaseField | FieldTower | int) -> BaseField:
    if isinstance(field_spec, FieldTower):
        return field_spec.base
    if isinstance(field_spec, BaseField):
        return field_spec
    return BaseField(int(field_spec))


def run_interpolation(
    slp: Slp,
    D: int,
    T: int,
    field_spec: BaseField | FieldTower | int,
    rng: np.random.Generator,
    *,
    s: int | None = None,
    threads: int = 1,
) -> InterpolationRun:
    """One Monte Carlo run with all intermediate data attached.

    ``s`` overrides the diversifier count (``s=0`` disables diversification).
    The extension field is built from ``rng`` before the other draws.
    """
    n = slp.arity
    K = _resolve_field(field_spec)
    params = compute_params(n, D, T, K.order)
    if isinstance(field_spec, FieldTower) and field_spec.u == params.u:
        tower = field_spec
    else:
        tower = make_tower(K.p, K.v, params.u, rng, phi=K.phi)
    choices = make_random_choices(params, n, tower, rng, s=s)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            passes = list(pool.map(lambda i: _prime_pass(slp, choices, i, tower), range(params.m)))
    else:
        passes = [_prime_pass(slp, choices, i, tower) for i in range(params.m)]

    store = create_dictionary()
    singular = []
    for i, found in enumerate(passes):
        if found is None:
            singular.append(choices.primes[i])
            continue
        for key, e in found:
            store.append_to(key, (choices.primes[i], e))

    terms: dict[tuple[int, ...], int] = {}
    rejected = 0
    for key, congruences in store.get_items():
        if 2 * len(congruences) < params.m:
            continue
        e = crt_exponent(congruences, n, D)
        if e is None:
            rejected += 1
            continue
        terms[e] = K.add(terms.get(e, 0), key_b0(key, tower))
    poly = SparsePolynomial(n, {e: c for e, c in terms.items() if c})
    return InterpolationRun(poly, params, tower, choices, store, singular, rejected)


def sparse_interpolate(
    slp: Slp,
    D: int,
    T: int,
    field_spec: BaseField | FieldTower | int,
    rng: np.random.Generator,
    *,
    s: int | None = None,
    threads: int = 1,
) -> SparsePolynomial:
    """Sparse representation of the polynomial computed by ``slp``.

    Requires ``D`` > every partial degree and ``T`` >= the number of terms.
    Correct with probability at least 3/4; a failed run returns a wrong
    polynomial rather than raising.
    """
    return run_interpolation(slp, D, T, field_spec, rng, s=s, threads=threads).polynomial


def meta_runs(eps: float) -> int:
    if not 0 < eps < 1:
        raise InputError("epsilon must lie in (0, 1)")
    return math.ceil(8 * math.log(1 / eps))


@dataclass
class MetaResult:
    polynomial: SparsePolynomial | None  # None: no output won a strict majority
    runs: int
    votes: int

    @property
    def ok(self) -> bool:
        return self.polynomial is not None


def meta_interpolate(
    slp: Slp,
    D: int,
    T: int,
    field_spec: BaseField | FieldTower | int,
    eps: float,
    rng: np.random.Generator,
    *,
    threads: int = 1,
) -> MetaResult:
    """Majority vote over ceil(8 ln(1/eps)) independent runs."""
    r = meta_runs(eps)
    streams = rng.spawn(r)
    outputs = [sparse_interpolate(slp, D, T, field_spec, g, threads=threads) for g in streams]
    winner, votes = Counter(outputs).most_common(1)[0]
    if 2 * votes > r:
        return MetaResult(winner, r, votes)
    return MetaResult(None, r, votes)
