"""The cyclic ring F_{q^u}[x]/(x^p - 1), dense representation.

:class:`CyclicPoly` is the value type.  :class:`CyclicBatchRing` evaluates
many probes of one straight-line program at once; it keeps values that are
still single monomials in a compact (shift, coefficient) form, since SLP
inputs are monomials and most intermediate results stay that way.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError
from .ff import ExtElem, FieldTower


class CyclicPoly:
    """An element of F_{q^u}[x]/(x^p - 1) stored as a ``(p, u, v)`` residue array."""

    __slots__ = ("tower", "p", "coeffs")

    def __init__(self, tower: FieldTower, p: int, coeffs: np.ndarray | None = None):
        if p < 1:
            raise InputError("cyclic modulus must be >= 1")
        self.tower = tower
        self.p = p
        if coeffs is None:
            coeffs = tower.zeros((p,))
        else:
            coeffs = np.asarray(coeffs, dtype=tower.dtype) % tower.p
            if coeffs.shape != (p, tower.u, tower.v):
                raise InputError(f"coefficient array has shape {coeffs.shape}")
        self.coeffs = coeffs

    # -- constructors --

    @classmethod
    def monomial(cls, c: ExtElem, d: int, p: int) -> "CyclicPoly":
        out = cls(c.tower, p)
        out.coeffs[d % p] = c.tower.to_array(c)
        return out

    @classmethod
    def from_terms(
        cls, tower: FieldTower, p: int, terms: Mapping[int, ExtElem | int] | Iterable[tuple[int, ExtElem | int]]
    ) -> "CyclicPoly":
        """Sum of ``c x^d``; degrees are reduced mod p and colliding terms add."""
        items = terms.items() if isinstance(terms, Mapping) else terms
        out = cls(tower, p)
        for d, c in items:
            if not isinstance(c, ExtElem):
                c = tower.elem(c)
            out.coeffs[d % p] = tower.vec_add(out.coeffs[d % p], tower.to_array(c))
        return out

    @classmethod
    def from_list(cls, tower: FieldTower, values: Sequence[int | ExtElem]) -> "CyclicPoly":
        """Dense constructor from coefficients ``[c_0, ..., c_{p-1}]``."""
        return cls.from_terms(tower, len(values), list(enumerate(values)))

    # -- arithmetic --

    def _check(self, other: "CyclicPoly") -> None:
        if not isinstance(other, CyclicPoly):
            raise InputError("expected a CyclicPoly operand")
        if other.p != self.p:
            raise InputError(f"cyclic modulus mismatch: x^{self.p}-1 vs x^{other.p}-1")
        if other.tower != self.tower:
            raise InputError("operands come from different field towers")

    def __add__(self, other: "CyclicPoly") -> "CyclicPoly":
        self._check(other)
        return CyclicPoly(self.tower, self.p, self.tower.vec_add(self.coeffs, other.coeffs))

    def __sub__(self, other: "CyclicPoly") -> "CyclicPoly":
        self._check(other)
        return CyclicPoly(self.tower, self.p, self.tower.vec_sub(self.coeffs, other.coeffs))

    def __neg__(self) -> "CyclicPoly":
        return CyclicPoly(self.tower, self.p, self.tower.vec_neg(self.coeffs))

    def __mul__(self, other: "CyclicPoly") -> "CyclicPoly":
        self._check(other)
        a, b = self.coeffs, other.coeffs
        nz_a, nz_b = _nonzero_positions(a), _nonzero_positions(b)
        if len(nz_a) > len(nz_b):
            a, b, nz_a = b, a, nz_b
        out = self.tower.zeros((self.p,))
        for d in nz_a:
            term = self.tower.vec_mul(a[d], np.roll(b, d, axis=0))
            out = self.tower.vec_add(out, term)
        return CyclicPoly(self.tower, self.p, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CyclicPoly):
            return NotImplemented
        return (
            self.p == other.p
            and self.tower == other.tower
            and np.array_equal(self.coeffs, other.coeffs)
        )

    __hash__ = None

    # -- inspection --

    def coeff_at(self, d: int) -> ExtElem:
        if not 0 <= d < self.p:
            raise InputError(f"degree {d} outside [0, {self.p})")
        return self.tower.from_array(self.coeffs[d])

    def nonzero_terms(self) -> list[tuple[int, ExtElem]]:
        return [(int(d), self.coeff_at(int(d))) for d in _nonzero_positions(self.coeffs)]

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def eval_at_one(self) -> ExtElem:
        """Image under x -> 1, a ring homomorphism to F_{q^u}."""
        return self.tower.from_array(self.coeffs.sum(axis=0) % self.tower.p)

    def __repr__(self) -> str:
        terms = [f"{c!r}*x^{d}" for d, c in self.nonzero_terms()]
        return f"CyclicPoly(p={self.p}, {' + '.join(terms) or '0'})"


def monomial(c: ExtElem, d: int, p: int) -> CyclicPoly:
    return CyclicPoly.monomial(c, d, p)


def _nonzero_positions(arr: np.ndarray) -> np.ndarray:
    # arr: (p, u, v) or (B, p, u, v); positions along the p axis
    axes = tuple(i for i in range(arr.ndim) if i != arr.ndim - 3)
    return np.flatnonzero(arr.any(axis=axes))


class CyclicRing:
    """Ring context over single :class:`CyclicPoly` values (for ``eval_in_ring``)."""

    def __init__(self, tower: FieldTower, p: int):
        self.tower = tower
        self.p = p

    def const(self, c: int) -> CyclicPoly:
        return CyclicPoly.monomial(self.tower.elem(c), 0, self.p)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b


class _Mono:
    """B monomials c_b x^{s_b}."""

    __slots__ = ("shift", "coeff")

    def __init__(self, shift: np.ndarray, coeff: np.ndarray):
        self.shift = shift
        self.coeff = coeff


class CyclicBatchRing:
    """Ring context whose values are batches of ``B`` cyclic polynomials.

    Values are either :class:`_Mono` or dense ``(B, p, u, v)`` arrays.
    """

    def __init__(self, tower: FieldTower, p: int, batch: int):
        self.tower = tower
        self.p = p
        self.batch = batch
        self._rows = np.arange(batch)
        self._consts: dict[int, _Mono] = {}

    def inputs(self, coeffs: np.ndarray, shifts: Sequence[int] | np.ndarray) -> _Mono:
        """Batch of monomials ``coeffs[b] * x^shifts[b]``; coeffs is ``(B, u, v)``."""
        shifts = np.asarray(shifts, dtype=np.int64) % self.p
        coeffs = np.asarray(coeffs, dtype=self.tower.dtype)
        if shifts.shape != (self.batch,) or coeffs.shape != (self.batch, self.tower.u, self.tower.v):
            raise InputError("input batch has the wrong shape")
        return _Mono(shifts, coeffs)

    def const(self, c: int) -> _Mono:
        if c not in self._consts:
            elem = self.tower.to_array(self.tower.elem(c))
            self._consts[c] = _Mono(
                np.zeros(self.batch, dtype=np.int64),
                np.broadcast_to(elem, (self.batch,) + elem.shape).copy(),
            )
        return self._consts[c]

    def dense(self, a) -> np.ndarray:
        if isinstance(a, np.ndarray):
            return a
        out = self.tower.zeros((self.batch, self.p))
        out[self._rows, a.shift] = a.coeff
        return out

    def _add_mono(self, dense: np.ndarray, mono: _Mono, sign: int) -> np.ndarray:
        out = dense.copy()
        cur = out[self._rows, mono.shift]
        out[self._rows, mono.shift] = (cur + sign * mono.coeff) % self.tower.p
        return out

    def add(self, a, b):
        return self._addsub(a, b, 1)

    def sub(self, a, b):
        return self._addsub(a, b, -1)

    def _addsub(self, a, b, sign: int):
        P = self.tower.p
        if isinstance(a, _Mono) and isinstance(b, _Mono):
            if np.array_equal(a.shift, b.shift):
                return _Mono(a.shift, (a.coeff + sign * b.coeff) % P)
            return self._add_mono(self.dense(a), b, sign)
        if isinstance(b, _Mono):
            return self._add_mono(a, b, sign)
        if isinstance(a, _Mono):
            neg_b = b if sign == 1 else (-b) % P
            return self._add_mono(neg_b, a, 1)
        return (a + sign * b) % P

    def mul(self, a, b):
        tw = self.tower
        if isinstance(a, _Mono) and isinstance(b, _Mono):
            return _Mono((a.shift + b.shift) % self.p, tw.vec_mul(a.coeff, b.coeff))
        if isinstance(b, _Mono):
            a, b = b, a
        if isinstance(a, _Mono):
            idx = (np.arange(self.p)[None, :] - a.shift[:, None]) % self.p
            rolled = b[self._rows[:, None], idx]
            return tw.vec_mul(rolled, a.coeff[:, None])
        nz_a, nz_b = _nonzero_positions(a), _nonzero_positions(b)
        if len(nz_a) > len(nz_b):
            a, b, nz_a = b, a, nz_b
        out = tw.zeros((self.batch, self.p))
        for d in nz_a:
            out = tw.vec_add(out, tw.vec_mul(a[:, d][:, None], np.roll(b, int(d), axis=1)))
        return out

    def to_polys(self, value) -> list[CyclicPoly]:
        arr = self.dense(value)
        return [CyclicPoly(self.tower, self.p, arr[b]) for b in range(self.batch)]
