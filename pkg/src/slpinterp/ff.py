"""Finite fields Z_p, F_q = Z_p[w]/(phi) and F_{q^u} = F_q[y]/(psi).

Elements of the base field F_q are plain ints in ``[0, q)``: the integer
``r_0 + r_1 p + ... + r_{v-1} p^{v-1}`` stands for ``r_0 + r_1 w + ...``.
For ``v == 1`` this is just the residue mod p.  Elements of the top field
are :class:`ExtElem` values holding ``u`` base-field codes.

Besides scalar arithmetic, :class:`FieldTower` offers vectorised arithmetic
on numpy arrays of shape ``(..., u, v)`` whose trailing axes hold the base
residues of top-field elements.  The cyclic ring uses this form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import InputError

MAX_MODULUS = 1 << 62

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class BaseField:
    """The field F_q with q = p^v, elements encoded as ints in [0, q)."""

    def __init__(self, p: int, phi: Sequence[int] = (0, 1)):
        if not is_prime(p):
            raise InputError(f"modulus {p} is not prime")
        if p >= MAX_MODULUS:
            raise InputError(f"modulus {p} exceeds 2^62")
        phi = tuple(int(c) % p for c in phi)
        if len(phi) < 2 or phi[-1] != 1:
            raise InputError("phi must be monic of degree >= 1")
        self.p = p
        self.phi = phi
        self.v = len(phi) - 1
        self.order = p**self.v

    def __repr__(self) -> str:
        return f"BaseField(p={self.p}, v={self.v})"

    def __eq__(self, other) -> bool:
        return isinstance(other, BaseField) and (self.p, self.phi) == (other.p, other.phi)

    def __hash__(self) -> int:
        return hash((self.p, self.phi))

    def digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.v):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def from_digits(self, ds: Sequence[int]) -> int:
        a = 0
        for r in reversed(ds):
            a = a * self.p + r % self.p
        return a

    def reduce(self, c: int) -> int:
        """Interpret an arbitrary int as a field element code (mod q)."""
        return c % self.order

    def add(self, a: int, b: int) -> int:
        if self.v == 1:
            return (a + b) % self.p
        return self.from_digits([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def sub(self, a: int, b: int) -> int:
        if self.v == 1:
            return (a - b) % self.p
        return self.from_digits([x - y for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a: int) -> int:
        if self.v == 1:
            return -a % self.p
        return self.from_digits([-x for x in self.digits(a)])

    def mul(self, a: int, b: int) -> int:
        if self.v == 1:
            return a * b % self.p
        p, v = self.p, self.v
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * v - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        for k in range(2 * v - 2, v - 1, -1):
            top = prod[k] % p
            if top:
                for i in range(v):
                    prod[k - v + i] -= top * self.phi[i]
        return self.from_digits(prod[:v])

    def pow(self, a: int, e: int) -> int:
        if self.v == 1:
            return pow(a, e, self.p)
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a % self.order == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        if self.v == 1:
            return pow(a, -1, self.p)
        return self.pow(a, self.order - 2)

    def elements(self) -> range:
        return range(self.order)


# -- polynomials over a BaseField, as lowest-first lists of codes --------------


def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_mod(a: Sequence[int], f: Sequence[int], K: BaseField) -> list[int]:
    a = _trim(list(a))
    df = len(f) - 1
    lead_inv = K.inv(f[-1])
    while len(a) - 1 >= df:
        c = K.mul(a[-1], lead_inv)
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            if fi:
                a[shift + i] = K.sub(a[shift + i], K.mul(c, fi))
        _trim(a)
    return a


def poly_mul(a: Sequence[int], b: Sequence[int], K: BaseField) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = K.add(out[i + j], K.mul(x, y))
    return _trim(out)


def poly_gcd(a: Sequence[int], b: Sequence[int], K: BaseField) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, poly_mod(a, b, K)
    if a:
        lead_inv = K.inv(a[-1])
        a = [K.mul(c, lead_inv) for c in a]
    return a


def poly_powmod(g: Sequence[int], e: int, f: Sequence[int], K: BaseField) -> list[int]:
    result = [1]
    base = poly_mod(g, f, K)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base, K), f, K)
        base = poly_mod(poly_mul(base, base, K), f, K)
        e >>= 1
    return result


def is_irreducible(f: Sequence[int], K: BaseField) -> bool:
    """Rabin's test for a monic polynomial ``f`` (lowest-first codes) over K.

    ``f`` is irreducible iff ``x^(Q^d) = x mod f`` and
    ``gcd(f, x^(Q^(d/l)) - x) = 1`` for every prime ``l | d``.
    """
    f = _trim([K.reduce(c) for c in f])
    d = len(f) - 1
    if d < 1 or f[-1] != 1:
        raise InputError("is_irreducible expects a monic polynomial of degree >= 1")
    if d == 1:
        return True
    x = [0, 1]
    wanted = {d // ell for ell in _prime_factors(d)}
    h = x
    for k in range(1, d + 1):
        h = poly_powmod(h, K.order, f, K)
        if k in wanted:
            diff = list(h) + [0] * max(0, 2 - len(h))
            diff[1] = K.sub(diff[1], 1)
            if len(poly_gcd(f, diff, K)) != 1:
                return False
    return _trim(list(h)) == x


def find_irreducible(K: BaseField, degree: int, rng: np.random.Generator) -> tuple[int, ...]:
    """Random monic irreducible polynomial of the given degree over K."""
    if degree == 1:
        return (0, 1)
    while True:
        low = [int(c) for c in rng.integers(0, K.order, size=degree)]
        if low[0] == 0:
            continue
        cand = low + [1]
        if is_irreducible(cand, K):
            return tuple(cand)


# -- the tower ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FieldTower:
    """F_{q^u} = F_q[y]/(psi) over F_q = Z_p[w]/(phi).

    ``phi`` holds ints mod p, ``psi`` holds F_q codes; both lowest-first and
    monic.  Degree-one moduli (``w`` and ``y``) are the identity layers.
    """

    base: BaseField
    psi: tuple[int, ...]
    _arr: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        K = self.base
        psi = tuple(K.reduce(int(c)) for c in self.psi)
        if len(psi) < 2 or psi[-1] != 1:
            raise InputError("psi must be monic of degree >= 1")
        object.__setattr__(self, "psi", psi)
        p, v, u = K.p, K.v, self.u
        dtype = np.int64 if p < (1 << 31) else object
        self._arr["dtype"] = dtype
        self._arr["phi_tail"] = [(-c) % p for c in K.phi[:v]]
        self._arr["psi_tail"] = np.array(
            [K.digits(K.neg(c)) for c in psi[:u]], dtype=dtype
        ).reshape(u, v)
        if v == 1 and u > 1 and u * u * (p - 1) ** 2 < (1 << 63):
            # y^(i+j) mod psi as rows of a (u*u, u) matrix: one matmul per product
            red = [[int(k == i) for i in range(u)] for k in range(u)]
            for k in range(u, 2 * u - 1):
                prev = red[-1]
                top = prev[-1]
                red.append(
                    [((prev[i - 1] if i else 0) + top * (-psi[i])) % p for i in range(u)]
                )
            self._arr["mul_matrix"] = np.array(
                [red[i + j] for i in range(u) for j in range(u)], dtype=np.int64
            )

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def v(self) -> int:
        return self.base.v

    @property
    def u(self) -> int:
        return len(self.psi) - 1

    @property
    def phi(self) -> tuple[int, ...]:
        return self.base.phi

    @property
    def q(self) -> int:
        return self.base.order

    @property
    def order(self) -> int:
        return self.base.order**self.u

    @property
    def dtype(self):
        return self._arr["dtype"]

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldTower) and (self.base, self.psi) == (other.base, other.psi)

    def __hash__(self) -> int:
        return hash((self.base, self.psi))

    def __repr__(self) -> str:
        return f"FieldTower({self.to_text()!r})"

    # -- serialization: "p^v:u:phi-coeffs:psi-coeffs" --

    def to_text(self) -> str:
        phi = ",".join(str(c) for c in self.phi)
        psi = ",".join(str(c) for c in self.psi)
        return f"{self.p}^{self.v}:{self.u}:{phi}:{psi}"

    @classmethod
    def from_text(cls, text: str) -> "FieldTower":
        try:
            head, u, phi, psi = text.strip().split(":")
            p, v = (int(x) for x in head.split("^"))
            u = int(u)
            phi = tuple(int(c) for c in phi.split(","))
            psi = tuple(int(c) for c in psi.split(","))
        except ValueError as exc:
            raise InputError(f"bad field spec {text!r}") from exc
        K = BaseField(p, phi)
        if K.v != v or len(psi) - 1 != u:
            raise InputError(f"degrees in {text!r} do not match the moduli")
        if not is_irreducible(phi, BaseField(p)) or not is_irreducible(psi, K):
            raise InputError(f"reducible modulus in {text!r}")
        return cls(K, psi)

    # -- scalars --

    def elem(self, coeffs: Sequence[int] | int) -> "ExtElem":
        if isinstance(coeffs, (int, np.integer)):
            coeffs = [int(coeffs)]
        coeffs = [self.base.reduce(int(c)) for c in coeffs]
        if len(coeffs) > self.u:
            raise InputError("too many coefficients for this extension")
        return ExtElem(self, tuple(coeffs) + (0,) * (self.u - len(coeffs)))

    def zero(self) -> "ExtElem":
        return ExtElem(self, (0,) * self.u)

    def one(self) -> "ExtElem":
        return self.elem(1)

    def elements(self) -> Iterator["ExtElem"]:
        """All q^u elements; only sensible for small fields."""
        q, u = self.q, self.u
        for idx in range(self.order):
            cs = []
            for _ in range(u):
                idx, r = divmod(idx, q)
                cs.append(r)
            yield ExtElem(self, tuple(cs))

    def _mul_coeffs(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        K, u = self.base, self.u
        prod = [0] * (2 * u - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] = K.add(prod[i + j], K.mul(x, y))
        for k in range(2 * u - 2, u - 1, -1):
            top = prod[k]
            if top:
                for i in range(u):
                    prod[k - u + i] = K.sub(prod[k - u + i], K.mul(top, self.psi[i]))
        return tuple(prod[:u])

    # -- numpy arrays of shape (..., u, v) --

    def to_array(self, a: "ExtElem") -> np.ndarray:
        return np.array(
            [self.base.digits(c) for c in a.coeffs], dtype=self.dtype
        ).reshape(self.u, self.v)

    def from_array(self, arr: np.ndarray) -> "ExtElem":
        arr = np.asarray(arr).reshape(self.u, self.v)
        return ExtElem(self, tuple(self.base.from_digits([int(r) for r in row]) for row in arr))

    def zeros(self, shape: tuple[int, ...]) -> np.ndarray:
        return np.zeros(tuple(shape) + (self.u, self.v), dtype=self.dtype)

    def vec_add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a + b) % self.p

    def vec_sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a - b) % self.p

    def vec_neg(self, a: np.ndarray) -> np.ndarray:
        return (-a) % self.p

    def _fq_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        # trailing axis: v base residues
        p, v = self.p, self.v
        if v == 1:
            return (a * b) % p
        shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
        prod = np.zeros(shape + (2 * v - 1,), dtype=self.dtype)
        for i in range(v):
            for j in range(v):
                prod[..., i + j] = (prod[..., i + j] + a[..., i] * b[..., j]) % p
        tail = self._arr["phi_tail"]
        for k in range(2 * v - 2, v - 1, -1):
            top = prod[..., k]
            for i in range(v):
                if tail[i]:
                    prod[..., k - v + i] = (prod[..., k - v + i] + top * tail[i]) % p
        return prod[..., :v]

    def vec_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise top-field product of broadcastable ``(..., u, v)`` arrays."""
        u, p = self.u, self.p
        if u == 1:
            return self._fq_mul(a, b)
        mm = self._arr.get("mul_matrix")
        if mm is not None:
            outer = (a[..., :, None, 0] * b[..., None, :, 0]) % p
            flat = outer.reshape(outer.shape[:-2] + (u * u,))
            return ((flat @ mm) % p)[..., None]
        shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
        prod = np.zeros(shape + (2 * u - 1, self.v), dtype=self.dtype)
        for i in range(u):
            ai = a[..., i, :]
            for j in range(u):
                prod[..., i + j, :] = (prod[..., i + j, :] + self._fq_mul(ai, b[..., j, :])) % p
        tail = self._arr["psi_tail"]
        for k in range(2 * u - 2, u - 1, -1):
            top = prod[..., k, :]
            for i in range(u):
                if tail[i].any():
                    prod[..., k - u + i, :] = (
                        prod[..., k - u + i, :] + self._fq_mul(top, tail[i])
                    ) % p
        return prod[..., :u, :]


def make_tower(
    p: int,
    v: int = 1,
    u: int = 1,
    rng: np.random.Generator | None = None,
    phi: Sequence[int] | None = None,
) -> FieldTower:
    """Build F_{p^v}^u with random irreducible moduli (Las Vegas)."""
    if not is_prime(p):
        raise InputError(f"modulus {p} is not prime")
    if v < 1 or u < 1:
        raise InputError("extension degrees must be >= 1")
    rng = rng if rng is not None else np.random.default_rng()
    prime_field = BaseField(p)
    if phi is None:
        phi = find_irreducible(prime_field, v, rng)
    elif len(phi) - 1 != v or not is_irreducible(phi, prime_field):
        raise InputError("phi must be irreducible of degree v over Z_p")
    K = BaseField(p, phi)
    return FieldTower(K, find_irreducible(K, u, rng))


@dataclass(frozen=True)
class ExtElem:
    """An element of F_{q^u}: ``u`` base-field codes, lowest power of y first."""

    tower: FieldTower = field(repr=False)
    coeffs: tuple[int, ...]

    def _check(self, other) -> "ExtElem":
        if isinstance(other, (int, np.integer)):
            return self.tower.elem(int(other))
        if not isinstance(other, ExtElem):
            return NotImplemented
        if other.tower != self.tower:
            raise InputError("operands come from different field towers")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        K = self.tower.base
        return ExtElem(self.tower, tuple(K.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        K = self.tower.base
        return ExtElem(self.tower, tuple(K.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return -self + other

    def __neg__(self):
        K = self.tower.base
        return ExtElem(self.tower, tuple(K.neg(a) for a in self.coeffs))

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return ExtElem(self.tower, self.tower._mul_coeffs(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.tower.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "ExtElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in F_{q^u}")
        if self.tower.u == 1:
            return ExtElem(self.tower, (self.tower.base.inv(self.coeffs[0]),))
        return self ** (self.tower.order - 2)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def in_base_field(self) -> bool:
        return not any(self.coeffs[1:])

    def residues(self) -> tuple[int, ...]:
        """The ``u*v`` base residues, y-major."""
        K = self.tower.base
        return tuple(r for c in self.coeffs for r in K.digits(c))

    def __repr__(self) -> str:
        if self.tower.u == 1:
            return f"ExtElem({self.coeffs[0]})"
        return f"ExtElem{self.coeffs}"


def inv(a: ExtElem) -> ExtElem:
    return a.inverse()


def residue_width(p: int) -> int:
    """Bytes per residue in canonical encodings (1, 2, 4 or 8)."""
    bits = max(1, (p - 1).bit_length())
    for w in (1, 2, 4, 8):
        if bits <= 8 * w:
            return w
    raise InputError("modulus too large for canonical encoding")


def canonical_encode(a: ExtElem) -> bytes:
    """Fixed-width little-endian residues; injective and deterministic."""
    w = residue_width(a.tower.p)
    return b"".join(r.to_bytes(w, "little") for r in a.residues())


def encode_array(arr: np.ndarray, p: int) -> bytes:
    """Byte encoding of an array of residues, matching :func:`canonical_encode`."""
    w = residue_width(p)
    return np.ascontiguousarray(np.asarray(arr).astype(f"<u{w}")).tobytes()


def random_elem(tower: FieldTower, rng: np.random.Generator) -> ExtElem:
    return ExtElem(tower, tuple(int(c) for c in rng.integers(0, tower.q, size=tower.u)))


def random_nonzero(tower: FieldTower, rng: np.random.Generator) -> ExtElem:
    while True:
        a = random_elem(tower, rng)
        if not a.is_zero():
            return a
