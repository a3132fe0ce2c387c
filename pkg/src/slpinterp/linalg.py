"""Square linear systems over Z_p: inversion and batched solves."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class MatModP:
    rows: tuple[tuple[int, ...], ...]
    p: int

    def __post_init__(self):
        rows = tuple(tuple(int(x) % self.p for x in r) for r in self.rows)
        if any(len(r) != len(rows) for r in rows):
            raise InputError("matrix must be square")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]], p: int) -> "MatModP":
        return cls(tuple(tuple(r) for r in rows), p)

    @classmethod
    def identity(cls, n: int, p: int) -> "MatModP":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), p)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __matmul__(self, other):
        if isinstance(other, MatModP):
            if other.p != self.p:
                raise InputError("modulus mismatch")
            cols = list(zip(*other.rows))
            return MatModP(
                tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows),
                self.p,
            )
        vec = [int(x) for x in other]
        return tuple(sum(a * b for a, b in zip(r, vec)) % self.p for r in self.rows)


def invert(V: MatModP) -> MatModP | None:
    """Inverse by Gauss-Jordan elimination mod p, or ``None`` if V is singular."""
    p, n = V.p, V.n
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(V.rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_piv = pow(aug[col][col], -1, p)
        aug[col] = [x * inv_piv % p for x in aug[col]]
        for r in range(n):
            f = aug[r][col]
            if r != col and f:
                aug[r] = [(x - f * y) % p for x, y in zip(aug[r], aug[col])]
    return MatModP(tuple(tuple(r[n:]) for r in aug), p)


def solve_block(V_inv: MatModP, ds: Sequence[Sequence[int]], p: int | None = None) -> list[tuple[int, ...]]:
    """``V_inv @ d mod p`` for every d, as one matrix product per n columns."""
    if p is not None and p != V_inv.p:
        raise InputError(f"modulus mismatch: {p} vs {V_inv.p}")
    n, p = V_inv.n, V_inv.p
    if not ds:
        return []
    cols = np.array([[int(x) for x in d] for d in ds], dtype=object)
    if cols.shape[1] != n:
        raise InputError(f"right-hand sides must have length {n}")
    dtype = np.int64 if (p - 1) ** 2 * n < (1 << 63) else object
    M = np.array(V_inv.rows, dtype=dtype)
    out: list[tuple[int, ...]] = []
    for start in range(0, len(ds), n):
        block = (cols[start : start + n] % p).astype(dtype).T  # n x (<= n)
        prod = (M @ block) % p
        out.extend(tuple(int(x) for x in col) for col in prod.T)
    return out
