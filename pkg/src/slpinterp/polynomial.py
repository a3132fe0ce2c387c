"""Sparse multivariate polynomials over F_q: the algorithm's input and output."""

from __future__ import annotations

import json
from typing import Iterable, Iterator, Mapping

from .errors import InputError

Exponent = tuple[int, ...]


class SparsePolynomial:
    """Immutable map from exponent vectors to nonzero F_q codes.

    Terms are kept sorted lexicographically by exponent, so equality and
    hashing are canonical.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[Exponent, int] | Iterable[tuple[int, Exponent]] = ()):
        if n < 1:
            raise InputError("arity must be >= 1")
        if isinstance(terms, Mapping):
            items = [(tuple(int(x) for x in e), int(c)) for e, c in terms.items()]
        else:
            items = [(tuple(int(x) for x in e), int(c)) for c, e in terms]
        seen = set()
        for e, _ in items:
            if len(e) != n:
                raise InputError(f"exponent {e} does not have arity {n}")
            if any(x < 0 for x in e):
                raise InputError(f"negative exponent in {e}")
            if e in seen:
                raise InputError(f"duplicate exponent {e}")
            seen.add(e)
        self.n = n
        self._terms = tuple(sorted((e, c) for e, c in items if c != 0))

    @classmethod
    def zero(cls, n: int) -> "SparsePolynomial":
        return cls(n)

    def terms(self) -> list[tuple[int, Exponent]]:
        """(coefficient, exponent) pairs in canonical order."""
        return [(c, e) for e, c in self._terms]

    def as_dict(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def __iter__(self) -> Iterator[tuple[int, Exponent]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, e: Exponent) -> int:
        return dict(self._terms).get(tuple(e), 0)

    def max_partial_degree(self) -> int:
        return max((max(e) for e, _ in self._terms), default=0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.n, self._terms))

    def __repr__(self) -> str:
        if not self._terms:
            return f"SparsePolynomial(n={self.n}, 0)"
        parts = []
        for e, c in self._terms:
            mono = "*".join(f"z{j + 1}^{x}" if x > 1 else f"z{j + 1}" for j, x in enumerate(e) if x)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return f"SparsePolynomial(n={self.n}, {' + '.join(parts)})"

    # -- text / JSON forms --

    def to_text(self) -> str:
        """One term per line: ``<coeff> <e1> ... <en>``, lexicographic order."""
        return "".join(f"{c} {' '.join(map(str, e))}\n" for e, c in self._terms)

    @classmethod
    def from_text(cls, text: str, n: int | None = None) -> "SparsePolynomial":
        terms = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                nums = [int(tok) for tok in line.split()]
            except ValueError as exc:
                raise InputError(f"line {lineno}: non-integer token") from exc
            if len(nums) < 2:
                raise InputError(f"line {lineno}: expected a coefficient and exponents")
            if n is None:
                n = len(nums) - 1
            if len(nums) - 1 != n:
                raise InputError(f"line {lineno}: expected {n} exponents")
            terms.append((nums[0], tuple(nums[1:])))
        if n is None:
            raise InputError("cannot infer arity of an empty polynomial")
        return cls(n, terms)

    def to_json(self) -> dict:
        return {"nvars": self.n, "terms": [[c, list(e)] for e, c in self._terms]}

    @classmethod
    def from_json(cls, data: dict | str) -> "SparsePolynomial":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["nvars"], [(c, tuple(e)) for c, e in data["terms"]])
