"""Division-free straight-line programs: data model, text format, evaluation.

Text format, one instruction per line::

    # nvars: 2
    b1 = z1 * z2
    b2 = b1 + 3

Operands are inputs ``z<j>`` (1-based), earlier results ``b<i>`` or decimal
constants (F_q codes).  Ops are ``+ - *``.  ``#`` starts a comment; the
optional ``# nvars: n`` directive fixes the arity.  The last instruction is
the output.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Protocol, Sequence

import numpy as np

from .cyclic import CyclicBatchRing, CyclicPoly
from .errors import InputError, SlpSyntaxError
from .ff import ExtElem, FieldTower
from .polynomial import SparsePolynomial

OPS = ("+", "-", "*")


@dataclass(frozen=True)
class Operand:
    kind: str  # "z" input, "b" prior result, "c" constant
    index: int  # 1-based for z and b; the constant's value for c

    def __str__(self) -> str:
        return str(self.index) if self.kind == "c" else f"{self.kind}{self.index}"


def z(j: int) -> Operand:
    return Operand("z", j)


def b(k: int) -> Operand:
    return Operand("b", k)


def const(c: int) -> Operand:
    return Operand("c", c)


@dataclass(frozen=True)
class Instruction:
    op: str
    lhs: Operand
    rhs: Operand


@dataclass(frozen=True)
class Slp:
    arity: int
    instructions: tuple[Instruction, ...]

    def __post_init__(self):
        if self.arity < 1:
            raise InputError("SLP arity must be >= 1")
        if not self.instructions:
            raise InputError("SLP must have at least one instruction")
        for k, ins in enumerate(self.instructions, 1):
            if ins.op not in OPS:
                raise SlpSyntaxError(f"unknown operator {ins.op!r}", k)
            for opd in (ins.lhs, ins.rhs):
                if opd.kind == "z" and not 1 <= opd.index <= self.arity:
                    raise SlpSyntaxError(f"input z{opd.index} outside 1..{self.arity}", k)
                if opd.kind == "b" and not 1 <= opd.index < k:
                    raise SlpSyntaxError(f"b{opd.index} is not an earlier result", k)
                if opd.kind == "c" and opd.index < 0:
                    raise SlpSyntaxError("constants must be non-negative", k)
                if opd.kind not in ("z", "b", "c"):
                    raise SlpSyntaxError(f"unknown operand kind {opd.kind!r}", k)

    def __len__(self) -> int:
        return len(self.instructions)


_LINE = re.compile(r"^b(\d+)\s*=\s*(\S+)\s*([-+*])\s*(\S+)$")
_NVARS = re.compile(r"^#\s*nvars\s*:\s*(\d+)\s*$")


def _parse_operand(tok: str, lineno: int) -> Operand:
    if tok.isdigit():
        return const(int(tok))
    m = re.fullmatch(r"([zb])(\d+)", tok)
    if not m:
        raise SlpSyntaxError(f"unknown symbol {tok!r}", lineno)
    return Operand(m.group(1), int(m.group(2)))


def parse_slp(text: str, arity: int | None = None) -> Slp:
    declared = None
    instructions: list[Instruction] = []
    max_z = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        m = _NVARS.match(stripped)
        if m:
            declared = int(m.group(1))
            continue
        line = stripped.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise SlpSyntaxError(f"cannot parse {line!r}", lineno)
        k = int(m.group(1))
        if k != len(instructions) + 1:
            raise SlpSyntaxError(f"expected b{len(instructions) + 1}, got b{k}", lineno)
        lhs = _parse_operand(m.group(2), lineno)
        rhs = _parse_operand(m.group(4), lineno)
        for opd in (lhs, rhs):
            if opd.kind == "b" and not 1 <= opd.index < k:
                raise SlpSyntaxError(f"forward reference to b{opd.index}", lineno)
            if opd.kind == "z":
                if opd.index < 1:
                    raise SlpSyntaxError("inputs are numbered from z1", lineno)
                max_z = max(max_z, opd.index)
        instructions.append(Instruction(m.group(3), lhs, rhs))
    if not instructions:
        raise SlpSyntaxError("empty program")
    n = arity if arity is not None else declared if declared is not None else max(max_z, 1)
    if max_z > n:
        raise SlpSyntaxError(f"program uses z{max_z} but arity is {n}")
    return Slp(n, tuple(instructions))


def format_slp(slp: Slp) -> str:
    lines = [f"# nvars: {slp.arity}"]
    for k, ins in enumerate(slp.instructions, 1):
        lines.append(f"b{k} = {ins.lhs} {ins.op} {ins.rhs}")
    return "\n".join(lines) + "\n"


class Ring(Protocol):
    def const(self, c: int) -> Any: ...
    def add(self, a: Any, b: Any) -> Any: ...
    def sub(self, a: Any, b: Any) -> Any: ...
    def mul(self, a: Any, b: Any) -> Any: ...


def eval_in_ring(slp: Slp, inputs: Sequence[Any], ring: Ring) -> Any:
    """Run the program with the given inputs; returns the last result."""
    if len(inputs) != slp.arity:
        raise InputError(f"expected {slp.arity} inputs, got {len(inputs)}")
    results: list[Any] = []

    def fetch(opd: Operand):
        if opd.kind == "z":
            return inputs[opd.index - 1]
        if opd.kind == "b":
            return results[opd.index - 1]
        return ring.const(opd.index)

    for ins in slp.instructions:
        x, y = fetch(ins.lhs), fetch(ins.rhs)
        if ins.op == "+":
            results.append(ring.add(x, y))
        elif ins.op == "-":
            results.append(ring.sub(x, y))
        else:
            results.append(ring.mul(x, y))
    return results[-1]


class FieldRing:
    """Ring context over F_{q^u} scalars."""

    def __init__(self, tower: FieldTower):
        self.tower = tower

    def const(self, c: int) -> ExtElem:
        return self.tower.elem(c)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b


def probe_images(
    slp: Slp,
    scalings: np.ndarray,
    shifts: np.ndarray,
    p: int,
    tower: FieldTower,
) -> np.ndarray:
    """Evaluate a batch of probes ``F(a_b1 x^{v_b1}, ..., a_bn x^{v_bn}) mod (x^p - 1)``.

    ``scalings`` is a ``(B, n, u, v)`` residue array, ``shifts`` a ``(B, n)``
    int array.  Returns the dense ``(B, p, u, v)`` images.
    """
    scalings = np.asarray(scalings)
    shifts = np.asarray(shifts, dtype=np.int64)
    B = shifts.shape[0]
    ring = CyclicBatchRing(tower, p, B)
    inputs = [ring.inputs(scalings[:, j], shifts[:, j]) for j in range(slp.arity)]
    return ring.dense(eval_in_ring(slp, inputs, ring))


def probe_image(
    slp: Slp, a: Sequence[ExtElem], v: Sequence[int], p: int, tower: FieldTower
) -> CyclicPoly:
    """F(a_1 x^{v_1}, ..., a_n x^{v_n}) mod (x^p - 1)."""
    if len(a) != slp.arity or len(v) != slp.arity:
        raise InputError("probe vectors must have the program's arity")
    scal = np.stack([tower.to_array(x) for x in a])[None]
    shifts = np.array([[int(x) % p for x in v]])
    return CyclicPoly(tower, p, probe_images(slp, scal, shifts, p, tower)[0])


def slp_from_sparse(f: SparsePolynomial) -> Slp:
    """A straight-line program computing ``f`` (powers by square-and-multiply)."""
    n = f.n
    if f.is_zero():
        return Slp(n, (Instruction("-", z(1), z(1)),))
    ins: list[Instruction] = []

    def emit(op: str, x: Operand, y: Operand) -> Operand:
        ins.append(Instruction(op, x, y))
        return b(len(ins))

    powers: dict[tuple[int, int], Operand] = {}

    def power(j: int, e: int) -> Operand:
        if (j, e) in powers:
            return powers[(j, e)]
        if e == 1:
            res = z(j)
        elif e % 2 == 0:
            half = power(j, e // 2)
            res = emit("*", half, half)
        else:
            res = emit("*", power(j, e - 1), z(j))
        powers[(j, e)] = res
        return res

    acc: Operand | None = None
    for c, e in f.terms():
        term: Operand | None = None
        for j, x in enumerate(e, 1):
            if x:
                pw = power(j, x)
                term = pw if term is None else emit("*", term, pw)
        if term is None:
            term = const(c)
        elif c != 1:
            term = emit("*", const(c), term)
        acc = term if acc is None else emit("+", acc, term)
    if not ins or acc != b(len(ins)):
        # output must be the last instruction
        emit("+", acc, const(0))
    return Slp(n, tuple(ins))
