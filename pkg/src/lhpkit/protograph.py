"""Symbolic quasi-cyclic matrices over the ring of circulants.

A ring element is a GF(2) sum of cyclic-shift permutation matrices,
written λ(a, b, ...).  Addition is symmetric difference of the shift
sets (duplicates cancel pairwise); multiplication adds shifts pairwise
and collapses duplicates mod 2.  Shifts may be negative and are reduced
modulo the lift size L only at lift time, so one protograph can be
compiled at many L.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .gf2 import BinaryMatrix


class ProtographParseError(ValueError):
    """Malformed protograph text; carries 1-based line/column position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


def _collapse_mod2(values) -> frozenset:
    """Keep the values that occur an odd number of times."""
    counts: dict[int, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return frozenset(v for v, c in counts.items() if c % 2)


@dataclass(frozen=True)
class RingElement:
    """A sum of cyclic shifts; the empty set is the ring zero λ()."""

    shifts: frozenset

    def __add__(self, other: "RingElement") -> "RingElement":
        return RingElement(self.shifts ^ other.shifts)

    def __mul__(self, other: "RingElement") -> "RingElement":
        return RingElement(
            _collapse_mod2(a + b for a in self.shifts for b in other.shifts)
        )

    def transpose(self) -> "RingElement":
        return RingElement(frozenset(-a for a in self.shifts))

    def is_zero(self) -> bool:
        return not self.shifts

    def weight(self) -> int:
        return len(self.shifts)

    def lift(self, L: int) -> np.ndarray:
        """L x L binary circulant: sum of right-shifted identities."""
        if L < 1:
            raise ValueError(f"lift size must be >= 1, got {L}")
        block = np.zeros((L, L), dtype=np.uint8)
        rows = np.arange(L)
        for s in _collapse_mod2(a % L for a in self.shifts):
            block[rows, (rows + s) % L] ^= 1
        return block

    def render(self) -> str:
        return "λ(" + ",".join(str(s) for s in sorted(self.shifts)) + ")"

    def __repr__(self) -> str:
        return self.render()


def lam(*shifts: int) -> RingElement:
    """λ(a, b, ...) with mod-2 collapse of duplicates; λ() is the zero."""
    return RingElement(_collapse_mod2(shifts))


RING_ZERO = lam()
RING_ONE = lam(0)


def ring_add(x: RingElement, y: RingElement) -> RingElement:
    return x + y


def ring_mul(x: RingElement, y: RingElement) -> RingElement:
    return x * y


@dataclass(frozen=True)
class Protograph:
    """Rectangular grid of ring elements."""

    cells: tuple

    def __post_init__(self):
        widths = {len(r) for r in self.cells}
        if len(widths) > 1:
            raise ValueError(f"ragged protograph: row widths {sorted(widths)}")

    @classmethod
    def from_lists(cls, rows) -> "Protograph":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Protograph":
        return cls(tuple(tuple(RING_ZERO for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "Protograph":
        return cls(
            tuple(
                tuple(RING_ONE if i == j else RING_ZERO for j in range(n))
                for i in range(n)
            )
        )

    @property
    def rows(self) -> int:
        return len(self.cells)

    @property
    def cols(self) -> int:
        return len(self.cells[0]) if self.cells else 0

    def cell(self, i: int, j: int) -> RingElement:
        return self.cells[i][j]

    def transpose(self) -> "Protograph":
        """Swap cells across the diagonal and negate every shift."""
        return Protograph(
            tuple(
                tuple(self.cells[i][j].transpose() for i in range(self.rows))
                for j in range(self.cols)
            )
        )

    @property
    def T(self) -> "Protograph":
        return self.transpose()

    def __add__(self, other: "Protograph") -> "Protograph":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError(
                f"add: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )
        return Protograph(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.cells, other.cells)
            )
        )

    def __matmul__(self, other: "Protograph") -> "Protograph":
        """Matrix product with ring_mul/ring_add as the scalar operations."""
        if self.cols != other.rows:
            raise ValueError(
                f"matmul: {self.rows}x{self.cols} times {other.rows}x{other.cols}"
            )
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = RING_ZERO
                for t in range(self.cols):
                    acc = acc + self.cells[i][t] * other.cells[t][j]
                row.append(acc)
            out.append(tuple(row))
        return Protograph(tuple(out))

    def kron(self, other: "Protograph") -> "Protograph":
        """Kronecker structure with ring multiplication of the entries.

        This is the lifted-product convention: composing λ^a with λ^b gives
        λ^(a+b) in a single L x L block, so blocklength stays linear in L.
        """
        out = []
        for i in range(self.rows):
            for k in range(other.rows):
                row = []
                for j in range(self.cols):
                    for l in range(other.cols):
                        row.append(self.cells[i][j] * other.cells[k][l])
                out.append(tuple(row))
        return Protograph(tuple(out))

    def lift(self, L: int) -> BinaryMatrix:
        """Expand into a binary matrix of size (rows*L, cols*L)."""
        if L < 1:
            raise ValueError(f"lift size must be >= 1, got {L}")
        dense = np.zeros((self.rows * L, self.cols * L), dtype=np.uint8)
        for i in range(self.rows):
            for j in range(self.cols):
                c = self.cells[i][j]
                if not c.is_zero():
                    dense[i * L : (i + 1) * L, j * L : (j + 1) * L] = c.lift(L)
        return BinaryMatrix.from_dense(dense)

    def total_weight(self) -> int:
        return sum(c.weight() for row in self.cells for c in row)

    def render(self) -> str:
        return "\n".join(" ".join(c.render() for c in row) for row in self.cells)

    def __repr__(self) -> str:
        return f"Protograph({self.rows}x{self.cols})"


def proto_matmul(a: Protograph, b: Protograph) -> Protograph:
    return a @ b


# Cell grammar: λ(...) with integer shifts, λ() for the zero, "0" as an
# alias for λ(); "L" is an ASCII alias for λ.  Whitespace may follow commas.
_CELL_RE = re.compile(r"(?:λ|L)\(\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*\)|0")
_INT_RE = re.compile(r"-?\d+")


def parse_protograph(text: str) -> Protograph:
    """Parse protograph text; rows split on newlines or ';', cells on spaces."""
    rows = []
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        for part in raw.split(";"):
            lines.append((lineno, raw, part))
    for lineno, raw, part in lines:
        if not part.strip():
            continue
        offset = raw.find(part)
        pos = 0
        row = []
        while pos < len(part):
            if part[pos].isspace():
                pos += 1
                continue
            m = _CELL_RE.match(part, pos)
            if m is None:
                raise ProtographParseError(
                    f"cannot parse cell starting at {part[pos:pos+12]!r}",
                    lineno,
                    offset + pos + 1,
                )
            if m.group(0) == "0":
                row.append(RING_ZERO)
            else:
                inner = m.group(1)
                shifts = [int(t) for t in _INT_RE.findall(inner)] if inner else []
                row.append(lam(*shifts))
            pos = m.end()
        rows.append(tuple(row))
    if not rows:
        raise ProtographParseError("no rows found", 1, 1)
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        bad = next(i for i, r in enumerate(rows) if len(r) != len(rows[0]))
        raise ProtographParseError(
            f"ragged rows: row {bad + 1} has {len(rows[bad])} cells, "
            f"row 1 has {len(rows[0])}",
            bad + 1,
            1,
        )
    return Protograph(tuple(rows))


def render_protograph(p: Protograph) -> str:
    return p.render()
