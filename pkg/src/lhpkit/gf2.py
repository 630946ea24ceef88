"""Exact dense linear algebra over GF(2).

Matrices are stored bit-packed, 64 columns per machine word, so that row
operations (the inner loop of Gaussian elimination) are word-parallel XORs.
A sparse row-support view is derived on demand for message-passing code
that iterates over edges rather than words.

All matrices are immutable after construction; every transformation
returns a new value.  This makes them safe to share across concurrent
Monte Carlo workers.
"""

from __future__ import annotations

import numpy as np

_WORD = 64
_U64_1 = np.uint64(1)


class DimensionError(ValueError):
    """Operands have incompatible shapes for the requested operation."""


def _pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a (rows, cols) 0/1 array into uint64 words, LSB-first."""
    rows, cols = dense.shape
    nwords = max(1, (cols + _WORD - 1) // _WORD)
    padded = np.zeros((rows, nwords * _WORD), dtype=np.uint8)
    padded[:, :cols] = dense
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view("<u8").reshape(rows, nwords).astype(np.uint64, copy=False)


def _unpack_rows(words: np.ndarray, cols: int) -> np.ndarray:
    """Inverse of _pack_rows; returns a (rows, cols) uint8 array."""
    rows = words.shape[0]
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols), dtype=np.uint8)
    as_bytes = words.astype("<u8").view(np.uint8).reshape(rows, -1)
    bits = np.unpackbits(as_bytes, axis=1, bitorder="little")
    return bits[:, :cols].copy()


def pack_vector(v: np.ndarray, length: int) -> np.ndarray:
    """Pack a 0/1 vector into a 1-D uint64 word array."""
    return _pack_rows(np.asarray(v, dtype=np.uint8).reshape(1, length))[0]


class BinaryMatrix:
    """Immutable matrix over GF(2) with bit-packed storage.

    Entries are exactly 0 or 1.  The dense bit-packed form and the sparse
    row-support form are views of the same data and convert losslessly in
    both directions.
    """

    __slots__ = ("rows", "cols", "_words", "_supports")

    def __init__(self, rows: int, cols: int, words: np.ndarray):
        if rows < 0 or cols < 0:
            raise DimensionError(f"negative dimensions ({rows}, {cols})")
        nwords = max(1, (cols + _WORD - 1) // _WORD)
        if words.shape != (rows, nwords):
            raise DimensionError(
                f"word buffer shape {words.shape} does not match "
                f"({rows}, {nwords}) for a {rows}x{cols} matrix"
            )
        words = np.ascontiguousarray(words, dtype=np.uint64)
        # Bits past the column extent must stay zero or equality breaks.
        tail = cols % _WORD
        if cols > 0 and tail:
            words[:, -1] &= np.uint64((1 << tail) - 1)
        words.flags.writeable = False
        self.rows = rows
        self.cols = cols
        self._words = words
        self._supports = None

    # ── constructors ────────────────────────────────────────────────

    @classmethod
    def from_dense(cls, array) -> "BinaryMatrix":
        dense = np.atleast_2d(np.asarray(array))
        if dense.ndim != 2:
            raise DimensionError(f"expected 2-D array, got ndim={dense.ndim}")
        if dense.size and not np.isin(dense, (0, 1)).all():
            raise ValueError("entries must be exactly 0 or 1")
        dense = dense.astype(np.uint8)
        return cls(dense.shape[0], dense.shape[1], _pack_rows(dense))

    @classmethod
    def from_row_supports(cls, rows: int, cols: int, supports) -> "BinaryMatrix":
        """Build from the sparse form: one iterable of column indices per row."""
        if len(supports) != rows:
            raise DimensionError(f"{len(supports)} support lists for {rows} rows")
        nwords = max(1, (cols + _WORD - 1) // _WORD)
        words = np.zeros((rows, nwords), dtype=np.uint64)
        for i, sup in enumerate(supports):
            idx = np.asarray(list(sup), dtype=np.int64)
            if idx.size == 0:
                continue
            if idx.min() < 0 or idx.max() >= cols:
                raise DimensionError(f"row {i} has column index outside [0, {cols})")
            np.bitwise_or.at(words[i], idx // _WORD, _U64_1 << (idx % _WORD).astype(np.uint64))
        return cls(rows, cols, words)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BinaryMatrix":
        nwords = max(1, (cols + _WORD - 1) // _WORD)
        return cls(rows, cols, np.zeros((rows, nwords), dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_text(cls, text: str) -> "BinaryMatrix":
        """Parse the exchange format: first line "rows cols", then 0/1 rows."""
        lines = [ln for ln in text.strip().splitlines()]
        if not lines:
            raise ValueError("empty matrix text")
        head = lines[0].split()
        if len(head) != 2:
            raise ValueError(f"header must be 'rows cols', got {lines[0]!r}")
        rows, cols = int(head[0]), int(head[1])
        body = lines[1:]
        if len(body) != rows:
            raise ValueError(f"expected {rows} rows, got {len(body)}")
        dense = np.zeros((rows, cols), dtype=np.uint8)
        for i, ln in enumerate(body):
            ln = ln.strip()
            if len(ln) != cols or set(ln) - {"0", "1"}:
                raise ValueError(f"row {i} is not {cols} characters of 0/1: {ln!r}")
            dense[i] = np.frombuffer(ln.encode(), dtype=np.uint8) - ord("0")
        return cls.from_dense(dense)

    # ── views ───────────────────────────────────────────────────────

    def to_dense(self) -> np.ndarray:
        return _unpack_rows(self._words, self.cols)

    def to_text(self) -> str:
        head = f"{self.rows} {self.cols}"
        body = ["".join("01"[b] for b in row) for row in self.to_dense()]
        return "\n".join([head] + body) + "\n"

    def row_supports(self) -> list:
        """Sparse form: column indices of the 1-entries, per row (cached)."""
        if self._supports is None:
            dense = self.to_dense()
            self._supports = [np.flatnonzero(dense[i]).astype(np.int64) for i in range(self.rows)]
        return self._supports

    @property
    def words(self) -> np.ndarray:
        """Read-only packed storage (advanced use: decoder elimination)."""
        return self._words

    def get(self, i: int, j: int) -> int:
        return int((self._words[i, j // _WORD] >> np.uint64(j % _WORD)) & _U64_1)

    def nnz(self) -> int:
        return int(np.bitwise_count(self._words).sum())

    def row_weights(self) -> np.ndarray:
        return np.bitwise_count(self._words).sum(axis=1).astype(np.int64)

    def col_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=0).astype(np.int64)

    def is_zero(self) -> bool:
        return not self._words.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self._words, other._words)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"

    # ── algebra ─────────────────────────────────────────────────────

    def transpose(self) -> "BinaryMatrix":
        return BinaryMatrix.from_dense(self.to_dense().T)

    @property
    def T(self) -> "BinaryMatrix":
        return self.transpose()

    def matmul(self, other: "BinaryMatrix") -> "BinaryMatrix":
        """GF(2) matrix product: result (i,j) = parity of row-i/column-j overlap."""
        if self.cols != other.rows:
            raise DimensionError(
                f"matmul: left is {self.rows}x{self.cols}, right is "
                f"{other.rows}x{other.cols}; inner dimensions differ"
            )
        nwords = other._words.shape[1]
        out = np.zeros((self.rows, nwords), dtype=np.uint64)
        bw = other._words
        for i, sup in enumerate(self.row_supports()):
            if sup.size:
                out[i] = np.bitwise_xor.reduce(bw[sup], axis=0)
        return BinaryMatrix(self.rows, other.cols, out)

    def __matmul__(self, other):
        return self.matmul(other)

    def add(self, other: "BinaryMatrix") -> "BinaryMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError(
                f"add: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )
        return BinaryMatrix(self.rows, self.cols, self._words ^ other._words)

    def __xor__(self, other):
        return self.add(other)

    def kron(self, other: "BinaryMatrix") -> "BinaryMatrix":
        """Kronecker product: block (i,j) equals `other` where self(i,j)=1."""
        if self.rows == 0 or self.cols == 0 or other.rows == 0 or other.cols == 0:
            raise DimensionError("kron requires non-empty operands")
        return BinaryMatrix.from_dense(np.kron(self.to_dense(), other.to_dense()))

    def mul_vec(self, v: np.ndarray) -> np.ndarray:
        """Matrix-vector product over GF(2); v is a 0/1 vector of length cols."""
        v = np.asarray(v, dtype=np.uint8)
        if v.shape != (self.cols,):
            raise DimensionError(f"vector length {v.shape} does not match cols={self.cols}")
        vw = pack_vector(v, self.cols)
        return (np.bitwise_count(self._words & vw[None, :]).sum(axis=1) & 1).astype(np.uint8)

    # ── stacking / slicing (construction-time helpers) ──────────────

    @classmethod
    def hstack(cls, blocks) -> "BinaryMatrix":
        mats = list(blocks)
        if not mats:
            raise DimensionError("hstack of nothing")
        return cls.from_dense(np.hstack([m.to_dense() for m in mats]))

    @classmethod
    def vstack(cls, blocks) -> "BinaryMatrix":
        mats = list(blocks)
        if not mats:
            raise DimensionError("vstack of nothing")
        return cls.from_dense(np.vstack([m.to_dense() for m in mats]))

    def col_slice(self, start: int, stop: int) -> "BinaryMatrix":
        return BinaryMatrix.from_dense(self.to_dense()[:, start:stop])

    def row_slice(self, start: int, stop: int) -> "BinaryMatrix":
        return BinaryMatrix.from_dense(self.to_dense()[start:stop, :])

    # ── elimination-based operations ────────────────────────────────

    def rank(self) -> int:
        words = self._words.copy()
        words.flags.writeable = True
        return len(_eliminate(words, self.cols))

    def nullspace_basis(self) -> "BinaryMatrix":
        """Rows form a basis of {x : self @ x = 0}; row count = cols - rank."""
        words = self._words.copy()
        words.flags.writeable = True
        pivots = _eliminate(words, self.cols)
        rank = len(pivots)
        pivot_set = set(pivots)
        free_cols = [c for c in range(self.cols) if c not in pivot_set]
        dense = _unpack_rows(words[:rank], self.cols) if rank else np.zeros((0, self.cols), np.uint8)
        basis = np.zeros((len(free_cols), self.cols), dtype=np.uint8)
        for bi, f in enumerate(free_cols):
            basis[bi, f] = 1
            for r, p in enumerate(pivots):
                basis[bi, p] = dense[r, f]
        return BinaryMatrix.from_dense(basis)

    def solve(self, s: np.ndarray):
        """Solve self @ x = s; returns a 0/1 vector or None when inconsistent."""
        s = np.asarray(s, dtype=np.uint8)
        if s.shape != (self.rows,):
            raise DimensionError(f"rhs length {s.shape} does not match rows={self.rows}")
        nwords = self._words.shape[1]
        aug = np.zeros((self.rows, nwords + 1), dtype=np.uint64)
        aug[:, :nwords] = self._words
        aug[:, nwords] = s.astype(np.uint64)
        pivots = _eliminate(aug, self.cols)
        rank = len(pivots)
        if aug[rank:, nwords].any():
            return None
        x = np.zeros(self.cols, dtype=np.uint8)
        x[pivots] = aug[:rank, nwords].astype(np.uint8)
        return x

    def row_basis(self) -> "BinaryMatrix":
        """A full-rank matrix with the same row space (RREF rows)."""
        words = self._words.copy()
        words.flags.writeable = True
        pivots = _eliminate(words, self.cols)
        return BinaryMatrix(len(pivots), self.cols, words[: len(pivots)].copy())


def _eliminate(words: np.ndarray, cols: int, pivot_cols: int | None = None) -> list:
    """In-place reduced row echelon form over GF(2) on packed words.

    Pivots are searched in the first `pivot_cols` columns (all by default);
    row operations always apply to the full word width, so augmented
    columns ride along.  Returns the list of pivot column indices.
    """
    m = words.shape[0]
    if pivot_cols is None:
        pivot_cols = cols
    pivots: list[int] = []
    pr = 0
    for c in range(pivot_cols):
        if pr == m:
            break
        w, b = divmod(c, _WORD)
        shift = np.uint64(b)
        col = (words[pr:, w] >> shift) & _U64_1
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        piv = pr + int(nz[0])
        if piv != pr:
            words[[pr, piv]] = words[[piv, pr]]
        col_all = (words[:, w] >> shift) & _U64_1
        col_all[pr] = 0
        hit = np.flatnonzero(col_all)
        if hit.size:
            words[hit] ^= words[pr]
        pivots.append(c)
        pr += 1
    return pivots


def matmul(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    return a.matmul(b)


def kron(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    return a.kron(b)


def rank(m: BinaryMatrix) -> int:
    return m.rank()


def nullspace_basis(m: BinaryMatrix) -> BinaryMatrix:
    return m.nullspace_basis()


def solve(m: BinaryMatrix, s: np.ndarray):
    return m.solve(s)
