"""2D CSS constructions: hypergraph product, lifted product, bias tailoring.

The bias-tailoring column swap is the matrix image of a Hadamard rotation
on a qubit sector.  Conjugating the code and immediately relabelling the
Pauli frame on that sector leaves the CSS matrices unchanged, so a
tailored code is represented here as the original matrices plus a
recorded sector boundary; the simulation layer consumes the boundary by
exchanging X/Z error roles on the rotated qubits.  The literal
swapped-layout matrices (which carry mixed-type stabilizers and are not a
CSS pair on their own) are available for inspection via
`overlay_matrices` / `mixed_form` and are validated symplectically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np

from .gf2 import BinaryMatrix, DimensionError
from .protograph import Protograph


class ConstructionError(ValueError):
    """A code construction violated a structural invariant."""


@dataclass(frozen=True)
class CssCode:
    """A CSS code: parity checks, optional metachecks, logical bases.

    `canonical_split` is the block boundary where the bias-tailoring
    sector starts; `tailored_boundary` is set when this object represents
    the Hadamard-rotated code (stored in the rotated frame, matrices
    identical to the untailored ones).
    """

    hx: BinaryMatrix
    hz: BinaryMatrix
    mx: BinaryMatrix | None
    mz: BinaryMatrix | None
    lx: BinaryMatrix
    lz: BinaryMatrix
    n: int
    k: int
    canonical_split: int | None = None
    tailored_boundary: int | None = None

    def validate(self) -> list[str]:
        """Return a list of violated invariants (empty when healthy)."""
        problems = []
        if not (self.hx.cols == self.hz.cols == self.n):
            problems.append(
                f"column counts disagree: hx {self.hx.cols}, hz {self.hz.cols}, n {self.n}"
            )
        if not (self.hx @ self.hz.T).is_zero():
            problems.append("hx @ hz^T != 0")
        if self.mx is not None and not (self.mx @ self.hx).is_zero():
            problems.append("mx @ hx != 0")
        if self.mz is not None and not (self.mz @ self.hz).is_zero():
            problems.append("mz @ hz != 0")
        k = self.n - self.hx.rank() - self.hz.rank()
        if k != self.k:
            problems.append(f"k = {self.k} but n - rank(hx) - rank(hz) = {k}")
        if self.lx.rows != self.k or self.lz.rows != self.k:
            problems.append(
                f"logical bases have {self.lx.rows}/{self.lz.rows} rows, expected k = {self.k}"
            )
        if self.k:
            if not (self.lx @ self.hz.T).is_zero():
                problems.append("lx rows are not in ker(hz)")
            if not (self.lz @ self.hx.T).is_zero():
                problems.append("lz rows are not in ker(hx)")
            if (self.lx @ self.lz.T).rank() != self.k:
                problems.append("lx @ lz^T is not full rank")
        return problems


def compute_logicals(hx: BinaryMatrix, hz: BinaryMatrix) -> tuple[BinaryMatrix, BinaryMatrix]:
    """Logical operator bases: lx spans ker(hz) mod rowspace(hx), lz dually.

    The returned pair is canonicalized so that lx @ lz^T = I_k.
    """
    if not (hx @ hz.T).is_zero():
        raise ConstructionError("hx @ hz^T != 0; not a CSS pair")
    lx = _quotient_basis(hz, hx)
    lz = _quotient_basis(hx, hz)
    k = hx.cols - hx.rank() - hz.rank()
    if lx.rows != k or lz.rows != k:
        raise ConstructionError(
            f"logical extraction produced {lx.rows}/{lz.rows} rows, expected {k}"
        )
    if k == 0:
        return lx, lz
    pairing = lx @ lz.T
    inv = _invert(pairing)
    if inv is None:
        raise ConstructionError("lx @ lz^T is singular; bases do not pair")
    return inv @ lx, lz


def _quotient_basis(kernel_of: BinaryMatrix, modulo: BinaryMatrix) -> BinaryMatrix:
    """Basis of ker(kernel_of) / rowspace(modulo), rows reduced and deterministic."""
    kern = kernel_of.nullspace_basis()
    stab = modulo.row_basis()
    n = kernel_of.cols
    # Reduce each kernel vector against the stabilizer rows plus the
    # representatives accepted so far; nonzero remainders are new logicals.
    basis_rows = [stab.to_dense()[i] for i in range(stab.rows)]
    accepted = []
    kern_dense = kern.to_dense()
    for v in kern_dense:
        r = _reduce_against(v.copy(), basis_rows)
        if r.any():
            accepted.append(r)
            basis_rows.append(r)
    if not accepted:
        return BinaryMatrix.zeros(0, n)
    return BinaryMatrix.from_dense(np.array(accepted, dtype=np.uint8))


def _reduce_against(v: np.ndarray, rows: list) -> np.ndarray:
    """Reduce v by the leading-bit positions of the given (reduced) rows."""
    for r in rows:
        lead = int(np.argmax(r))
        if r[lead] and v[lead]:
            v ^= r
    return v


def _invert(m: BinaryMatrix):
    """Inverse of a square GF(2) matrix, or None when singular."""
    k = m.rows
    if k != m.cols:
        return None
    aug = np.hstack([m.to_dense(), np.eye(k, dtype=np.uint8)])
    a = BinaryMatrix.from_dense(aug)
    words = a.words.copy()
    words.flags.writeable = True
    from .gf2 import _eliminate

    pivots = _eliminate(words, k)
    if len(pivots) != k:
        return None
    from .gf2 import _unpack_rows

    reduced = _unpack_rows(words, 2 * k)
    return BinaryMatrix.from_dense(reduced[:, k:])


def hgp(h1: BinaryMatrix, h2: BinaryMatrix) -> CssCode:
    """Hypergraph product of two classical parity-check matrices.

    H_Z = [H1 x I_n2 | I_m1 x H2^T], H_X = [I_n1 x H2 | H1^T x I_m2];
    n = n1*n2 + m1*m2 and the CSS condition holds by construction.
    """
    if h1.rows == 0 or h1.cols == 0 or h2.rows == 0 or h2.cols == 0:
        raise DimensionError("hgp requires non-empty seed matrices")
    m1, n1 = h1.rows, h1.cols
    m2, n2 = h2.rows, h2.cols
    hz = BinaryMatrix.hstack(
        [h1.kron(BinaryMatrix.identity(n2)), BinaryMatrix.identity(m1).kron(h2.T)]
    )
    hx = BinaryMatrix.hstack(
        [BinaryMatrix.identity(n1).kron(h2), h1.T.kron(BinaryMatrix.identity(m2))]
    )
    if not (hx @ hz.T).is_zero():
        raise ConstructionError("hgp blocks violate hx @ hz^T = 0 (construction bug)")
    n = n1 * n2 + m1 * m2
    lx, lz = compute_logicals(hx, hz)
    k = n - hx.rank() - hz.rank()
    return CssCode(
        hx=hx, hz=hz, mx=None, mz=None, lx=lx, lz=lz, n=n, k=k,
        canonical_split=n1 * n2,
    )


def lifted_product(a1: Protograph, a2: Protograph, L: int, tailored: bool = False) -> CssCode:
    """Lifted product of two protographs at lift size L.

    The HGP block structure is assembled over the ring of circulants
    (identity blocks are diagonal λ(0)) and compiled to binary by lifting,
    so the blocklength is (n1*n2 + m1*m2) * L, linear in L.  With
    `tailored=True` the returned code carries the bias-tailored sector
    marker at the canonical block boundary (the A-prime layout).
    """
    if L < 2:
        raise ValueError(f"lift size must be >= 2 for a lifted product, got {L}")
    hxp, hzp = lifted_product_protographs(a1, a2)
    hx = hxp.lift(L)
    hz = hzp.lift(L)
    if not (hx @ hz.T).is_zero():
        raise ConstructionError(
            "lifted product violates the chain condition after lifting "
            "(construction bug)"
        )
    n = hx.cols
    lx, lz = compute_logicals(hx, hz)
    k = n - hx.rank() - hz.rank()
    code = CssCode(
        hx=hx, hz=hz, mx=None, mz=None, lx=lx, lz=lz, n=n, k=k,
        canonical_split=a1.cols * a2.cols * L,
    )
    if tailored:
        code = bias_tailor_swap(code, code.canonical_split)
    return code


def lifted_product_protographs(a1: Protograph, a2: Protograph) -> tuple[Protograph, Protograph]:
    """Symbolic HGP blocks: (H_X, H_Z) as protographs."""
    m1, n1 = a1.rows, a1.cols
    m2, n2 = a2.rows, a2.cols
    i_n1 = Protograph.identity(n1)
    i_n2 = Protograph.identity(n2)
    i_m1 = Protograph.identity(m1)
    i_m2 = Protograph.identity(m2)
    hx = _proto_hstack(i_n1.kron(a2), a1.T.kron(i_m2))
    hz = _proto_hstack(a1.kron(i_n2), i_m1.kron(a2.T))
    return hx, hz


def _proto_hstack(a: Protograph, b: Protograph) -> Protograph:
    if a.rows != b.rows:
        raise ValueError(f"hstack: {a.rows} vs {b.rows} rows")
    return Protograph(tuple(ra + rb for ra, rb in zip(a.cells, b.cells)))


def bias_tailor_swap(code: CssCode, split: int) -> CssCode:
    """Hadamard-rotate the qubits at columns >= split.

    The rotated code is stored in the rotated Pauli frame, where its CSS
    matrices, metachecks and logicals coincide with the originals; only
    the sector boundary is recorded.  Applying the swap twice at the same
    split restores the original code bit-exactly.  The literal swapped
    matrix layout is exposed by `overlay_matrices` / `mixed_form`.
    """
    if not 0 < split <= code.n:
        raise ValueError(f"split {split} outside (0, {code.n}]")
    if split == code.n:
        return code  # empty sector: the rotation is a no-op
    comm = mixed_form_commutation(code, split)
    if comm is not None and not comm.is_zero():
        raise ConstructionError(
            "swapped stabilizers do not commute; the input is not a valid CSS code"
        )
    if code.tailored_boundary is not None:
        if code.tailored_boundary != split:
            raise ValueError(
                f"code already tailored at {code.tailored_boundary}; "
                f"cannot re-tailor at {split}"
            )
        return replace(code, tailored_boundary=None)
    return replace(code, tailored_boundary=split)


def mixed_form(code: CssCode, split: int | None = None) -> tuple[BinaryMatrix, BinaryMatrix]:
    """Symplectic (X-part, Z-part) of the swapped-layout stabilizers.

    Rows are the original X-checks followed by the original Z-checks; a
    generator's Pauli content on the rotated sector is exchanged, so the
    result generally carries mixed-type stabilizers.
    """
    b = code.canonical_split if split is None else split
    if b is None:
        raise ValueError("code has no canonical split; pass one explicitly")
    zx = BinaryMatrix.zeros(code.hx.rows, code.n - b)
    zz = BinaryMatrix.zeros(code.hz.rows, code.n - b)
    zxl = BinaryMatrix.zeros(code.hx.rows, b)
    zzl = BinaryMatrix.zeros(code.hz.rows, b)
    gx = BinaryMatrix.vstack(
        [
            BinaryMatrix.hstack([code.hx.col_slice(0, b), zx]),
            BinaryMatrix.hstack([zzl, code.hz.col_slice(b, code.n)]),
        ]
    )
    gz = BinaryMatrix.vstack(
        [
            BinaryMatrix.hstack([zxl, code.hx.col_slice(b, code.n)]),
            BinaryMatrix.hstack([code.hz.col_slice(0, b), zz]),
        ]
    )
    return gx, gz


def mixed_form_commutation(code: CssCode, split: int | None = None):
    """gx @ gz^T + gz @ gx^T for the mixed form; zero iff generators commute."""
    try:
        gx, gz = mixed_form(code, split)
    except ValueError:
        return None
    return (gx @ gz.T) ^ (gz @ gx.T)


def overlay_matrices(code: CssCode, split: int | None = None) -> tuple[BinaryMatrix, BinaryMatrix]:
    """Row-aligned swapped layout: ([hx_l | hz_r], [hz_l | hx_r]).

    This is the compact display form of the rotated stabilizers; it
    requires hx and hz to have equal row counts and is *not* itself a
    CSS pair (the generators are mixed-type).
    """
    b = code.canonical_split if split is None else split
    if b is None:
        raise ValueError("code has no canonical split; pass one explicitly")
    if code.hx.rows != code.hz.rows:
        raise DimensionError(
            f"overlay needs matching row counts, got {code.hx.rows} and {code.hz.rows}"
        )
    hxp = BinaryMatrix.hstack([code.hx.col_slice(0, b), code.hz.col_slice(b, code.n)])
    hzp = BinaryMatrix.hstack([code.hz.col_slice(0, b), code.hx.col_slice(b, code.n)])
    return hxp, hzp


def estimate_distance(
    code: CssCode,
    budget: int,
    seed: int = 0,
    exhaustive_cap: int = 20_000_000,
) -> tuple[int, int]:
    """Estimate the code distance.

    upper_bound: minimum weight found among logical-coset representatives
    via randomized information-set search within `budget` restarts.
    lower_hint: the largest w such that exhausting all errors of weight
    < w found no logical operator (so d >= lower_hint); exhaustion stops
    once the candidate count exceeds `exhaustive_cap` or a logical
    operator is found.
    """
    if code.k < 1:
        raise ValueError("distance is undefined for k = 0")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    upper = min(
        _is_search_min_weight(code.hz, code.lz, code.lx, budget, seed),
        _is_search_min_weight(code.hx, code.lx, code.lz, budget, seed + 1),
    )
    lower, hit = _exhaustive_lower(code, exhaustive_cap, upper)
    if hit is not None:
        upper = min(upper, hit)
    return lower, upper


def _is_search_min_weight(
    stab: BinaryMatrix, logi_same: BinaryMatrix, logi_dual: BinaryMatrix,
    budget: int, seed: int,
) -> int:
    """Randomized information-set search over the span of stab rows + logicals.

    Returns the minimum weight seen among span elements that anticommute
    with at least one dual logical (i.e. genuine logical operators).
    """
    gen = BinaryMatrix.vstack([stab.row_basis(), logi_same]).to_dense()
    dual = logi_dual.to_dense()
    rng = np.random.default_rng(seed)
    best = gen.shape[1] + 1
    rows_words = BinaryMatrix.from_dense(gen)
    for _ in range(budget):
        perm = rng.permutation(gen.shape[1])
        permuted = gen[:, perm]
        reduced = _rref_dense(permuted)
        candidates = reduced[reduced.any(axis=1)]
        back = np.empty_like(perm)
        back[perm] = np.arange(perm.size)
        cand = candidates[:, back]
        # keep only rows acting nontrivially on the logical algebra
        pair = (cand @ dual.T) % 2
        logical = cand[pair.any(axis=1)]
        if logical.size:
            w = int(logical.sum(axis=1).min())
            best = min(best, w)
    return best


def _rref_dense(a: np.ndarray) -> np.ndarray:
    m = BinaryMatrix.from_dense(a)
    words = m.words.copy()
    words.flags.writeable = True
    from .gf2 import _eliminate, _unpack_rows

    _eliminate(words, a.shape[1])
    return _unpack_rows(words, a.shape[1])


def _exhaustive_lower(code: CssCode, cap: int, stop_at: int) -> tuple[int, int | None]:
    """Exhaust error weights 1, 2, ... while the candidate count fits the cap.

    Returns (lower_hint, weight_of_found_logical_or_None).
    """
    n = code.n
    hx = code.hx.to_dense()
    hz = code.hz.to_dense()
    lx = code.lx.to_dense()
    lz = code.lz.to_dense()
    total = 0
    w = 0
    while True:
        w += 1
        if w > stop_at:
            return w, None
        count = 1
        for i in range(w):
            count = count * (n - i) // (i + 1)
        total += count
        if total > cap:
            return w, None
        for support in itertools.combinations(range(n), w):
            sup = list(support)
            ez = np.zeros(n, dtype=np.uint8)
            ez[sup] = 1
            if not (hx @ ez % 2).any() and (lx @ ez % 2).any():
                return w, w
            if not (hz @ ez % 2).any() and (lz @ ez % 2).any():
                return w, w
