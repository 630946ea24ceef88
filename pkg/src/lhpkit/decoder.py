"""Syndrome decoding: belief propagation with ordered-statistics fallback.

BP runs in the log domain on a precomputed edge list of the Tanner
graph.  The product-sum check update uses the numerically stable
phi-function form (phi(x) = -log tanh(x/2) is an involution, so the
all-but-one combination is phi(sum - phi(own))); min-sum tracks the two
smallest magnitudes per check and applies a fixed scale factor.

When BP fails to satisfy the syndrome, OSD re-solves on an information
set of the most error-prone independent columns: columns are ranked by
the BP soft output (most likely in error first, ties broken by lowest
column index), Gaussian elimination picks the first rank(H) independent
columns in that order, OSD-0 solves with all other positions zero, and
order-w sweeps every flip pattern of weight <= w over the leading
non-pivot positions, keeping the minimum-weight syndrome-consistent
candidate.  The returned estimate always reproduces the syndrome when
the syndrome lies in the column space of H.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .gf2 import BinaryMatrix, _eliminate, _unpack_rows

_MSG_CLIP = 35.0
_MIN_MAG = 1e-12


class InconsistentSyndromeError(ValueError):
    """The target syndrome is outside the column space of H.

    Cannot happen for syndromes generated by applying H to a real error;
    occurs when a corrupted syndrome is fed in directly.  Carries the
    best-effort BP state so callers can degrade gracefully.
    """

    def __init__(self, message: str, bp_estimate=None, soft_values=None):
        super().__init__(message)
        self.bp_estimate = bp_estimate
        self.soft_values = soft_values


@dataclass(frozen=True)
class BpConfig:
    """Decoder knobs; defaults balance desk-scale runtime and accuracy."""

    max_iterations: int = 32
    variant: str = "product-sum"  # or "min-sum"
    min_sum_scale: float = 0.625
    osd_order: int = 2
    osd_sweep_cap: int = 40
    schedule: str = "parallel"  # or "serial"

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not 0.0 < self.min_sum_scale <= 1.0:
            raise ValueError("min_sum_scale must be in (0, 1]")
        if self.variant not in ("product-sum", "min-sum"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.schedule not in ("parallel", "serial"):
            raise ValueError(f"unknown schedule {self.schedule!r}")
        if self.osd_order < 0:
            raise ValueError("osd_order must be >= 0")


@dataclass
class DecodeResult:
    """Outcome of one decode call; estimate always satisfies the syndrome."""

    estimate: np.ndarray
    converged: bool
    soft_values: np.ndarray
    stage: str  # "bp", "osd0" or "osdw"
    iterations: int


def _segment_sum(values: np.ndarray, starts: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    """Per-segment sum over a flat edge array; empty segments give 0.

    reduceat runs over the non-empty segments only: empty segments are
    zero-width, so consecutive non-empty starts still delimit exactly one
    segment each (a clipped start would silently shift the previous
    segment's boundary).
    """
    out = np.zeros(len(lengths), dtype=values.dtype)
    nz = np.flatnonzero(lengths > 0)
    if nz.size and values.size:
        out[nz] = np.add.reduceat(values, starts[nz])
    return out


def _segment_min(values: np.ndarray, starts: np.ndarray, lengths: np.ndarray, fill) -> np.ndarray:
    out = np.full(len(lengths), fill, dtype=values.dtype)
    nz = np.flatnonzero(lengths > 0)
    if nz.size and values.size:
        out[nz] = np.minimum.reduceat(values, starts[nz])
    return out


class BpOsdDecoder:
    """Immutable decoder bound to one parity-check matrix.

    The Tanner-graph adjacency is precomputed once; decode calls keep all
    scratch state local, so one instance can serve concurrent trials.
    """

    def __init__(self, h: BinaryMatrix, cfg: BpConfig | None = None):
        self.h = h
        self.cfg = cfg or BpConfig()
        supports = h.row_supports()
        lengths = np.array([s.size for s in supports], dtype=np.int64)
        self._chk_len = lengths
        self._chk_start = np.concatenate([[0], np.cumsum(lengths)[:-1]]).astype(np.int64)
        self._edge_var = (
            np.concatenate(supports).astype(np.int64)
            if lengths.sum()
            else np.zeros(0, dtype=np.int64)
        )
        self._edge_chk = np.repeat(np.arange(h.rows, dtype=np.int64), lengths)
        self._edge_index = np.arange(self._edge_var.size, dtype=np.int64)

    # ── belief propagation ───────────────────────────────────────────

    def bp(self, syndrome: np.ndarray, priors: np.ndarray):
        """Run BP; returns (hard_decision, converged, posteriors, iterations)."""
        h = self.h
        syndrome = np.asarray(syndrome, dtype=np.uint8)
        if syndrome.shape != (h.rows,):
            raise ValueError(f"syndrome length {syndrome.shape} != rows {h.rows}")
        priors = np.asarray(priors, dtype=np.float64)
        if priors.shape != (h.cols,):
            raise ValueError(f"priors length {priors.shape} != cols {h.cols}")
        if np.any(priors <= 0.0) or np.any(priors >= 1.0):
            raise ValueError("priors must lie strictly inside (0, 1)")
        prior_llr = np.log((1.0 - priors) / priors)

        post = prior_llr.copy()
        hard = (post < 0).astype(np.uint8)
        if self._matches(hard, syndrome):
            return hard, True, post, 0

        if self.cfg.schedule == "serial":
            return self._bp_serial(syndrome, prior_llr)

        ev, ec = self._edge_var, self._edge_chk
        starts, lens = self._chk_start, self._chk_len
        syn_sign = syndrome.astype(np.int64)
        v2c = prior_llr[ev]
        for it in range(1, self.cfg.max_iterations + 1):
            c2v = self._check_update(v2c, syn_sign)
            totals = prior_llr + np.bincount(ev, weights=c2v, minlength=self.h.cols)
            post = totals
            hard = (post < 0).astype(np.uint8)
            if self._matches(hard, syndrome):
                return hard, True, post, it
            v2c = np.clip(totals[ev] - c2v, -_MSG_CLIP, _MSG_CLIP)
        return hard, False, post, self.cfg.max_iterations

    def _check_update(self, v2c: np.ndarray, syn_sign: np.ndarray) -> np.ndarray:
        ev, ec = self._edge_var, self._edge_chk
        starts, lens = self._chk_start, self._chk_len
        neg = (v2c < 0).astype(np.int64)
        parity = _segment_sum(neg, starts, lens) & 1
        ext_neg = (parity[ec] ^ neg ^ syn_sign[ec]).astype(np.float64)
        sign = 1.0 - 2.0 * ext_neg
        mags = np.maximum(np.abs(v2c), _MIN_MAG)
        if self.cfg.variant == "product-sum":
            phi = -np.log(np.tanh(np.minimum(mags, _MSG_CLIP) / 2.0))
            tot = _segment_sum(phi, starts, lens)
            rest = np.maximum(tot[ec] - phi, _MIN_MAG)
            ext = -np.log(np.tanh(np.minimum(rest, _MSG_CLIP) / 2.0))
            ext = np.minimum(ext, _MSG_CLIP)
        else:
            m1 = _segment_min(mags, starts, lens, np.inf)
            at_min = mags <= m1[ec]
            pos = np.where(at_min, self._edge_index, self._edge_var.size)
            first = _segment_min(pos, starts, lens, self._edge_var.size)
            masked = mags.copy()
            hit = first[first < self._edge_var.size]
            masked[hit] = np.inf
            m2 = _segment_min(masked, starts, lens, np.inf)
            ext = np.where(self._edge_index == first[ec], m2[ec], m1[ec])
            ext = np.minimum(ext, _MSG_CLIP) * self.cfg.min_sum_scale
        return sign * ext

    def _bp_serial(self, syndrome: np.ndarray, prior_llr: np.ndarray):
        """Serial (check-by-check) schedule; freshest messages used in order."""
        ev = self._edge_var
        starts, lens = self._chk_start, self._chk_len
        c2v = np.zeros(ev.size, dtype=np.float64)
        totals = prior_llr.copy()
        for it in range(1, self.cfg.max_iterations + 1):
            for c in range(self.h.rows):
                seg = slice(starts[c], starts[c] + lens[c])
                vs = ev[seg]
                if vs.size == 0:
                    continue
                incoming = np.clip(totals[vs] - c2v[seg], -_MSG_CLIP, _MSG_CLIP)
                neg = incoming < 0
                parity = int(neg.sum() & 1) ^ int(syndrome[c])
                # extrinsic sign: overall parity with the own contribution removed
                s = np.where(neg ^ bool(parity), -1.0, 1.0)
                mags = np.maximum(np.abs(incoming), _MIN_MAG)
                if self.cfg.variant == "product-sum":
                    phi = -np.log(np.tanh(np.minimum(mags, _MSG_CLIP) / 2.0))
                    rest = np.maximum(phi.sum() - phi, _MIN_MAG)
                    ext = np.minimum(-np.log(np.tanh(np.minimum(rest, _MSG_CLIP) / 2.0)), _MSG_CLIP)
                else:
                    order = np.argsort(mags, kind="stable")
                    m1, m2 = mags[order[0]], mags[order[1]] if mags.size > 1 else np.inf
                    ext = np.where(np.arange(vs.size) == order[0], m2, m1)
                    ext = np.minimum(ext, _MSG_CLIP) * self.cfg.min_sum_scale
                new = s * ext
                totals[vs] += new - c2v[seg]
                c2v[seg] = new
            hard = (totals < 0).astype(np.uint8)
            if self._matches(hard, syndrome):
                return hard, True, totals, it
        return hard, False, totals, self.cfg.max_iterations

    def _matches(self, estimate: np.ndarray, syndrome: np.ndarray) -> bool:
        if self._edge_var.size == 0:
            return not syndrome.any()
        par = _segment_sum(estimate[self._edge_var].astype(np.int64), self._chk_start, self._chk_len) & 1
        return bool(np.array_equal(par.astype(np.uint8), syndrome))

    # ── ordered statistics ───────────────────────────────────────────

    def osd(self, syndrome: np.ndarray, soft_values: np.ndarray):
        """OSD post-processing; returns (estimate, swept_improved)."""
        return _osd_core(
            self.h, syndrome, soft_values, self.cfg.osd_order, self.cfg.osd_sweep_cap
        )

    def decode(self, syndrome: np.ndarray, priors: np.ndarray) -> DecodeResult:
        """BP first; on non-convergence fall back to OSD (always consistent)."""
        hard, converged, post, iters = self.bp(syndrome, priors)
        if converged:
            return DecodeResult(hard, True, post, "bp", iters)
        try:
            estimate, improved = self.osd(syndrome, post)
        except InconsistentSyndromeError as err:
            raise InconsistentSyndromeError(
                str(err), bp_estimate=hard, soft_values=post
            ) from None
        stage = "osdw" if improved else "osd0"
        return DecodeResult(estimate, False, post, stage, iters)


def _osd_core(h: BinaryMatrix, syndrome, soft_values, order: int, sweep_cap: int):
    syndrome = np.asarray(syndrome, dtype=np.uint8)
    soft = np.asarray(soft_values, dtype=np.float64)
    n = h.cols
    if soft.shape != (n,):
        raise ValueError(f"soft values length {soft.shape} != cols {n}")
    if syndrome.shape != (h.rows,):
        raise ValueError(f"syndrome length {syndrome.shape} != rows {h.rows}")
    # Most error-prone first: ascending LLR, ties by lowest column index.
    perm = np.lexsort((np.arange(n), soft))
    dense = h.to_dense()[:, perm]
    packed = BinaryMatrix.from_dense(dense)
    nwords = packed.words.shape[1]
    aug = np.zeros((h.rows, nwords + 1), dtype=np.uint64)
    aug[:, :nwords] = packed.words
    aug[:, nwords] = syndrome.astype(np.uint64)
    pivots = _eliminate(aug, n)
    rank = len(pivots)
    if aug[rank:, nwords].any():
        raise InconsistentSyndromeError(
            "syndrome outside the column space of H; no consistent estimate exists"
        )
    s_red = aug[:rank, nwords].astype(np.uint8)
    e_perm = np.zeros(n, dtype=np.uint8)
    e_perm[pivots] = s_red
    best_weight = int(s_red.sum())
    best_flips: tuple = ()
    improved = False

    if order > 0 and rank < n:
        pivot_set = set(pivots)
        nonpiv = np.array([c for c in range(n) if c not in pivot_set], dtype=np.int64)
        cap = min(sweep_cap, nonpiv.size)
        window = nonpiv[:cap]
        reduced = _unpack_rows(aug[:rank, :nwords], n) if rank else np.zeros((0, n), np.uint8)
        cols = reduced[:, window]  # (rank, cap)
        # weight-1 flips
        if cap:
            xors = s_red[:, None] ^ cols
            weights = xors.sum(axis=0) + 1
            j = int(np.argmin(weights))
            if weights[j] < best_weight:
                best_weight = int(weights[j])
                best_flips = (j,)
        # weight-2 flips
        if order >= 2 and cap >= 2:
            for i in range(cap - 1):
                base = s_red ^ cols[:, i]
                xors = base[:, None] ^ cols[:, i + 1 :]
                weights = xors.sum(axis=0) + 2
                j = int(np.argmin(weights))
                if weights[j] < best_weight:
                    best_weight = int(weights[j])
                    best_flips = (i, i + 1 + j)
        # weight >= 3: explicit enumeration
        for w in range(3, order + 1):
            if cap < w:
                break
            for combo in itertools.combinations(range(cap), w):
                vec = s_red.copy()
                for c in combo:
                    vec ^= cols[:, c]
                weight = int(vec.sum()) + w
                if weight < best_weight:
                    best_weight = weight
                    best_flips = combo
        if best_flips:
            improved = True
            vec = s_red.copy()
            for c in best_flips:
                vec ^= cols[:, c]
            e_perm = np.zeros(n, dtype=np.uint8)
            e_perm[np.asarray(pivots, dtype=np.int64)] = vec
            e_perm[window[list(best_flips)]] = 1

    estimate = np.zeros(n, dtype=np.uint8)
    estimate[perm] = e_perm
    return estimate, improved


# ── functional API ───────────────────────────────────────────────────


def bp_decode(
    h: BinaryMatrix, syndrome, priors, cfg: BpConfig | None = None
) -> DecodeResult:
    """Belief propagation only; converged means the syndrome is reproduced."""
    dec = BpOsdDecoder(h, cfg)
    hard, converged, post, iters = dec.bp(syndrome, _as_priors(priors, h.cols))
    return DecodeResult(hard, converged, post, "bp", iters)


def osd_postprocess(
    h: BinaryMatrix, syndrome, soft_values, order: int, sweep_cap: int = 40
) -> np.ndarray:
    """Ordered-statistics solve from given soft values; syndrome-consistent."""
    estimate, _ = _osd_core(h, syndrome, soft_values, order, sweep_cap)
    return estimate


def bp_osd(h: BinaryMatrix, syndrome, priors, cfg: BpConfig | None = None) -> DecodeResult:
    """The two-stage decoder of the simulation pipeline."""
    return BpOsdDecoder(h, cfg).decode(syndrome, _as_priors(priors, h.cols))


def _as_priors(priors, n: int) -> np.ndarray:
    arr = np.asarray(priors, dtype=np.float64)
    if arr.ndim == 0:
        arr = np.full(n, float(arr))
    return arr
