"""End-to-end single-shot decoding trials and their statistics.

One trial: sample a biased Pauli error, extract both syndromes, flip
syndrome bits with the measurement channel, repair each noisy syndrome
through its metacheck decoder (single-shot mode), decode Z-errors first
and then X-errors, and test the residual against the logical bases.

Syndrome convention: Z-type checks (rows of hz) detect X components and
X-type checks (rows of hx) detect Z components; the X-error decoder
therefore runs on hz and the Z-error decoder on hx, and the metachecks
pair as mz with the hz-syndrome and mx with the hx-syndrome.

Trials are independent: each derives its own Philox streams from
(master_seed, trial_index), so a run is reproducible for any worker
count and the aggregation is an order-deterministic reduction.
"""

from __future__ import annotations

import concurrent.futures
import os
from dataclasses import dataclass, field

import numpy as np

from .decoder import BpConfig, BpOsdDecoder, InconsistentSyndromeError
from .gf2 import BinaryMatrix
from .noise import (
    ChannelSpec,
    PauliError,
    channel_probs,
    data_priors,
    rng_stream,
    sample_measurement_error,
    sample_pauli_error,
)
from .products import CssCode

_PRIOR_FLOOR = 1e-12


@dataclass(frozen=True)
class TrialOutcome:
    """Per-trial record; counts are per syndrome sector."""

    logical_failure: bool
    bp_converged_x: bool
    bp_converged_z: bool
    stage_x: str
    stage_z: str
    meas_flipped_x: int
    meas_flipped_z: int
    meas_detected_x: int
    meas_detected_z: int
    meas_detected_any_x: bool
    meas_detected_any_z: bool
    meas_corrected_x: int
    meas_corrected_z: int
    residual_weight: int
    repair_skipped_x: bool = False
    repair_skipped_z: bool = False
    decode_failed_x: bool = False
    decode_failed_z: bool = False


@dataclass(frozen=True)
class RunStats:
    """Aggregate over one grid point."""

    trials: int
    failures: int
    wer: float
    wer_stderr: float
    detection_rate_x: float
    detection_rate_z: float
    detection_event_rate_x: float
    detection_event_rate_z: float
    correction_rate_x: float
    correction_rate_z: float
    trials_with_flips_x: int
    trials_with_flips_z: int
    stage_counts: dict
    bp_conv_frac: float
    osd0_frac: float
    osdw_frac: float
    mean_residual_weight: float


class CodeDecoders:
    """The four decoders of the pipeline, bound to one code.

    bp_x runs on hz (X errors), bp_z on hx (Z errors); bp_mx on mx
    repairs the hx-syndrome and bp_mz on mz repairs the hz-syndrome.
    """

    def __init__(self, code: CssCode, cfg: BpConfig | None = None):
        self.code = code
        self.cfg = cfg or BpConfig()
        self.bp_x = BpOsdDecoder(code.hz, self.cfg)
        self.bp_z = BpOsdDecoder(code.hx, self.cfg)
        self.bp_mx = BpOsdDecoder(code.mx, self.cfg) if code.mx is not None else None
        self.bp_mz = BpOsdDecoder(code.mz, self.cfg) if code.mz is not None else None
        self._mx_dense = code.mx.to_dense() if code.mx is not None else None
        self._mz_dense = code.mz.to_dense() if code.mz is not None else None


def extract_syndromes(code: CssCode, err: PauliError) -> tuple[np.ndarray, np.ndarray]:
    """(hz @ ex, hx @ ez): the X-error and Z-error syndromes."""
    if err.n != code.n:
        raise ValueError(f"error length {err.n} != n {code.n}")
    return code.hz.mul_vec(err.ex), code.hx.mul_vec(err.ez)


def metacheck_repair(
    m: BinaryMatrix,
    noisy_syndrome: np.ndarray,
    decoder: BpOsdDecoder,
    q: float,
) -> tuple[np.ndarray, np.ndarray, bool]:
    """Decode the metasyndrome and flip the implicated syndrome bits.

    Returns (repaired_syndrome, u_estimate, skipped).  With q = 0 the
    metasyndrome is zero and the repair is the identity.  A metasyndrome
    outside the column space of m (impossible for real measurement
    errors) skips the repair and flags it instead of aborting.
    """
    noisy_syndrome = np.asarray(noisy_syndrome, dtype=np.uint8)
    if m.cols != noisy_syndrome.shape[0]:
        raise ValueError(
            f"syndrome length {noisy_syndrome.shape[0]} != metacheck cols {m.cols}"
        )
    zero = np.zeros(m.cols, dtype=np.uint8)
    if q <= 0.0:
        return noisy_syndrome, zero, False
    metasyndrome = m.mul_vec(noisy_syndrome)
    if not metasyndrome.any():
        return noisy_syndrome, zero, False
    priors = np.full(m.cols, min(max(q, _PRIOR_FLOOR), 1.0 - _PRIOR_FLOOR))
    try:
        result = decoder.decode(metasyndrome, priors)
    except InconsistentSyndromeError:
        return noisy_syndrome, zero, True
    repaired = noisy_syndrome ^ result.estimate
    return repaired, result.estimate, False


def failure_test(
    res_x: np.ndarray, res_z: np.ndarray, lx: BinaryMatrix, lz: BinaryMatrix
) -> bool:
    """True iff the residual acts as a nontrivial logical operator."""
    if lz.rows and lz.mul_vec(res_x).any():
        return True
    if lx.rows and lx.mul_vec(res_z).any():
        return True
    return False


def _effective_boundary(code: CssCode, spec: ChannelSpec) -> int | None:
    """Combine the code's rotated-sector marker with the channel's swap.

    Rotating the code and swapping the channel at the same boundary
    cancel; mismatched boundaries are rejected rather than guessed at.
    """
    cb, sb = code.tailored_boundary, spec.sector_swap_boundary
    if cb is None:
        return sb
    if sb is None:
        return cb
    if cb == sb:
        return None
    raise ValueError(
        f"code rotated at {cb} but channel swapped at {sb}; boundaries must agree"
    )


def _clamped(priors: np.ndarray) -> np.ndarray:
    return np.clip(priors, _PRIOR_FLOOR, 1.0 - _PRIOR_FLOOR)


def run_trial(
    code: CssCode,
    spec: ChannelSpec,
    decoders: CodeDecoders,
    trial_index: int,
    master_seed: int,
    single_shot: bool = True,
    channel_update: bool = False,
) -> TrialOutcome:
    """Execute one sample-extract-repair-decode-test cycle."""
    if single_shot and (code.mx is None or code.mz is None):
        raise ValueError("single-shot mode needs metacheck matrices")
    boundary = _effective_boundary(code, spec)
    eff = spec.with_boundary(boundary)

    err = sample_pauli_error(eff, code.n, rng_stream(master_seed, trial_index, 0))
    s_x, s_z = extract_syndromes(code, err)
    u_x = sample_measurement_error(
        eff.q, code.hz.rows, rng_stream(master_seed, trial_index, 1)
    )
    u_z = sample_measurement_error(
        eff.q, code.hx.rows, rng_stream(master_seed, trial_index, 2)
    )
    noisy_x = s_x ^ u_x
    noisy_z = s_z ^ u_z

    uhat_x = np.zeros_like(u_x)
    uhat_z = np.zeros_like(u_z)
    skipped_x = skipped_z = False
    if single_shot:
        rep_x, uhat_x, skipped_x = metacheck_repair(code.mz, noisy_x, decoders.bp_mz, eff.q)
        rep_z, uhat_z, skipped_z = metacheck_repair(code.mx, noisy_z, decoders.bp_mx, eff.q)
    else:
        rep_x, rep_z = noisy_x, noisy_z

    prob_x, prob_z = data_priors(eff, code.n, None if boundary is None else boundary)
    # decode Z errors first, then X, per the simulation protocol
    ez_hat, conv_z, stage_z, failed_z = _data_decode(decoders.bp_z, rep_z, _clamped(prob_z))
    if channel_update and ez_hat.any():
        px, py, pz = channel_probs(eff)
        cond_plain = py / (py + pz) if (py + pz) > 0 else 0.0
        cond_swap = py / (py + px) if (py + px) > 0 else 0.0
        upd = prob_x.copy()
        sel = ez_hat.astype(bool)
        if boundary is None:
            upd[sel] = cond_plain
        else:
            swapped = np.arange(code.n) >= boundary
            upd[sel & ~swapped] = cond_plain
            upd[sel & swapped] = cond_swap
        prob_x = upd
    ex_hat, conv_x, stage_x, failed_x = _data_decode(decoders.bp_x, rep_x, _clamped(prob_x))

    res_x = err.ex ^ ex_hat
    res_z = err.ez ^ ez_hat
    failure = failure_test(res_x, res_z, code.lx, code.lz)

    det_x = _detected_count(decoders._mz_dense, noisy_x, u_x)
    det_z = _detected_count(decoders._mx_dense, noisy_z, u_z)
    det_any_x = bool(code.mz is not None and u_x.any() and code.mz.mul_vec(noisy_x).any())
    det_any_z = bool(code.mx is not None and u_z.any() and code.mx.mul_vec(noisy_z).any())

    return TrialOutcome(
        logical_failure=failure,
        bp_converged_x=conv_x,
        bp_converged_z=conv_z,
        stage_x=stage_x,
        stage_z=stage_z,
        meas_flipped_x=int(u_x.sum()),
        meas_flipped_z=int(u_z.sum()),
        meas_detected_x=det_x,
        meas_detected_z=det_z,
        meas_detected_any_x=det_any_x,
        meas_detected_any_z=det_any_z,
        meas_corrected_x=int((u_x & uhat_x).sum()),
        meas_corrected_z=int((u_z & uhat_z).sum()),
        residual_weight=int(res_x.sum() + res_z.sum()),
        repair_skipped_x=skipped_x,
        repair_skipped_z=skipped_z,
        decode_failed_x=failed_x,
        decode_failed_z=failed_z,
    )


def _data_decode(decoder: BpOsdDecoder, syndrome: np.ndarray, priors: np.ndarray):
    """Decode, degrading to the BP hard decision on inconsistent syndromes.

    With measurement noise and no (or imperfect) repair the target
    syndrome may leave the column space; the trial records the failure
    and carries on with the best-effort estimate.
    """
    try:
        r = decoder.decode(syndrome, priors)
        return r.estimate, r.converged, r.stage, False
    except InconsistentSyndromeError as err:
        est = err.bp_estimate
        if est is None:
            est = np.zeros(decoder.h.cols, dtype=np.uint8)
        return est, False, "bp", True


def _detected_count(m_dense, noisy_syndrome: np.ndarray, u: np.ndarray) -> int:
    """Flipped syndrome bits incident to at least one violated metacheck."""
    if m_dense is None or not u.any():
        return 0
    violated = (m_dense @ noisy_syndrome) % 2
    if not violated.any():
        return 0
    covered = m_dense[violated.astype(bool)].any(axis=0)
    return int((u.astype(bool) & covered).sum())


def aggregate(outcomes: list[TrialOutcome]) -> RunStats:
    """Order-independent reduction of per-trial records."""
    trials = len(outcomes)
    if trials == 0:
        raise ValueError("no trials to aggregate")
    failures = sum(o.logical_failure for o in outcomes)
    wer = failures / trials
    stderr = float(np.sqrt(wer * (1.0 - wer) / trials))

    def _rate(flipped, detected):
        vals = [d / f for f, d in zip(flipped, detected) if f > 0]
        return (float(np.mean(vals)) if vals else float("nan")), len(vals)

    det_x, nx = _rate(
        [o.meas_flipped_x for o in outcomes], [o.meas_detected_x for o in outcomes]
    )
    det_z, nz = _rate(
        [o.meas_flipped_z for o in outcomes], [o.meas_detected_z for o in outcomes]
    )
    dev_x, _ = _rate(
        [o.meas_flipped_x > 0 for o in outcomes],
        [o.meas_detected_any_x for o in outcomes],
    )
    dev_z, _ = _rate(
        [o.meas_flipped_z > 0 for o in outcomes],
        [o.meas_detected_any_z for o in outcomes],
    )
    cor_x, _ = _rate(
        [o.meas_flipped_x for o in outcomes], [o.meas_corrected_x for o in outcomes]
    )
    cor_z, _ = _rate(
        [o.meas_flipped_z for o in outcomes], [o.meas_corrected_z for o in outcomes]
    )
    stages = {"bp": 0, "osd0": 0, "osdw": 0}
    for o in outcomes:
        stages[o.stage_x] += 1
        stages[o.stage_z] += 1
    total_decodes = 2 * trials
    return RunStats(
        trials=trials,
        failures=failures,
        wer=wer,
        wer_stderr=stderr,
        detection_rate_x=det_x,
        detection_rate_z=det_z,
        detection_event_rate_x=dev_x,
        detection_event_rate_z=dev_z,
        correction_rate_x=cor_x,
        correction_rate_z=cor_z,
        trials_with_flips_x=nx,
        trials_with_flips_z=nz,
        stage_counts=stages,
        bp_conv_frac=stages["bp"] / total_decodes,
        osd0_frac=stages["osd0"] / total_decodes,
        osdw_frac=stages["osdw"] / total_decodes,
        mean_residual_weight=float(np.mean([o.residual_weight for o in outcomes])),
    )


@dataclass(frozen=True)
class ExperimentPoint:
    """One grid point of a sweep."""

    code: CssCode
    spec: ChannelSpec
    trials: int
    master_seed: int
    single_shot: bool = True
    channel_update: bool = False
    decoder_cfg: BpConfig = field(default_factory=BpConfig)
    workers: int = 1


_WORKER: dict = {}


def _init_worker(code, spec, cfg, single_shot, channel_update, master_seed):
    _WORKER["decoders"] = CodeDecoders(code, cfg)
    _WORKER["args"] = (code, spec, single_shot, channel_update, master_seed)


def _run_chunk(chunk: tuple) -> list[TrialOutcome]:
    code, spec, single_shot, channel_update, master_seed = _WORKER["args"]
    start, stop = chunk
    return [
        run_trial(
            code,
            spec,
            _WORKER["decoders"],
            t,
            master_seed,
            single_shot=single_shot,
            channel_update=channel_update,
        )
        for t in range(start, stop)
    ]


def run_experiment(point: ExperimentPoint) -> RunStats:
    """Run all trials of one grid point (optionally across processes)."""
    if point.trials < 1:
        raise ValueError("trials must be >= 1")
    workers = max(1, point.workers)
    if workers == 1:
        decoders = CodeDecoders(point.code, point.decoder_cfg)
        outcomes = [
            run_trial(
                point.code,
                point.spec,
                decoders,
                t,
                point.master_seed,
                single_shot=point.single_shot,
                channel_update=point.channel_update,
            )
            for t in range(point.trials)
        ]
        return aggregate(outcomes)

    chunk = max(1, point.trials // (workers * 8))
    ranges = [
        (lo, min(lo + chunk, point.trials)) for lo in range(0, point.trials, chunk)
    ]
    init_args = (
        point.code,
        point.spec,
        point.decoder_cfg,
        point.single_shot,
        point.channel_update,
        point.master_seed,
    )
    with concurrent.futures.ProcessPoolExecutor(
        max_workers=workers, initializer=_init_worker, initargs=init_args
    ) as pool:
        results = list(pool.map(_run_chunk, ranges))
    outcomes = [o for chunk_out in results for o in chunk_out]
    return aggregate(outcomes)


def default_workers() -> int:
    return os.cpu_count() or 1
