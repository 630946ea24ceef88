"""BP+OSD decoding: oracle comparisons, contracts, determinism."""

import itertools

import numpy as np
import pytest

from lhpkit.decoder import (
    BpConfig,
    BpOsdDecoder,
    InconsistentSyndromeError,
    bp_decode,
    bp_osd,
    osd_postprocess,
)
from lhpkit.gf2 import BinaryMatrix

REP3 = BinaryMatrix.from_dense([[1, 1, 0], [0, 1, 1]])


def _coset_min_weight(h_dense, syndrome):
    n = h_dense.shape[1]
    best = None
    for bits in itertools.product([0, 1], repeat=n):
        e = np.array(bits, dtype=np.uint8)
        if np.array_equal(h_dense @ e % 2, syndrome):
            w = int(e.sum())
            best = w if best is None else min(best, w)
    return best


def _random_instance(rng, max_m=8, max_n=12):
    m, n = rng.integers(2, max_m + 1), rng.integers(3, max_n + 1)
    dense = (rng.random((m, n)) < 0.4).astype(np.uint8)
    h = BinaryMatrix.from_dense(dense)
    e = (rng.random(n) < 0.2).astype(np.uint8)
    return h, e, h.mul_vec(e)


# ── bp_decode ────────────────────────────────────────────────────────


def test_zero_syndrome_converges_immediately():
    res = bp_decode(REP3, np.zeros(2, dtype=np.uint8), 0.1)
    assert res.converged
    assert res.iterations == 0
    assert not res.estimate.any()


def test_rep3_matches_exhaustive_ml():
    syndrome = np.array([1, 0], dtype=np.uint8)
    res = bp_osd(REP3, syndrome, 0.1)
    assert np.array_equal(res.estimate, [1, 0, 0])
    assert res.estimate.sum() == _coset_min_weight(REP3.to_dense(), syndrome)


def test_ambiguous_instance_soft_values_ordered():
    # bits 0-2 are interchangeable weight-1 explanations; bits 3-4 are pinned
    h = BinaryMatrix.from_dense([[1, 1, 1, 0, 0], [0, 0, 0, 1, 1]])
    syndrome = np.array([1, 0], dtype=np.uint8)
    res = bp_osd(h, syndrome, 0.1)
    assert not res.converged  # the degenerate triple keeps BP symmetric
    assert np.array_equal(h.mul_vec(res.estimate), syndrome)
    assert res.estimate.sum() == 1
    ambiguous = np.abs(res.soft_values[:3])
    pinned = np.abs(res.soft_values[3:])
    assert ambiguous.max() < pinned.min()


def test_priors_validated():
    with pytest.raises(ValueError):
        bp_decode(REP3, np.zeros(2, dtype=np.uint8), 0.0)
    with pytest.raises(ValueError):
        bp_decode(REP3, np.zeros(2, dtype=np.uint8), 1.0)


def test_min_sum_matches_product_sum_on_trees():
    # cycle-free Tanner graphs: both variants are exact, so hard decisions agree
    trees = [
        BinaryMatrix.from_dense([[1, 1, 0, 0, 0], [0, 1, 1, 0, 0], [0, 0, 0, 1, 1]]),
        BinaryMatrix.from_dense([[1, 1, 1, 0], [0, 0, 1, 1]]),
    ]
    rng = np.random.default_rng(51)
    for h in trees:
        for _ in range(30):
            e = (rng.random(h.cols) < 0.25).astype(np.uint8)
            s = h.mul_vec(e)
            a = bp_osd(h, s, 0.1, BpConfig(variant="product-sum"))
            b = bp_osd(h, s, 0.1, BpConfig(variant="min-sum", min_sum_scale=1.0))
            assert np.array_equal(a.estimate, b.estimate)


def test_serial_schedule_consistent():
    rng = np.random.default_rng(52)
    for _ in range(30):
        h, e, s = _random_instance(rng)
        res = bp_osd(h, s, 0.15, BpConfig(schedule="serial"))
        assert np.array_equal(h.mul_vec(res.estimate), s)


# ── osd_postprocess ──────────────────────────────────────────────────


def test_osd_order0_full_rank_square():
    h = BinaryMatrix.from_dense([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    s = np.array([1, 1, 1], dtype=np.uint8)
    soft = np.array([1.0, 2.0, 3.0])
    est = osd_postprocess(h, s, soft, order=0)
    assert np.array_equal(h.mul_vec(est), s)
    assert np.array_equal(est, h.solve(s))


def test_osd_adversarial_soft_values_still_consistent():
    s = np.array([1, 0], dtype=np.uint8)
    for soft in ([5.0, -5.0, 0.0], [0.0, 0.0, 0.0], [-9.0, -9.0, -9.0]):
        est = osd_postprocess(REP3, s, np.array(soft), order=0)
        assert np.array_equal(REP3.mul_vec(est), s)


def test_osd_rejects_inconsistent_syndrome():
    h = BinaryMatrix.from_dense([[1, 1], [1, 1]])
    with pytest.raises(InconsistentSyndromeError):
        osd_postprocess(h, np.array([1, 0], dtype=np.uint8), np.zeros(2), order=0)


def test_osd_order2_beats_order0_on_crafted_instance():
    # search (deterministically) for an instance where the order-0 pivot
    # set misses the true support and the weight-2 sweep recovers it
    rng = np.random.default_rng(53)
    found = False
    for _ in range(400):
        h, e, s = _random_instance(rng, max_m=6, max_n=10)
        if not s.any():
            continue
        soft = rng.normal(size=h.cols)
        try:
            e0 = osd_postprocess(h, s, soft, order=0)
            e2 = osd_postprocess(h, s, soft, order=2, sweep_cap=h.cols)
        except InconsistentSyndromeError:
            continue
        ml = _coset_min_weight(h.to_dense(), s)
        if e2.sum() == ml and e0.sum() > ml:
            found = True
            break
    assert found


def test_osd_deterministic_tie_breaking():
    h = BinaryMatrix.from_dense([[1, 1, 1, 1]])
    s = np.array([1], dtype=np.uint8)
    est = osd_postprocess(h, s, np.zeros(4), order=0)
    assert np.array_equal(est, [1, 0, 0, 0])  # lowest column index wins ties


# ── bp_osd pipeline ──────────────────────────────────────────────────


def test_bp_osd_zero_syndrome_stage_bp():
    res = bp_osd(REP3, np.zeros(2, dtype=np.uint8), 0.1)
    assert res.stage == "bp"
    assert not res.estimate.any()


def test_single_error_sweep_on_surface_code():
    from lhpkit.products import hgp

    code = hgp(REP3, REP3)
    h = code.hz
    for j in range(code.n):
        e = np.zeros(code.n, dtype=np.uint8)
        e[j] = 1
        res = bp_osd(h, h.mul_vec(e), 0.05)
        assert np.array_equal(res.estimate, e), f"failed to recover qubit {j}"


def test_weight2_error_reaches_osd_stage():
    # a degenerate check keeps BP symmetric, so OSD must finish the job
    h = BinaryMatrix.from_dense([[1, 1, 1, 0, 0], [0, 0, 0, 1, 1]])
    s = np.array([1, 0], dtype=np.uint8)
    res = bp_osd(h, s, 0.1)
    assert res.stage in ("osd0", "osdw")
    assert np.array_equal(h.mul_vec(res.estimate), s)
    rng = np.random.default_rng(54)
    for _ in range(200):
        h, e, s = _random_instance(rng, max_m=6, max_n=10)
        res = bp_osd(h, s, 0.1)
        assert np.array_equal(h.mul_vec(res.estimate), s)


def test_syndrome_consistency_random():
    rng = np.random.default_rng(55)
    for _ in range(1000):
        h, e, s = _random_instance(rng)
        res = bp_osd(h, s, 0.12)
        assert np.array_equal(h.mul_vec(res.estimate), s)


def test_small_scale_ml_equivalence():
    # decode matrices of the small simulatable codes (k >= 1, n <= 16):
    # every syndrome must come back at the coset minimum weight
    from lhpkit.products import hgp, lifted_product
    from lhpkit.protograph import Protograph, lam

    rep2 = BinaryMatrix.from_dense([[1, 1]])
    codes = [
        hgp(rep2, rep2),
        hgp(REP3, REP3),
        lifted_product(
            Protograph(((lam(0) + lam(1),),)), Protograph(((lam(0) + lam(2),),)), 3
        ),
    ]
    cfg = BpConfig(osd_order=2, osd_sweep_cap=16)
    for code in codes:
        assert code.k >= 1 and code.n <= 16
        for h in (code.hx, code.hz):
            dense = h.to_dense()
            dec = BpOsdDecoder(h, cfg)
            for bits in itertools.product([0, 1], repeat=h.rows):
                s = np.array(bits, dtype=np.uint8)
                ml = _coset_min_weight(dense, s)
                if ml is None:
                    with pytest.raises(InconsistentSyndromeError):
                        dec.decode(s, np.full(h.cols, 0.1))
                    continue
                res = dec.decode(s, np.full(h.cols, 0.1))
                assert int(res.estimate.sum()) == ml


def test_deterministic_repeatability():
    rng = np.random.default_rng(57)
    h, e, s = _random_instance(rng)
    a = bp_osd(h, s, 0.1)
    b = bp_osd(h, s, 0.1)
    assert np.array_equal(a.estimate, b.estimate)
    assert np.array_equal(a.soft_values, b.soft_values)
    assert a.stage == b.stage and a.iterations == b.iterations


def test_inconsistent_error_carries_bp_state():
    h = BinaryMatrix.from_dense([[1, 1], [1, 1]])
    dec = BpOsdDecoder(h)
    with pytest.raises(InconsistentSyndromeError) as err:
        dec.decode(np.array([1, 0], dtype=np.uint8), np.full(2, 0.1))
    assert err.value.bp_estimate is not None
    assert err.value.soft_values is not None


def test_config_validation():
    with pytest.raises(ValueError):
        BpConfig(max_iterations=0)
    with pytest.raises(ValueError):
        BpConfig(min_sum_scale=0.0)
    with pytest.raises(ValueError):
        BpConfig(variant="fancy")
    with pytest.raises(ValueError):
        BpConfig(schedule="zigzag")
