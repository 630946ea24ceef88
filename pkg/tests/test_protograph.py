"""Ring-of-circulants algebra, lifting goldens, and the text grammar."""

import numpy as np
import pytest

from lhpkit.gf2 import BinaryMatrix
from lhpkit.protograph import (
    Protograph,
    ProtographParseError,
    RingElement,
    lam,
    parse_protograph,
    render_protograph,
)


def _random_element(rng, max_shift=8):
    count = rng.integers(0, 4)
    return lam(*rng.integers(-max_shift, max_shift, size=count).tolist())


def _random_protograph(rng, rows, cols, max_shift=8):
    return Protograph.from_lists(
        [[_random_element(rng, max_shift) for _ in range(cols)] for _ in range(rows)]
    )


# ── ring element arithmetic ──────────────────────────────────────────


def test_add_distinct_shifts():
    assert lam(1) + lam(2) == lam(1, 2)


def test_add_self_cancels():
    assert lam(1) + lam(1) == lam()


def test_add_zero_identity():
    assert lam() + lam(0) == lam(0)


def test_mul_composes_shifts():
    assert lam(1) * lam(2) == lam(3)


def test_mul_identity():
    assert lam(0) * lam(3, 7) == lam(3, 7)


def test_mul_cross_terms_cancel():
    # (λ1 + λ2)^2: the two λ3 cross terms vanish mod 2
    assert lam(1, 2) * lam(1, 2) == lam(2, 4)


def test_ring_axioms_random():
    rng = np.random.default_rng(21)
    for _ in range(300):
        x, y, z = (_random_element(rng) for _ in range(3))
        assert x + y == y + x
        assert x * y == y * x
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x + lam() == x
        assert x * lam(0) == x


def test_duplicate_shifts_collapse():
    assert lam(1, 1) == lam()
    assert lam(2, 2, 2) == lam(2)


# ── lifting ──────────────────────────────────────────────────────────


def test_lift_single_shift_golden():
    got = Protograph(((lam(1),),)).lift(3).to_dense()
    assert np.array_equal(got, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])


def test_lift_two_row_protograph_golden():
    # 6x9 expansion of [[λ1+λ2, λ0, 0], [0, λ0+λ1, λ1]] at L=3; every block
    # is the circulant of its cell, so each lifted row repeats its
    # protograph row weight
    proto = Protograph(
        (
            (lam(1) + lam(2), lam(0), lam()),
            (lam(), lam(0) + lam(1), lam(1)),
        )
    )
    expected = [
        [0, 1, 1, 1, 0, 0, 0, 0, 0],
        [1, 0, 1, 0, 1, 0, 0, 0, 0],
        [1, 1, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 1, 0, 0, 1, 0],
        [0, 0, 0, 0, 1, 1, 0, 0, 1],
        [0, 0, 0, 1, 0, 1, 1, 0, 0],
    ]
    assert np.array_equal(proto.lift(3).to_dense(), expected)


def test_lift_zero_cell():
    assert Protograph(((lam(),),)).lift(4) == BinaryMatrix.zeros(4, 4)


def test_lift_rejects_zero():
    with pytest.raises(ValueError):
        Protograph(((lam(0),),)).lift(0)


def test_lift_is_ring_homomorphism():
    rng = np.random.default_rng(22)
    for L in (2, 3, 5, 7):
        for _ in range(50):
            x, y = _random_element(rng), _random_element(rng)
            px = Protograph(((x,),))
            py = Protograph(((y,),))
            s = Protograph(((x + y,),))
            p = Protograph(((x * y,),))
            assert s.lift(L) == px.lift(L) ^ py.lift(L)
            assert p.lift(L) == px.lift(L) @ py.lift(L)


def test_lift_shift_reduced_mod_L():
    # λ(1) and λ(4) coincide at L=3, so their sum lifts to the zero block
    assert Protograph(((lam(1, 4),),)).lift(3).is_zero()


def test_row_weight_preserved_by_lift():
    # shifts kept distinct mod L, so no circulant terms collapse
    rng = np.random.default_rng(23)
    L = 7
    for _ in range(50):
        cells = [
            [lam(*rng.choice(L, size=rng.integers(0, 4), replace=False).tolist()) for _ in range(4)]
            for _ in range(3)
        ]
        p = Protograph.from_lists(cells)
        dense = p.lift(L).to_dense()
        for i in range(p.rows):
            row_weight = sum(p.cell(i, j).weight() for j in range(p.cols))
            for r in range(L):
                assert dense[i * L + r].sum() == row_weight


# ── transpose ────────────────────────────────────────────────────────


def test_transpose_negates_shifts():
    p = Protograph(((lam(1),),))
    assert p.T.cell(0, 0) == lam(-1)
    assert p.T.lift(3) == p.lift(3).T


def test_transpose_fixes_identity():
    p = Protograph(((lam(0),),))
    assert p.T == p


def test_transpose_involution_and_lift_random():
    rng = np.random.default_rng(24)
    for _ in range(100):
        p = _random_protograph(rng, rng.integers(1, 4), rng.integers(1, 4))
        assert p.T.T == p
        assert p.T.lift(5) == p.lift(5).T


# ── protograph product ───────────────────────────────────────────────


def test_matmul_scalar():
    a = Protograph(((lam(0),),))
    b = Protograph(((lam(2),),))
    assert (a @ b).cell(0, 0) == lam(2)


def test_matmul_expand_and_cancel():
    a = Protograph(((lam(1), lam()),))
    b = Protograph(((lam(0),), (lam(5),)))
    assert (a @ b).cell(0, 0) == lam(1)


def test_matmul_dimension_mismatch():
    a = Protograph(((lam(0), lam(1)),))
    with pytest.raises(ValueError):
        a @ a


def test_matmul_lift_homomorphism_random():
    rng = np.random.default_rng(25)
    for _ in range(100):
        m, k, n = rng.integers(1, 4, size=3)
        a = _random_protograph(rng, m, k)
        b = _random_protograph(rng, k, n)
        assert (a @ b).lift(5) == a.lift(5) @ b.lift(5)


def test_kron_lift_consistency_random():
    rng = np.random.default_rng(26)
    for _ in range(50):
        a = _random_protograph(rng, 2, 2)
        b = _random_protograph(rng, 2, 3)
        k = a.kron(b)
        assert (k.rows, k.cols) == (4, 6)
        # entry-wise ring products: block (i,k),(j,l) lifts to the circulant product
        L = 3
        lifted = k.lift(L).to_dense()
        for i in range(2):
            for j in range(2):
                for r in range(2):
                    for c in range(3):
                        cell = a.cell(i, j) * b.cell(r, c)
                        block = lifted[
                            (i * 2 + r) * L : (i * 2 + r + 1) * L,
                            (j * 3 + c) * L : (j * 3 + c + 1) * L,
                        ]
                        assert np.array_equal(block, cell.lift(L))


# ── parsing and rendering ────────────────────────────────────────────


def test_parse_single_row():
    p = parse_protograph("λ(2) λ() λ(0)")
    assert (p.rows, p.cols) == (1, 3)
    assert p.cell(0, 0) == lam(2)
    assert p.cell(0, 1) == lam()
    assert p.cell(0, 2) == lam(0)


def test_parse_four_row_seed_matrix():
    text = """\
λ(2) λ() λ(0) λ(0) λ() λ(2)
λ() λ(0) λ(2) λ() λ(2) λ(0)
λ(0) λ(1) λ() λ(1) λ(0) λ(2)
λ(0) λ(1) λ(1) λ(1) λ(1) λ()
"""
    p = parse_protograph(text)
    assert (p.rows, p.cols) == (4, 6)
    assert p.cell(2, 1) == lam(1)
    assert p.cell(3, 5) == lam()


def test_parse_mod2_collapse():
    assert parse_protograph("λ(1,1)").cell(0, 0) == lam()


def test_parse_aliases():
    p = parse_protograph("L(1,2) 0 ; λ(3) L()")
    assert p.cell(0, 0) == lam(1, 2)
    assert p.cell(0, 1) == lam()
    assert p.cell(1, 0) == lam(3)
    assert p.cell(1, 1) == lam()


def test_parse_negative_shifts():
    assert parse_protograph("λ(-2,5)").cell(0, 0) == lam(-2, 5)


def test_parse_error_position():
    with pytest.raises(ProtographParseError) as err:
        parse_protograph("λ(0) λ(x)")
    assert err.value.line == 1
    assert err.value.col == 6


def test_parse_ragged_rows():
    with pytest.raises(ProtographParseError, match="ragged"):
        parse_protograph("λ(0) λ(1)\nλ(2)")


def test_render_parse_round_trip():
    rng = np.random.default_rng(27)
    for _ in range(50):
        p = _random_protograph(rng, rng.integers(1, 4), rng.integers(1, 5))
        assert parse_protograph(render_protograph(p)) == p


def test_render_canonical_order():
    assert (lam(3) + lam(1)).render() == "λ(1,3)"
