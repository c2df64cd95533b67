import pytest

from ellcoh.assembler import (ResultRecord, assemble_e2, betti, check_record, config_space, mhdg,
                              mhdg_polynomial)
from ellcoh.cohomology import bn_table
from ellcoh.gamma import h1_dim, load_presentation
from ellcoh.modular import gamma_data, w_dims


def test_small_answers():
    assert betti(1, 3) == (1, 3)
    assert betti(1, 4) == (1, 5)
    assert betti(1, 5) == (1, 11)
    assert betti(2, 1) == (1, 0, 0, 0)
    assert betti(1, 1) == (1, 0)


def test_mhdg_small():
    assert mhdg(1, 3).mhdg == {(0, 0, 0): 1, (1, 1, 1): 3}
    assert mhdg(1, 1).mhdg == {(0, 0, 0): 1}


@pytest.mark.parametrize("N", range(3, 9))
def test_punctured_curves(N):
    gd = gamma_data(N)
    rec = mhdg(1, N)
    assert rec.betti == (1, gd.cusps - 1 + 2 * gd.genus)
    # genus classes have weight 1, the others are Tate of weight 2
    assert rec.mhdg.get((1, 1, 0), 0) == gd.genus
    assert rec.mhdg.get((1, 1, 1), 0) == gd.cusps - 1


def test_e2_examples():
    page = assemble_e2(1, 3)
    assert page.column0_dims() == {0: 1}
    assert page.column1_dims() == {0: 3}
    page = assemble_e2(2, 1)
    assert not any(page.column1_dims().values())
    for N in range(1, 7):
        assert assemble_e2(1, N).column1_dims().get(0, 0) == w_dims(0, N).total


@pytest.mark.parametrize("n", range(1, 6))
def test_level_two_column_against_free_cocycles(n):
    pres = load_presentation(2)
    _, mult = bn_table(n, route="explicit", workers=1)
    by_degree: dict = {}
    for (p, q, k), m in mult.mult.items():
        by_degree[p + q] = by_degree.get(p + q, 0) + m * h1_dim(pres, k)
    page = assemble_e2(n, 2)
    col1 = {m: d for m, d in page.column1_dims().items() if d}
    assert col1 == {m: d for m, d in by_degree.items() if d}


@pytest.mark.parametrize("n,N", [(2, 3), (3, 2), (3, 4), (4, 3)])
def test_record_invariants(n, N):
    rec = mhdg(n, N)
    check_record(rec)
    tot = {}
    for (t, _, _), c in rec.mhdg.items():
        tot[t] = tot.get(t, 0) + c
    assert tuple(tot.get(m, 0) for m in range(2 * n)) == rec.betti


def test_equivariant_total_matches_plain():
    plain = mhdg(3, 3)
    eq = mhdg(3, 3, equivariant=True)
    from ellcoh.reps import character, parse_partition

    total: dict = {}
    for lab, poly in eq.equivariant.items():
        d = character(parse_partition(lab)).dim()
        for mon, m in poly.items():
            total[mon] = total.get(mon, 0) + m * d
    assert total == plain.mhdg
    assert eq.betti == plain.betti


def test_config_space_examples():
    rec = config_space(2)
    assert rec.betti == (1, 4, 5, 2, 0)
    rec = config_space(1)
    assert rec.betti == (1, 2, 1)
    assert rec.poincare_serre == {(0, 0): 1, (1, 1): 2, (2, 2): 1}
    assert rec.mhdg == {(0, 0, 0): 1, (1, 1, 0): 1, (1, 0, 1): 1, (2, 1, 1): 1}


def test_config_space_equivariant_degree_zero():
    rec = config_space(3, equivariant=True)
    deg0 = {lab: poly[(0, 0, 0)] for lab, poly in rec.equivariant.items() if (0, 0, 0) in poly}
    assert deg0 == {"3": 1}


def test_check_record_detects_errors():
    good = mhdg(1, 3)
    bad = ResultRecord(1, 3, (1, 2), good.poincare_serre, good.mhdg)
    with pytest.raises(ArithmeticError):
        check_record(bad)
    asym = {(0, 0, 0): 1, (1, 1, 0): 1}
    with pytest.raises(ArithmeticError):
        check_record(ResultRecord(1, 3, (1, 1), {(0, 0): 1, (1, 1): 1}, asym))


def test_mhdg_polynomial_rejects_bad_weights():
    # V_0 in bidegree (1, 0) has odd weight and no integral exponent
    with pytest.raises(ValueError):
        mhdg_polynomial({(0, 0, 0): 1, (1, 0, 0): 1}, 3)
