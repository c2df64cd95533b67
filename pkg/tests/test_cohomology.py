from fractions import Fraction

import pytest

from ellcoh import forest
from ellcoh.cohomology import (b_subquotient, bn_table, cohomology_table, equivariant_traces,
                               group_matrix_on_cohomology, primitive_multiplicities, sl2_multiplicities,
                               sn_trace)
from ellcoh.forest import block_index
from ellcoh.linalg import SparseExactMatrix
from ellcoh.reps import class_representative, partitions
from oracles import B2_POINCARE, H2_POINCARE, elliptic_model


def _poly(table):
    p = table.poincare()
    return [p.get(k, 0) for k in range(max(p) + 1)]


def test_n1():
    assert _poly(cohomology_table(1, workers=1)) == [1, 2, 1]


def test_n2_product_formula():
    assert _poly(cohomology_table(2, workers=1)) == H2_POINCARE


def test_n3_against_brute_force_model():
    brute = elliptic_model(3).cohomology()
    ours = _poly(cohomology_table(3, workers=1))
    assert brute[:len(ours)] == ours and not any(brute[len(ours):])


@pytest.mark.parametrize("n", range(1, 7))
def test_euler_characteristic(n):
    table = cohomology_table(n, workers=1)
    chi_a = sum((-1) ** blk.degree * forest.block_size(n, blk) for blk in forest.blocks(n))
    assert table.euler_characteristic() == chi_a == 0


@pytest.mark.parametrize("n", range(1, 7))
def test_multiplicities_complete(n):
    table = cohomology_table(n, workers=1)
    mult = sl2_multiplicities(table)
    assert mult.total_dims() == table.bidegree_dims()
    for (p, q, k), m in mult.mult.items():
        assert m > 0 and k <= p and (p - k) % 2 == 0


@pytest.mark.parametrize("n", range(1, 6))
def test_two_multiplicity_formulas(n):
    assert sl2_multiplicities(cohomology_table(n, workers=1)).mult == primitive_multiplicities(n).mult


def test_n1_v1_once():
    assert sl2_multiplicities(cohomology_table(1, workers=1)).get(1, 0, 1) == 1


@pytest.mark.parametrize("n", range(1, 6))
def test_bn_routes(n):
    explicit, mult = bn_table(n, route="both", workers=1)
    _, div = bn_table(n, route="division", workers=1)
    assert mult.mult == div.mult
    assert explicit.euler_characteristic() == (-1) ** (n - 1) * _factorial(n - 1)


def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def test_b1_b2():
    e1, m1 = bn_table(1, workers=1)
    assert _poly(e1) == [1]
    e2, m2 = bn_table(2, workers=1)
    assert _poly(e2) == B2_POINCARE
    assert m2.mult == {(0, 0, 0): 1, (1, 0, 1): 1}
    assert m2.invariants() == {(0, 0): 1}


def test_bn_bad_route():
    with pytest.raises(ValueError):
        bn_table(2, route="sideways")


def test_sn_trace_examples():
    blk = block_index(1, 0, 1)
    # identity: block dimension
    table = cohomology_table(3, workers=1)
    for b3 in forest.blocks(3):
        assert sn_trace(3, (1, 1, 1), b3) == table.dims[b3]
    # transposition on B_2 in degree 1: classes of a_1 and b_1 go to minus themselves
    tr = sum(sn_trace(2, (2,), block_index(1, 0, h), space="B") for h in (-1, 1))
    assert tr == -2
    assert sn_trace(2, (2,), blk, space="B", method="additive") == -1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_traces_two_ways(n):
    traces = equivariant_traces(n, workers=1)
    for blk, chi in traces.items():
        for mu in partitions(n):
            assert sn_trace(n, mu, blk, "H", "induced") == chi(mu)
            assert chi(mu).denominator == 1
    for blk in forest.blocks(n):
        if blk.h_weight < 0:
            continue
        for mu in partitions(n):
            assert sn_trace(n, mu, blk, "B", "induced") == sn_trace(n, mu, blk, "B", "additive")


@pytest.mark.parametrize("mu", partitions(3))
def test_alternating_trace_n3(mu):
    sigma = class_representative(mu)
    direct = sum((-1) ** blk.degree * forest.operator_matrix(3, sigma, blk, blk).trace()
                 for blk in forest.blocks(3))
    on_h = sum((-1) ** blk.degree * sn_trace(3, mu, blk) for blk in forest.blocks(3))
    assert on_h == direct


def test_group_matrices_b2():
    ident = group_matrix_on_cohomology(((1, 0), (0, 1)), 2, (1, 0))
    assert ident == SparseExactMatrix.identity(2)
    minus = group_matrix_on_cohomology(((-1, 0), (0, -1)), 2, (1, 0))
    assert minus == SparseExactMatrix.identity(2) * -1
    s = group_matrix_on_cohomology(((0, -1), (1, 0)), 2, (1, 0))
    assert s.power(4) == SparseExactMatrix.identity(2)
    assert s.trace() == 0


@pytest.mark.parametrize("n", [3, 4])
def test_minus_identity_scales_by_parity(n):
    _, mult = bn_table(n, workers=1)
    for (p, q) in {(p, q) for p, q, _ in mult.mult}:
        m = group_matrix_on_cohomology(((-1, 0), (0, -1)), n, (p, q))
        assert m == SparseExactMatrix.identity(m.nrows) * (-1) ** p


def test_group_matrix_is_representation():
    n, pq = 3, (1, 1)
    s = group_matrix_on_cohomology(((0, -1), (1, 0)), n, pq)
    t = group_matrix_on_cohomology(((1, 1), (0, 1)), n, pq)
    st_ = group_matrix_on_cohomology(((0, -1), (1, 1)), n, pq)
    assert s @ t == st_


def test_table_entries_small():
    table = cohomology_table(2, workers=1)
    entries = table.entries
    assert sum(s.dim for subs in entries.values() for s in subs) == 12
    assert b_subquotient(2, block_index(1, 0, 1)).dim == 1


def test_certified_table_matches():
    assert cohomology_table(4, workers=1, certify=True).dims == cohomology_table(4, workers=1).dims


def test_parallel_table_matches():
    assert cohomology_table(4, workers=2).dims == cohomology_table(4, workers=1).dims


def test_traces_integral_n5():
    for chi in equivariant_traces(5, workers=1).values():
        assert all(v.denominator == 1 for v in chi.values.values())
        assert chi((1,) * 5) >= 0
    assert isinstance(Fraction(1), Fraction)
