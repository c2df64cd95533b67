from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ellcoh.reps import (ClassFunction, DivisionError, RepPoly, Sl2RepVector, centralizer_order,
                         character, class_size, cycle_type, decompose, divide_by_curve_factor,
                         mn_character, parse_partition, partition_label, partitions, specialize,
                         tensor_v1)
from ellcoh.reps import curve_factor
from oracles import S3_REGULAR, S3_TABLE

V = Sl2RepVector


def test_tensor_v1():
    assert tensor_v1(V({0: 1})) == V({1: 1})
    assert tensor_v1(V({1: 1})) == V({2: 1, 0: 1})


@settings(max_examples=50)
@given(st.dictionaries(st.integers(0, 6), st.integers(1, 5), max_size=4))
def test_tensor_v1_doubles_dimension(mult):
    x = V(mult)
    assert tensor_v1(x).dim() == 2 * x.dim()
    assert tensor_v1(x) == x * V({1: 1})


def test_divide_examples():
    assert divide_by_curve_factor(curve_factor()) == RepPoly.one()
    x = RepPoly.one() + RepPoly.term(1, 1, 1, V({1: 2}))
    assert divide_by_curve_factor(curve_factor() * x) == x


def test_divide_errors():
    with pytest.raises(DivisionError):
        divide_by_curve_factor(RepPoly.one() + RepPoly.term(1))
    # exact but with a negative coefficient in the quotient
    neg = curve_factor() * (RepPoly.one() - RepPoly.term(1, rep=V({0: 1})))
    with pytest.raises(DivisionError):
        divide_by_curve_factor(neg)


rep_vecs = st.dictionaries(st.integers(0, 3), st.integers(1, 3), max_size=3).map(V)
rep_polys = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 2)), rep_vecs, max_size=4).map(
    lambda d: RepPoly({(t, e, e): x for (t, e), x in d.items()}))


@settings(max_examples=60, deadline=None)
@given(rep_polys, st.booleans())
def test_division_inverts_multiplication(x, tate):
    prod_ = x.mul(curve_factor(tate), tate=tate)
    assert divide_by_curve_factor(prod_, tate=tate) == x


def test_mn_examples():
    for n in range(1, 7):
        for mu in partitions(n):
            assert mn_character((n,), mu) == 1
            sign = (-1) ** (n - len(mu))
            assert mn_character((1,) * n, mu) == sign
    assert mn_character((2, 1), (3,)) == -1
    for lam, row in S3_TABLE.items():
        for mu, v in row.items():
            assert mn_character(lam, mu) == v
    with pytest.raises(ValueError):
        mn_character((2,), (1, 1, 1))


@pytest.mark.parametrize("n", range(1, 9))
def test_orthogonality(n):
    parts = partitions(n)
    for lam in parts:
        for nu in parts:
            ip = character(lam).inner(character(nu))
            assert ip == (1 if lam == nu else 0)
    assert sum(class_size(mu) for mu in parts) == Fraction(__import__("math").factorial(n))


def test_decompose_regular():
    reg = ClassFunction(3, S3_REGULAR)
    assert decompose(reg) == {(3,): 1, (2, 1): 2, (1, 1, 1): 1}
    for lam in partitions(4):
        d = decompose(character(lam))
        assert d == {nu: (1 if nu == lam else 0) for nu in partitions(4)}


def test_decompose_reassembles():
    f = ClassFunction(4, {mu: i * i - 3 for i, mu in enumerate(partitions(4))})
    back = sum((character(lam) * m for lam, m in decompose(f).items()), ClassFunction(4))
    assert back == f


def test_specialize():
    p = RepPoly.one() + RepPoly.term(1, 1, 1)
    assert specialize(p, "poincare") == {0: 1, 1: 3 - 2}
    p3 = RepPoly.one() + RepPoly.term(1, 1, 1, V({0: 3}))
    assert specialize(p3, "poincare") == {0: 1, 1: 3}
    assert specialize(p3, "serre") == {(0, 0): 1, (1, 2): 3}
    assert specialize(RepPoly.term(1, rep=V({1: 1})), "full") == {(1, 1, 0): 1, (1, 0, 1): 1}
    with pytest.raises(ValueError):
        specialize(p, "other")


def test_specialize_equivariant_roundtrip():
    chi = character((2, 1)) * 2 + character((3,))
    p = RepPoly.term(1, 1, 1, V({0: chi}))
    full = specialize(p, "full", equivariant=True)
    assert decompose(full[1, 1, 1]) == {(3,): 1, (2, 1): 2, (1, 1, 1): 0}
    assert specialize(p, "poincare") == {1: 5}


def test_partition_helpers():
    assert partitions(4) == ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))
    assert cycle_type((2, 3, 1, 4)) == (3, 1)
    assert centralizer_order((2, 1, 1)) == 4
    assert parse_partition(partition_label((3, 1))) == (3, 1)
    with pytest.raises(ValueError):
        parse_partition("1+3")


def test_clebsch_gordan_tate():
    v1 = RepPoly.term(0, rep=V({1: 1}))
    assert v1.mul(v1, tate=True) == RepPoly({(0, 0, 0): V({2: 1}), (0, 1, 1): V({0: 1})})
    assert v1 * v1 == RepPoly({(0, 0, 0): V({2: 1, 0: 1})})
