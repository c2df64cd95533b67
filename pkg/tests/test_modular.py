import pytest

from ellcoh.modular import GammaData, dims, gamma_data, w_dims


def test_gamma_data_examples():
    assert gamma_data(3) == GammaData(3, 24, 12, 4, 0)
    assert gamma_data(1) == GammaData(1, 1, 1, 1, 0)
    assert gamma_data(2) == GammaData(2, 6, 6, 3, 0)
    assert gamma_data(7).genus == 3
    assert gamma_data(7).mu_bar == 168
    with pytest.raises(ValueError):
        gamma_data(0)


@pytest.mark.parametrize("N", range(3, 13))
def test_gamma_data_invariants(N):
    gd = gamma_data(N)
    assert gd.mu_bar * 2 == gd.mu
    assert gd.cusps * 2 * N == gd.mu
    assert gd.genus >= 0
    # Euler characteristic of the punctured modular curve
    assert 2 - 2 * gd.genus - gd.cusps == -gd.mu_bar // 6


def test_known_genera():
    # X(N) has genus 0 for N <= 5, then 1, 3, 5, 10, 13 for N = 6, 7, 8, 9, 10
    assert [gamma_data(N).genus for N in range(1, 11)] == [0, 0, 0, 0, 0, 1, 3, 5, 10, 13]


def test_dims_examples():
    assert dims(12, 1) == (1, 2)
    assert dims(2, 3) == (0, 3)
    assert dims(3, 1) == (0, 0)
    assert dims(4, 1) == (0, 1)
    assert dims(14, 1) == (0, 1)
    assert dims(24, 1) == (2, 3)
    with pytest.raises(ValueError):
        dims(1, 3)


def test_level_one_generating_function():
    # sum dim M_k x^k = 1 / ((1 - x^4)(1 - x^6))
    for k in range(2, 60, 2):
        count = sum(1 for a in range(k // 4 + 1) for b in range(k // 6 + 1) if 4 * a + 6 * b == k)
        assert dims(k, 1)[1] == count


def test_w_dims_examples():
    wd = w_dims(0, 3)
    assert (wd.total, wd.w_low, wd.w_high) == (3, 0, 3)
    wd = w_dims(10, 1)
    assert (wd.total, wd.w_low, wd.w_high) == (3, 2, 1)
    assert w_dims(1, 2).total == 0
    with pytest.raises(ValueError):
        w_dims(-1, 3)


@pytest.mark.parametrize("N", [3, 4, 5, 6, 7, 8])
def test_w_dims_euler_identity(N):
    gd = gamma_data(N)
    for k in range(21):
        wd = w_dims(k, N)
        assert wd.total == wd.w_low + wd.w_high
        assert wd.total == gd.mu_bar // 6 * (k + 1) + (1 if k == 0 else 0)


def test_w_dims_level_two():
    for k in range(21):
        expected = (k + 1) + (1 if k == 0 else 0) if k % 2 == 0 else 0
        assert w_dims(k, 2).total == expected


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5, 7])
def test_nonnegative(N):
    for k in range(2, 30):
        s, g = dims(k, N)
        assert 0 <= s <= g


@pytest.mark.parametrize("N", range(3, 10))
def test_punctured_surface_betti(N):
    gd = gamma_data(N)
    assert w_dims(0, N).total == gd.cusps - 1 + 2 * gd.genus
