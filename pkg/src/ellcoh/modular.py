"""
Dimensions of spaces of modular forms for the principal congruence
subgroups Gamma(N), and the weight-graded dimensions of the coefficient
spaces W(k, N) = H^1(Gamma(N), V_k).

Three regimes are hard-coded:

* N >= 3: Gamma(N) is torsion free, -I is not in it and all cusps are
  regular, so the Riemann-Roch formulas hold without elliptic corrections.
* N = 2: Gamma(2) contains -I, has three cusps, genus 0 and no elliptic
  points; only even weights occur.
* N = 1: the classical level one formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import primefactors

__all__ = ["GammaData", "gamma_data", "dims", "WDims", "w_dims"]


@dataclass(frozen=True)
class GammaData:
    N: int
    mu: int
    mu_bar: int
    cusps: int
    genus: int


def _exact_int(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise ArithmeticError(f"{what} = {x} is not an integer")
    return int(x)


def gamma_data(N: int) -> GammaData:
    """Index, projective index, number of cusps and genus of Gamma(N)."""
    if N < 1:
        raise ValueError("level must be >= 1")
    if N == 1:
        return GammaData(1, 1, 1, 1, 0)
    mu = Fraction(N ** 3)
    for p in primefactors(N):
        mu *= 1 - Fraction(1, p * p)
    mu = _exact_int(mu, "index")
    if N == 2:
        return GammaData(2, mu, mu, 3, 0)
    mu_bar = _exact_int(Fraction(mu, 2), "projective index")
    cusps = _exact_int(Fraction(mu, 2 * N), "cusp count")
    genus = _exact_int(1 + Fraction(mu_bar * (N - 6), 12 * N), "genus")
    return GammaData(N, mu, mu_bar, cusps, genus)


def _level_one(k: int) -> tuple[int, int]:
    if k % 2:
        return 0, 0
    m = k // 12 if k % 12 == 2 else k // 12 + 1
    s = m - 1 if k >= 4 else 0
    return s, m


def dims(k: int, N: int) -> tuple[int, int]:
    """(dim S_k(Gamma(N)), dim M_k(Gamma(N))) for weight k >= 2."""
    if k < 2:
        raise ValueError("weight must be >= 2")
    if N == 1:
        return _level_one(k)
    gd = gamma_data(N)
    if N == 2:
        if k % 2:
            return 0, 0
        m = k // 2 + 1
        s = k // 2 - 2 if k >= 4 else 0
        return s, m
    g, eps = gd.genus, gd.cusps
    if k == 2:
        s, m = g, g + eps - 1
    else:
        if k % 2 == 0:
            s = (k - 1) * (g - 1) + (k // 2 - 1) * eps
        else:
            s = (k - 1) * (g - 1) + Fraction(k - 2, 2) * eps
            s = _exact_int(Fraction(s), "cusp form dimension")
        m = s + eps
    if s < 0 or m < s:
        raise ArithmeticError(f"bad dimensions ({s}, {m}) at weight {k}, level {N}")
    return s, m


@dataclass(frozen=True)
class WDims:
    """
    Dimensions of W(k, N): ``total`` splits into ``w_low`` = 2 s_{k+2} (weight
    k + 1, Hodge types (k+1, 0) and (0, k+1)) and ``w_high`` = g_{k+2} - s_{k+2}
    (weight 2k + 2, type (k+1, k+1)).
    """

    k: int
    N: int
    total: int
    w_low: int
    w_high: int


def w_dims(k: int, N: int) -> WDims:
    if k < 0:
        raise ValueError("k must be >= 0")
    if N <= 2 and k % 2:
        return WDims(k, N, 0, 0, 0)
    s, g = dims(k + 2, N)
    low, high = 2 * s, g - s
    if low < 0 or high < 0:
        raise ArithmeticError(f"negative dimension in W({k}, {N})")
    return WDims(k, N, s + g, low, high)
