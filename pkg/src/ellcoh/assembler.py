"""
Assembly of the cohomology of M_{1,n}(N) from the spectral sequence of the
forgetful map M_{1,n}(N) -> M_{1,1}(N).

Only the columns p = 0, 1 are non-zero and there are no differentials:

    E_2^{0,m} = (B_n^m)^{SL_2},   E_2^{1,m} = sum_k C_n^m(k) (x) W(k, N),

where C_n^m(k) is the multiplicity space of V_k in B_n^m.

Mixed Hodge polynomials are built from the multiplicities of H_n: the part
of bidegree (p, q) has weight p + 2q, so its V_i-isotypic part is recorded as
(uv)^((p + 2q - i)/2) [V_i] in t-degree p + q.  Dividing by the character
1 + t[V_1] + t^2 uv of the curve leaves H = sum_i h_i [V_i], and

    P = h_0 + t sum_i [s_{i+2}(u^{i+1} + v^{i+1}) + (g_{i+2} - s_{i+2})(uv)^{i+1}] h_i.
"""

from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .cohomology import (basis_hash, bn_dims_division, cohomology_table, equivariant_multiplicities,
                         equivariant_traces, hodge_character, sl2_multiplicities)
from .modular import WDims, w_dims
from .reps import ClassFunction, RepPoly, decompose, divide_by_curve_factor, partition_label, specialize

__all__ = [
    "E2Page",
    "ResultRecord",
    "assemble_e2",
    "betti",
    "mhdg",
    "mhdg_polynomial",
    "config_space",
    "check_record",
]


@dataclass
class E2Page:
    """The two non-zero columns of the E_2 page."""

    n: int
    N: int
    column0: dict = field(default_factory=dict)   # (degree, weight) -> dim
    column1: dict = field(default_factory=dict)   # (degree, k) -> (mult, WDims)

    def column0_dims(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for (m, _), v in self.column0.items():
            out[m] += v
        return dict(out)

    def column1_dims(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for (m, _), (mult, wd) in self.column1.items():
            out[m] += mult * wd.total
        return dict(out)


@dataclass
class ResultRecord:
    """
    Output of one computation.  ``N`` is None for configuration spaces.

    ``mhdg`` maps (t, u, v) to dimensions, ``poincare_serre`` maps (t, u) to
    dimensions, and ``equivariant`` maps a partition label such as "3+1" to
    the multiplicity polynomial ``{(t, u, v): m}`` of that irreducible.
    """

    n: int
    N: int | None
    betti: tuple
    poincare_serre: dict
    mhdg: dict
    equivariant: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)


def _bn_multiplicities(n: int, workers: int | None = None):
    return bn_dims_division(sl2_multiplicities(cohomology_table(n, workers)))


def assemble_e2(n: int, N: int, workers: int | None = None) -> E2Page:
    page = E2Page(n, N)
    for (p, q, k), m in _bn_multiplicities(n, workers).mult.items():
        if k == 0:
            key = (p + q, p + 2 * q)
            page.column0[key] = page.column0.get(key, 0) + m
        wd = w_dims(k, N)
        key = (p + q, k)
        prev = page.column1.get(key, (0, wd))[0]
        page.column1[key] = (prev + m, wd)
    return page


def _truncate(dims: dict[int, int], n: int) -> tuple:
    vec = [dims.get(m, 0) for m in range(2 * n)]
    if any(dims.get(m, 0) for m in dims if m >= 2 * n) or any(vec[n + 1:]):
        raise ArithmeticError("cohomology above the dimension of the moduli space")
    return tuple(vec)


def betti(n: int, N: int, workers: int | None = None) -> tuple:
    """b_m = dim E_2^{0,m} + dim E_2^{1,m-1} for m = 0 .. 2n - 1."""
    page = assemble_e2(n, N, workers)
    c0, c1 = page.column0_dims(), page.column1_dims()
    dims = {m: c0.get(m, 0) + c1.get(m - 1, 0) for m in set(c0) | {m + 1 for m in c1}}
    return _truncate(dims, n)


def _monomial_poly(t: int, u: int, v: int, c) -> dict:
    return {(t, u, v): c} if c else {}


def mhdg_polynomial(mult: dict, N: int) -> dict:
    """
    The mixed Hodge polynomial from the bigraded multiplicities ``mult`` of
    H_n (integers, or class functions for the equivariant version).
    """
    quotient = divide_by_curve_factor(hodge_character(mult), tate=True)
    hs = quotient.by_highest_weight()
    acc: dict = {}

    def add(key, c):
        acc[key] = acc[key] + c if key in acc else c

    for mon, c in hs.get(0, {}).items():
        add(mon, c)
    for i, h in hs.items():
        wd: WDims = w_dims(i, N)
        s, rest = wd.w_low // 2, wd.w_high
        for (t, u, v), c in h.items():
            if s:
                add((t + 1, u + i + 1, v), c * s)
                add((t + 1, u, v + i + 1), c * s)
            if rest:
                add((t + 1, u + i + 1, v + i + 1), c * rest)
    return {k: c for k, c in sorted(acc.items()) if c}


def _dims_poly(poly: dict) -> dict:
    out = {}
    for k, c in poly.items():
        c = c.dim() if isinstance(c, ClassFunction) else c
        c = int(c) if isinstance(c, Fraction) else c
        if c:
            out[k] = c
    return out


def _serre(poly: dict) -> dict:
    out: dict = defaultdict(int)
    for (t, u, v), c in poly.items():
        out[t, u + v] += c
    return {k: c for k, c in sorted(out.items()) if c}


def _poincare(poly: dict) -> dict[int, int]:
    out: dict = defaultdict(int)
    for (t, _, _), c in poly.items():
        out[t] += c
    return dict(out)


def _equivariant_split(n: int, poly: dict) -> dict:
    """``{label(lambda): {(t, u, v): multiplicity}}``, asserting integrality."""
    out: dict = defaultdict(dict)
    for mon, chi in poly.items():
        for lam, m in decompose(chi).items():
            if m < 0 or m.denominator != 1:
                raise ArithmeticError(f"multiplicity {m} of {lam} at {mon} is not a natural number")
            if m:
                out[partition_label(lam)][mon] = int(m)
    return dict(sorted(out.items()))


def check_record(rec: ResultRecord) -> None:
    """Invariants every record satisfies; raises ``ArithmeticError``."""
    if rec.N is not None:
        if _truncate(_poincare(rec.mhdg), rec.n) != tuple(rec.betti):
            raise ArithmeticError("u = v = 1 specialisation differs from the Betti numbers")
    elif tuple(rec.betti) != tuple(_poincare(rec.mhdg).get(m, 0) for m in range(2 * rec.n + 1)):
        raise ArithmeticError("u = v = 1 specialisation differs from the Betti numbers")
    for (t, u, v), c in rec.mhdg.items():
        if rec.mhdg.get((t, v, u)) != c:
            raise ArithmeticError("mixed Hodge polynomial is not symmetric in u and v")
        if c < 0:
            raise ArithmeticError("negative mixed Hodge number")
    if _serre(rec.mhdg) != rec.poincare_serre:
        raise ArithmeticError("Poincare-Serre polynomial inconsistent with mixed Hodge polynomial")
    for label, poly in rec.equivariant.items():
        if any(m < 0 for m in poly.values()):
            raise ArithmeticError(f"negative multiplicity for {label}")


def _meta(n: int, start: float) -> dict:
    return {"version": __version__, "basis_hash": basis_hash(n),
            "elapsed_ms": int((time.perf_counter() - start) * 1000)}


def mhdg(n: int, N: int, equivariant: bool = False, workers: int | None = None) -> ResultRecord:
    """Betti numbers and (equivariant) mixed Hodge polynomial of M_{1,n}(N)."""
    start = time.perf_counter()
    if equivariant:
        mult = equivariant_multiplicities(equivariant_traces(n, workers))
    else:
        mult = sl2_multiplicities(cohomology_table(n, workers)).mult
    poly = mhdg_polynomial(mult, N)
    dims = _dims_poly(poly)
    rec = ResultRecord(
        n=n, N=N,
        betti=betti(n, N, workers),
        poincare_serre=_serre(dims),
        mhdg=dims,
        equivariant=_equivariant_split(n, poly) if equivariant else {},
    )
    check_record(rec)
    rec.meta = _meta(n, start)
    return rec


def config_space(n: int, equivariant: bool = False, workers: int | None = None) -> ResultRecord:
    """Poincare and mixed Hodge polynomials of F(E, n); the (p, q) part has weight p + 2q."""
    start = time.perf_counter()
    if equivariant:
        mult = equivariant_multiplicities(equivariant_traces(n, workers))
    else:
        mult = sl2_multiplicities(cohomology_table(n, workers)).mult
    P: RepPoly = hodge_character(mult)
    poly = specialize(P, "full", equivariant=equivariant)
    dims = _dims_poly(poly)
    pp = _poincare(dims)
    rec = ResultRecord(
        n=n, N=None,
        betti=tuple(pp.get(m, 0) for m in range(2 * n + 1)),
        poincare_serre=_serre(dims),
        mhdg=dims,
        equivariant=_equivariant_split(n, poly) if equivariant else {},
    )
    check_record(rec)
    rec.meta = _meta(n, start)
    return rec
