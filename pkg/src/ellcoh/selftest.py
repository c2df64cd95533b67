"""
Consistency checks shared by the ``selftest`` command and the test suite.

All checks are exact matrix identities or exact equalities of integers.
"""

from __future__ import annotations

import sys
import time
from math import prod

from . import forest
from .linalg import SparseExactMatrix

__all__ = [
    "bidegrees",
    "d_squared_zero",
    "commutes_with_d",
    "equivariance_ops",
    "run",
]


def bidegrees(n: int) -> list[tuple[int, int]]:
    return sorted({(blk.p, blk.q) for blk in forest.blocks(n)})


def _pq_matrix(n: int, op, src: tuple[int, int], dst: tuple[int, int]) -> SparseExactMatrix | None:
    s, t = forest.pq_blocks(n, *src), forest.pq_blocks(n, *dst)
    if not s or not t:
        return None
    return forest.operator_matrix(n, op, s, t)


def d_squared_zero(n: int, pq: tuple[int, int]) -> bool:
    p, q = pq
    d1 = _pq_matrix(n, "d", (p, q), (p + 2, q - 1))
    d2 = _pq_matrix(n, "d", (p + 2, q - 1), (p + 4, q - 2))
    if d1 is None or d2 is None:
        return True
    return (d2 @ d1).is_zero()


def commutes_with_d(n: int, op, pq: tuple[int, int]) -> bool:
    """op d = d op on the (p, q) part, for an operator preserving (p, q)."""
    p, q = pq
    d = _pq_matrix(n, "d", (p, q), (p + 2, q - 1))
    if d is None:
        return True
    g_src = _pq_matrix(n, op, (p, q), (p, q))
    g_dst = _pq_matrix(n, op, (p + 2, q - 1), (p + 2, q - 1))
    return d @ g_src == g_dst @ d


def equivariance_ops(n: int) -> list:
    """Generators of sl_2, of S_n (adjacent transpositions) and of SL_2(Z)."""
    ops: list = ["X", "Y", "H"]
    for i in range(1, n):
        sigma = list(range(1, n + 1))
        sigma[i - 1], sigma[i] = sigma[i], sigma[i - 1]
        ops.append(tuple(sigma))
    ops += [((0, -1), (1, 0)), ((1, 1), (0, 1)), ((0, -1), (1, -1))]
    return ops


def run(nmax: int = 4, out=sys.stdout) -> bool:
    """Run the quick checks for n <= nmax; print one line per check."""
    from .assembler import betti
    from .cohomology import bn_table, cohomology_table, primitive_multiplicities, sl2_multiplicities
    from .gamma import amalgam_h1, h1_dim, load_presentation, parabolic_h1_dim, prelim_route, VkAction
    from .modular import w_dims

    ok_all = True

    def report(name, ok, start):
        nonlocal ok_all
        ok_all &= bool(ok)
        out.write(f"{'ok  ' if ok else 'FAIL'} {name} ({time.perf_counter() - start:.2f}s)\n")

    for n in range(1, nmax + 1):
        t = time.perf_counter()
        report(f"n={n} dimension", forest.dimension(n) == prod(4 + i for i in range(n)), t)
        t = time.perf_counter()
        report(f"n={n} d^2 = 0", all(d_squared_zero(n, pq) for pq in bidegrees(n)), t)
        t = time.perf_counter()
        report(f"n={n} equivariance of d",
               all(commutes_with_d(n, op, pq) for op in equivariance_ops(n) for pq in bidegrees(n)), t)
        t = time.perf_counter()
        table = cohomology_table(n, workers=1)
        report(f"n={n} Euler characteristic", table.euler_characteristic() == 0, t)
        t = time.perf_counter()
        report(f"n={n} multiplicity formulas agree",
               sl2_multiplicities(table).mult == primitive_multiplicities(n).mult, t)
        t = time.perf_counter()
        try:
            bn_table(n, table=table, workers=1)
            ok = True
        except ArithmeticError:
            ok = False
        report(f"n={n} quotient routes agree", ok, t)
        t = time.perf_counter()
        report(f"n={n} Betti numbers at level 1 by both routes", betti(n, 1, workers=1) == prelim_route(n), t)
    t = time.perf_counter()
    report("amalgam formula at level 1, k <= 20",
           all(amalgam_h1(VkAction.of(k)) == w_dims(k, 1).total for k in range(21)), t)
    for N in (2, 3, 4, 5):
        t = time.perf_counter()
        pres = load_presentation(N)
        report(f"level {N} cocycle dimensions, k <= 10",
               all((h1_dim(pres, k), parabolic_h1_dim(pres, k)) == (w_dims(k, N).total, w_dims(k, N).w_low)
                   for k in range(11)), t)
    return ok_all
