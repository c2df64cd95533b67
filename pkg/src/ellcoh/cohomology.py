"""
Cohomology of the differential graded algebra of admissible forests.

The differential preserves the H-weight and maps the (p, q) block to the
(p + 2, q - 1) block, so everything is computed one block ``(p, q, h)`` at a
time.  The Weyl element exchanges h and -h and commutes with everything else,
so only the blocks with h >= 0 are computed and the others are filled in by
symmetry.

Besides the cohomology H of the algebra we compute the quotient B of H by the
ideal generated by the classes alpha = sum a_i and beta = sum b_i, which is
the cohomology of the configuration space divided by the translation action
of the curve.
"""

from __future__ import annotations

import hashlib
import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from . import forest
from .forest import GradedBlockIndex, block_index, d_source, d_target
from .linalg import (SparseExactMatrix, Subquotient, certified_rank, induced_matrix,
                     kernel_basis, kernel_with_free, rank, span_basis)
from .reps import (ClassFunction, DivisionError, RepPoly, Sl2RepVector, class_representative,
                   divide_by_curve_factor, partitions)

__all__ = [
    "CohomologyTable",
    "MultiplicityTable",
    "cohomology_table",
    "sl2_multiplicities",
    "primitive_multiplicities",
    "bn_table",
    "bn_dims_explicit",
    "bn_dims_division",
    "hodge_character",
    "multiplicities_from_character",
    "equivariant_traces",
    "equivariant_multiplicities",
    "sn_trace",
    "h_subquotient",
    "b_subquotient",
    "group_matrix_on_cohomology",
    "basis_hash",
]


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _blocks_nonneg(n: int) -> list[GradedBlockIndex]:
    return [blk for blk in forest.blocks(n) if blk.h_weight >= 0]


def _exists(n: int, blk: GradedBlockIndex) -> bool:
    return forest.block_size(n, blk) > 0


def _mirror(blk: GradedBlockIndex) -> GradedBlockIndex:
    return block_index(blk.p, blk.q, -blk.h_weight)


def parallel_map(fn: Callable, items: Sequence, workers: int | None = None) -> list:
    """``[fn(x) for x in items]``, fanned out over processes when workers > 1."""
    items = list(items)
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=1))


@lru_cache(maxsize=None)
def d_matrix(n: int, blk: GradedBlockIndex) -> SparseExactMatrix:
    """Matrix of d from ``blk`` to ``d_target(blk)``."""
    return forest.operator_matrix(n, "d", blk, d_target(blk))


@lru_cache(maxsize=None)
def d_rank(n: int, blk: GradedBlockIndex) -> int:
    """Rank of d leaving ``blk``."""
    if not _exists(n, blk) or not _exists(n, d_target(blk)):
        return 0
    return rank(d_matrix(n, blk))


@lru_cache(maxsize=None)
def cycles(n: int, blk: GradedBlockIndex) -> tuple:
    """Kernel basis of d on ``blk`` and its free columns."""
    size = forest.block_size(n, blk)
    if not _exists(n, d_target(blk)):
        return tuple({i: Fraction(1)} for i in range(size)), tuple(range(size))
    vecs, free = kernel_with_free(d_matrix(n, blk))
    return tuple(vecs), tuple(free)


def boundaries(n: int, blk: GradedBlockIndex) -> list[dict]:
    """Images under d of the basis of the source block, as vectors of ``blk``."""
    src = d_source(blk)
    if not _exists(n, src) or not _exists(n, blk):
        return []
    return [c for c in forest.operator_matrix(n, "d", src, blk).columns() if c]


def basis_hash(n: int) -> str:
    """Digest of the ordered monomial basis, used to validate cached results."""
    h = hashlib.sha256()
    for blk in forest.blocks(n):
        h.update(repr(tuple(blk)).encode())
        for m in forest.basis(n, blk):
            h.update(str(m).encode())
            h.update(b";")
    return h.hexdigest()[:16]


# ---------------------------------------------------------------------------
# cohomology dimensions
# ---------------------------------------------------------------------------


@dataclass
class CohomologyTable:
    """
    Dimensions of a bigraded cohomology, one entry per block (p, q, h).

    ``space`` is ``"H"`` for the cohomology of the algebra and ``"B"`` for its
    quotient by the ideal of (alpha, beta).
    """

    n: int
    dims: dict = field(default_factory=dict)
    space: str = "H"

    def dim(self, p: int, q: int, h: int | None = None) -> int:
        if h is None:
            return sum(v for blk, v in self.dims.items() if blk.p == p and blk.q == q)
        return self.dims.get(block_index(p, q, h), 0)

    def bidegree_dims(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = defaultdict(int)
        for blk, v in self.dims.items():
            if v:
                out[blk.p, blk.q] += v
        return dict(sorted(out.items()))

    def poincare(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for (p, q), v in self.bidegree_dims().items():
            out[p + q] += v
        return dict(sorted(out.items()))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * v for k, v in self.poincare().items())

    def subquotient(self, blk: GradedBlockIndex) -> Subquotient:
        return h_subquotient(self.n, blk) if self.space == "H" else b_subquotient(self.n, blk)

    @property
    def entries(self) -> dict:
        """``{(degree, p, q): [Subquotient per H-weight]}``; built on demand."""
        out: dict = defaultdict(list)
        for blk in sorted(self.dims):
            out[blk.degree, blk.p, blk.q].append(self.subquotient(blk))
        return dict(out)


def _fill_mirror(dims_nonneg: dict) -> dict:
    out = dict(dims_nonneg)
    for blk, v in dims_nonneg.items():
        if blk.h_weight > 0:
            out[_mirror(blk)] = v
    return out


def _rank_job(args):
    n, blk, certify = args
    if not _exists(n, blk) or not _exists(n, d_target(blk)):
        return 0
    m = d_matrix(n, blk)
    return certified_rank(m) if certify else rank(m)


def cohomology_table(n: int, workers: int | None = None, certify: bool = False) -> CohomologyTable:
    """
    Dimensions of H(p, q, h) = ker d / im d for every block.

    The ranks of d on the blocks with h >= 0 are independent jobs and are
    distributed over ``workers`` processes.  With ``certify`` every rank over
    Q is compared against ranks modulo random primes.
    """
    blks = _blocks_nonneg(n)
    ranks = parallel_map(_rank_job, [(n, blk, certify) for blk in blks], workers)
    rk = dict(zip(blks, ranks))
    dims = {}
    for blk in blks:
        size = forest.block_size(n, blk)
        dims[blk] = size - rk[blk] - rk.get(d_source(blk), 0)
    return CohomologyTable(n, _fill_mirror(dims), "H")


# ---------------------------------------------------------------------------
# sl2 multiplicities
# ---------------------------------------------------------------------------


@dataclass
class MultiplicityTable:
    """Multiplicity of V_k in the (p, q) part, keyed by ``(p, q, k)``."""

    n: int
    mult: dict = field(default_factory=dict)
    space: str = "H"

    def get(self, p: int, q: int, k: int) -> int:
        return self.mult.get((p, q, k), 0)

    def invariants(self) -> dict[tuple[int, int], int]:
        return {(p, q): m for (p, q, k), m in self.mult.items() if k == 0 and m}

    def total_dims(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = defaultdict(int)
        for (p, q, k), m in self.mult.items():
            out[p, q] += m * (k + 1)
        return dict(out)


def sl2_multiplicities(table: CohomologyTable) -> MultiplicityTable:
    """m(p, q, k) = dim H(p, q, k) - dim H(p, q, k + 2) for k >= 0."""
    mult = {}
    for blk, v in table.dims.items():
        if blk.h_weight < 0:
            continue
        m = v - table.dims.get(block_index(blk.p, blk.q, blk.h_weight + 2), 0)
        if m < 0:
            raise ArithmeticError(f"negative multiplicity at {blk}: weights not sl2-symmetric")
        if m:
            mult[blk.p, blk.q, blk.h_weight] = m
    return MultiplicityTable(table.n, dict(sorted(mult.items())), table.space)


@lru_cache(maxsize=None)
def _primitive_basis(n: int, blk: GradedBlockIndex) -> tuple:
    """Basis of ker X on ``blk`` (highest weight vectors)."""
    up = block_index(blk.p, blk.q, blk.h_weight + 2)
    size = forest.block_size(n, blk)
    if not _exists(n, up):
        return tuple({i: Fraction(1)} for i in range(size))
    return tuple(kernel_basis(forest.operator_matrix(n, "X", blk, up)))


def _primitive_d_rank(n: int, blk: GradedBlockIndex) -> int:
    tgt = d_target(blk)
    vecs = _primitive_basis(n, blk)
    if not vecs or not _exists(n, tgt):
        return 0
    d = d_matrix(n, blk)
    images = [d.apply(v) for v in vecs]
    return rank(SparseExactMatrix.from_columns(d.nrows, images))


def primitive_multiplicities(n: int) -> MultiplicityTable:
    """
    Multiplicities from the subcomplex of highest weight vectors.

    X commutes with d, so ker X restricted to H-weight k is a subcomplex whose
    cohomology has dimension m(p, q, k).
    """
    mult = {}
    rk = {blk: _primitive_d_rank(n, blk) for blk in _blocks_nonneg(n)}
    for blk in _blocks_nonneg(n):
        m = len(_primitive_basis(n, blk)) - rk[blk] - rk.get(d_source(blk), 0)
        if m:
            mult[blk.p, blk.q, blk.h_weight] = m
    return MultiplicityTable(n, dict(sorted(mult.items())), "H")


# ---------------------------------------------------------------------------
# characters as polynomials
# ---------------------------------------------------------------------------


def hodge_character(mult: dict, weight: Callable[[int, int], int] | None = None) -> RepPoly:
    """
    ``sum_{p,q,k} m t^(p+q) (uv)^((w-k)/2) [V_k]`` with w = weight(p, q).

    ``mult`` maps ``(p, q, k)`` to an integer or class function.  By default
    the (p, q) part has weight w = p + 2q; a different ``weight`` is only
    useful for checking other conventions.
    """
    coeffs: dict = {}
    for (p, q, k), c in mult.items():
        if not c:
            continue
        w = p + 2 * q if weight is None else weight(p, q)
        if (w - k) % 2 or w < k:
            raise ValueError(f"V_{k} cannot occur in weight {w}")
        e = (w - k) // 2
        key = (p + q, e, e)
        prev = coeffs.get(key, Sl2RepVector())
        coeffs[key] = prev + Sl2RepVector({k: c})
    return RepPoly(coeffs)


def multiplicities_from_character(P: RepPoly) -> dict:
    """Inverse of ``hodge_character``: ``{(p, q, k): coeff}``."""
    out = {}
    for (j, u, v), x in P.coeffs.items():
        if u != v:
            raise ValueError("character is not of Tate type")
        for k, c in x.mult.items():
            w = k + 2 * u
            out[2 * j - w, w - j, k] = c
    return dict(sorted(out.items()))


# ---------------------------------------------------------------------------
# the quotient B
# ---------------------------------------------------------------------------


def bn_dims_division(mult: MultiplicityTable) -> MultiplicityTable:
    """
    Multiplicities of B by dividing the character of H by the character
    1 + t[V_1] + t^2 uv of the curve, with weight-graded products.
    """
    quotient = divide_by_curve_factor(hodge_character(mult.mult), tate=True)
    return MultiplicityTable(mult.n, multiplicities_from_character(quotient), "B")


def _vectors_into(n: int, op: str, src: GradedBlockIndex, vecs: Iterable[dict],
                  dst: GradedBlockIndex) -> list[dict]:
    if not _exists(n, src) or not _exists(n, dst):
        return []
    m = forest.operator_matrix(n, op, src, dst)
    return [img for img in (m.apply(v) for v in vecs) if img]


def _ideal_vectors(n: int, blk: GradedBlockIndex) -> list[dict]:
    """Spanning set of B-boundaries in ``blk``: im d, alpha*Z and beta*Z."""
    p, q, h = blk.p, blk.q, blk.h_weight
    out = boundaries(n, blk)
    src_a = block_index(p - 1, q, h - 1)
    src_b = block_index(p - 1, q, h + 1)
    if p >= 1:
        if _exists(n, src_a):
            out += _vectors_into(n, "alpha", src_a, cycles(n, src_a)[0], blk)
        if _exists(n, src_b):
            out += _vectors_into(n, "beta", src_b, cycles(n, src_b)[0], blk)
    return out


def _bn_block_job(args) -> int:
    n, blk = args
    z = len(cycles(n, blk)[0])
    vecs = _ideal_vectors(n, blk)
    if not vecs:
        return z
    return z - rank(SparseExactMatrix.from_columns(forest.block_size(n, blk), vecs))


def bn_dims_explicit(n: int, workers: int | None = None) -> CohomologyTable:
    """dim Z - rank(im d + alpha Z + beta Z) block by block."""
    blks = _blocks_nonneg(n)
    vals = parallel_map(_bn_block_job, [(n, blk) for blk in blks], workers)
    return CohomologyTable(n, _fill_mirror(dict(zip(blks, vals))), "B")


def bn_table(n: int, route: str = "both", table: CohomologyTable | None = None,
             workers: int | None = None) -> tuple[CohomologyTable | None, MultiplicityTable]:
    """
    The quotient B of H by the ideal (alpha, beta).

    ``route`` is ``"explicit"`` (linear algebra in the algebra), ``"division"``
    (character division) or ``"both"``, which computes both and raises
    ``ArithmeticError`` if they disagree.  Returns the dimension table (None
    for the division route alone) and the multiplicity table.
    """
    if route not in ("explicit", "division", "both"):
        raise ValueError(f"unknown route {route!r}")
    explicit = div = None
    if route in ("explicit", "both"):
        explicit = bn_dims_explicit(n, workers)
    if route in ("division", "both"):
        if table is None:
            table = cohomology_table(n, workers)
        div = bn_dims_division(sl2_multiplicities(table))
    if explicit is not None:
        emult = sl2_multiplicities(explicit)
        if div is not None and emult.mult != div.mult:
            raise ArithmeticError("explicit quotient and character division disagree")
        return explicit, emult
    return None, div


# ---------------------------------------------------------------------------
# symmetric group traces
# ---------------------------------------------------------------------------


def _perm_matrix(n: int, sigma: tuple, blk: GradedBlockIndex) -> SparseExactMatrix:
    return forest.operator_matrix(n, sigma, blk, blk)


def _trace_job(args):
    """Traces of class representatives on the block and on its cycles."""
    n, blk = args
    tr_a, tr_z = {}, {}
    vecs, free = cycles(n, blk)
    for mu in partitions(n):
        sigma = class_representative(mu)
        m = _perm_matrix(n, sigma, blk)
        tr_a[mu] = m.trace()
        rows = m.rows()
        t = Fraction(0)
        for f, v in zip(free, vecs):
            row = rows.get(f)
            if row:
                t += sum((c * v[j] for j, c in row.items() if j in v), Fraction(0))
        tr_z[mu] = t
    return tr_a, tr_z


def equivariant_traces(n: int, workers: int | None = None) -> dict[GradedBlockIndex, ClassFunction]:
    """
    Character of S_n on every block H(p, q, h) with h >= 0.

    Uses additivity of traces along 0 -> Z -> A -> B' -> 0 with B' the
    boundaries in the next block:  tr H = tr Z - (tr A_src - tr Z_src).
    The kernel bases have an identity block on their free columns, so the
    trace on Z is read off from those columns.
    """
    blks = [blk for blk in _blocks_nonneg(n) if _exists(n, blk)]
    res = dict(zip(blks, parallel_map(_trace_job, [(n, blk) for blk in blks], workers)))
    out = {}
    zero = {mu: Fraction(0) for mu in partitions(n)}
    for blk in blks:
        tr_a_src, tr_z_src = res.get(d_source(blk), (zero, zero))
        _, tr_z = res[blk]
        out[blk] = ClassFunction(n, {mu: tr_z[mu] - tr_a_src[mu] + tr_z_src[mu]
                                     for mu in partitions(n)})
    return out


def equivariant_multiplicities(traces: dict[GradedBlockIndex, ClassFunction]) -> dict:
    """Class-function multiplicities ``{(p, q, k): chi}`` of V_k."""
    out = {}
    for blk, chi in traces.items():
        up = traces.get(block_index(blk.p, blk.q, blk.h_weight + 2))
        m = chi - up if up is not None else chi
        if m:
            out[blk.p, blk.q, blk.h_weight] = m
    return dict(sorted(out.items()))


def h_subquotient(n: int, blk: GradedBlockIndex) -> Subquotient:
    return Subquotient.from_spanning(forest.block_size(n, blk), cycles(n, blk)[0], boundaries(n, blk))


def b_subquotient(n: int, blk: GradedBlockIndex) -> Subquotient:
    return Subquotient.from_spanning(forest.block_size(n, blk), cycles(n, blk)[0], _ideal_vectors(n, blk))


def sn_trace(n: int, mu: Sequence[int], blk: GradedBlockIndex, space: str = "H",
             method: str = "induced") -> Fraction:
    """
    Trace of a permutation of cycle type ``mu`` on the ``blk`` part of H or B.

    ``method="induced"`` builds the induced matrix on the subquotient;
    ``method="additive"`` uses trace additivity (and, for B, the division by
    the curve character).
    """
    mu = tuple(sorted(mu, reverse=True))
    if space not in ("H", "B"):
        raise ValueError(f"unknown space {space!r}")
    if method == "induced":
        if not _exists(n, blk):
            return Fraction(0)
        s = h_subquotient(n, blk) if space == "H" else b_subquotient(n, blk)
        return induced_matrix(_perm_matrix(n, class_representative(mu), blk), s).trace()
    if method != "additive":
        raise ValueError(f"unknown method {method!r}")
    traces = equivariant_traces(n, workers=1)
    key = blk if blk.h_weight >= 0 else _mirror(blk)
    if space == "H":
        chi = traces.get(key)
        return chi(mu) if chi is not None else Fraction(0)
    mult = equivariant_multiplicities(traces)
    quotient = divide_by_curve_factor(hodge_character(mult), tate=True)
    bm = multiplicities_from_character(quotient)
    h = abs(blk.h_weight)
    total = Fraction(0)
    for (p, q, k), chi in bm.items():
        if p == blk.p and q == blk.q and k >= h and (k - h) % 2 == 0:
            total += chi(mu)
    return total


# ---------------------------------------------------------------------------
# SL_2(Z) on B
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _b_pq_subquotient(n: int, p: int, q: int) -> Subquotient:
    blks = forest.pq_blocks(n, p, q)
    offsets, off = {}, 0
    for blk in blks:
        offsets[blk] = off
        off += forest.block_size(n, blk)
    cyc, bnd = [], []
    for blk in blks:
        o = offsets[blk]
        cyc += [{i + o: v for i, v in vec.items()} for vec in cycles(n, blk)[0]]
        bnd += [{i + o: v for i, v in vec.items()} for vec in _ideal_vectors(n, blk)]
    return Subquotient(off, tuple(span_basis(cyc)), tuple(span_basis(bnd)))


def group_matrix_on_cohomology(g, n: int, block) -> SparseExactMatrix:
    """
    Matrix of g in SL_2(Z) on B(p, q), the sum over all H-weights.

    ``block`` is a ``(p, q)`` pair or a ``GradedBlockIndex`` whose H-weight is
    ignored.
    """
    p, q = (block.p, block.q) if isinstance(block, GradedBlockIndex) else block
    s = _b_pq_subquotient(n, p, q)
    blks = forest.pq_blocks(n, p, q)
    if not blks:
        return SparseExactMatrix.zero(0, 0)
    op = forest.operator_matrix(n, g, blks, blks)
    return induced_matrix(op, s)
