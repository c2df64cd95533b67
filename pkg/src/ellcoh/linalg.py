"""
Exact sparse linear algebra over the rationals.

Everything downstream (ranks of differentials, cocycle bases, matrices of
group elements on cohomology) goes through this module.  Matrices are stored
row-wise as ``{row: {col: Fraction}}`` with no explicit zeros.  Elimination is
done on integer rows: each row is cleared of denominators first, and a row
update ``r <- a*r - b*p`` is followed by removal of the row content, which is
the fraction-free scheme with gcd control.  Pivots are chosen Markowitz-style
(shortest row, then the sparsest column in it, preferring unit entries) to
keep fill-in down.

The same elimination runs modulo a prime, which gives a cheap independent
check of every rational rank.
"""

from __future__ import annotations

import heapq
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

__all__ = [
    "ExactRational",
    "SparseExactMatrix",
    "Subquotient",
    "NotInSpanError",
    "RankMismatchError",
    "rank",
    "rank_mod_p",
    "certified_rank",
    "kernel_basis",
    "row_reduce",
    "span_basis",
    "subquotient_dim",
    "induced_matrix",
    "random_prime",
]

ExactRational = Fraction

SparseVector = dict  # {index: Fraction}


class NotInSpanError(ValueError):
    """A vector expected to lie in a subspace does not."""


class RankMismatchError(ArithmeticError):
    """Rational and modular ranks disagree even after a second prime."""


def _frac(x) -> Fraction:
    return x if type(x) is Fraction else Fraction(x)


class SparseExactMatrix:
    """Immutable sparse matrix with exact rational entries."""

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, nrows: int, ncols: int, entries: Mapping | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative shape")
        self.nrows = nrows
        self.ncols = ncols
        rows: dict[int, dict[int, Fraction]] = {}
        if entries:
            for (r, c), v in entries.items():
                if not (0 <= r < nrows and 0 <= c < ncols):
                    raise IndexError(f"entry ({r}, {c}) outside {nrows}x{ncols}")
                if v:
                    rows.setdefault(r, {})[c] = _frac(v)
        self._rows = rows

    @classmethod
    def from_rows(cls, nrows: int, ncols: int, rows: Mapping[int, Mapping[int, object]]):
        """Build from a row dictionary; zero values are dropped."""
        m = cls(nrows, ncols)
        out = {}
        for r, row in rows.items():
            if not 0 <= r < nrows:
                raise IndexError(f"row {r} outside {nrows}")
            clean = {}
            for c, v in row.items():
                if not 0 <= c < ncols:
                    raise IndexError(f"column {c} outside {ncols}")
                if v:
                    clean[c] = _frac(v)
            if clean:
                out[r] = clean
        m._rows = out
        return m

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Mapping[int, object]]):
        rows: dict[int, dict[int, object]] = {}
        for c, col in enumerate(columns):
            for r, v in col.items():
                if v:
                    rows.setdefault(r, {})[c] = v
        return cls.from_rows(nrows, len(columns), rows)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]], ncols: int | None = None):
        nrows = len(data)
        if ncols is None:
            ncols = len(data[0]) if nrows else 0
        rows = {}
        for r, line in enumerate(data):
            if len(line) != ncols:
                raise ValueError("ragged dense matrix")
            rows[r] = {c: v for c, v in enumerate(line) if v}
        return cls.from_rows(nrows, ncols, rows)

    @classmethod
    def identity(cls, n: int, scale=1):
        return cls.from_rows(n, n, {i: {i: scale} for i in range(n)})

    @classmethod
    def zero(cls, nrows: int, ncols: int):
        return cls(nrows, ncols)

    # -- access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def entries(self) -> dict[tuple[int, int], Fraction]:
        return {(r, c): v for r, row in self._rows.items() for c, v in row.items()}

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self._rows.values())

    def row(self, r: int) -> dict[int, Fraction]:
        return dict(self._rows.get(r, {}))

    def rows(self) -> dict[int, dict[int, Fraction]]:
        return {r: dict(row) for r, row in self._rows.items()}

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        r, c = key
        return self._rows.get(r, {}).get(c, Fraction(0))

    def columns(self) -> list[dict[int, Fraction]]:
        cols: list[dict[int, Fraction]] = [{} for _ in range(self.ncols)]
        for r, row in self._rows.items():
            for c, v in row.items():
                cols[c][r] = v
        return cols

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for r, row in self._rows.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def is_zero(self) -> bool:
        return not self._rows

    def trace(self) -> Fraction:
        if self.nrows != self.ncols:
            raise ValueError("trace of a non-square matrix")
        return sum((row.get(r, 0) for r, row in self._rows.items()), Fraction(0))

    # -- arithmetic -------------------------------------------------------

    def transpose(self) -> "SparseExactMatrix":
        m = SparseExactMatrix(self.ncols, self.nrows)
        out: dict[int, dict[int, Fraction]] = {}
        for r, row in self._rows.items():
            for c, v in row.items():
                out.setdefault(c, {})[r] = v
        m._rows = out
        return m

    T = property(transpose)

    def apply(self, vec: Mapping[int, object]) -> dict[int, Fraction]:
        """Matrix-vector product with a sparse vector."""
        out: dict[int, Fraction] = {}
        for r, row in self._rows.items():
            s = 0
            for c, v in vec.items():
                w = row.get(c)
                if w is not None:
                    s += w * v
            if s:
                out[r] = _frac(s)
        return out

    def __matmul__(self, other: "SparseExactMatrix") -> "SparseExactMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        orows = other._rows
        out: dict[int, dict[int, Fraction]] = {}
        for r, row in self._rows.items():
            acc: dict[int, Fraction] = defaultdict(Fraction)
            for k, v in row.items():
                krow = orows.get(k)
                if krow:
                    for c, w in krow.items():
                        acc[c] += v * w
            acc = {c: x for c, x in acc.items() if x}
            if acc:
                out[r] = acc
        m = SparseExactMatrix(self.nrows, other.ncols)
        m._rows = out
        return m

    def _combine(self, other: "SparseExactMatrix", sign: int) -> "SparseExactMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = {r: dict(row) for r, row in self._rows.items()}
        for r, row in other._rows.items():
            tgt = out.setdefault(r, {})
            for c, v in row.items():
                x = tgt.get(c, 0) + sign * v
                if x:
                    tgt[c] = x
                else:
                    tgt.pop(c, None)
            if not tgt:
                del out[r]
        m = SparseExactMatrix(self.nrows, self.ncols)
        m._rows = out
        return m

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, scalar):
        s = _frac(scalar)
        m = SparseExactMatrix(self.nrows, self.ncols)
        if s:
            m._rows = {r: {c: v * s for c, v in row.items()} for r, row in self._rows.items()}
        return m

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SparseExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, frozenset(self.entries.items())))

    def __repr__(self):
        return f"SparseExactMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SparseExactMatrix":
        rpos = {r: i for i, r in enumerate(rows)}
        cpos = {c: j for j, c in enumerate(cols)}
        out = {}
        for r, row in self._rows.items():
            i = rpos.get(r)
            if i is None:
                continue
            sel = {cpos[c]: v for c, v in row.items() if c in cpos}
            if sel:
                out[i] = sel
        m = SparseExactMatrix(len(rows), len(cols))
        m._rows = out
        return m

    def power(self, k: int) -> "SparseExactMatrix":
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        result = SparseExactMatrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result


def hstack(mats: Sequence[SparseExactMatrix]) -> SparseExactMatrix:
    if not mats:
        raise ValueError("nothing to stack")
    nrows = mats[0].nrows
    cols: list[dict[int, Fraction]] = []
    for m in mats:
        if m.nrows != nrows:
            raise ValueError("row counts differ")
        cols.extend(m.columns())
    return SparseExactMatrix.from_columns(nrows, cols)


def vstack(mats: Sequence[SparseExactMatrix]) -> SparseExactMatrix:
    return hstack([m.transpose() for m in mats]).transpose()


# ---------------------------------------------------------------------------
# elimination core
# ---------------------------------------------------------------------------


def _integer_row(row: Mapping[int, object]) -> dict[int, int]:
    """Scale a rational row to a primitive integer row (same span)."""
    den = 1
    for v in row.values():
        if type(v) is not int:
            den = lcm(den, Fraction(v).denominator)
    out = {}
    g = 0
    for c, v in row.items():
        x = int(v * den) if den != 1 or type(v) is not int else v
        if x:
            out[c] = x
            g = gcd(g, x)
    if g > 1:
        out = {c: x // g for c, x in out.items()}
    return out


def _eliminate(rows: Iterable[Mapping[int, object]], modulus: int | None = None,
               reduced: bool = False) -> list[tuple[int, dict[int, int]]]:
    """
    Row-echelon form of a list of sparse rows.

    Returns ``[(pivot_col, row), ...]`` in pivot order.  With ``reduced=True``
    every pivot column is cleared from every other pivot row (Gauss-Jordan).
    Over Q the rows stay integral and primitive; modulo a prime the pivot
    entries are normalised to 1.
    """
    active: dict[int, dict[int, int]] = {}
    for i, row in enumerate(rows):
        if modulus is None:
            r = _integer_row(row)
        else:
            r = {}
            for c, v in row.items():
                v = Fraction(v)
                x = v.numerator * pow(v.denominator, -1, modulus) % modulus
                if x:
                    r[c] = x
        if r:
            active[i] = r
    colrows: dict[int, set[int]] = defaultdict(set)
    for i, r in active.items():
        for c in r:
            colrows[c].add(i)
    donecols: dict[int, set[int]] = defaultdict(set)
    done: dict[int, dict[int, int]] = {}
    heap = [(len(r), i) for i, r in active.items()]
    heapq.heapify(heap)
    pivots: list[tuple[int, int]] = []

    def update(target: dict[int, int], k: int, index: dict[int, set[int]],
               prow: dict[int, int], pcol: int) -> None:
        a = target[pcol]
        pv = prow[pcol]
        if modulus is not None:
            f = a  # pivot normalised to 1
            for c, v in prow.items():
                x = (target.get(c, 0) - f * v) % modulus
                if x:
                    if c not in target:
                        index[c].add(k)
                    target[c] = x
                elif c in target:
                    del target[c]
                    index[c].discard(k)
            return
        if a % pv == 0:
            f, s = a // pv, 1
        else:
            g = gcd(a, pv)
            f, s = a // g, pv // g
            for c in target:
                target[c] *= s
        for c, v in prow.items():
            x = target.get(c, 0) - f * v
            if x:
                if c not in target:
                    index[c].add(k)
                target[c] = x
            elif c in target:
                del target[c]
                index[c].discard(k)
        if s != 1 or abs(f) != 1:
            g = 0
            for x in target.values():
                g = gcd(g, x)
                if g == 1:
                    break
            if g > 1:
                for c in target:
                    target[c] //= g

    while heap:
        ln, i = heapq.heappop(heap)
        r = active.get(i)
        if r is None or len(r) != ln:
            continue
        # Markowitz-style choice inside the shortest row
        best = None
        for c, v in r.items():
            key = (len(colrows[c]), 0 if v in (1, -1) else 1, c)
            if best is None or key < best[0]:
                best = (key, c)
        pc = best[1]
        del active[i]
        for c in r:
            colrows[c].discard(i)
        if modulus is not None and r[pc] != 1:
            inv = pow(r[pc], -1, modulus)
            for c in r:
                r[c] = r[c] * inv % modulus
        for k in list(colrows[pc]):
            t = active[k]
            update(t, k, colrows, r, pc)
            if t:
                heapq.heappush(heap, (len(t), k))
            else:
                del active[k]
        if reduced:
            for k in list(donecols[pc]):
                update(done[k], k, donecols, r, pc)
            for c in r:
                donecols[c].add(i)
            done[i] = r
        pivots.append((pc, i))
        if not reduced:
            done[i] = r
    return [(pc, done[i]) for pc, i in pivots]


def _rows_of(m: SparseExactMatrix | Sequence[Mapping[int, object]]):
    if isinstance(m, SparseExactMatrix):
        return list(m._rows.values())
    return list(m)


def rank(m: SparseExactMatrix) -> int:
    """Exact rank over Q."""
    rows = _rows_of(m)
    if isinstance(m, SparseExactMatrix) and m.ncols < len(rows):
        rows = list(m.transpose()._rows.values())
    return len(_eliminate(rows))


def rank_mod_p(m: SparseExactMatrix, p: int) -> int:
    """Rank of the reduction modulo the prime ``p`` (entries must be p-integral)."""
    return len(_eliminate(_rows_of(m), modulus=p))


_rng = random.Random(20240521)


def random_prime(bits: int = 62, rng: random.Random | None = None) -> int:
    from sympy import nextprime

    rng = rng or _rng
    return int(nextprime(rng.getrandbits(bits) | (1 << (bits - 1))))


def certified_rank(m: SparseExactMatrix, p: int | None = None) -> int:
    """
    Rank over Q cross-checked against the rank modulo a random 62-bit prime.

    A mismatch (possible only if the prime divides some minor) is retried
    with a second prime; a second mismatch raises ``RankMismatchError``.
    """
    r = rank(m)
    for attempt in range(2):
        q = p if (p is not None and attempt == 0) else random_prime()
        try:
            rp = rank_mod_p(m, q)
        except ValueError:  # a denominator divisible by q
            continue
        if rp == r:
            return r
    raise RankMismatchError(f"rank over Q is {r} but modular ranks disagree")


def row_reduce(vectors: Sequence[Mapping[int, object]]) -> list[tuple[int, dict[int, Fraction]]]:
    """
    Reduced row-echelon basis of the span of ``vectors``.

    Returns ``[(pivot, vec)]`` with ``vec[pivot] == 1`` and every pivot absent
    from every other vector, sorted by pivot.
    """
    out = []
    for pc, row in _eliminate(vectors, reduced=True):
        pv = row[pc]
        out.append((pc, {c: Fraction(v, pv) for c, v in row.items()}))
    out.sort(key=lambda t: t[0])
    return out


def span_basis(vectors: Sequence[Mapping[int, object]]) -> list[dict[int, Fraction]]:
    """An independent subset-free basis (reduced echelon) of the span."""
    return [v for _, v in row_reduce(vectors)]


def kernel_with_free(m: SparseExactMatrix) -> tuple[list[dict[int, Fraction]], list[int]]:
    """
    Kernel basis together with its free columns.

    Vector ``i`` has entry 1 at ``free[i]`` and 0 at every other free column,
    so the coordinates of a kernel element are its values on ``free``.
    """
    echelon = _eliminate(list(m._rows.values()), reduced=True)
    pivot_cols = {pc for pc, _ in echelon}
    free = [c for c in range(m.ncols) if c not in pivot_cols]
    by_col: dict[int, list[tuple[int, int, int]]] = defaultdict(list)
    for pc, row in echelon:
        pv = row[pc]
        for c, v in row.items():
            if c != pc:
                by_col[c].append((pc, v, pv))
    basis = []
    for f in free:
        vec = {f: Fraction(1)}
        for pc, v, pv in by_col.get(f, ()):
            vec[pc] = Fraction(-v, pv)
        basis.append(vec)
    return basis, free


def kernel_basis(m: SparseExactMatrix) -> list[dict[int, Fraction]]:
    """Independent vectors spanning ker m; there are ``cols - rank`` of them."""
    return kernel_with_free(m)[0]


# ---------------------------------------------------------------------------
# subquotients
# ---------------------------------------------------------------------------


def _combo(frame: Sequence[tuple[int, Mapping[int, Fraction]]], coeffs: Sequence) -> dict:
    out: dict[int, Fraction] = defaultdict(Fraction)
    for (_, vec), x in zip(frame, coeffs):
        if x:
            for c, v in vec.items():
                out[c] += x * v
    return {c: v for c, v in out.items() if v}


def _clean(vec: Mapping[int, object]) -> dict[int, Fraction]:
    return {c: _frac(v) for c, v in vec.items() if v}


@dataclass(frozen=True, eq=False)
class Subquotient:
    """
    The space Z/B for subspaces B <= Z of Q^ambient_dim.

    ``cycle_basis`` spans Z and ``boundary_basis`` spans B.  Classes are
    represented by cycle vectors completing a basis of B to one of Z.
    """

    ambient_dim: int
    cycle_basis: tuple = field(default_factory=tuple)
    boundary_basis: tuple = field(default_factory=tuple)

    @classmethod
    def from_spanning(cls, ambient_dim: int, cycles, boundaries) -> "Subquotient":
        """Build from arbitrary spanning sets by extracting bases first."""
        return cls(ambient_dim, tuple(span_basis(list(cycles))),
                   tuple(span_basis(list(boundaries))))

    @cached_property
    def _zframe(self):
        frame = row_reduce(list(self.cycle_basis))
        if len(frame) != len(self.cycle_basis):
            raise ValueError("cycle_basis is not linearly independent")
        return frame

    def cycle_coordinates(self, vec: Mapping[int, object]) -> list[Fraction]:
        """Coordinates of ``vec`` in the echelon basis of Z, or NotInSpanError."""
        vec = _clean(vec)
        coeffs = [vec.get(pc, Fraction(0)) for pc, _ in self._zframe]
        if _combo(self._zframe, coeffs) != vec:
            raise NotInSpanError("vector does not lie in the span of the cycles")
        return coeffs

    @cached_property
    def _bframe(self):
        coords = []
        for b in self.boundary_basis:
            try:
                x = self.cycle_coordinates(b)
            except NotInSpanError:
                raise NotInSpanError("boundary vector outside the cycle span: "
                                     "broken chain complex") from None
            coords.append({i: v for i, v in enumerate(x) if v})
        frame = row_reduce(coords)
        if len(frame) != len(self.boundary_basis):
            raise ValueError("boundary_basis is not linearly independent")
        return frame

    @cached_property
    def quotient_indices(self) -> list[int]:
        taken = {pc for pc, _ in self._bframe}
        return [i for i in range(len(self._zframe)) if i not in taken]

    @property
    def dim(self) -> int:
        return len(self.quotient_indices)

    def representatives(self) -> list[dict[int, Fraction]]:
        """Cycle vectors whose classes form the chosen basis of Z/B."""
        return [dict(self._zframe[i][1]) for i in self.quotient_indices]

    def coordinates(self, vec: Mapping[int, object]) -> list[Fraction]:
        """Coordinates of the class of a cycle in the basis of Z/B."""
        x = self.cycle_coordinates(vec)
        for pc, brow in self._bframe:
            f = x[pc]
            if f:
                for i, v in brow.items():
                    x[i] -= f * v
        return [x[i] for i in self.quotient_indices]


def subquotient_dim(s: Subquotient) -> int:
    """dim Z - dim B, after checking that B lies in Z."""
    s._bframe  # noqa: B018 - forces the containment check
    return s.dim


def induced_matrix(op: SparseExactMatrix, s: Subquotient) -> SparseExactMatrix:
    """Matrix of the endomorphism of Z/B induced by ``op``."""
    if op.nrows != s.ambient_dim or op.ncols != s.ambient_dim:
        raise ValueError("operator does not act on the ambient space")
    cols = []
    for rep in s.representatives():
        image = op.apply(rep)
        try:
            x = s.coordinates(image)
        except NotInSpanError:
            raise NotInSpanError("operator does not preserve the cycles") from None
        cols.append({i: v for i, v in enumerate(x) if v})
    return SparseExactMatrix.from_columns(s.dim, cols)
