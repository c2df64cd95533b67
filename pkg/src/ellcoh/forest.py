"""
The bigraded DGA model of the configuration space F(E, n) of an elliptic curve.

Generators are ``a_i, b_i`` (from H^1 of the i-th factor) and ``D_ij``
(diagonal classes), all of degree 1, subject to ``D_ij = D_ji``, the Arnold
relation and ``D_ij a_i = D_ij a_j``, ``D_ij b_i = D_ij b_j``.

Basis: a monomial is an admissible forest on {1..n} (edges ``(i, j)`` with
``i < j`` and pairwise distinct larger endpoints) together with a subset of
{a, b} at the root (smallest vertex) of each component.  Its value is the
product of the edge generators in lexicographic order followed by the
decorations ordered by root, ``a`` before ``b``.  Every other word is
rewritten into this basis by

* moving decorations to the root of their component,
* straightening ``D_ij D_kj`` (``i < k < j``) with the Arnold relation
  ``D_ij D_kj = D_ik D_kj - D_ik D_ij``, which replaces a repeated larger
  endpoint ``j`` by the smaller ``k`` and therefore terminates.

Gradings: ``p`` = number of decorations, ``q`` = number of edges, the
H-weight is ``#a - #b``; the differential moves ``(p, q)`` to ``(p+2, q-1)``.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from math import comb, prod
from typing import Iterator, Mapping, NamedTuple, Sequence, Union

from .linalg import SparseExactMatrix

A, B = 0, 1
_KIND_NAMES = "ab"


class Monomial(NamedTuple):
    """A canonical decorated admissible forest."""

    n: int
    edges: tuple  # ((i, j), ...) sorted, i < j
    decos: tuple  # ((root, kind), ...) sorted, kind A=0 or B=1

    @property
    def p(self) -> int:
        return len(self.decos)

    @property
    def q(self) -> int:
        return len(self.edges)

    @property
    def degree(self) -> int:
        return len(self.decos) + len(self.edges)

    @property
    def weight(self) -> int:
        return len(self.decos) + 2 * len(self.edges)

    @property
    def h_weight(self) -> int:
        return sum(1 if k == A else -1 for _, k in self.decos)

    @property
    def block(self) -> "GradedBlockIndex":
        return GradedBlockIndex(self.degree, self.p, self.q, self.h_weight)

    def __str__(self) -> str:
        parts = [f"D{i}{j}" if max(i, j) < 10 else f"D{i},{j}" for i, j in self.edges]
        parts += [f"{_KIND_NAMES[k]}{v}" for v, k in self.decos]
        return "*".join(parts) if parts else "1"


class GradedBlockIndex(NamedTuple):
    degree: int
    p: int
    q: int
    h_weight: int

    @classmethod
    def of(cls, p: int, q: int, h_weight: int) -> "GradedBlockIndex":
        return cls(p + q, p, q, h_weight)

    @property
    def weight(self) -> int:
        return self.p + 2 * self.q


def block_index(p: int, q: int, h: int) -> GradedBlockIndex:
    return GradedBlockIndex(p + q, p, q, h)


# ---------------------------------------------------------------------------
# sign and forest helpers
# ---------------------------------------------------------------------------


def _sort_sign(seq: Sequence) -> tuple[int, tuple]:
    """Sign of the permutation sorting a word of odd generators; 0 on repeats."""
    s = 1
    lst = list(seq)
    for i in range(1, len(lst)):
        x = lst[i]
        j = i
        while j > 0 and lst[j - 1] > x:
            lst[j] = lst[j - 1]
            j -= 1
            s = -s
        if j > 0 and lst[j - 1] == x:
            return 0, ()
        lst[j] = x
    return s, tuple(lst)


@lru_cache(maxsize=None)
def _roots(n: int, edges: tuple) -> tuple:
    """Component minimum of every vertex (index 0 unused)."""
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    return tuple(find(v) for v in range(n + 1))


def _is_forest(n: int, edges: Sequence) -> bool:
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


@lru_cache(maxsize=None)
def _straighten(edges: tuple) -> tuple:
    """
    Express the lex-ordered product of a forest's edges in admissible forests.

    Returns ``((forest, coeff), ...)`` with integer coefficients.
    """
    below: dict[int, list[int]] = defaultdict(list)
    for i, j in edges:
        below[j].append(i)
    bad = [j for j, lows in below.items() if len(lows) > 1]
    if not bad:
        return ((edges, 1),)
    j = max(bad)
    i, k = sorted(below[j])[:2]
    rest = tuple(e for e in edges if e != (i, j) and e != (k, j))
    s0, _ = _sort_sign(((i, j), (k, j)) + rest)
    acc: dict[tuple, int] = defaultdict(int)
    # D_ij D_kj = D_ik D_kj - D_ik D_ij
    for word, c in ((((i, k), (k, j)), 1), (((i, k), (i, j)), -1)):
        s1, srt = _sort_sign(word + rest)
        for forest, c2 in _straighten(srt):
            acc[forest] += s0 * s1 * c * c2
    return tuple((f, c) for f, c in sorted(acc.items()) if c)


def _place_decos(n: int, forest: tuple, decos: Sequence) -> tuple[int, tuple]:
    """Move decorations to component roots of ``forest`` and sort them."""
    roots = _roots(n, forest)
    return _sort_sign([(roots[v], k) for v, k in decos])


def _mul_monomials(n: int, e1: tuple, d1: tuple, e2: tuple, d2: tuple) -> list:
    """(D_e1 d1) * (D_e2 d2) as ``[(coeff, edges, decos)]``."""
    sign = -1 if (len(d1) * len(e2)) % 2 else 1
    s, edges = _sort_sign(e1 + e2)
    if not s or not _is_forest(n, edges):
        return []
    out = []
    for forest, c in _straighten(edges):
        s2, decos = _place_decos(n, forest, d1 + d2)
        if s2:
            out.append((sign * s * c * s2, forest, decos))
    return out


# ---------------------------------------------------------------------------
# algebra elements
# ---------------------------------------------------------------------------


class AlgebraElement:
    """A finite rational combination of canonical monomials, all with the same n."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Monomial, object] | None = None):
        self.n = n
        clean = {}
        for m, c in (terms or {}).items():
            if m.n != n:
                raise ValueError(f"monomial on {m.n} points in an element on {n}")
            if c:
                clean[m] = Fraction(c)
        self.terms: dict[Monomial, Fraction] = clean

    @classmethod
    def one(cls, n: int) -> "AlgebraElement":
        return cls(n, {Monomial(n, (), ()): 1})

    @classmethod
    def from_monomial(cls, m: Monomial, coeff=1) -> "AlgebraElement":
        return cls(m.n, {m: coeff})

    def _accumulate(self, items) -> "AlgebraElement":
        acc: dict[Monomial, Fraction] = defaultdict(Fraction)
        for m, c in items:
            acc[m] += c
        return AlgebraElement(self.n, acc)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        _check_same_n(self, other)
        return self._accumulate(itertools.chain(self.terms.items(), other.terms.items()))

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return AlgebraElement(self.n, {m: c * other for m, c in self.terms.items()})

    def __rmul__(self, scalar):
        return AlgebraElement(self.n, {m: scalar * c for m, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def blocks(self) -> set:
        return {m.block for m in self.terms}

    def homogeneous_part(self, block: GradedBlockIndex) -> "AlgebraElement":
        return AlgebraElement(self.n, {m: c for m, c in self.terms.items() if m.block == block})

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m, c in sorted(self.terms.items()):
            if c == 1:
                out.append(f"+ {m}")
            elif c == -1:
                out.append(f"- {m}")
            else:
                out.append(f"{'-' if c < 0 else '+'} {abs(c)}*{m}")
        s = " ".join(out)
        return s[2:] if s.startswith("+ ") else s


def _check_same_n(x: AlgebraElement, y: AlgebraElement) -> None:
    if x.n != y.n:
        raise ValueError(f"elements live on {x.n} and {y.n} points")


Generator = tuple  # ("a", i) | ("b", i) | ("D", i, j)


def _generator_monomial(n: int, g: Generator) -> Monomial:
    kind = g[0]
    idx = g[1:]
    if any(not isinstance(i, int) or not 1 <= i <= n for i in idx):
        raise ValueError(f"generator {g!r} has an index outside 1..{n}")
    if kind in ("a", "b") and len(idx) == 1:
        return Monomial(n, (), ((idx[0], A if kind == "a" else B),))
    if kind in ("D", "d", "delta") and len(idx) == 2 and idx[0] != idx[1]:
        return Monomial(n, (tuple(sorted(idx)),), ())
    raise ValueError(f"not a generator symbol: {g!r}")


def generator(n: int, g: Generator) -> AlgebraElement:
    return AlgebraElement.from_monomial(_generator_monomial(n, g))


def a(n: int, i: int) -> AlgebraElement:
    return generator(n, ("a", i))


def b(n: int, i: int) -> AlgebraElement:
    return generator(n, ("b", i))


def delta(n: int, i: int, j: int) -> AlgebraElement:
    return generator(n, ("D", i, j))


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Graded-commutative product; products over edge sets with a circuit vanish."""
    _check_same_n(x, y)
    n = x.n
    acc: dict[Monomial, Fraction] = defaultdict(Fraction)
    for m1, c1 in x.terms.items():
        for m2, c2 in y.terms.items():
            for c, e, d in _mul_monomials(n, m1.edges, m1.decos, m2.edges, m2.decos):
                acc[Monomial(n, e, d)] += c1 * c2 * c
    return AlgebraElement(n, acc)


def normalize(word: Sequence[Generator], coeff=1, n: int | None = None) -> AlgebraElement:
    """
    Rewrite ``coeff * g_1 g_2 ... g_k`` in the canonical basis.

    Generators are ``("a", i)``, ``("b", i)`` or ``("D", i, j)``; ``n``
    defaults to the largest index that occurs.
    """
    if n is None:
        n = max((max(g[1:]) for g in word), default=1)
    x = AlgebraElement.one(n) * Fraction(coeff)
    for g in word:
        x = multiply(x, generator(n, g))
    return x


# ---------------------------------------------------------------------------
# differential and actions on single monomials
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _d_monomial(m: Monomial) -> tuple:
    n = m.n
    acc: dict[Monomial, int] = defaultdict(int)
    for l, (i, j) in enumerate(m.edges):
        rest = m.edges[:l] + m.edges[l + 1:]
        roots = _roots(n, rest)
        sgn = -1 if l % 2 else 1
        # d D_ij = b_i a_i + b_j a_j - b_i a_j - b_j a_i
        for x, y, c in ((i, i, 1), (j, j, 1), (i, j, -1), (j, i, -1)):
            s, decos = _sort_sign(((roots[x], B), (roots[y], A)) + m.decos)
            if s:
                acc[Monomial(n, rest, decos)] += sgn * c * s
    return tuple((k, v) for k, v in acc.items() if v)


def differential(x: AlgebraElement) -> AlgebraElement:
    """The differential, extended as an odd derivation."""
    acc: dict[Monomial, Fraction] = defaultdict(Fraction)
    for m, c in x.terms.items():
        for m2, c2 in _d_monomial(m):
            acc[m2] += c * c2
    return AlgebraElement(x.n, acc)


_SL2_DERIVATIONS = {
    # image of (a, b) as {kind: coeff}
    "X": ({}, {A: 1}),
    "Y": ({B: 1}, {}),
    "H": ({A: 1}, {B: -1}),
}


def _derivation_monomial(m: Monomial, images) -> dict:
    acc: dict[Monomial, int] = defaultdict(int)
    for pos, (v, k) in enumerate(m.decos):
        for k2, c in images[k].items():
            s, decos = _sort_sign(m.decos[:pos] + ((v, k2),) + m.decos[pos + 1:])
            if s:
                acc[Monomial(m.n, m.edges, decos)] += s * c
    return {k: v for k, v in acc.items() if v}


def _matrix_monomial(m: Monomial, g) -> dict:
    (ga, gb), (gc, gd) = g
    images = ({A: ga, B: gc}, {A: gb, B: gd})
    acc: dict[Monomial, Fraction] = defaultdict(Fraction)
    choices = [[(v, k2, c) for k2, c in images[k].items() if c] for v, k in m.decos]
    for pick in itertools.product(*choices):
        coeff = prod((c for _, _, c in pick), start=Fraction(1))
        s, decos = _sort_sign([(v, k2) for v, k2, _ in pick])
        if s:
            acc[Monomial(m.n, m.edges, decos)] += s * coeff
    return {k: v for k, v in acc.items() if v}


@lru_cache(maxsize=None)
def _perm_monomial(m: Monomial, sigma: tuple) -> tuple:
    n = m.n
    word = [tuple(sorted((sigma[i - 1], sigma[j - 1]))) for i, j in m.edges]
    s, edges = _sort_sign(word)
    out = []
    for forest, c in _straighten(edges):
        s2, decos = _place_decos(n, forest, [(sigma[v - 1], k) for v, k in m.decos])
        if s2:
            out.append((Monomial(n, forest, decos), s * c * s2))
    return tuple(out)


_LEFT_MULTIPLIERS = {"alpha": A, "beta": B}


@lru_cache(maxsize=None)
def _left_sum_monomial(m: Monomial, kind: int) -> tuple:
    """Left multiplication by alpha = sum a_i (kind A) or beta = sum b_i (kind B)."""
    acc: dict[Monomial, int] = defaultdict(int)
    for i in range(1, m.n + 1):
        for c, edges, decos in _mul_monomials(m.n, (), ((i, kind),), m.edges, m.decos):
            acc[Monomial(m.n, edges, decos)] += c
    return tuple((k, v) for k, v in acc.items() if v)


def _as_permutation(op, n: int) -> tuple | None:
    if isinstance(op, (tuple, list)) and op and all(isinstance(x, int) for x in op):
        sigma = tuple(op)
        if sorted(sigma) != list(range(1, n + 1)):
            raise ValueError(f"{op!r} is not a permutation of 1..{n}")
        return sigma
    return None


def _as_sl2_matrix(op):
    try:
        (ga, gb), (gc, gd) = op
    except (TypeError, ValueError):
        return None
    g = ((Fraction(ga), Fraction(gb)), (Fraction(gc), Fraction(gd)))
    if g[0][0] * g[1][1] - g[0][1] * g[1][0] != 1:
        raise ValueError(f"matrix {op!r} does not have determinant 1")
    return g


def monomial_action(op, m: Monomial) -> dict:
    """Image of one basis monomial under ``op``, as ``{monomial: coeff}``."""
    if isinstance(op, str):
        if op == "d":
            return dict(_d_monomial(m))
        if op in _LEFT_MULTIPLIERS:
            return dict(_left_sum_monomial(m, _LEFT_MULTIPLIERS[op]))
        if op not in _SL2_DERIVATIONS:
            raise ValueError(f"unknown operator {op!r}")
        return _derivation_monomial(m, _SL2_DERIVATIONS[op])
    sigma = _as_permutation(op, m.n)
    if sigma is not None:
        acc: dict[Monomial, int] = defaultdict(int)
        for m2, c in _perm_monomial(m, sigma):
            acc[m2] += c
        return {k: v for k, v in acc.items() if v}
    g = _as_sl2_matrix(op)
    if g is not None:
        return _matrix_monomial(m, g)
    raise ValueError(f"unsupported operator {op!r}")


def act(op, x: AlgebraElement) -> AlgebraElement:
    """
    Act on an element by ``"X"``, ``"Y"``, ``"H"`` (even derivations), a 2x2
    matrix of determinant 1 (algebra automorphism) or a permutation given as
    the tuple ``(sigma(1), ..., sigma(n))``.
    """
    acc: dict[Monomial, Fraction] = defaultdict(Fraction)
    for m, c in x.terms.items():
        for m2, c2 in monomial_action(op, m).items():
            acc[m2] += c * c2
    return AlgebraElement(x.n, acc)


# ---------------------------------------------------------------------------
# basis enumeration
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def admissible_forests(n: int, q: int) -> tuple:
    """All admissible forests on {1..n} with ``q`` edges, in a fixed order."""
    out = []

    def rec(j: int, edges: list):
        if len(edges) > q:
            return
        if j > n:
            if len(edges) == q:
                out.append(tuple(sorted(edges)))
            return
        if len(edges) + (n - j + 1) < q:
            return
        rec(j + 1, edges)
        for i in range(1, j):
            edges.append((i, j))
            rec(j + 1, edges)
            edges.pop()

    rec(1, [])
    return tuple(out)


def blocks(n: int) -> list[GradedBlockIndex]:
    """Every graded block of the algebra on n points that has a basis element."""
    out = []
    for q in range(n):
        c = n - q
        for p in range(2 * c + 1):
            for na in range(max(0, p - c), min(c, p) + 1):
                nb = p - na
                out.append(block_index(p, q, na - nb))
    return sorted(set(out))


def block_size(n: int, block: GradedBlockIndex) -> int:
    """Closed count of the block, used to pre-size and cross-check enumeration."""
    p, q, h = block.p, block.q, block.h_weight
    if (p + h) % 2 or block.degree != p + q or q >= n or q < 0:
        return 0
    na, nb = (p + h) // 2, (p - h) // 2
    c = n - q
    return len(admissible_forests(n, q)) * comb(c, na) * comb(c, nb) if na >= 0 and nb >= 0 else 0


def iter_basis(n: int, block: GradedBlockIndex) -> Iterator[Monomial]:
    p, q, h = block.p, block.q, block.h_weight
    if (p + h) % 2 or block.degree != p + q or not 0 <= q < n:
        return
    na, nb = (p + h) // 2, (p - h) // 2
    if na < 0 or nb < 0:
        return
    for forest in admissible_forests(n, q):
        roots = sorted(set(_roots(n, forest)[1:]))
        for sa in itertools.combinations(roots, na):
            for sb in itertools.combinations(roots, nb):
                decos = tuple(sorted([(r, A) for r in sa] + [(r, B) for r in sb]))
                yield Monomial(n, forest, decos)


@lru_cache(maxsize=None)
def basis(n: int, block: GradedBlockIndex) -> tuple:
    """Deterministic list of the canonical monomials of one block."""
    return tuple(iter_basis(n, block))


@lru_cache(maxsize=None)
def basis_positions(n: int, block: GradedBlockIndex) -> dict:
    return {m: i for i, m in enumerate(basis(n, block))}


def full_basis(n: int) -> list[Monomial]:
    return [m for blk in blocks(n) for m in basis(n, blk)]


def dimension(n: int) -> int:
    """prod_{i<n} (4 + i)."""
    return prod(4 + i for i in range(n))


# ---------------------------------------------------------------------------
# matrices of operators between blocks
# ---------------------------------------------------------------------------


OperatorSpec = Union[str, tuple, list]


def operator_matrix(n: int, op: OperatorSpec, src: Sequence[GradedBlockIndex] | GradedBlockIndex,
                    dst: Sequence[GradedBlockIndex] | GradedBlockIndex) -> SparseExactMatrix:
    """
    Matrix of ``op`` (``"d"``, ``"X"``, ``"Y"``, ``"H"``, left multiplication
    ``"alpha"`` or ``"beta"``, a matrix or a permutation) from the span of the ``src`` blocks to the ``dst`` blocks.

    Raises if some image leaves the target blocks.
    """
    src = [src] if isinstance(src, GradedBlockIndex) else list(src)
    dst = [dst] if isinstance(dst, GradedBlockIndex) else list(dst)
    col_basis = [m for blk in src for m in basis(n, blk)]
    row_pos: dict[Monomial, int] = {}
    for blk in dst:
        for m in basis(n, blk):
            row_pos[m] = len(row_pos)
    rows: dict[int, dict[int, object]] = {}
    for j, m in enumerate(col_basis):
        for m2, c in monomial_action(op, m).items():
            i = row_pos.get(m2)
            if i is None:
                raise ValueError(f"{op!r} maps {m} outside the target blocks")
            rows.setdefault(i, {})[j] = c
    return SparseExactMatrix.from_rows(len(row_pos), len(col_basis), rows)


def d_target(block: GradedBlockIndex) -> GradedBlockIndex:
    return block_index(block.p + 2, block.q - 1, block.h_weight)


def d_source(block: GradedBlockIndex) -> GradedBlockIndex:
    return block_index(block.p - 2, block.q + 1, block.h_weight)


def pq_blocks(n: int, p: int, q: int) -> list[GradedBlockIndex]:
    """All H-weight blocks of bidegree (p, q)."""
    return [blk for blk in blocks(n) if blk.p == p and blk.q == q]


def vector_to_element(n: int, block_list: Sequence[GradedBlockIndex], vec: Mapping[int, object]) -> AlgebraElement:
    ms = [m for blk in block_list for m in basis(n, blk)]
    return AlgebraElement(n, {ms[i]: c for i, c in vec.items()})


def element_to_vector(x: AlgebraElement, block_list: Sequence[GradedBlockIndex]) -> dict:
    pos: dict[Monomial, int] = {}
    for blk in block_list:
        for m in basis(x.n, blk):
            pos[m] = len(pos)
    out = {}
    for m, c in x.terms.items():
        if m not in pos:
            raise ValueError(f"{m} is outside the given blocks")
        out[pos[m]] = c
    return out
