"""
Group cohomology H^1(Gamma, V_k) from explicit presentations.

* Free presentations of the projective principal congruence subgroups for
  small levels, obtained by enumerating the cosets of Gamma(N) in
  PSL_2(Z) = <s> * <r> (s = S of order 2, r = U of order 3) and reading off
  Reidemeister-Schreier generators along a spanning tree of the quotient
  graph.  Cusp stabilisers come from the orbits of t = s r on the cosets.
* H^1 of a free group, and its parabolic part, by linear algebra on
  cocycles.
* H^1(SL_2(Z), V) from the amalgam SL_2(Z) = Z/4 *_{Z/2} Z/6.
* The cohomology of M_{1,n} assembled from invariants and the amalgam
  formula applied to B_n.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from importlib import resources
from math import comb
from pathlib import Path
from typing import Sequence

from .linalg import SparseExactMatrix, kernel_basis, rank, vstack

__all__ = [
    "S_MATRIX",
    "U_MATRIX",
    "MINUS_I",
    "FreePresentation",
    "PresentationError",
    "derive_presentation",
    "parse_presentation",
    "format_presentation",
    "load_presentation",
    "sym_power",
    "VkAction",
    "h1_dim",
    "parabolic_h1_dim",
    "amalgam_h1",
    "prelim_route",
]

S_MATRIX = ((0, -1), (1, 0))
U_MATRIX = ((0, -1), (1, -1))
MINUS_I = ((-1, 0), (0, -1))
IDENTITY = ((1, 0), (0, 1))


class PresentationError(ValueError):
    """Malformed or inconsistent presentation data."""


def _mul(g, h):
    (a, b), (c, d) = g
    (e, f), (x, y) = h
    return ((a * e + b * x, a * f + b * y), (c * e + d * x, c * f + d * y))


def _inv(g):
    (a, b), (c, d) = g
    return ((d, -b), (-c, a))


def _neg(g):
    return tuple(tuple(-x for x in row) for row in g)


def _mod(g, N):
    return tuple(tuple(x % N for x in row) for row in g)


def _proj_key(g, N):
    """Key of the image of g in PSL_2(Z/N)."""
    return min(_mod(g, N), _mod(_neg(g), N))


def _is_pm_identity(g, N) -> bool:
    m = _mod(g, N)
    return m == _mod(IDENTITY, N) or m == _mod(MINUS_I, N)


# ---------------------------------------------------------------------------
# free presentations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FreePresentation:
    """
    Free generators of the image of Gamma(N) in PSL_2(Z), lifted to SL_2(Z),
    and one word per cusp orbit generating its stabiliser.

    Words are tuples of signed 1-based generator indices.
    """

    N: int
    generators: tuple
    cusp_words: tuple

    @property
    def rank(self) -> int:
        return len(self.generators)

    def evaluate(self, word: Sequence[int]):
        g = IDENTITY
        for i in word:
            m = self.generators[abs(i) - 1]
            g = _mul(g, m if i > 0 else _inv(m))
        return g

    def validate(self) -> None:
        """Check the congruences, the generator count and that cusp words are parabolic."""
        from .modular import gamma_data

        gd = gamma_data(self.N)
        for g in self.generators:
            if g[0][0] * g[1][1] - g[0][1] * g[1][0] != 1:
                raise PresentationError(f"generator {g} does not have determinant 1")
            if not _is_pm_identity(g, self.N):
                raise PresentationError(f"generator {g} is not +-I mod {self.N}")
        if self.N >= 2 and self.rank != 1 + gd.mu_bar // 6:
            raise PresentationError(f"expected {1 + gd.mu_bar // 6} generators, got {self.rank}")
        if len(self.cusp_words) != gd.cusps:
            raise PresentationError(f"expected {gd.cusps} cusp words, got {len(self.cusp_words)}")
        for w in self.cusp_words:
            if not w or any(not 1 <= abs(i) <= self.rank for i in w):
                raise PresentationError(f"bad cusp word {w}")
            g = self.evaluate(w)
            if abs(g[0][0] + g[1][1]) != 2 or g in (IDENTITY, MINUS_I):
                raise PresentationError(f"cusp word {w} evaluates to non-parabolic {g}")


def derive_presentation(N: int) -> FreePresentation:
    """
    Free generators of Gamma(N)/{+-I} for N >= 2 by coset enumeration.

    The cosets of the level-N subgroup in PSL_2(Z) are the elements of
    PSL_2(Z/N).  They fall into triangles (orbits of r) joined in pairs by
    s.  A spanning tree of this triangle graph gives a Schreier transversal;
    each s-pair not in the tree gives one free generator.
    """
    if N < 2:
        raise ValueError("level must be >= 2")
    # transversal: coset key -> integer matrix of the representative
    rep: dict = {}
    tree_pairs: set = set()

    def add_triangle(base_mat):
        m = base_mat
        keys = []
        for _ in range(3):
            k = _proj_key(m, N)
            rep[k] = m
            keys.append(k)
            m = _mul(m, U_MATRIX)
        return keys

    queue = deque(add_triangle(IDENTITY))
    while queue:
        x = queue.popleft()
        y_mat = _mul(rep[x], S_MATRIX)
        y = _proj_key(y_mat, N)
        if y in rep:
            continue
        tree_pairs.add(frozenset((x, y)))
        queue.extend(add_triangle(y_mat))

    order = sorted(rep)
    # free generators from non-tree s-pairs, oriented from the smaller coset
    gen_of: dict = {}
    generators = []
    for x in order:
        y = _proj_key(_mul(rep[x], S_MATRIX), N)
        pair = frozenset((x, y))
        if pair in tree_pairs or pair in gen_of:
            continue
        if x == y:
            raise PresentationError("s fixes a coset: subgroup has torsion")
        g = _mul(_mul(rep[x], S_MATRIX), _inv(rep[y]))
        if N > 2 and _mod(g, N) != _mod(IDENTITY, N):
            g = _neg(g)
        generators.append(g)
        gen_of[pair] = (x, len(generators))

    def schreier_letter(x, letter):
        """Signed generator index of rep[x] * letter * rep[x letter]^-1 (0 if trivial)."""
        if letter == "r":
            return 0, _proj_key(_mul(rep[x], U_MATRIX), N)
        y = _proj_key(_mul(rep[x], S_MATRIX), N)
        pair = frozenset((x, y))
        if pair in tree_pairs:
            return 0, y
        start, i = gen_of[pair]
        return (i if x == start else -i), y

    # cusps: orbits of t = s r; the stabiliser of each is rep t^N rep^-1
    seen: set = set()
    cusp_words = []
    for x in order:
        if x in seen:
            continue
        word, y, steps = [], x, 0
        while True:
            seen.add(y)
            for letter in ("s", "r"):
                i, y = schreier_letter(y, letter)
                if i:
                    if word and word[-1] == -i:
                        word.pop()
                    else:
                        word.append(i)
            steps += 1
            if y == x:
                break
        if steps != N:
            raise PresentationError(f"cusp width {steps} differs from the level {N}")
        cusp_words.append(tuple(word))
    pres = FreePresentation(N, tuple(generators), tuple(cusp_words))
    pres.validate()
    return pres


def format_presentation(pres: FreePresentation) -> str:
    lines = [f"level {pres.N} count {pres.rank} cusps {len(pres.cusp_words)}"]
    for (a, b), (c, d) in pres.generators:
        lines.append(f"{a} {b} {c} {d}")
    for w in pres.cusp_words:
        lines.append(",".join(str(i) for i in w))
    return "\n".join(lines) + "\n"


def parse_presentation(text: str) -> FreePresentation:
    """Strict parser for the text format written by ``format_presentation``."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise PresentationError("empty presentation file")
    head = lines[0].split()
    if len(head) != 6 or head[0::2] != ["level", "count", "cusps"]:
        raise PresentationError(f"bad header {lines[0]!r}")
    try:
        N, r, c = int(head[1]), int(head[3]), int(head[5])
    except ValueError:
        raise PresentationError(f"bad header {lines[0]!r}") from None
    if N < 1 or r < 0 or c < 0 or len(lines) != 1 + r + c:
        raise PresentationError(f"expected {1 + r + c} lines, found {len(lines)}")
    gens = []
    for ln in lines[1:1 + r]:
        parts = ln.split(" ")
        try:
            a, b, cc, d = (int(x) for x in parts)
        except ValueError:
            raise PresentationError(f"bad matrix line {ln!r}") from None
        gens.append(((a, b), (cc, d)))
    words = []
    for ln in lines[1 + r:]:
        try:
            w = tuple(int(x) for x in ln.split(","))
        except ValueError:
            raise PresentationError(f"bad cusp word {ln!r}") from None
        if any(i == 0 for i in w):
            raise PresentationError(f"bad cusp word {ln!r}")
        words.append(w)
    pres = FreePresentation(N, tuple(gens), tuple(words))
    pres.validate()
    return pres


def load_presentation(source) -> FreePresentation:
    """Load from a level (shipped data) or a file path."""
    if isinstance(source, int):
        text = resources.files("ellcoh").joinpath(f"data/gamma{source}.txt").read_text()
    else:
        text = Path(source).read_text()
    return parse_presentation(text)


# ---------------------------------------------------------------------------
# V_k
# ---------------------------------------------------------------------------


def sym_power(g, k: int) -> SparseExactMatrix:
    """
    Matrix of g on V_k = Sym^k, basis x^(k-j) y^j, with g acting by
    x -> a x + c y, y -> b x + d y for g = [[a, b], [c, d]].
    """
    (a, b), (c, d) = g

    def lin(p, q, e):
        # coefficients of (p x + q y)^e
        return [comb(e, i) * p ** (e - i) * q ** i for i in range(e + 1)]

    rows: dict = {}
    for j in range(k + 1):
        px, py = lin(a, c, k - j), lin(b, d, j)
        for i1, c1 in enumerate(px):
            if not c1:
                continue
            for i2, c2 in enumerate(py):
                if c2:
                    r = i1 + i2
                    rows.setdefault(r, {})
                    rows[r][j] = rows[r].get(j, 0) + c1 * c2
    return SparseExactMatrix.from_rows(k + 1, k + 1, rows)


@dataclass(frozen=True)
class VkAction:
    k: int
    minus_id: SparseExactMatrix
    s: SparseExactMatrix
    u: SparseExactMatrix

    @classmethod
    def of(cls, k: int) -> "VkAction":
        return cls(k, sym_power(MINUS_I, k), sym_power(S_MATRIX, k), sym_power(U_MATRIX, k))


# ---------------------------------------------------------------------------
# H^1 of free groups
# ---------------------------------------------------------------------------


def _coboundary_matrix(mats: Sequence[SparseExactMatrix], dim: int) -> SparseExactMatrix:
    """v -> ((T_i - 1) v)_i stacked over the generators."""
    ident = SparseExactMatrix.identity(dim)
    return vstack([m - ident for m in mats])


def h1_dim(pres: FreePresentation, k: int) -> int:
    """
    dim H^1(Gamma(N), V_k) = dim Z^1 - dim B^1 on the free group.

    For N <= 2 the group contains -I, which acts on V_k by (-1)^k; the
    cohomology of Gamma(N) is that of its image with coefficients in the
    -I invariants, which vanish for odd k.
    """
    if pres.N <= 2 and k % 2:
        return 0
    dim = k + 1
    mats = [sym_power(g, k) for g in pres.generators]
    z1 = pres.rank * dim
    return z1 - rank(_coboundary_matrix(mats, dim))


def _word_cocycle(pres: FreePresentation, mats, word, dim) -> SparseExactMatrix:
    """
    The linear map (alpha_1, ..., alpha_r) -> alpha(word) given by
    alpha(gh) = alpha(g) + g alpha(h) and alpha(g^-1) = -g^-1 alpha(g).
    """
    invs = {}
    acc = SparseExactMatrix.zero(dim, pres.rank * dim)
    prefix = SparseExactMatrix.identity(dim)
    for i in word:
        j = abs(i) - 1
        sel = {r: {j * dim + r: 1} for r in range(dim)}
        pick = SparseExactMatrix.from_rows(dim, pres.rank * dim, sel)
        if i > 0:
            acc = acc + prefix @ pick
            prefix = prefix @ mats[j]
        else:
            if j not in invs:
                invs[j] = sym_power(_inv(pres.generators[j]), dim - 1)
            prefix = prefix @ invs[j]
            acc = acc - prefix @ pick
    return acc


def parabolic_h1_dim(pres: FreePresentation, k: int) -> int:
    """
    Dimension of the classes whose restriction to every cusp stabiliser
    vanishes: alpha(w) must lie in the image of (T(w) - 1) for each cusp
    word w.
    """
    if pres.N <= 2 and k % 2:
        return 0
    dim = k + 1
    mats = [sym_power(g, k) for g in pres.generators]
    constraints = []
    for w in pres.cusp_words:
        tw = sym_power(pres.evaluate(w), k) - SparseExactMatrix.identity(dim)
        # functionals vanishing on im(T(w) - 1)
        for phi in kernel_basis(tw.T):
            lw = _word_cocycle(pres, mats, w, dim)
            row = {}
            for r, val in phi.items():
                for c, x in lw.row(r).items():
                    row[c] = row.get(c, 0) + val * x
            constraints.append(row)
    n = pres.rank * dim
    zpar = n - (rank(SparseExactMatrix.from_rows(len(constraints), n, dict(enumerate(constraints))))
                if constraints else 0)
    return zpar - rank(_coboundary_matrix(mats, dim))


# ---------------------------------------------------------------------------
# SL_2(Z) via the amalgam
# ---------------------------------------------------------------------------


def _is_identity_power(m: SparseExactMatrix, e: int) -> bool:
    return m.power(e) == SparseExactMatrix.identity(m.nrows)


def amalgam_h1(action) -> int:
    """
    dim H^1(SL_2(Z), V) = dim V^{-I} - dim(V^S + (V^U meet V^{-I})).

    ``action`` is a ``VkAction`` or a triple of matrices for -I, S and U.
    """
    if isinstance(action, VkAction):
        m_minus, m_s, m_u = action.minus_id, action.s, action.u
    else:
        m_minus, m_s, m_u = action
    dim = m_minus.nrows
    if dim == 0:
        return 0
    ident = SparseExactMatrix.identity(dim)
    if not (_is_identity_power(m_minus, 2) and _is_identity_power(m_s, 4)
            and _is_identity_power(m_u, 6)):
        raise ArithmeticError("action matrices do not have the orders of -I, S, U")
    fixed_minus = len(kernel_basis(m_minus - ident))
    v_s = kernel_basis(m_s - ident)
    v_u = kernel_basis(vstack([m_u - ident, m_minus - ident]))
    vecs = v_s + v_u
    if not vecs:
        return fixed_minus
    return fixed_minus - rank(SparseExactMatrix.from_columns(dim, vecs))


def prelim_route(n: int) -> tuple:
    """
    Betti numbers of M_{1,n} as dim (B_n^{SL_2})_m + dim D_n^{m-1}, where
    D_n = H^1(SL_2(Z), B_n) is computed from the induced action of -I, S and
    U on each bidegree of B_n.  Returns degrees 0 .. 2n - 1.
    """
    from . import forest
    from .cohomology import bn_table, group_matrix_on_cohomology

    _, mult = bn_table(n, route="explicit", workers=1)
    inv: dict = {}
    for (p, q, k), m in mult.mult.items():
        if k == 0:
            inv[p + q] = inv.get(p + q, 0) + m
    d: dict = {}
    bidegrees = sorted({(blk.p, blk.q) for blk in forest.blocks(n)})
    for p, q in bidegrees:
        if not any(mult.get(p, q, k) for k in range(p + 1)):
            continue
        mats = [group_matrix_on_cohomology(g, n, (p, q)) for g in (MINUS_I, S_MATRIX, U_MATRIX)]
        d[p + q] = d.get(p + q, 0) + amalgam_h1(mats)
    betti = [inv.get(m, 0) + d.get(m - 1, 0) for m in range(2 * n)]
    if any(betti[m] for m in range(n + 1, 2 * n)):
        raise ArithmeticError("cohomology above the dimension of the moduli space")
    return tuple(betti)

