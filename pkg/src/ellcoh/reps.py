"""
Representation rings of SL_2 and of the symmetric groups, and polynomials
over them.

* ``ClassFunction``: a function on the partitions (cycle types) of n.
* ``Sl2RepVector``: a finite combination of the irreducibles V_k with integer
  or class-function coefficients.
* ``RepPoly``: a polynomial in t, u, v with ``Sl2RepVector`` coefficients;
  this is the carrier of (equivariant) mixed Hodge polynomials.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Mapping, Union

__all__ = [
    "partitions",
    "cycle_type",
    "class_representative",
    "centralizer_order",
    "class_size",
    "mn_character",
    "ClassFunction",
    "character",
    "decompose",
    "Sl2RepVector",
    "RepPoly",
    "tensor_v1",
    "divide_by_curve_factor",
    "specialize",
    "DivisionError",
    "partition_label",
    "parse_partition",
]


class DivisionError(ArithmeticError):
    """Raised when a representation-ring division is not exact."""


# ---------------------------------------------------------------------------
# partitions and characters of S_n
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple:
    """Partitions of n in reverse lexicographic order: (n), (n-1, 1), ..., (1^n)."""
    if n < 0:
        raise ValueError("negative n")

    def rec(m, largest):
        if m == 0:
            yield ()
            return
        for k in range(min(m, largest), 0, -1):
            for rest in rec(m - k, k):
                yield (k,) + rest

    return tuple(rec(n, n))


def partition_label(lam) -> str:
    return "+".join(str(x) for x in lam)


def parse_partition(label: str) -> tuple:
    parts = tuple(int(x) for x in label.split("+"))
    if any(x <= 0 for x in parts) or list(parts) != sorted(parts, reverse=True):
        raise ValueError(f"not a partition: {label!r}")
    return parts


def cycle_type(sigma) -> tuple:
    """Cycle type of a permutation given as ``(sigma(1), ..., sigma(n))``."""
    n = len(sigma)
    seen = [False] * (n + 1)
    lengths = []
    for i in range(1, n + 1):
        if not seen[i]:
            ln = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = sigma[j - 1]
                ln += 1
            lengths.append(ln)
    return tuple(sorted(lengths, reverse=True))


def class_representative(mu) -> tuple:
    """A permutation of cycle type mu, consecutive cycles (1 2 .. mu_1)(...)."""
    sigma = []
    start = 1
    for ln in mu:
        for k in range(ln):
            sigma.append(start + (k + 1) % ln)
        start += ln
    return tuple(sigma)


def centralizer_order(mu) -> int:
    counts = defaultdict(int)
    for x in mu:
        counts[x] += 1
    return prod(k ** m * factorial(m) for k, m in counts.items())


def class_size(mu) -> int:
    return factorial(sum(mu)) // centralizer_order(mu)


@lru_cache(maxsize=None)
def _mn(beta: tuple, mu: tuple) -> int:
    if not mu:
        return 1
    r, rest = mu[0], mu[1:]
    bset = set(beta)
    total = 0
    for x in beta:
        y = x - r
        if y < 0 or y in bset:
            continue
        height = sum(1 for z in beta if y < z < x)
        nb = tuple(sorted((bset - {x}) | {y}, reverse=True))
        total += (-1) ** height * _mn(nb, rest)
    return total


def mn_character(lam, mu) -> int:
    """chi^lam(mu) by the Murnaghan-Nakayama rule (rim hooks on beta-numbers)."""
    lam, mu = tuple(lam), tuple(mu)
    if sum(lam) != sum(mu):
        raise ValueError(f"{lam} and {mu} are partitions of different integers")
    ln = len(lam)
    beta = tuple(lam[i] + (ln - 1 - i) for i in range(ln))
    return _mn(beta, tuple(sorted(mu, reverse=True)))


class ClassFunction:
    """A rational-valued class function on S_n, stored by cycle type."""

    __slots__ = ("n", "values")

    def __init__(self, n: int, values: Mapping | None = None):
        self.n = n
        vals = {mu: Fraction(0) for mu in partitions(n)}
        for mu, v in (values or {}).items():
            mu = tuple(mu)
            if mu not in vals:
                raise ValueError(f"{mu} is not a partition of {n}")
            vals[mu] = Fraction(v)
        self.values: dict[tuple, Fraction] = vals

    @classmethod
    def constant(cls, n: int, c=1) -> "ClassFunction":
        return cls(n, {mu: c for mu in partitions(n)})

    def __call__(self, mu) -> Fraction:
        return self.values[tuple(mu)]

    def _binop(self, other, f):
        if isinstance(other, ClassFunction):
            if other.n != self.n:
                raise ValueError("class functions on different symmetric groups")
            return ClassFunction(self.n, {mu: f(v, other.values[mu]) for mu, v in self.values.items()})
        return ClassFunction(self.n, {mu: f(v, other) for mu, v in self.values.items()})

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return self._binop(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return ClassFunction(self.n, {mu: -v for mu, v in self.values.items()})

    def __mul__(self, other):
        return self._binop(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, ClassFunction):
            return self.n == other.n and self.values == other.values
        if other == 0:
            return not self
        return NotImplemented

    def __hash__(self):
        return hash((self.n, tuple(self.values.items())))

    def __bool__(self):
        return any(self.values.values())

    def dim(self) -> Fraction:
        return self.values[(1,) * self.n]

    def inner(self, other: "ClassFunction") -> Fraction:
        return sum((Fraction(v * other.values[mu], centralizer_order(mu))
                    for mu, v in self.values.items()), Fraction(0))

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.values.values())

    def __repr__(self):
        body = ", ".join(f"{partition_label(mu)}: {v}" for mu, v in self.values.items())
        return f"ClassFunction({self.n}, {{{body}}})"


@lru_cache(maxsize=None)
def character(lam) -> ClassFunction:
    lam = tuple(lam)
    n = sum(lam)
    return ClassFunction(n, {mu: mn_character(lam, mu) for mu in partitions(n)})


def decompose(f: ClassFunction) -> dict[tuple, Fraction]:
    """Multiplicities <f, chi^lam> for every partition lam of n."""
    return {lam: f.inner(character(lam)) for lam in partitions(f.n)}


def is_effective(c) -> bool:
    """Non-negative integer (or a genuine character, for class functions)."""
    if isinstance(c, ClassFunction):
        return all(m >= 0 and m.denominator == 1 for m in decompose(c).values())
    return c >= 0 and Fraction(c).denominator == 1


# ---------------------------------------------------------------------------
# SL_2 representation vectors
# ---------------------------------------------------------------------------


Coeff = Union[int, Fraction, ClassFunction]


def _is_zero(c) -> bool:
    return not c


class Sl2RepVector:
    """``sum_k mult_k [V_k]`` with integer or class-function multiplicities."""

    __slots__ = ("mult",)

    def __init__(self, mult: Mapping[int, Coeff] | None = None):
        clean = {}
        for k, c in (mult or {}).items():
            if k < 0:
                raise ValueError("negative highest weight")
            if not _is_zero(c):
                clean[k] = c
        self.mult: dict[int, Coeff] = clean

    @classmethod
    def irreducible(cls, k: int, coeff: Coeff = 1) -> "Sl2RepVector":
        return cls({k: coeff})

    def __getitem__(self, k: int) -> Coeff:
        return self.mult.get(k, 0)

    def _merge(self, other: "Sl2RepVector", sign: int) -> "Sl2RepVector":
        out = dict(self.mult)
        for k, c in other.mult.items():
            c = c if sign > 0 else -c
            out[k] = out[k] + c if k in out else c
        return Sl2RepVector(out)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return self._merge(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._merge(other, -1)

    def __neg__(self):
        return Sl2RepVector({k: -c for k, c in self.mult.items()})

    def scale(self, s: Coeff) -> "Sl2RepVector":
        return Sl2RepVector({k: c * s for k, c in self.mult.items()})

    def __mul__(self, other):
        if isinstance(other, Sl2RepVector):
            acc: dict[int, Coeff] = {}
            for k1, c1 in self.mult.items():
                for k2, c2 in other.mult.items():
                    for k in range(abs(k1 - k2), k1 + k2 + 1, 2):
                        acc[k] = acc[k] + c1 * c2 if k in acc else c1 * c2
            return Sl2RepVector(acc)
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other):
        if isinstance(other, Sl2RepVector):
            return self.mult == other.mult
        if isinstance(other, int) and other == 0:
            return not self.mult
        return NotImplemented

    def __bool__(self):
        return bool(self.mult)

    def dim(self):
        total = 0
        for k, c in self.mult.items():
            total = total + (k + 1) * (c.dim() if isinstance(c, ClassFunction) else c)
        return total

    def is_effective(self) -> bool:
        return all(is_effective(c) for c in self.mult.values())

    def __repr__(self):
        if not self.mult:
            return "0"
        return " + ".join(f"{c}*V{k}" for k, c in sorted(self.mult.items()))


def tensor_v1(x: Sl2RepVector) -> Sl2RepVector:
    """[V_1] (x) x by Clebsch-Gordan."""
    acc: dict[int, Coeff] = {}
    for k, c in x.mult.items():
        targets = (k + 1, k - 1) if k >= 1 else (1,)
        for t in targets:
            acc[t] = acc[t] + c if t in acc else c
    return Sl2RepVector(acc)


# ---------------------------------------------------------------------------
# polynomials in t, u, v
# ---------------------------------------------------------------------------


Monom = tuple  # (t, u, v)


class RepPoly:
    """Polynomial in t, u, v with ``Sl2RepVector`` coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[Monom, Sl2RepVector] | None = None):
        clean = {}
        for mon, x in (coeffs or {}).items():
            if len(mon) != 3 or any(e < 0 for e in mon):
                raise ValueError(f"bad exponent {mon!r}")
            if x:
                clean[tuple(mon)] = x
        self.coeffs: dict[Monom, Sl2RepVector] = clean

    @classmethod
    def term(cls, t: int = 0, u: int = 0, v: int = 0, rep: Sl2RepVector | None = None) -> "RepPoly":
        return cls({(t, u, v): rep if rep is not None else Sl2RepVector({0: 1})})

    @classmethod
    def one(cls) -> "RepPoly":
        return cls.term()

    def __add__(self, other: "RepPoly") -> "RepPoly":
        out = dict(self.coeffs)
        for mon, x in other.coeffs.items():
            out[mon] = out[mon] + x if mon in out else x
        return RepPoly(out)

    def __neg__(self):
        return RepPoly({m: -x for m, x in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return self.mul(other)

    def mul(self, other, tate: bool = False) -> "RepPoly":
        """
        Product using Clebsch-Gordan on the coefficients.

        With ``tate`` the V_k inside V_a (x) V_b is multiplied by
        (uv)^((a + b - k)/2), so that weights (total u, v degree plus highest
        weight) are additive, as for Hodge structures.
        """
        if not isinstance(other, RepPoly):
            return RepPoly({m: x.scale(other) for m, x in self.coeffs.items()})
        acc: dict[Monom, Sl2RepVector] = {}
        for m1, x1 in self.coeffs.items():
            for m2, x2 in other.coeffs.items():
                for k1, c1 in x1.mult.items():
                    for k2, c2 in x2.mult.items():
                        for k in range(abs(k1 - k2), k1 + k2 + 1, 2):
                            e = (k1 + k2 - k) // 2 if tate else 0
                            mon = (m1[0] + m2[0], m1[1] + m2[1] + e, m1[2] + m2[2] + e)
                            term = Sl2RepVector({k: c1 * c2})
                            acc[mon] = acc[mon] + term if mon in acc else term
        return RepPoly(acc)

    def __eq__(self, other):
        if not isinstance(other, RepPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def t_degree(self) -> int:
        return max((m[0] for m in self.coeffs), default=-1)

    def t_part(self, j: int) -> dict:
        """Coefficient of t^j as ``{(u, v): Sl2RepVector}``."""
        return {(m[1], m[2]): x for m, x in self.coeffs.items() if m[0] == j}

    def by_highest_weight(self) -> dict[int, dict[Monom, Coeff]]:
        """Split as ``sum_i h_i [V_i]``: returns ``{i: {monomial: coeff}}``."""
        out: dict[int, dict[Monom, Coeff]] = defaultdict(dict)
        for mon, x in self.coeffs.items():
            for k, c in x.mult.items():
                out[k][mon] = c
        return dict(out)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for (t, u, v), x in sorted(self.coeffs.items()):
            mono = "".join(s if e == 1 else f"{s}^{e}" for s, e in (("t", t), ("u", u), ("v", v)) if e)
            parts.append(f"({x}){'*' + mono if mono else ''}")
        return " + ".join(parts)


def curve_factor(tate: bool = False) -> RepPoly:
    """1 + t[V_1] + t^2, or 1 + t[V_1] + t^2 uv when ``tate`` is set."""
    e = 1 if tate else 0
    return RepPoly({(0, 0, 0): Sl2RepVector({0: 1}),
                    (1, 0, 0): Sl2RepVector({1: 1}),
                    (2, e, e): Sl2RepVector({0: 1})})


def _sub_parts(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for k, x in b.items():
        out[k] = out[k] - x if k in out else -x
    return {k: x for k, x in out.items() if x}


def _v1_times(part: Mapping, tate: bool) -> dict:
    """[V_1] (x) part, on a t-homogeneous part ``{(u, v): Sl2RepVector}``."""
    out: dict = {}
    for (u, v), x in part.items():
        for k, c in x.mult.items():
            for k2 in (k + 1, k - 1):
                if k2 < 0:
                    continue
                e = 1 if tate and k2 < k else 0
                key = (u + e, v + e)
                term = Sl2RepVector({k2: c})
                out[key] = out[key] + term if key in out else term
    return out


def divide_by_curve_factor(P: RepPoly, tate: bool = False) -> RepPoly:
    """
    The quotient H with ``H * (1 + t[V_1] + t^2) == P``.

    Solved by ascending t-degree.  Any non-effective coefficient of H, or a
    non-zero remainder, raises ``DivisionError``.  With ``tate`` the divisor is
    the weight-graded character 1 + t[V_1] + t^2 uv of a curve and products
    are taken with ``RepPoly.mul(..., tate=True)``.
    """
    top = P.t_degree()
    e = 1 if tate else 0
    H: dict[int, dict] = {}
    for j in range(top + 1):
        part = dict(P.t_part(j))
        if j - 1 in H:
            part = _sub_parts(part, _v1_times(H[j - 1], tate))
        if j - 2 in H:
            part = _sub_parts(part, {(u + e, v + e): x for (u, v), x in H[j - 2].items()})
        if j > top - 2:
            if part:
                raise DivisionError(f"non-zero remainder in t-degree {j}: {part}")
            continue
        for uv, x in part.items():
            if not x.is_effective():
                raise DivisionError(f"negative multiplicity in t^{j} {uv}: {x}")
        H[j] = part
    out = RepPoly({(j, u, v): x for j, part in H.items() for (u, v), x in part.items()})
    if out.mul(curve_factor(tate), tate=tate) != P:
        raise DivisionError("quotient does not reproduce the dividend")
    return out


def _collapse(c: Coeff, equivariant: bool):
    if isinstance(c, ClassFunction) and not equivariant:
        return c.dim()
    return c


def specialize(P: RepPoly, mode: str = "full", equivariant: bool = False) -> dict:
    """
    Collapse the SL_2 coefficients to Hodge types (V_i has types (j, i-j))
    and substitute.

    * ``full``: ``{(t, u, v): coeff}``
    * ``serre``: v = u, ``{(t, u): coeff}``
    * ``poincare``: u = v = 1, ``{t: coeff}``

    Coefficients are integers (dimensions) unless ``equivariant`` is set, in
    which case class-function coefficients are kept.
    """
    if mode not in ("full", "serre", "poincare"):
        raise ValueError(f"unknown mode {mode!r}")
    acc: dict = {}

    def add(key, c):
        acc[key] = acc[key] + c if key in acc else c

    for (t, u, v), x in P.coeffs.items():
        for k, c in x.mult.items():
            c = _collapse(c, equivariant)
            for j in range(k + 1):
                uu, vv = u + j, v + k - j
                if mode == "full":
                    add((t, uu, vv), c)
                elif mode == "serre":
                    add((t, uu + vv), c)
                else:
                    add(t, c)
    return {k: (int(c) if isinstance(c, Fraction) and c.denominator == 1 else c)
            for k, c in acc.items() if c}


def class_function_table(n: int, values: Iterable[tuple]) -> ClassFunction:
    return ClassFunction(n, dict(values))
