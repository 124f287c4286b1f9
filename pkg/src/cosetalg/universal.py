"""The margin-free algebra with deformation-ring coefficients.

Basis elements are indexed by balanced off-diagonal types.  The coefficient
of a type c in the product of types a and b is a sum over 3-tensors
t_ijk >= 0 (cells with all three indices equal are excluded) subject to

* column sums: sum_i t_ijk = b_jk for j != k;
* row sums:    sum_k t_ijk = a_ij for i != j;
* the c-slice: sum_j t_ijk = c_ik for i != k;
* a coupled diagonal condition tying the three star sums together:
  a*_jj + sum_{k != j} t_jjk  =  b*_jj + sum_{i != j} t_ijj
                              =  c*_jj + sum_{m != j} t_jmj  =:  t*_jjj.

Given the first two margin families and balanced a, b, the first equality is
automatic and the remaining one holds exactly when the derived c-slice is
itself balanced, so enumeration walks the free cells t_ijk (j != k) under
the column sums, derives t_ijj from the row sums, reads off c, and keeps the
balanced ones.  Each admissible tensor contributes

    (prod a_ij! prod b_jk! / prod t_ijk!)
      * prod_j eps_j^(a*_jj + b*_jj - t*_jjj)
      * prod_j ((a*_jj, t*_jjj)) ((b*_jj, t*_jjj)) / ((0, t*_jjj))

with ((p, q)) the falling bracket in eps_j.  The exponents are nonnegative,
all constants live in the localized polynomial ring, and substituting
eps_j = 1/n_j recovers the finite algebra whenever the star sums of a and b
fit under the margins.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import TripleTensor, structure_constant
from .cosets import Margins, OffDiagonalType, embed_offdiagonal
from .epsring import EpsPolynomial, EpsRingElement, bracket
from .errors import MarginOverflow

Grid = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ConstrainedTripleTensor(TripleTensor):
    """A triple tensor whose (j, j, j) cells are identically zero."""

    def __post_init__(self):
        for j in range(self.nu):
            if self.entries[j][j][j] != 0:
                raise ValueError("cells with all indices equal must be zero")

    def t_star(self, j: int) -> int:
        """The common coupled value at j: the middle-slice sum."""
        return self.middle_slice_sum(j)


@lru_cache(maxsize=None)
def _fact(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def _star(entries: Grid, j: int) -> int:
    return sum(entries[i][j] for i in range(len(entries)) if i != j)


def _walk_tensors(a: Grid, b: Grid):
    """Yield (t_entries, c_entries, denominator) over the admissible tensors.

    ``denominator`` is prod t_ijk! as an integer.  Tensors whose derived
    c-slice is unbalanced are skipped (they belong to no basis index).
    """
    nu = len(a)
    free_pairs = [(j, k) for j in range(nu) for k in range(nu) if j != k]
    t = [[[0] * nu for _ in range(nu)] for _ in range(nu)]
    row_used = [[0] * nu for _ in range(nu)]  # sum over k != j of t[i][j][k]
    results = []

    def finish():
        denom = 1
        # derive t_ijj = a_ij - row_used and fold in the factorials
        for i in range(nu):
            for j in range(nu):
                if i != j:
                    v = a[i][j] - row_used[i][j]
                    if v < 0:
                        return
                    t[i][j][j] = v
        for i in range(nu):
            for j in range(nu):
                for k in range(nu):
                    if not (i == j == k):
                        denom *= _fact(t[i][j][k])
        c = tuple(
            tuple(
                sum(t[i][m][k] for m in range(nu)) if i != k else 0
                for k in range(nu)
            )
            for i in range(nu)
        )
        for j in range(nu):
            if _star(c, j) != sum(c[j][i] for i in range(nu) if i != j):
                return
        snapshot = tuple(tuple(tuple(col) for col in plane) for plane in t)
        results.append((snapshot, c, denom))

    def place(pi: int):
        if pi == len(free_pairs):
            finish()
            return
        j, k = free_pairs[pi]

        def split(i: int, rem: int):
            if i == nu:
                if rem == 0:
                    place(pi + 1)
                return
            if i == j:
                cap = rem
            else:
                cap = min(rem, a[i][j] - row_used[i][j])
            for v in range(cap + 1):
                t[i][j][k] = v
                if i != j:
                    row_used[i][j] += v
                split(i + 1, rem - v)
                if i != j:
                    row_used[i][j] -= v
                t[i][j][k] = 0

        split(0, b[j][k])

    place(0)
    return results


@lru_cache(maxsize=None)
def _reduced_bracket_product(
    j: int, a_star: int, b_star: int, t_star: int, nu: int
) -> EpsPolynomial:
    """Numerator left by ((a*, t*)) ((b*, t*)) / ((0, t*)) after full cancellation.

    The factor (1 - m*eps_j) appears in the numerator for m in [a*, t*) and
    again for m in [b*, t*), and once in the denominator for m in [1, t*).
    Cancelling leaves one numerator copy on [max(a*, b*), t*) and a leftover
    denominator on [1, min(a*, b*)), which is independent of t*; the leftover
    is supplied by the caller as the pair-wide common denominator.
    """
    return bracket(max(a_star, b_star), t_star, j, nu)


@lru_cache(maxsize=None)
def _profile_poly(
    a_stars: tuple[int, ...], b_stars: tuple[int, ...], t_stars: tuple[int, ...], nu: int
) -> EpsPolynomial:
    out = EpsPolynomial.constant(nu, 1)
    for j in range(nu):
        out = out * _reduced_bracket_product(j, a_stars[j], b_stars[j], t_stars[j], nu)
    return out


@lru_cache(maxsize=None)
def _product_terms(a: Grid, b: Grid) -> dict[Grid, EpsRingElement]:
    nu = len(a)
    pref = 1
    for i in range(nu):
        for j in range(nu):
            if i != j:
                pref *= _fact(a[i][j]) * _fact(b[i][j])
    a_stars = tuple(_star(a, j) for j in range(nu))
    b_stars = tuple(_star(b, j) for j in range(nu))
    common_den: dict[tuple[int, int], int] = {}
    for j in range(nu):
        for m in range(1, min(a_stars[j], b_stars[j])):
            common_den[(j, m)] = 1
    # tensors sharing a star profile share their polynomial part entirely, so
    # sum the rational weights first and touch polynomials once per profile
    weights: dict[tuple[Grid, tuple[int, ...]], Fraction] = {}
    for t, c, denom in _walk_tensors(a, b):
        t_stars = tuple(
            a_stars[j] + sum(t[j][j][k] for k in range(nu) if k != j)
            for j in range(nu)
        )
        key = (c, t_stars)
        w = Fraction(pref, denom)
        acc = weights.get(key)
        weights[key] = w if acc is None else acc + w
    numerators: dict[Grid, EpsPolynomial] = {}
    for (c, t_stars), w in weights.items():
        exps = tuple(
            a_stars[j] + b_stars[j] - t_stars[j] for j in range(nu)
        )
        assert all(e >= 0 for e in exps), "exponent must be nonnegative"
        num = _profile_poly(a_stars, b_stars, t_stars, nu).shift_scale(exps, w)
        acc = numerators.get(c)
        numerators[c] = num if acc is None else acc + num
    out: dict[Grid, EpsRingElement] = {}
    for c, num in numerators.items():
        if num.is_zero():
            continue
        out[c] = EpsRingElement(nu, num, dict(common_den))
    return out


def universal_product(a: OffDiagonalType, b: OffDiagonalType) -> dict[OffDiagonalType, EpsRingElement]:
    """All nonzero structure constants for the ordered pair (a, b)."""
    if a.nu != b.nu:
        raise ValueError("size mismatch")
    return {
        OffDiagonalType(c): v for c, v in _product_terms(a.entries, b.entries).items()
    }


def universal_structure_constant(
    a: OffDiagonalType, b: OffDiagonalType, c: OffDiagonalType
) -> EpsRingElement:
    """The coefficient of c in the product of a and b; zero when no tensor fits."""
    if not (a.nu == b.nu == c.nu):
        raise ValueError("size mismatch")
    return _product_terms(a.entries, b.entries).get(c.entries, EpsRingElement.zero(a.nu))


def candidate_outputs(a: OffDiagonalType, b: OffDiagonalType) -> list[OffDiagonalType]:
    """The finitely many types reachable from the pair (a, b), sorted."""
    if a.nu != b.nu:
        raise ValueError("size mismatch")
    seen = {c for _, c, _ in _walk_tensors(a.entries, b.entries)}
    return sorted((OffDiagonalType(c) for c in seen), key=lambda t: t.entries)


def enumerate_tensors(
    a: OffDiagonalType, b: OffDiagonalType, c: OffDiagonalType
) -> list[ConstrainedTripleTensor]:
    """The full constraint set for the triple (a, b, c); may be empty."""
    if not (a.nu == b.nu == c.nu):
        raise ValueError("size mismatch")
    return [
        ConstrainedTripleTensor(t)
        for t, got_c, _ in _walk_tensors(a.entries, b.entries)
        if got_c == c.entries
    ]


class UniversalElement:
    """Finite combination of off-diagonal basis types with ring-element coefficients."""

    __slots__ = ("nu", "terms")

    def __init__(self, nu: int, terms: dict[OffDiagonalType, EpsRingElement] | None = None):
        self.nu = nu
        self.terms: dict[OffDiagonalType, EpsRingElement] = {}
        if terms:
            for tp, coeff in terms.items():
                if tp.nu != nu:
                    raise ValueError("size mismatch")
                if not coeff.is_zero():
                    self.terms[tp] = coeff

    @classmethod
    def basis(cls, tp: OffDiagonalType) -> "UniversalElement":
        return cls(tp.nu, {tp: EpsRingElement.one(tp.nu)})

    @classmethod
    def unit(cls, nu: int) -> "UniversalElement":
        return cls.basis(OffDiagonalType.zero(nu))

    def __eq__(self, other) -> bool:
        if not isinstance(other, UniversalElement) or self.nu != other.nu:
            return False
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[t] == other.terms[t] for t in self.terms)

    def __add__(self, other: "UniversalElement") -> "UniversalElement":
        if self.nu != other.nu:
            raise ValueError("size mismatch")
        merged = dict(self.terms)
        for tp, coeff in other.terms.items():
            merged[tp] = merged[tp] + coeff if tp in merged else coeff
        return UniversalElement(self.nu, merged)

    def __sub__(self, other: "UniversalElement") -> "UniversalElement":
        return self + other.scale(Fraction(-1))

    def scale(self, scalar) -> "UniversalElement":
        return UniversalElement(self.nu, {t: c.scale(scalar) for t, c in self.terms.items()})

    def __mul__(self, other: "UniversalElement") -> "UniversalElement":
        return universal_multiply(self, other)

    def coefficient(self, tp: OffDiagonalType) -> EpsRingElement:
        return self.terms.get(tp, EpsRingElement.zero(self.nu))

    def sorted_terms(self) -> list[tuple[OffDiagonalType, EpsRingElement]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].entries)

    def to_json_dict(self):
        return {
            "nu": self.nu,
            "terms": [
                {"type": tp.to_json_dict(), "coeff": coeff.to_json_dict()}
                for tp, coeff in self.sorted_terms()
            ],
        }


def universal_multiply(x: UniversalElement, y: UniversalElement) -> UniversalElement:
    """Bilinear extension over ring-element coefficients.

    Contributions are accumulated as raw numerator/denominator pairs over a
    running least common denominator; cancellation runs once per final
    target, not once per contribution.
    """
    if x.nu != y.nu:
        raise ValueError("size mismatch")
    nu = x.nu
    scale = EpsRingElement._poly_times_factors
    acc: dict[OffDiagonalType, tuple[EpsPolynomial, dict]] = {}
    for ta, ca in x.terms.items():
        for tb, cb in y.terms.items():
            for tc_entries, coeff in _product_terms(ta.entries, tb.entries).items():
                tc = OffDiagonalType(tc_entries)
                num = ca.num * cb.num * coeff.num
                den: dict[tuple[int, int], int] = dict(ca.den)
                for key, mult in cb.den.items():
                    den[key] = den.get(key, 0) + mult
                for key, mult in coeff.den.items():
                    den[key] = den.get(key, 0) + mult
                if tc not in acc:
                    acc[tc] = (num, den)
                    continue
                old_num, old_den = acc[tc]
                lcm = dict(old_den)
                for key, mult in den.items():
                    lcm[key] = max(lcm.get(key, 0), mult)
                old_extra = {k: v - old_den.get(k, 0) for k, v in lcm.items() if v - old_den.get(k, 0)}
                new_extra = {k: v - den.get(k, 0) for k, v in lcm.items() if v - den.get(k, 0)}
                acc[tc] = (scale(old_num, old_extra) + scale(num, new_extra), lcm)
    return UniversalElement(
        nu, {tc: EpsRingElement(nu, num, den) for tc, (num, den) in acc.items()}
    )


def specialize_constant(
    a: OffDiagonalType, b: OffDiagonalType, c: OffDiagonalType, margins: Margins
) -> Fraction:
    """The universal constant evaluated at eps_j = 1/n_j.

    Requires the star sums of a and b to fit under the margins (outside that
    region poles can occur).  The value then agrees with the finite-algebra
    structure constant of the embedded matrices, and is zero whenever the
    c star sums overflow.
    """
    if not (a.nu == b.nu == c.nu == margins.nu):
        raise ValueError("size mismatch")
    for tp in (a, b):
        for j in range(margins.nu):
            if tp.star(j) > margins.n[j]:
                raise MarginOverflow(j + 1, tp.star(j), margins.n[j])
    return universal_structure_constant(a, b, c).specialize(margins)


def finite_constant_via_embedding(
    a: OffDiagonalType, b: OffDiagonalType, c: OffDiagonalType, margins: Margins
) -> Fraction:
    """Reference value for ``specialize_constant``: embed and use the finite algebra."""
    try:
        mc = embed_offdiagonal(c, margins)
    except MarginOverflow:
        return Fraction(0)
    return structure_constant(
        embed_offdiagonal(a, margins), embed_offdiagonal(b, margins), mc
    )


@dataclass
class Lemma3Report:
    """Exponent bookkeeping over every reachable target of one ordered pair."""

    a: OffDiagonalType
    b: OffDiagonalType
    tensors_checked: int
    exponent_failures: int
    zero_exponent_failures: int

    @property
    def ok(self) -> bool:
        return self.exponent_failures == 0 and self.zero_exponent_failures == 0


def lemma3_checks(a: OffDiagonalType, b: OffDiagonalType) -> Lemma3Report:
    """For every admissible tensor: the eps-exponents are the cross-slice sums,
    hence nonnegative, and they all vanish only on the target a + b."""
    if a.nu != b.nu:
        raise ValueError("size mismatch")
    nu = a.nu
    tensors = 0
    bad_exponent = 0
    bad_zero = 0
    target_sum = (a + b).entries
    for t, c, _ in _walk_tensors(a.entries, b.entries):
        tensors += 1
        exps = []
        for j in range(nu):
            t_star = _star(a.entries, j) + sum(t[j][j][k] for k in range(nu) if k != j)
            e = _star(a.entries, j) + _star(b.entries, j) - t_star
            cross = sum(
                t[i][j][k]
                for i in range(nu)
                for k in range(nu)
                if i != j and k != j
            )
            if e != cross or e < 0:
                bad_exponent += 1
            exps.append(e)
        if all(e == 0 for e in exps) and c != target_sum:
            bad_zero += 1
    return Lemma3Report(a, b, tensors, bad_exponent, bad_zero)
