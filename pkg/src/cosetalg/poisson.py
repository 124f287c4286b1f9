"""Graded degeneration and the Poisson bracket.

The deformation filtration by total eps-degree degenerates the universal
algebra to a commutative one: at order zero a product of basis types is the
basis type of the entrywise sum.  The next coefficient carries a Poisson
bracket once all deformation variables are identified.

The order-one coefficient of a product of basis types a, b decomposes as

  eps_j-part = sum over alpha, gamma != j of a_{alpha j} b_{j gamma} on the
               target a + b + E_{alpha gamma} - E_{alpha j} - E_{j gamma}
               (the E_{alpha alpha} unit is dropped when alpha = gamma),
  minus a*_jj b*_jj on the target a + b.

Both pieces come straight out of the defining tensor sum: the tensors of
total cross weight one are exactly the single unit cells (alpha, j, gamma)
with alpha, gamma != j, and the diagonal correction is the linear term of
the bracket ratio of the unique weight-zero tensor.  The correction is
symmetric in a and b, so it cancels from commutators; tests pin both pieces
against the full ring expansion.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .cosets import OffDiagonalType
from .epsring import EpsRingElement
from .rationals import format_rational
from .universal import universal_product

Grid = tuple[tuple[int, ...], ...]


class GradedElement:
    """Rational combination of off-diagonal basis types."""

    __slots__ = ("nu", "terms")

    def __init__(self, nu: int, terms: dict[OffDiagonalType, Fraction] | None = None):
        self.nu = nu
        self.terms: dict[OffDiagonalType, Fraction] = {}
        if terms:
            for tp, coeff in terms.items():
                if tp.nu != nu:
                    raise ValueError("size mismatch")
                coeff = Fraction(coeff)
                if coeff:
                    self.terms[tp] = coeff

    @classmethod
    def basis(cls, tp: OffDiagonalType) -> "GradedElement":
        return cls(tp.nu, {tp: Fraction(1)})

    @classmethod
    def zero(cls, nu: int) -> "GradedElement":
        return cls(nu)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GradedElement)
            and self.nu == other.nu
            and self.terms == other.terms
        )

    def __add__(self, other: "GradedElement") -> "GradedElement":
        if self.nu != other.nu:
            raise ValueError("size mismatch")
        merged = dict(self.terms)
        for tp, coeff in other.terms.items():
            merged[tp] = merged.get(tp, Fraction(0)) + coeff
        return GradedElement(self.nu, merged)

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return self + (-1) * other

    def __rmul__(self, scalar) -> "GradedElement":
        scalar = Fraction(scalar)
        return GradedElement(self.nu, {t: scalar * c for t, c in self.terms.items()})

    def coefficient(self, tp: OffDiagonalType) -> Fraction:
        return self.terms.get(tp, Fraction(0))

    def sorted_terms(self) -> list[tuple[OffDiagonalType, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].entries)

    def to_json_dict(self):
        return {
            "nu": self.nu,
            "terms": [
                {"type": tp.to_json_dict(), "coeff": format_rational(coeff)}
                for tp, coeff in self.sorted_terms()
            ],
        }

    def __repr__(self):
        body = " + ".join(f"{c}*Xi{list(map(list, t.entries))}" for t, c in self.sorted_terms())
        return body or "0"


def graded_multiply(x: GradedElement, y: GradedElement) -> GradedElement:
    """Commutative product: basis types multiply by entrywise addition."""
    if x.nu != y.nu:
        raise ValueError("size mismatch")
    acc: dict[OffDiagonalType, Fraction] = {}
    for ta, ca in x.terms.items():
        for tb, cb in y.terms.items():
            tc = ta + tb
            acc[tc] = acc.get(tc, Fraction(0)) + ca * cb
    return GradedElement(x.nu, acc)


def _shift_target(base: Grid, alpha: int, j: int, gamma: int) -> OffDiagonalType:
    grid = [list(row) for row in base]
    grid[alpha][j] -= 1
    grid[j][gamma] -= 1
    if alpha != gamma:
        grid[alpha][gamma] += 1
    return OffDiagonalType(tuple(tuple(row) for row in grid))


@lru_cache(maxsize=None)
def _order_one_linear(a: Grid, b: Grid) -> tuple[dict, ...]:
    """Per-variable eps-linear coefficients of the product of basis types a, b.

    Returns one {target entries: Fraction} map per variable index.  Exact:
    the weight-one tensors give the shifted targets, the weight-zero tensor's
    bracket ratio gives the diagonal correction on a + b.
    """
    nu = len(a)
    base = tuple(
        tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
    )
    out: list[dict[Grid, Fraction]] = [dict() for _ in range(nu)]
    for j in range(nu):
        a_star = sum(a[i][j] for i in range(nu) if i != j)
        b_star = sum(b[j][k] for k in range(nu) if k != j)
        # linear term of ((a*, a*+b*)) ((b*, a*+b*)) / ((0, a*+b*)) in eps_j
        t_star = a_star + b_star
        lin = -(_range_sum(a_star, t_star) + _range_sum(b_star, t_star) - _range_sum(0, t_star))
        if lin:
            out[j][base] = Fraction(lin)
        for alpha in range(nu):
            if alpha == j or a[alpha][j] == 0:
                continue
            for gamma in range(nu):
                if gamma == j or b[j][gamma] == 0:
                    continue
                tgt = _shift_target(base, alpha, j, gamma).entries
                w = Fraction(a[alpha][j] * b[j][gamma])
                out[j][tgt] = out[j].get(tgt, Fraction(0)) + w
    return tuple(out)


def _range_sum(p: int, q: int) -> int:
    """p + (p+1) + ... + (q-1)."""
    return (q * (q - 1) - p * (p - 1)) // 2


def first_order_term(a: OffDiagonalType, b: OffDiagonalType) -> dict[int, GradedElement]:
    """Coefficient of each eps_j (1-based j) in the product of basis types a, b.

    Computed by expanding every exact product coefficient to total degree
    one; no transcribed formula is involved.
    """
    if a.nu != b.nu:
        raise ValueError("size mismatch")
    nu = a.nu
    out = {j + 1: GradedElement.zero(nu) for j in range(nu)}
    for target, coeff in universal_product(a, b).items():
        series = coeff.expand(1)
        for j in range(nu):
            deg = tuple(1 if t == j else 0 for t in range(nu))
            v = series.coefficient(deg)
            if v:
                out[j + 1] = out[j + 1] + GradedElement(nu, {target: v})
    return out


def first_order_shift_formula(a: OffDiagonalType, b: OffDiagonalType) -> dict[int, GradedElement]:
    """The pure shifted-target sum, without the diagonal correction on a + b.

    For each variable j this is sum over alpha, gamma != j of
    a_{alpha j} b_{j gamma} on a + b + E_{alpha gamma} - E_{alpha j} - E_{j gamma}.
    It differs from the true first-order coefficient by the correction term
    -a*_jj b*_jj on a + b; the test suite records exactly that difference.
    """
    if a.nu != b.nu:
        raise ValueError("size mismatch")
    nu = a.nu
    base = (a + b).entries
    out = {}
    for j in range(nu):
        acc: dict[OffDiagonalType, Fraction] = {}
        for alpha in range(nu):
            if alpha == j or a.entries[alpha][j] == 0:
                continue
            for gamma in range(nu):
                if gamma == j or b.entries[j][gamma] == 0:
                    continue
                tgt = _shift_target(base, alpha, j, gamma)
                w = Fraction(a.entries[alpha][j] * b.entries[j][gamma])
                acc[tgt] = acc.get(tgt, Fraction(0)) + w
        out[j + 1] = GradedElement(nu, acc)
    return out


@lru_cache(maxsize=None)
def _bracket_basis(a: Grid, b: Grid) -> "GradedElement":
    nu = len(a)
    lin_ab = _order_one_linear(a, b)
    lin_ba = _order_one_linear(b, a)
    acc: dict[OffDiagonalType, Fraction] = {}
    for j in range(nu):
        for tgt, v in lin_ab[j].items():
            key = OffDiagonalType(tgt)
            acc[key] = acc.get(key, Fraction(0)) + v
        for tgt, v in lin_ba[j].items():
            key = OffDiagonalType(tgt)
            acc[key] = acc.get(key, Fraction(0)) - v
    return GradedElement(nu, acc)


def poisson_bracket(x: GradedElement, y: GradedElement) -> GradedElement:
    """{x, y}: the eps-linear coefficient of the commutator, all variables identified.

    Equals (commutator / eps) at eps = 0 after setting every eps_j = eps;
    computed exactly from the order-one part of the product expansion and
    extended bilinearly.
    """
    if x.nu != y.nu:
        raise ValueError("size mismatch")
    acc: dict[OffDiagonalType, Fraction] = {}
    for ta, ca in x.terms.items():
        for tb, cb in y.terms.items():
            w = ca * cb
            for tp, v in _bracket_basis(ta.entries, tb.entries).terms.items():
                acc[tp] = acc.get(tp, Fraction(0)) + w * v
    return GradedElement(x.nu, acc)


def poisson_bracket_via_ring(a: OffDiagonalType, b: OffDiagonalType) -> GradedElement:
    """Reference route for basis types: full ring commutator, identify, divide, evaluate."""
    if a.nu != b.nu:
        raise ValueError("size mismatch")
    nu = a.nu
    forward = universal_product(a, b)
    backward = universal_product(b, a)
    acc: dict[OffDiagonalType, Fraction] = {}
    for target in set(forward) | set(backward):
        diff = forward.get(target, EpsRingElement.zero(nu)) - backward.get(
            target, EpsRingElement.zero(nu)
        )
        v = _identified_linear_value(diff)
        if v:
            acc[target] = v
    return GradedElement(nu, acc)


def _identified_linear_value(x: EpsRingElement) -> Fraction:
    """(x / eps) at eps = 0 with every variable set to eps.

    Needs the identified constant term to vanish; the denominator factors all
    equal 1 at the origin, so the value is the total-degree-one coefficient
    mass of the canonical numerator.
    """
    const = sum(
        (c for d, c in x.num.terms.items() if sum(d) == 0), Fraction(0)
    )
    if const:
        raise ValueError("constant term does not vanish; not a commutator coefficient")
    return sum((c for d, c in x.num.terms.items() if sum(d) == 1), Fraction(0))
