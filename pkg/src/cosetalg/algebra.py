"""The finite double-coset algebra: exact products of coset averages.

The basis consists of the normalized coset sums, one per coset matrix.  The
coefficient of the c-basis element in a product of the a- and b-basis
elements is

    (prod_ij a_ij! * prod_jk b_jk! / prod_j n_j!) * sum_t 1 / prod_ijk t_ijk!

where the sum runs over all nonnegative integer 3-tensors t whose three
axis-wise marginal slices reproduce a, b and c:

    sum_k t_ijk = a_ij,   sum_i t_ijk = b_jk,   sum_j t_ijk = c_ik.

Such tensors are 3-margin transportation arrays; they are enumerated by a
recursive constrained fill over the cells of a with running column budgets
taken from b, and the c-slice is read off at the leaves.  This derives every
nonzero product target in a single pass, so a full product costs one
enumeration rather than one per candidate c.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cosets import CosetMatrix, Margins, enumerate_coset_matrices
from .rationals import format_rational

Grid = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class TripleTensor:
    """A nonnegative integer 3-tensor t_ijk with its three marginal slices."""

    entries: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def nu(self) -> int:
        return len(self.entries)

    def first_margin(self) -> Grid:
        """sum over k: the a-slice."""
        nu = self.nu
        return tuple(
            tuple(sum(self.entries[i][j]) for j in range(nu)) for i in range(nu)
        )

    def second_margin(self) -> Grid:
        """sum over i: the b-slice."""
        nu = self.nu
        return tuple(
            tuple(sum(self.entries[i][j][k] for i in range(nu)) for k in range(nu))
            for j in range(nu)
        )

    def third_margin(self) -> Grid:
        """sum over j: the c-slice."""
        nu = self.nu
        return tuple(
            tuple(sum(self.entries[i][j][k] for j in range(nu)) for k in range(nu))
            for i in range(nu)
        )

    def middle_slice_sum(self, j: int) -> int:
        """Total of all cells with middle index j, excluding the (j, j, j) cell."""
        nu = self.nu
        return sum(
            self.entries[i][j][k]
            for i in range(nu)
            for k in range(nu)
            if not (i == j and k == j)
        )


@lru_cache(maxsize=None)
def _fact(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def _tensor_sums(a: Grid, b: Grid, nu: int):
    """Yield (c_entries, inv_denominator) for every admissible 3-tensor.

    inv_denominator is prod t_ijk! as a plain integer.  Cells are visited in
    row-major order of (i, j) and each a_ij is split across k under the
    remaining b-column budgets.
    """
    colrem = [list(row) for row in b]
    t = [[[0] * nu for _ in range(nu)] for _ in range(nu)]
    cells = [(i, j) for i in range(nu) for j in range(nu)]
    results: list[tuple[Grid, int]] = []

    def after_cell(ci: int, denom: int):
        if ci == len(cells):
            if any(v for row in colrem for v in row):
                return
            c = tuple(
                tuple(sum(t[i][j][k] for j in range(nu)) for k in range(nu))
                for i in range(nu)
            )
            results.append((c, denom))
            return
        i, j = cells[ci]
        rem_cols = colrem[j]

        def split(k: int, rem: int, denom2: int):
            if k == nu - 1:
                if rem <= rem_cols[k]:
                    t[i][j][k] = rem
                    rem_cols[k] -= rem
                    after_cell(ci + 1, denom2 * _fact(rem))
                    rem_cols[k] += rem
                    t[i][j][k] = 0
                return
            for v in range(min(rem, rem_cols[k]) + 1):
                t[i][j][k] = v
                rem_cols[k] -= v
                split(k + 1, rem - v, denom2 * _fact(v))
                rem_cols[k] += v
                t[i][j][k] = 0

        split(0, a[i][j], denom)

    after_cell(0, 1)
    return results


@lru_cache(maxsize=None)
def _product_terms(a: Grid, b: Grid, n: tuple[int, ...]) -> dict[Grid, Fraction]:
    nu = len(n)
    pref_num = 1
    for row in a:
        for v in row:
            pref_num *= _fact(v)
    for row in b:
        for v in row:
            pref_num *= _fact(v)
    pref_den = 1
    for x in n:
        pref_den *= _fact(x)
    pref = Fraction(pref_num, pref_den)
    acc: dict[Grid, Fraction] = {}
    for c, denom in _tensor_sums(a, b, nu):
        acc[c] = acc.get(c, Fraction(0)) + Fraction(1, denom)
    return {c: pref * v for c, v in acc.items() if v}


def triple_tensors(a: CosetMatrix, b: CosetMatrix, c: CosetMatrix) -> list[TripleTensor]:
    """All 3-tensors whose marginal slices are exactly (a, b, c)."""
    _require_same_margins(a, b, c)
    nu = a.margins.nu
    found = []
    colrem = [list(row) for row in b.entries]
    t = [[[0] * nu for _ in range(nu)] for _ in range(nu)]
    cells = [(i, j) for i in range(nu) for j in range(nu)]

    def after_cell(ci: int):
        if ci == len(cells):
            if any(v for row in colrem for v in row):
                return
            got = tuple(
                tuple(sum(t[i][j][k] for j in range(nu)) for k in range(nu))
                for i in range(nu)
            )
            if got == c.entries:
                found.append(
                    TripleTensor(tuple(tuple(tuple(col) for col in plane) for plane in t))
                )
            return
        i, j = cells[ci]

        def split(k: int, rem: int):
            if k == nu - 1:
                if rem <= colrem[j][k]:
                    t[i][j][k] = rem
                    colrem[j][k] -= rem
                    after_cell(ci + 1)
                    colrem[j][k] += rem
                    t[i][j][k] = 0
                return
            for v in range(min(rem, colrem[j][k]) + 1):
                t[i][j][k] = v
                colrem[j][k] -= v
                split(k + 1, rem - v)
                colrem[j][k] += v
                t[i][j][k] = 0

        split(0, a.entries[i][j])

    after_cell(0)
    return found


def _require_same_margins(*ms: CosetMatrix) -> Margins:
    margins = ms[0].margins
    for m in ms[1:]:
        if m.margins != margins:
            raise ValueError("margin mismatch")
    return margins


def structure_constant(a: CosetMatrix, b: CosetMatrix, c: CosetMatrix) -> Fraction:
    """Exact coefficient of the c-basis element in the product of a and b."""
    _require_same_margins(a, b, c)
    return _product_terms(a.entries, b.entries, a.margins.n).get(c.entries, Fraction(0))


class AlgebraElement:
    """Finite linear combination of coset-matrix basis elements, exact coefficients."""

    __slots__ = ("margins", "terms")

    def __init__(self, margins: Margins, terms: dict[CosetMatrix, Fraction] | None = None):
        self.margins = margins
        self.terms: dict[CosetMatrix, Fraction] = {}
        if terms:
            for m, coeff in terms.items():
                if m.margins != margins:
                    raise ValueError("margin mismatch")
                coeff = Fraction(coeff)
                if coeff:
                    self.terms[m] = coeff

    @classmethod
    def basis(cls, m: CosetMatrix) -> "AlgebraElement":
        return cls(m.margins, {m: Fraction(1)})

    @classmethod
    def unit(cls, margins: Margins) -> "AlgebraElement":
        diag = tuple(
            tuple(margins.n[i] if i == j else 0 for j in range(margins.nu))
            for i in range(margins.nu)
        )
        return cls.basis(CosetMatrix(diag, margins))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AlgebraElement)
            and self.margins == other.margins
            and self.terms == other.terms
        )

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if self.margins != other.margins:
            raise ValueError("margin mismatch")
        merged = dict(self.terms)
        for m, coeff in other.terms.items():
            merged[m] = merged.get(m, Fraction(0)) + coeff
        return AlgebraElement(self.margins, merged)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-1) * other

    def __rmul__(self, scalar) -> "AlgebraElement":
        scalar = Fraction(scalar)
        return AlgebraElement(self.margins, {m: scalar * c for m, c in self.terms.items()})

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return multiply(self, other)

    def mass(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    def coefficient(self, m: CosetMatrix) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def sorted_terms(self) -> list[tuple[CosetMatrix, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].entries)

    def to_json_dict(self):
        return {
            "n": list(self.margins.n),
            "terms": [
                {"matrix": [list(r) for r in m.entries], "coeff": format_rational(c)}
                for m, c in self.sorted_terms()
            ],
        }

    def __repr__(self):
        body = " + ".join(f"{c} * Xi{list(map(list, m.entries))}" for m, c in self.sorted_terms())
        return body or "0"


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Bilinear extension of the structure constants; first factor acts first."""
    if x.margins != y.margins:
        raise ValueError("margin mismatch")
    margins = x.margins
    acc: dict[Grid, Fraction] = {}
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            w = ca * cb
            for c, coeff in _product_terms(a.entries, b.entries, margins.n).items():
                acc[c] = acc.get(c, Fraction(0)) + w * coeff
    return AlgebraElement(
        margins, {CosetMatrix(c, margins): v for c, v in acc.items() if v}
    )


def commutator(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return multiply(x, y) - multiply(y, x)


def product_table(
    margins: Margins, max_basis: int = 128
) -> list[tuple[CosetMatrix, CosetMatrix, CosetMatrix, Fraction]]:
    """Every nonzero structure constant, ordered by (a, b, c) entries."""
    basis = enumerate_coset_matrices(margins)
    if len(basis) > max_basis:
        raise ValueError(
            f"{len(basis)} basis matrices exceed the configured bound {max_basis}"
        )
    rows = []
    for a in basis:
        for b in basis:
            terms = _product_terms(a.entries, b.entries, margins.n)
            for c_entries in sorted(terms):
                rows.append(
                    (a, b, CosetMatrix(c_entries, margins), terms[c_entries])
                )
    return rows


@dataclass
class AssociativityReport:
    margins: Margins
    basis_size: int
    triples_checked: int
    violations: list[tuple[CosetMatrix, CosetMatrix, CosetMatrix]]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self):
        return {
            "n": list(self.margins.n),
            "basis_size": self.basis_size,
            "triples_checked": self.triples_checked,
            "violations": [
                [x.to_json_dict(), y.to_json_dict(), z.to_json_dict()]
                for x, y, z in self.violations
            ],
        }


def verify_associativity(margins: Margins, max_basis: int = 128) -> AssociativityReport:
    """Exhaustively compare (ab)c with a(bc) over all basis triples."""
    basis = enumerate_coset_matrices(margins)
    if len(basis) > max_basis:
        raise ValueError(
            f"{len(basis)} basis matrices exceed the configured bound {max_basis}"
        )
    violations = []
    checked = 0
    elems = {m: AlgebraElement.basis(m) for m in basis}
    for a in basis:
        for b in basis:
            ab = multiply(elems[a], elems[b])
            for c in basis:
                left = multiply(ab, elems[c])
                right = multiply(elems[a], multiply(elems[b], elems[c]))
                checked += 1
                if left != right:
                    violations.append((a, b, c))
    return AssociativityReport(margins, len(basis), checked, violations)
