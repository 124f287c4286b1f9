"""Exact arithmetic in rational-coefficient rings of the deformation variables.

Three layers, all exact:

* ``EpsPolynomial``: sparse multivariate polynomials in eps_1, ..., eps_nu
  over the rationals.
* ``EpsRingElement``: a polynomial numerator over a multiset of linear
  denominator factors (1 - m*eps_j), m >= 1.  Denominators are never
  expanded, so deciding whether a substitution eps_j = 1/n_j hits a pole is
  a multiset lookup after cancellation.
* ``EpsSeries``: truncated power series by total degree, for extracting
  low-order coefficients.

Canonical form: no factor present in the denominator divides the numerator.
Because every factor is linear with constant term 1, the canonical
numerator/denominator pair of a given rational function is unique, and
cancellation is one synthetic division per factor.
"""

from __future__ import annotations

from fractions import Fraction

from .cosets import Margins
from .errors import PoleAtSpecialization
from .rationals import format_rational

Degree = tuple[int, ...]


class EpsPolynomial:
    """Sparse polynomial: map from exponent multidegrees to rational coefficients."""

    __slots__ = ("nu", "terms")

    def __init__(self, nu: int, terms: dict[Degree, Fraction] | None = None):
        self.nu = nu
        self.terms: dict[Degree, Fraction] = {}
        if terms:
            for deg, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff:
                    if len(deg) != nu or any(d < 0 for d in deg):
                        raise ValueError(f"bad multidegree {deg} for nu={nu}")
                    self.terms[tuple(deg)] = coeff

    @classmethod
    def _make(cls, nu: int, terms: dict[Degree, Fraction]) -> "EpsPolynomial":
        """Trusted constructor: terms already Fraction-valued, zero-free, valid."""
        self = object.__new__(cls)
        self.nu = nu
        self.terms = terms
        return self

    @classmethod
    def constant(cls, nu: int, value) -> "EpsPolynomial":
        return cls(nu, {(0,) * nu: Fraction(value)})

    @classmethod
    def variable(cls, nu: int, j: int) -> "EpsPolynomial":
        deg = [0] * nu
        deg[j] = 1
        return cls(nu, {tuple(deg): Fraction(1)})

    @classmethod
    def monomial(cls, nu: int, deg: Degree, coeff=1) -> "EpsPolynomial":
        return cls(nu, {tuple(deg): Fraction(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nu, Fraction(0))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EpsPolynomial)
            and self.nu == other.nu
            and self.terms == other.terms
        )

    def _check(self, other: "EpsPolynomial"):
        if self.nu != other.nu:
            raise ValueError("variable count mismatch")

    def __add__(self, other: "EpsPolynomial") -> "EpsPolynomial":
        self._check(other)
        merged = dict(self.terms)
        for deg, coeff in other.terms.items():
            acc = merged.get(deg)
            if acc is None:
                merged[deg] = coeff
            elif acc + coeff:
                merged[deg] = acc + coeff
            else:
                del merged[deg]
        return EpsPolynomial._make(self.nu, merged)

    def __neg__(self) -> "EpsPolynomial":
        return EpsPolynomial._make(self.nu, {d: -c for d, c in self.terms.items()})

    def __sub__(self, other: "EpsPolynomial") -> "EpsPolynomial":
        return self + (-other)

    def __mul__(self, other: "EpsPolynomial") -> "EpsPolynomial":
        self._check(other)
        out: dict[Degree, Fraction] = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                d = tuple(x + y for x, y in zip(d1, d2))
                acc = out.get(d)
                out[d] = c1 * c2 if acc is None else acc + c1 * c2
        return EpsPolynomial._make(self.nu, {d: c for d, c in out.items() if c})

    def scale(self, scalar) -> "EpsPolynomial":
        scalar = Fraction(scalar)
        if not scalar:
            return EpsPolynomial._make(self.nu, {})
        return EpsPolynomial._make(self.nu, {d: scalar * c for d, c in self.terms.items()})

    def shift_scale(self, deg: Degree, scalar: Fraction) -> "EpsPolynomial":
        """Multiply by scalar * (monomial of multidegree deg)."""
        if not scalar:
            return EpsPolynomial._make(self.nu, {})
        return EpsPolynomial._make(
            self.nu,
            {
                tuple(x + y for x, y in zip(d, deg)): c * scalar
                for d, c in self.terms.items()
            },
        )

    def evaluate(self, point: tuple[Fraction, ...]) -> Fraction:
        if len(point) != self.nu:
            raise ValueError("point dimension mismatch")
        total = Fraction(0)
        for deg, coeff in self.terms.items():
            v = coeff
            for x, e in zip(point, deg):
                if e:
                    v *= Fraction(x) ** e
            total += v
        return total

    def divide_linear(self, j: int, m: int) -> "EpsPolynomial | None":
        """Exact quotient by (1 - m*eps_j), or None if it does not divide.

        Writing the polynomial as sum_k p_k eps_j^k with p_k in the other
        variables, the quotient satisfies q_k = p_k + m q_{k-1} and division
        is exact iff the final carry vanishes.
        """
        if self.is_zero():
            return self
        by_deg: dict[int, dict[Degree, Fraction]] = {}
        for deg, coeff in self.terms.items():
            by_deg.setdefault(deg[j], {})[deg] = coeff
        top = max(by_deg)
        quotient: dict[Degree, Fraction] = {}
        carry: dict[Degree, Fraction] = {}
        for k in range(top + 1):
            level: dict[Degree, Fraction] = dict(by_deg.get(k, {}))
            for deg, coeff in carry.items():
                lifted = list(deg)
                lifted[j] += 1
                key = tuple(lifted)
                level[key] = level.get(key, Fraction(0)) + m * coeff
            level = {d: c for d, c in level.items() if c}
            if k < top:
                quotient.update(level)
                carry = level
            elif level:
                return None
        return EpsPolynomial._make(self.nu, quotient)

    def total_degree(self) -> int:
        return max((sum(d) for d in self.terms), default=0)

    def sorted_terms(self) -> list[tuple[Degree, Fraction]]:
        return sorted(self.terms.items())

    def __repr__(self):
        if self.is_zero():
            return "0"
        bits = []
        for deg, coeff in self.sorted_terms():
            mono = "*".join(
                f"e{i + 1}^{e}" if e > 1 else f"e{i + 1}"
                for i, e in enumerate(deg)
                if e
            )
            bits.append(f"{coeff}*{mono}" if mono else f"{coeff}")
        return " + ".join(bits)


def bracket(p: int, q: int, j: int, nu: int) -> EpsPolynomial:
    """The product (1 - p*eps_j)(1 - (p+1)*eps_j) ... (1 - (q-1)*eps_j).

    Empty products (p == q) are 1; the m = 0 factor is 1 and contributes
    nothing.  Requires 0 <= p <= q and 0 <= j < nu.
    """
    if not 0 <= p <= q:
        raise ValueError(f"need 0 <= p <= q, got ({p}, {q})")
    if not 0 <= j < nu:
        raise ValueError(f"variable index {j} out of range for nu={nu}")
    out = EpsPolynomial.constant(nu, 1)
    for m in range(p, q):
        if m == 0:
            continue
        out = out * EpsPolynomial(
            nu, {(0,) * nu: Fraction(1), _unit_degree(nu, j): Fraction(-m)}
        )
    return out


def _unit_degree(nu: int, j: int) -> Degree:
    deg = [0] * nu
    deg[j] = 1
    return tuple(deg)


class EpsRingElement:
    """Numerator polynomial over a multiset of factors (1 - m*eps_j), canonical."""

    __slots__ = ("nu", "num", "den")

    def __init__(self, nu: int, num: EpsPolynomial, den: dict[tuple[int, int], int] | None = None):
        if num.nu != nu:
            raise ValueError("numerator variable count mismatch")
        self.nu = nu
        self.num = num
        self.den: dict[tuple[int, int], int] = {}
        if den:
            for (j, m), mult in den.items():
                if mult < 0:
                    raise ValueError("negative multiplicity")
                if m < 1:
                    raise ValueError("denominator factors need m >= 1")
                if not 0 <= j < nu:
                    raise ValueError("denominator variable index out of range")
                if mult:
                    self.den[(j, m)] = self.den.get((j, m), 0) + mult
        self._canonicalize()

    def _canonicalize(self):
        if self.num.is_zero():
            self.den = {}
            return
        for key in sorted(self.den):
            j, m = key
            while self.den.get(key, 0) > 0:
                q = self.num.divide_linear(j, m)
                if q is None:
                    break
                self.num = q
                self.den[key] -= 1
                if not self.den[key]:
                    del self.den[key]

    @classmethod
    def from_rational(cls, nu: int, value) -> "EpsRingElement":
        return cls(nu, EpsPolynomial.constant(nu, value))

    @classmethod
    def from_polynomial(cls, num: EpsPolynomial) -> "EpsRingElement":
        return cls(num.nu, num)

    @classmethod
    def zero(cls, nu: int) -> "EpsRingElement":
        return cls.from_rational(nu, 0)

    @classmethod
    def one(cls, nu: int) -> "EpsRingElement":
        return cls.from_rational(nu, 1)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def den_polynomial(self) -> EpsPolynomial:
        out = EpsPolynomial.constant(self.nu, 1)
        for (j, m), mult in sorted(self.den.items()):
            factor = EpsPolynomial(
                self.nu, {(0,) * self.nu: Fraction(1), _unit_degree(self.nu, j): Fraction(-m)}
            )
            for _ in range(mult):
                out = out * factor
        return out

    def __eq__(self, other) -> bool:
        """Cross-multiplied comparison; canonical forms make it cheap in the common case."""
        if not isinstance(other, EpsRingElement) or self.nu != other.nu:
            return NotImplemented if not isinstance(other, EpsRingElement) else False
        if self.den == other.den:
            return self.num == other.num
        return self.num * other.den_polynomial() == other.num * self.den_polynomial()

    def _merge_dens(self, other: "EpsRingElement"):
        """lcm of the two denominators plus the cofactors to scale each numerator."""
        lcm: dict[tuple[int, int], int] = dict(self.den)
        for key, mult in other.den.items():
            lcm[key] = max(lcm.get(key, 0), mult)
        self_extra = {k: v - self.den.get(k, 0) for k, v in lcm.items() if v - self.den.get(k, 0)}
        other_extra = {k: v - other.den.get(k, 0) for k, v in lcm.items() if v - other.den.get(k, 0)}
        return lcm, self_extra, other_extra

    @staticmethod
    def _poly_times_factors(poly: EpsPolynomial, factors: dict[tuple[int, int], int]) -> EpsPolynomial:
        for (j, m), mult in sorted(factors.items()):
            lin = EpsPolynomial(
                poly.nu, {(0,) * poly.nu: Fraction(1), _unit_degree(poly.nu, j): Fraction(-m)}
            )
            for _ in range(mult):
                poly = poly * lin
        return poly

    def __add__(self, other: "EpsRingElement") -> "EpsRingElement":
        if self.nu != other.nu:
            raise ValueError("variable count mismatch")
        lcm, self_extra, other_extra = self._merge_dens(other)
        num = self._poly_times_factors(self.num, self_extra) + self._poly_times_factors(
            other.num, other_extra
        )
        return EpsRingElement(self.nu, num, lcm)

    def __neg__(self) -> "EpsRingElement":
        return EpsRingElement(self.nu, -self.num, dict(self.den))

    def __sub__(self, other: "EpsRingElement") -> "EpsRingElement":
        return self + (-other)

    def __mul__(self, other: "EpsRingElement") -> "EpsRingElement":
        if self.nu != other.nu:
            raise ValueError("variable count mismatch")
        den = dict(self.den)
        for key, mult in other.den.items():
            den[key] = den.get(key, 0) + mult
        return EpsRingElement(self.nu, self.num * other.num, den)

    def scale(self, scalar) -> "EpsRingElement":
        return EpsRingElement(self.nu, self.num.scale(scalar), dict(self.den))

    def div_by_bracket(self, p: int, q: int, j: int) -> "EpsRingElement":
        """Divide by the factor product (1 - m*eps_j) for m = p, ..., q-1."""
        if not 0 <= p <= q:
            raise ValueError(f"need 0 <= p <= q, got ({p}, {q})")
        den = dict(self.den)
        for m in range(p, q):
            if m == 0:
                continue
            den[(j, m)] = den.get((j, m), 0) + 1
        return EpsRingElement(self.nu, self.num, den)

    def div_by_rational(self, scalar) -> "EpsRingElement":
        scalar = Fraction(scalar)
        if not scalar:
            raise ZeroDivisionError("division by zero rational")
        return self.scale(1 / scalar)

    def specialize(self, margins: Margins) -> Fraction:
        """Evaluate at eps_j = 1/n_j; fails exactly on surviving factors with m = n_j."""
        if margins.nu != self.nu:
            raise ValueError("margins dimension mismatch")
        n = margins.n
        for (j, m) in sorted(self.den):
            if m == n[j]:
                raise PoleAtSpecialization(j + 1, m)
        point = tuple(Fraction(1, x) for x in n)
        value = self.num.evaluate(point)
        for (j, m), mult in self.den.items():
            value /= (1 - Fraction(m, n[j])) ** mult
        return value

    def expand(self, order: int) -> "EpsSeries":
        """Truncated power series to total degree ``order`` (geometric expansion)."""
        if order < 0:
            raise ValueError("order must be nonnegative")
        series = EpsSeries.from_polynomial(self.num, order)
        for (j, m), mult in sorted(self.den.items()):
            inv = EpsSeries.geometric(self.nu, j, m, order)
            for _ in range(mult):
                series = series * inv
        return series

    def sorted_den(self) -> list[tuple[tuple[int, int], int]]:
        return sorted(self.den.items())

    def to_json_dict(self):
        return {
            "num": [
                {"deg": list(deg), "coeff": format_rational(coeff)}
                for deg, coeff in self.num.sorted_terms()
            ],
            "den": [
                {"j": j + 1, "m": m, "mult": mult}
                for (j, m), mult in self.sorted_den()
            ],
        }

    def __repr__(self):
        if not self.den:
            return repr(self.num)
        bits = [
            f"(1-{m}e{j + 1})" + (f"^{mult}" if mult > 1 else "")
            for (j, m), mult in self.sorted_den()
        ]
        return f"({self.num!r}) / ({'*'.join(bits)})"


def specialize(x: EpsRingElement, margins: Margins) -> Fraction:
    return x.specialize(margins)


def expand(x: EpsRingElement, order: int) -> "EpsSeries":
    return x.expand(order)


class EpsSeries:
    """Power series truncated by total degree."""

    __slots__ = ("nu", "order", "terms")

    def __init__(self, nu: int, order: int, terms: dict[Degree, Fraction] | None = None):
        self.nu = nu
        self.order = order
        self.terms: dict[Degree, Fraction] = {}
        if terms:
            for deg, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff and sum(deg) <= order:
                    self.terms[tuple(deg)] = coeff

    @classmethod
    def from_polynomial(cls, p: EpsPolynomial, order: int) -> "EpsSeries":
        self = object.__new__(cls)
        self.nu = p.nu
        self.order = order
        self.terms = {d: c for d, c in p.terms.items() if sum(d) <= order}
        return self

    @classmethod
    def geometric(cls, nu: int, j: int, m: int, order: int) -> "EpsSeries":
        """1 / (1 - m*eps_j) up to the truncation order."""
        terms = {}
        deg = [0] * nu
        for k in range(order + 1):
            deg[j] = k
            terms[tuple(deg)] = Fraction(m) ** k
        return cls(nu, order, terms)

    def _check(self, other: "EpsSeries"):
        if self.nu != other.nu or self.order != other.order:
            raise ValueError("series shape mismatch")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EpsSeries)
            and self.nu == other.nu
            and self.order == other.order
            and self.terms == other.terms
        )

    def __add__(self, other: "EpsSeries") -> "EpsSeries":
        self._check(other)
        merged = dict(self.terms)
        for deg, coeff in other.terms.items():
            merged[deg] = merged.get(deg, Fraction(0)) + coeff
        return EpsSeries(self.nu, self.order, merged)

    def __sub__(self, other: "EpsSeries") -> "EpsSeries":
        return self + other.scale(-1)

    def __mul__(self, other: "EpsSeries") -> "EpsSeries":
        self._check(other)
        out: dict[Degree, Fraction] = {}
        for d1, c1 in self.terms.items():
            r1 = sum(d1)
            for d2, c2 in other.terms.items():
                if r1 + sum(d2) > self.order:
                    continue
                d = tuple(x + y for x, y in zip(d1, d2))
                out[d] = out.get(d, Fraction(0)) + c1 * c2
        return EpsSeries(self.nu, self.order, out)

    def scale(self, scalar) -> "EpsSeries":
        scalar = Fraction(scalar)
        return EpsSeries(self.nu, self.order, {d: scalar * c for d, c in self.terms.items()})

    def coefficient(self, deg: Degree) -> Fraction:
        return self.terms.get(tuple(deg), Fraction(0))

    def homogeneous_part(self, degree: int) -> dict[Degree, Fraction]:
        return {d: c for d, c in self.terms.items() if sum(d) == degree}

    def __repr__(self):
        body = " + ".join(f"{c}*e^{list(d)}" for d, c in sorted(self.terms.items()))
        return f"EpsSeries(order={self.order}: {body or '0'})"
