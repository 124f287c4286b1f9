"""Transposition averages and the infinitesimal braid relations.

For i != j let r_ij be the basis element whose matrix is diagonal except for
single off-diagonal units at (i, j) and (j, i); it is the two-sided average
of any transposition exchanging a point of block i with one of block j.  The
scaled elements n_i * n_j * r_ij satisfy the infinitesimal braid relations

    (8)  [rr_ij, rr_jk + rr_ik] = 0   for pairwise distinct i, j, k,
    (9)  [rr_ij, rr_kl] = 0           for pairwise distinct i, j, k, l.

The scaling matters for (8): it mixes two commutators whose unscaled values
differ by the factor n_i / n_j, so the unscaled elements satisfy (8) only at
equal block sizes.  Relation (9) is a single commutator and holds unscaled.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraElement, commutator, multiply
from .cosets import CosetMatrix, Margins


def _r_matrix(i: int, j: int, margins: Margins) -> CosetMatrix:
    nu = margins.nu
    grid = [[0] * nu for _ in range(nu)]
    for k in range(nu):
        grid[k][k] = margins.n[k]
    grid[i][i] -= 1
    grid[j][j] -= 1
    grid[i][j] += 1
    grid[j][i] += 1
    return CosetMatrix(tuple(tuple(row) for row in grid), margins)


def r_element(i: int, j: int, margins: Margins) -> AlgebraElement:
    """The transposition average for blocks i and j (1-based, i != j)."""
    if i == j:
        raise ValueError("indices must differ")
    if not (1 <= i <= margins.nu and 1 <= j <= margins.nu):
        raise ValueError("block index out of range")
    return AlgebraElement.basis(_r_matrix(i - 1, j - 1, margins))


def scaled_r_element(i: int, j: int, margins: Margins) -> AlgebraElement:
    """n_i * n_j times the transposition average; the braid-relation normalization."""
    base = r_element(i, j, margins)
    return Fraction(margins.n[i - 1] * margins.n[j - 1]) * base


def commutator_witness(i: int, j: int, k: int, margins: Margins) -> AlgebraElement:
    """The commutator of the (j, k) and (i, j) transposition averages.

    For pairwise distinct indices this is a difference of two basis elements,
    each weighted 1/n_j: the two targets are the diagonal-minus-one matrix
    completed by the two opposite 3-cycles through blocks i, j, k.
    """
    if len({i, j, k}) != 3:
        raise ValueError("indices must be pairwise distinct")
    return commutator(r_element(j, k, margins), r_element(i, j, margins))


@dataclass
class RelationCheck:
    relation: str  # "(8)" or "(9)"
    indices: tuple[int, ...]
    holds: bool
    commutator: AlgebraElement

    def to_json_dict(self):
        return {
            "relation": self.relation,
            "indices": list(self.indices),
            "holds": self.holds,
            "commutator": self.commutator.to_json_dict(),
        }


@dataclass
class BraidReport:
    margins: Margins
    checks: list[RelationCheck]

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.checks)

    def to_json_dict(self):
        return {
            "n": list(self.margins.n),
            "all_hold": self.ok,
            "checks": [c.to_json_dict() for c in self.checks],
        }


def check_relations(margins: Margins) -> BraidReport:
    """Verify every instance of (8) (nu >= 3) and (9) (nu >= 4) exactly."""
    nu = margins.nu
    checks: list[RelationCheck] = []
    for i, j, k in itertools.permutations(range(1, nu + 1), 3):
        x = scaled_r_element(i, j, margins)
        lhs = commutator(x, scaled_r_element(j, k, margins) + scaled_r_element(i, k, margins))
        checks.append(RelationCheck("(8)", (i, j, k), lhs.is_zero(), lhs))
    for i, j, k, l in itertools.combinations(range(1, nu + 1), 4):
        # every ordered pair of disjoint index pairs inside the quadruple
        for (p, q), (r, s) in itertools.permutations(
            [(i, j), (i, k), (i, l), (j, k), (j, l), (k, l)], 2
        ):
            if len({p, q, r, s}) != 4:
                continue
            lhs = commutator(scaled_r_element(p, q, margins), scaled_r_element(r, s, margins))
            checks.append(RelationCheck("(9)", (p, q, r, s), lhs.is_zero(), lhs))
    return BraidReport(margins, checks)


def displayed_product_targets(i: int, j: int, k: int, margins: Margins):
    """The product r_jk * r_ij together with its two predicted basis targets.

    The product is supported on exactly two matrices: the chain matrix, with
    off-diagonal units at (i, j), (j, i), (j, k), (k, j), carrying coefficient
    (n_j - 1)/n_j, and the forward 3-cycle matrix, with units at (i, j),
    (j, k), (k, i), carrying 1/n_j.  Returns (product, chain, cycle); the
    chain is None when n_j = 1 (its coefficient vanishes and its matrix
    would need two points in block j).
    """
    prod = multiply(r_element(j, k, margins), r_element(i, j, margins))
    nu = margins.nu
    i0, j0, k0 = i - 1, j - 1, k - 1
    chain = None
    if margins.n[j0] >= 2:
        grid = [[0] * nu for _ in range(nu)]
        for t in range(nu):
            grid[t][t] = margins.n[t]
        grid[i0][i0] -= 1
        grid[j0][j0] -= 2
        grid[k0][k0] -= 1
        grid[i0][j0] += 1
        grid[j0][i0] += 1
        grid[j0][k0] += 1
        grid[k0][j0] += 1
        chain = CosetMatrix(tuple(tuple(r) for r in grid), margins)
    cycle = [[0] * nu for _ in range(nu)]
    for t in range(nu):
        cycle[t][t] = margins.n[t]
    cycle[i0][i0] -= 1
    cycle[j0][j0] -= 1
    cycle[k0][k0] -= 1
    cycle[i0][j0] += 1
    cycle[j0][k0] += 1
    cycle[k0][i0] += 1
    return prod, chain, CosetMatrix(tuple(tuple(r) for r in cycle), margins)
