import itertools
import json
from math import factorial

import pytest

from cosetalg import (
    CosetMatrix,
    Margins,
    MarginOverflow,
    OffDiagonalType,
    coset_size,
    embed_offdiagonal,
    enumerate_coset_matrices,
    strip_diagonal,
)

from helpers import naive_tables


def test_margins_validation():
    with pytest.raises(ValueError):
        Margins(())
    with pytest.raises(ValueError):
        Margins((2, 0))
    m = Margins((2, 3))
    assert m.nu == 2 and m.N == 5


def test_matrix_validation():
    m = Margins((2, 2))
    with pytest.raises(ValueError):
        CosetMatrix(((2, 1), (0, 1)), m)  # bad row sum
    with pytest.raises(ValueError):
        CosetMatrix(((2, 0), (1, 1)), m)  # bad column sum
    CosetMatrix(((1, 1), (1, 1)), m)


def test_enumerate_single_block():
    out = enumerate_coset_matrices(Margins((3,)))
    assert [m.entries for m in out] == [((3,),)]


def test_enumerate_two_singletons():
    out = enumerate_coset_matrices(Margins((1, 1)))
    assert [m.entries for m in out] == [((0, 1), (1, 0)), ((1, 0), (0, 1))]


@pytest.mark.parametrize("n1,n2", [(1, 1), (2, 2), (2, 3), (3, 5), (4, 4)])
def test_enumerate_two_blocks_count(n1, n2):
    # two-block matrices are parameterized by the single off-diagonal value
    out = enumerate_coset_matrices(Margins((n1, n2)))
    assert len(out) == min(n1, n2) + 1
    off_values = sorted(m.entries[0][1] for m in out)
    assert off_values == list(range(min(n1, n2) + 1))


@pytest.mark.parametrize("n", [(2, 2), (1, 1, 2), (1, 2, 3), (2, 1, 1, 2)])
def test_enumerate_matches_naive_filter(n):
    got = [m.entries for m in enumerate_coset_matrices(Margins(n))]
    assert sorted(got) == sorted(naive_tables(n))
    assert got == sorted(got)  # lexicographic row-major order
    assert len(set(got)) == len(got)


def test_enumerate_deterministic_rerun():
    a = enumerate_coset_matrices(Margins((2, 2, 2)))
    b = enumerate_coset_matrices(Margins((2, 2, 2)))
    assert [m.entries for m in a] == [m.entries for m in b]


def test_coset_size_single_block():
    (m,) = enumerate_coset_matrices(Margins((3,)))
    assert coset_size(m) == 6


def test_coset_size_trivial_young_subgroup():
    m = CosetMatrix(((0, 1), (1, 0)), Margins((1, 1)))
    assert coset_size(m) == 1


def test_coset_size_2_2_mixed():
    # fiber size recounted by filtering S_4 with an explicit intersection count
    from helpers import naive_classify

    target = ((1, 1), (1, 1))
    count = sum(
        1 for g in itertools.permutations(range(4)) if naive_classify(g, (2, 2)) == target
    )
    m = CosetMatrix(target, Margins((2, 2)))
    assert count == 16
    assert coset_size(m) == count


@pytest.mark.parametrize("n", [(1, 1), (2, 2), (2, 3), (1, 1, 2), (2, 2, 2), (1, 2, 3), (3, 3, 2)])
def test_partition_of_unity(n):
    margins = Margins(n)
    total = sum(coset_size(m) for m in enumerate_coset_matrices(margins))
    assert total == factorial(margins.N)


def test_offdiagonal_balance_required():
    with pytest.raises(ValueError):
        OffDiagonalType(((0, 1), (0, 0)))
    t = OffDiagonalType(((0, 1), (1, 0)))
    assert t.star(0) == t.star(1) == 1


def test_embed_all_zero_gives_diagonal():
    margins = Margins((2, 3, 1))
    m = embed_offdiagonal(OffDiagonalType.zero(3), margins)
    assert m.entries == ((2, 0, 0), (0, 3, 0), (0, 0, 1))


def test_embed_basic():
    t = OffDiagonalType(((0, 1), (1, 0)))
    m = embed_offdiagonal(t, Margins((2, 2)))
    assert m.entries == ((1, 1), (1, 1))


def test_embed_overflow():
    t = OffDiagonalType(((0, 3), (3, 0)))
    with pytest.raises(MarginOverflow) as err:
        embed_offdiagonal(t, Margins((2, 2)))
    assert err.value.j == 1 and err.value.star == 3 and err.value.n_j == 2


def test_strip_diagonal_examples():
    margins = Margins((2, 2))
    diag = embed_offdiagonal(OffDiagonalType.zero(2), margins)
    assert strip_diagonal(diag) == OffDiagonalType.zero(2)
    m = CosetMatrix(((1, 1), (1, 1)), margins)
    assert strip_diagonal(m).entries == ((0, 1), (1, 0))


@pytest.mark.parametrize("n", [(2, 2), (1, 1, 2), (1, 2, 3)])
def test_strip_embed_roundtrip(n):
    margins = Margins(n)
    for m in enumerate_coset_matrices(margins):
        t = strip_diagonal(m)
        assert embed_offdiagonal(t, margins) == m
        # the stripped type is always balanced (constructor enforces it)
        assert all(t.star(j) <= margins.n[j] for j in range(margins.nu))


def test_json_shapes():
    m = CosetMatrix(((1, 1), (1, 1)), Margins((2, 2)))
    assert m.to_json_dict() == {"n": [2, 2], "entries": [[1, 1], [1, 1]]}
    t = OffDiagonalType(((0, 2), (2, 0)))
    assert t.to_json_dict() == {"nu": 2, "offdiag": [[1, 2, 2], [2, 1, 2]]}
    json.dumps(m.to_json_dict())
    json.dumps(t.to_json_dict())


def test_offdiagonal_addition():
    t = OffDiagonalType(((0, 1), (1, 0)))
    assert (t + t).entries == ((0, 2), (2, 0))
