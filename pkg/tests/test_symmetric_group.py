import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schurjacobi.symmetric_group import (
    GroupAlgebraElement,
    Partition,
    Permutation,
    algebra_multiply,
    column_group,
    compose,
    dual_partition,
    partitions,
    quasi_idempotence_constant,
    row_group,
    sign,
    symmetric_group,
    young_symmetrizer,
)

P = Permutation.from_cycles


def hook_count(l):
    """Number of standard tableaux by the hook length formula."""
    n = sum(l)
    dual = dual_partition(l)
    hooks = 1
    for i, row in enumerate(l):
        for j in range(row):
            hooks *= (row - j - 1) + (dual[j] - i - 1) + 1
    return math.factorial(n) // hooks


def brute_convolution(a: dict, b: dict) -> dict:
    """Group algebra product on dicts of one-line tuples, no shared code."""
    out = {}
    for p, c in a.items():
        for q, d in b.items():
            r = tuple(p[q[i] - 1] for i in range(len(q)))
            out[r] = out.get(r, 0) + c * d
    return {k: v for k, v in out.items() if v}


def test_compose_examples():
    s = P(3, "(123)")
    assert compose(Permutation.identity(3), s) == s
    assert compose(P(3, "(12)"), P(3, "(12)")) == Permutation.identity(3)
    assert compose(P(3, "(12)"), P(3, "(13)")) == P(3, "(132)")


def test_sign_examples():
    assert sign(Permutation.identity(4)) == 1
    for i, j in itertools.combinations(range(1, 5), 2):
        assert sign(P(4, [[i, j]])) == -1
    assert sign(P(3, "(132)")) == 1


def test_dual_partition_examples():
    assert dual_partition((3, 1)) == (2, 1, 1)
    assert dual_partition((4,)) == (1, 1, 1, 1)


@pytest.mark.parametrize("n", range(1, 7))
def test_dual_is_involution(n):
    for l in partitions(n):
        assert dual_partition(dual_partition(l)) == l


def test_partition_counts():
    assert [len(list(partitions(n))) for n in range(1, 9)] == [1, 2, 3, 5, 7, 11, 15, 22]


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))


def test_row_and_column_groups():
    assert row_group((1, 1, 1)) == [Permutation.identity(3)]
    assert len(row_group((4,))) == 24
    assert row_group((2, 1)) == sorted([Permutation.identity(3), P(3, "(12)")])
    assert column_group((3,)) == [Permutation.identity(3)]
    assert column_group((1, 1)) == sorted([Permutation.identity(2), P(2, "(12)")])
    assert column_group((2, 1)) == sorted([Permutation.identity(3), P(3, "(13)")])


def test_young_symmetrizer_two_one():
    expected = GroupAlgebraElement(3, {
        Permutation.identity(3): 1, P(3, "(12)"): 1, P(3, "(13)"): -1, P(3, "(132)"): -1})
    assert young_symmetrizer((2, 1)) == expected


@pytest.mark.parametrize("n", range(1, 5))
def test_young_symmetrizer_rows_and_columns(n):
    everything = symmetric_group(n)
    assert young_symmetrizer((n,)) == GroupAlgebraElement(n, {p: 1 for p in everything})
    assert young_symmetrizer((1,) * n) == GroupAlgebraElement(n, {p: sign(p) for p in everything})


def test_algebra_multiply_examples():
    one = GroupAlgebraElement.one(2)
    t = GroupAlgebraElement.of(P(2, "(12)"))
    assert algebra_multiply(one + t, one - t).is_zero()
    s = young_symmetrizer((2, 1))
    assert algebra_multiply(s, s) == s.scale(3)


@pytest.mark.parametrize("n", range(1, 6))
def test_quasi_idempotence_matches_hook_formula(n):
    for l in partitions(n):
        assert quasi_idempotence_constant(l) == Fraction(math.factorial(n), hook_count(l))


@pytest.mark.parametrize("l", [(2, 1), (2, 2), (3, 1), (2, 1, 1), (3, 2)])
def test_symmetrizer_square_by_brute_convolution(l):
    s = young_symmetrizer(l)
    raw = {p.images: c for p, c in s.terms.items()}
    sq = brute_convolution(raw, raw)
    c = quasi_idempotence_constant(l)
    assert sq == {k: c * v for k, v in raw.items()}


def test_bound_is_enforced():
    with pytest.raises(ValueError):
        young_symmetrizer((3, 2), bound=4)


def test_from_cycles_parsing():
    assert P(4, "(1 2)(3 4)") == P(4, [[1, 2], [3, 4]])
    assert P(3, "(132)").images == (3, 1, 2)
    assert repr(P(3, "(132)")) == "(1 3 2)"


def test_json_round_trip():
    s = young_symmetrizer((2, 1))
    assert GroupAlgebraElement.from_json(s.to_json()) == s


perms4 = st.permutations(range(1, 5)).map(Permutation)


@settings(max_examples=80, deadline=None)
@given(perms4, perms4, perms4)
def test_composition_is_associative(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@settings(max_examples=80, deadline=None)
@given(perms4, perms4)
def test_sign_is_multiplicative(a, b):
    assert sign(compose(a, b)) == sign(a) * sign(b)
    assert compose(a, a.inverse()) == Permutation.identity(4)
