"""Finite groups, subgroup lattices, conjugacy, and tables of marks."""

import random

import pytest

import oracles
from isokit.errors import GroupTooLarge, NonIntegral
from isokit.group import (
    FiniteGroup,
    class_names,
    class_rep_of,
    conjugate_subgroup,
    count_fixed_cosets,
    enumerate_chains,
    enumerate_subgroups,
    is_normal,
    is_subconjugate,
    is_subgroup,
    parse_subgroup_token,
    subconjugacy_total_order,
    subgroup_closure,
    subgroup_conjugacy_classes,
    table_of_marks,
    validate_chain,
)

SMALL_GROUPS = {
    "c2": lambda: FiniteGroup.cyclic(2),
    "c6": lambda: FiniteGroup.cyclic(6),
    "c12": lambda: FiniteGroup.cyclic(12),
    "s3": lambda: FiniteGroup.symmetric(3),
    "d4": lambda: FiniteGroup.dihedral(4),
    "c2xc2": lambda: FiniteGroup.direct_product(
        FiniteGroup.cyclic(2), FiniteGroup.cyclic(2)
    ),
}


def test_table_validation():
    with pytest.raises(ValueError):
        FiniteGroup([[0, 1], [1, 1]])  # not a latin square
    with pytest.raises(ValueError):
        FiniteGroup([[1, 0], [0, 1]])  # 0 is not the identity
    # associativity failure: latin square that is not a group
    bad = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(ValueError):
        FiniteGroup(bad)


def test_constructors_basics():
    s3 = FiniteGroup.symmetric(3)
    assert s3.order == 6 and not s3.is_abelian()
    assert FiniteGroup.cyclic(5).is_abelian()
    d4 = FiniteGroup.dihedral(4)
    assert d4.order == 8 and not d4.is_abelian()
    prod = FiniteGroup.direct_product(FiniteGroup.cyclic(2), FiniteGroup.cyclic(3))
    assert prod.order == 6 and prod.is_abelian()
    for g in (s3, d4, prod):
        for a in g.elements:
            assert g.mul(a, g.inv(a)) == 0
            assert g.element_order(a) > 0 and g.order % g.element_order(a) == 0


def test_group_order_cap():
    with pytest.raises(GroupTooLarge):
        FiniteGroup.symmetric(5)  # order 120 > default cap 48
    with pytest.raises(GroupTooLarge):
        FiniteGroup.cyclic(49)


@pytest.mark.parametrize("name", sorted(SMALL_GROUPS))
def test_subgroups_match_bruteforce(name):
    g = SMALL_GROUPS[name]()
    expected = oracles.subgroups_bruteforce(g.table)
    got = sorted(enumerate_subgroups(g), key=lambda s: (len(s), sorted(s)))
    assert [set(s) for s in got] == [set(s) for s in expected]
    for sub in got:
        assert is_subgroup(g, sub)
        assert subgroup_closure(g, sub) == frozenset(sub)


@pytest.mark.parametrize("name", sorted(SMALL_GROUPS))
def test_conjugacy_classes_match_bruteforce(name):
    g = SMALL_GROUPS[name]()
    expected = sorted(
        tuple(sorted(tuple(sorted(s)) for s in c))
        for c in oracles.conjugacy_partition(
            g.table, oracles.subgroups_bruteforce(g.table)
        )
    )
    got = sorted(
        tuple(sorted(tuple(sorted(s)) for s in c))
        for c in subgroup_conjugacy_classes(g)
    )
    assert got == expected


def test_conjugation_and_normality():
    g = FiniteGroup.symmetric(3)
    subs = enumerate_subgroups(g)
    for h in subs:
        assert is_normal(g, h) == all(
            conjugate_subgroup(g, h, x) == h for x in g.elements
        )
        for x in g.elements:
            conj = conjugate_subgroup(g, h, x)
            assert is_subgroup(g, conj)
            assert class_rep_of(g, conj) == class_rep_of(g, h)
    # S3: e and C3 and S3 normal, the three C2s not
    normal = [h for h in subs if is_normal(g, h)]
    assert sorted(len(h) for h in normal) == [1, 3, 6]


def test_class_names_scheme():
    assert set(class_names(FiniteGroup.symmetric(3)).values()) == {
        "e",
        "C2",
        "C3",
        "G6",
    }
    # conjugate C2s in S3 share one name; the three in C2xC2 do not
    c2xc2 = FiniteGroup.direct_product(FiniteGroup.cyclic(2), FiniteGroup.cyclic(2))
    assert set(class_names(c2xc2).values()) == {"e", "C2#1", "C2#2", "C2#3", "G4"}


def test_parse_subgroup_token():
    g = FiniteGroup.symmetric(3)
    assert parse_subgroup_token(g, "e") == frozenset({0})
    assert len(parse_subgroup_token(g, "C2")) == 2
    assert parse_subgroup_token(g, "G6") == frozenset(g.elements)
    with pytest.raises(ValueError):
        parse_subgroup_token(g, "C5")


def test_subconjugacy_order_and_chains():
    g = FiniteGroup.symmetric(3)
    order = subconjugacy_total_order(g)
    # total order extends subconjugacy: H before K whenever H subconjugate to K
    for i, h in enumerate(order):
        for k in order[i + 1 :]:
            assert not (is_subconjugate(g, k, h) and len(k) > len(h))
    chains = enumerate_chains(g, 2)
    for chain in chains:
        validate_chain(g, chain)
        for a, b in zip(chain, chain[1:]):
            assert frozenset(a) < frozenset(b)
    # strictly increasing pairs in S3: e<C2 (x3), e<C3, e<G6, C2<G6 (x3), C3<G6
    assert sum(1 for c in chains if len(c) == 2) == 9
    with pytest.raises(Exception):
        validate_chain(g, [frozenset({0, 1}), frozenset({0, 1})])


@pytest.mark.parametrize("name", sorted(SMALL_GROUPS))
def test_marks_match_counting_oracle(name):
    g = SMALL_GROUPS[name]()
    mt = table_of_marks(g)
    for i, h in enumerate(mt.reps):
        for j, k in enumerate(mt.reps):
            direct = oracles.fixed_coset_count(g.table, frozenset(h), frozenset(k))
            assert mt.matrix[i][j] == direct == count_fixed_cosets(g, h, k)
    # lower triangular with positive diagonal
    n = len(mt.reps)
    for i in range(n):
        assert mt.matrix[i][i] > 0
        for j in range(i + 1, n):
            assert mt.matrix[i][j] == 0


def test_c2_and_s3_marks_frozen():
    mt = table_of_marks(FiniteGroup.cyclic(2))
    assert mt.names == ("e", "C2")
    assert mt.matrix == ((2, 0), (1, 1))
    mt = table_of_marks(FiniteGroup.symmetric(3))
    assert mt.names == ("e", "C2", "C3", "G6")
    assert mt.matrix == ((6, 0, 0, 0), (3, 1, 0, 0), (2, 0, 2, 0), (1, 1, 1, 1))


@pytest.mark.parametrize("name", ["c2", "s3", "c2xc2"])
def test_solve_marks_matches_generic_solver(name):
    g = SMALL_GROUPS[name]()
    mt = table_of_marks(g)
    n = len(mt.reps)
    rng = random.Random(11)
    for _ in range(25):
        marks = [rng.randint(-6, 6) for _ in range(n)]
        transpose = [[mt.matrix[j][i] for j in range(n)] for i in range(n)]
        assert list(mt.solve_marks(marks)) == oracles.solve_rational(transpose, marks)
    # round trip through orbit coefficients
    for _ in range(10):
        coeffs = [rng.randint(-4, 4) for _ in range(n)]
        assert mt.solve_marks(mt.marks_of(coeffs)) == tuple(coeffs)


def test_integral_solution_and_witness():
    mt = table_of_marks(FiniteGroup.cyclic(2))
    assert mt.integral_solution((2, 0)) == (1, 0)
    assert mt.integral_solution((3, 1)) == (1, 1)
    with pytest.raises(NonIntegral) as exc:
        mt.integral_solution((1, 0))
    witness = exc.value.witness
    assert witness is not None and any(v.denominator != 1 for v in witness)
