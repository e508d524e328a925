import pytest

from roothk.errors import GroupTooLargeError, NotExhaustiveError
from roothk.exact_linalg import IntMatrix
from roothk.root_data import RootSystemSpec, build_root_datum
from roothk.weyl import (
    GroupCap,
    WeylGroup,
    check_signed_permutation_structure,
    element_iter,
    generate_group,
    group_order_formula,
)


@pytest.mark.parametrize(
    "family,rank,order",
    [
        ("A", 1, 2),
        ("A", 4, 120),
        ("B", 3, 48),
        ("C", 3, 48),
        ("D", 4, 192),
        ("G", 2, 12),
        ("F", 4, 1152),
        ("E", 6, 51840),
        ("E", 7, 2903040),
        ("E", 8, 696729600),
    ],
)
def test_group_order_formula(family, rank, order):
    assert group_order_formula(RootSystemSpec(family, rank)) == order


@pytest.mark.parametrize(
    "family,rank",
    [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3), ("C", 2), ("D", 3), ("D", 4), ("G", 2), ("F", 4)],
)
def test_bfs_count_matches_formula(family, rank, groups):
    group = groups(family, rank)
    assert group.element_count() == group_order_formula(group.datum.spec)


def test_group_too_large_raises():
    datum = build_root_datum(RootSystemSpec("E", 8))
    with pytest.raises(GroupTooLargeError):
        generate_group(datum)
    # A tiny custom cap trips on small groups too.
    datum_a3 = build_root_datum(RootSystemSpec("A", 3))
    with pytest.raises(GroupTooLargeError):
        generate_group(datum_a3, GroupCap(max_elements=10))


def test_cap_validation():
    with pytest.raises(ValueError):
        GroupCap(max_elements=0)


def test_element_iter_a1(groups):
    group = groups("A", 1)
    elems = list(element_iter(group))
    assert elems == [IntMatrix.identity(1), IntMatrix.from_rows([[-1]])]


def test_element_iter_a2_identity_first(groups):
    group = groups("A", 2)
    elems = list(element_iter(group))
    assert len(elems) == 6
    assert elems[0] == IntMatrix.identity(2)
    assert len(set(elems)) == 6


def test_element_iter_requires_exhaustive():
    group = WeylGroup.from_generators(build_root_datum(RootSystemSpec("E", 8)))
    with pytest.raises(NotExhaustiveError):
        next(element_iter(group))


@pytest.mark.parametrize("family,rank", [("A", 3), ("B", 3), ("G", 2)])
def test_group_closure_inverse_and_gram_preservation(family, rank, groups):
    group = groups(family, rank)
    gram = group.datum.gram
    elems = list(element_iter(group))
    elem_set = set(elems)
    for g in elems:
        assert g.transpose() @ gram @ g == gram
    # Closed under the generators and under inverse (inverse of an involution
    # product is a product of the same involutions reversed).
    for g in elems[:12]:
        for s in group.generators:
            assert g @ s in elem_set
    ident = IntMatrix.identity(rank)
    for g in elems:
        inv = _inverse_in(elem_set, g, ident)
        assert inv is not None


def _inverse_in(elem_set, g, ident):
    for h in elem_set:
        if g @ h == ident:
            return h
    return None


def test_roots_closed_under_group(groups):
    # The root set is a union of orbits of the simple roots: every w sends
    # root coordinates (in the root basis) to root coordinates.
    from roothk.root_data import ambient_to_root_basis

    group = groups("B", 2)
    datum = group.datum
    root_coords = {
        tuple(ambient_to_root_basis(datum, r)) for r in datum.all_roots
    }
    for g in element_iter(group):
        gr = g.to_rat()
        for v in root_coords:
            image = tuple(
                sum(gr[i, j] * v[j] for j in range(datum.rank)) for i in range(datum.rank)
            )
            assert image in root_coords


@pytest.mark.parametrize("n,order", [(2, 8), (3, 48), (4, 384)])
def test_signed_permutation_structure(n, order):
    report = check_signed_permutation_structure(n)
    assert report.passed
    assert report.order == order
    assert report.all_signed_permutations
    assert report.permutation_count * report.signs_per_permutation == order


def test_signed_permutation_cap_propagates():
    with pytest.raises(GroupTooLargeError):
        check_signed_permutation_structure(4, GroupCap(max_elements=100))
