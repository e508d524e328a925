import pytest

from roothk.exact_linalg import IntMatrix, integer_rank
from roothk.hk_analysis import (
    FreenessCheck,
    ResolutionVerdict,
    analyze,
    brute_force_fixed_point_count,
    fixed_locus_on_abelian,
    freeness_codim_check,
    known_model,
    resolution_verdict,
    symplectic_form_dim,
)
from roothk.invariant_theory import rep_explicit, rep_reflection
from roothk.exact_linalg import RatMatrix
from roothk.root_data import RootSystemSpec, build_root_datum
from roothk.weyl import GroupCap, WeylGroup, element_iter


def test_fixed_locus_identity():
    entry = fixed_locus_on_abelian(IntMatrix.identity(3), "id")
    assert entry.fix_dim == 3
    assert entry.codim_doubled == 0
    assert entry.component_count == 1
    assert entry.component_invariant_factors == ()


def test_fixed_locus_negation_rank1():
    # w = -1 on a rank-1 lattice: coker(-2) = Z/2, so 2^4 = 16 components,
    # the 2-torsion of the surface.
    entry = fixed_locus_on_abelian(IntMatrix.from_rows([[-1]]), "-1")
    assert entry.fix_dim == 0
    assert entry.codim_doubled == 2
    assert entry.component_invariant_factors == (2, 2, 2, 2)
    assert entry.component_count == 16


def test_fixed_locus_a2_coxeter(groups):
    group = groups("A", 2)
    cox = group.generators[0] @ group.generators[1]
    diff = cox - IntMatrix.identity(2)
    assert abs(diff.det()) == 3
    entry = fixed_locus_on_abelian(cox)
    assert entry.fix_dim == 0
    assert entry.component_count == 81


def test_brute_force_matches_formula_a1():
    w = IntMatrix.from_rows([[-1]])
    assert brute_force_fixed_point_count(w, 2) == 16
    assert fixed_locus_on_abelian(w).component_count == 16


def test_brute_force_matches_formula_a2_coxeter(groups):
    group = groups("A", 2)
    cox = group.generators[0] @ group.generators[1]
    assert brute_force_fixed_point_count(cox, 3) == 81


@pytest.mark.parametrize("family,rank", [("A", 1), ("A", 2), ("B", 2)])
def test_brute_force_oracle_small_groups(family, rank, groups):
    group = groups(family, rank)
    for w in element_iter(group):
        det = (w - IntMatrix.identity(rank)).det()
        if det == 0 or abs(det) > 8:
            continue
        entry = fixed_locus_on_abelian(w)
        assert entry.component_count == abs(det) ** 4
        assert brute_force_fixed_point_count(w, abs(det)) == entry.component_count


def test_codim_doubles_rank_on_each_element(groups):
    # The doubled fixed-space codimension is twice the rank of (w - 1): the
    # doubled action is two independent copies of the same lattice action.
    group = groups("B", 2)
    for w in element_iter(group):
        diff = w - IntMatrix.identity(2)
        doubled = IntMatrix.from_rows(
            [list(diff.row(i)) + [0, 0] for i in range(2)]
            + [[0, 0] + list(diff.row(i)) for i in range(2)]
        )
        assert integer_rank(doubled) == 2 * integer_rank(diff)
        assert fixed_locus_on_abelian(w).codim_doubled == 2 * integer_rank(diff)


@pytest.mark.parametrize(
    "family,rank,expected_min",
    [("A", 1, 2), ("A", 2, 2), ("B", 2, 2), ("A", 3, 2), ("D", 4, 2), ("F", 4, 2)],
)
def test_freeness_min_codim_is_two(family, rank, expected_min, groups):
    check = freeness_codim_check(groups(family, rank))
    assert check.status == "verified"
    assert check.min_codim_doubled == expected_min
    assert check.verified_at_least_two


def test_freeness_skipped_over_cap():
    datum = build_root_datum(RootSystemSpec("E", 8))
    group = WeylGroup.from_generators(datum)
    check = freeness_codim_check(group)
    assert check.status == "skipped"
    assert "696729600" in check.reason


def test_freeness_exhaustive_but_over_cap(groups):
    group = groups("A", 3)
    check = freeness_codim_check(group, cap=GroupCap(max_elements=5))
    assert check.status == "skipped"


def test_resolution_table():
    assert resolution_verdict("A") is ResolutionVerdict.RESOLVABLE
    assert resolution_verdict("B") is ResolutionVerdict.RESOLVABLE
    assert resolution_verdict("C") is ResolutionVerdict.RESOLVABLE
    for fam in "DEFG":
        assert resolution_verdict(fam) is ResolutionVerdict.NOT_RESOLVABLE
    assert resolution_verdict("H") is ResolutionVerdict.OUT_OF_SCOPE
    with pytest.raises(ValueError):
        resolution_verdict("X")


def test_symplectic_form_dim_from_datum():
    assert symplectic_form_dim(build_root_datum(RootSystemSpec("A", 3))) == 1
    assert symplectic_form_dim(build_root_datum(RootSystemSpec("F", 4))) == 1


def test_symplectic_form_dim_reducible_rep_is_two():
    g1 = RatMatrix.from_rows([[-1, 0], [0, 1]])
    g2 = RatMatrix.from_rows([[1, 0], [0, -1]])
    rep = rep_explicit((g1, g2), "sign+sign")
    assert symplectic_form_dim(rep) == 2


def test_known_model_tags():
    assert known_model(RootSystemSpec("A", 3), "A3*") == "generalized Kummer K_3(A) (birational)"
    assert known_model(RootSystemSpec("B", 3), "Z^3") is not None
    assert known_model(RootSystemSpec("B", 3), "B3") is not None
    assert known_model(RootSystemSpec("F", 4), "F4") is None
    assert known_model(RootSystemSpec("A", 3), "A3") is None


def test_analyze_a2_root(groups):
    verdict = analyze(RootSystemSpec("A", 2), "root", group=groups("A", 2))
    assert verdict.irreducible
    assert verdict.symplectic_form_dim == 1
    assert verdict.freeness.min_codim_doubled == 2
    assert verdict.resolution is ResolutionVerdict.RESOLVABLE
    assert verdict.known_model is None
    assert verdict.passed


def test_analyze_a3_dual_has_kummer_tag(groups):
    verdict = analyze(RootSystemSpec("A", 3), "dual", group=groups("A", 3))
    assert verdict.lattice_label == "A3*"
    assert "Kummer" in verdict.known_model


def test_analyze_b3_tower_member(groups):
    verdict = analyze(RootSystemSpec("B", 3), "index:1", group=groups("B", 3))
    assert verdict.lattice_label == "Z^3"
    assert "Hilb" in verdict.known_model
    assert verdict.resolution is ResolutionVerdict.RESOLVABLE


def test_analyze_e6_full_pipeline(groups):
    verdict = analyze(RootSystemSpec("E", 6), "root", group=groups("E", 6))
    assert verdict.irreducible
    assert verdict.symplectic_form_dim == 1
    assert verdict.freeness.status == "verified"
    assert verdict.freeness.min_codim_doubled == 2
    assert verdict.resolution is ResolutionVerdict.NOT_RESOLVABLE
    assert verdict.known_model is None
    assert verdict.passed


def test_analyze_e8_skips_freeness():
    verdict = analyze(RootSystemSpec("E", 8), "root")
    assert verdict.irreducible
    assert verdict.symplectic_form_dim == 1
    assert verdict.freeness.status == "skipped"
    assert verdict.resolution is ResolutionVerdict.NOT_RESOLVABLE
    assert verdict.passed


def test_analyze_bad_selector():
    with pytest.raises(ValueError):
        analyze(RootSystemSpec("A", 2), "weights")
    with pytest.raises(ValueError):
        analyze(RootSystemSpec("A", 2), "index:9")
