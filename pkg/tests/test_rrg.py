"""Verifier layer: pushforwards, zero sections, degree-0 induction, Todd."""

import random

import pytest

from orbichern.exactnum import Cyclotomic
from orbichern.linalg import Matrix
from orbichern.groups import FiniteGroup, GroupEmbedding, subgroup_embedding
from orbichern.reps import (
    Representation,
    VirtualCharacter,
    character,
    direct_sum,
    induced_character_sum,
)
from orbichern.complexes import EquivariantComplex, supertrace_class
from orbichern.rrg import (
    GeneralScenario,
    IsoSpatialScenario,
    ZeroSectionScenario,
    check_functoriality,
    check_general_degree0,
    check_iso_spatial,
    check_td_pullback,
    check_zero_section,
    pushforward_characters,
)

from randgen import corpus_groups, random_complex
from test_reps import perm_of_name, standard_rep

E = Cyclotomic.root_of_unity


@pytest.fixture(scope="module")
def s3():
    return FiniteGroup.symmetric(3)


@pytest.fixture(scope="module")
def c2_in_s3(s3):
    return subgroup_embedding(s3, [0, 2])


@pytest.fixture(scope="module")
def c3_in_s3(s3):
    return subgroup_embedding(s3, [0, 3, 4])


def identity_embedding(group):
    return GroupEmbedding(group, group, range(group.size))


def line(group, degree=0):
    return EquivariantComplex.single(Representation.trivial(group), degree)


# -- pushforward ----------------------------------------------------------


def test_pushforward_is_identity_for_identity_embedding(s3):
    emb = identity_embedding(s3)
    chi = VirtualCharacter(s3, (2, Cyclotomic.from_rational(-1), E(3)))
    assert pushforward_characters(emb, chi) == chi


def test_pushforward_trivial_character_counts_cosets(c2_in_s3):
    sub, emb = c2_in_s3
    chi = VirtualCharacter(sub, (1, 1))
    pushed = pushforward_characters(emb, chi)
    assert [str(v) for v in pushed.values] == ["3", "1", "0"]
    assert pushed == induced_character_sum(emb, chi)


def test_pushforward_faithful_cyclic_character(c3_in_s3):
    sub, emb = c3_in_s3
    chi = VirtualCharacter(sub, (1, E(3), E(3) * E(3)))
    pushed = pushforward_characters(emb, chi)
    assert [str(v) for v in pushed.values] == ["2", "0", "-1"]
    assert pushed == induced_character_sum(emb, chi)


def test_pushforward_vanishes_where_nothing_fuses(c2_in_s3):
    sub, emb = c2_in_s3
    pushed = pushforward_characters(emb, VirtualCharacter(sub, (1, -1)))
    assert pushed.values[2].is_zero()  # three-cycles receive nothing


def test_pushforward_weight_knobs_disagree(c2_in_s3):
    sub, emb = c2_in_s3
    chi = VirtualCharacter(sub, (1, 1))
    honest = pushforward_characters(emb, chi)
    assert pushforward_characters(emb, chi, weight="one") != honest
    assert pushforward_characters(emb, chi, weight="inverted") != honest
    with pytest.raises(ValueError, match="weight"):
        pushforward_characters(emb, chi, weight="half")


# -- iso-spatial induction -------------------------------------------------


def test_iso_spatial_trivial_line(s3, c2_in_s3):
    sub, emb = c2_in_s3
    sc = IsoSpatialScenario(emb, Representation.trivial(s3), line(sub))
    report = check_iso_spatial(sc)
    assert report.passed
    assert [e.lhs for e in report.entries] == ["3", "1", "0"]
    assert [e.rhs for e in report.entries] == ["3", "1", "0"]


def test_iso_spatial_identity_embedding(s3):
    emb = identity_embedding(s3)
    rng = random.Random(7)
    sc = IsoSpatialScenario(
        emb, Representation.zero_dimensional(s3), random_complex(rng, s3)
    )
    assert check_iso_spatial(sc).passed


def test_iso_spatial_corrupted_weight_fails(s3, c2_in_s3):
    sub, emb = c2_in_s3
    sc = IsoSpatialScenario(emb, Representation.trivial(s3), line(sub))
    report = check_iso_spatial(sc, weight="one")
    assert not report.passed
    failure = report.first_failure
    assert failure is not None and failure["status"] == "fail"
    assert report.to_dict()["first_failure"] == failure


def test_iso_spatial_random_pairs():
    rng = random.Random(90125)
    groups = corpus_groups()
    for name in ("S3", "D4"):
        group = groups[name]
        x = next(g for g in range(group.size) if g != group.identity)
        elems = sorted({group.power(x, k) for k in range(group.order_of(x))})
        sub, emb = subgroup_embedding(group, elems)
        for _ in range(3):
            sc = IsoSpatialScenario(
                emb,
                Representation.trivial(group),
                random_complex(rng, sub, max_dim=3),
            )
            assert check_iso_spatial(sc).passed


# -- zero section -----------------------------------------------------------


def c2_minus_line():
    c2 = FiniteGroup.cyclic(2)
    sub = Representation.zero_dimensional(c2)
    ambient = Representation.one_dimensional(c2, (1, -1))
    inclusion = Matrix.from_rows([[]], ncols=0)
    return c2, sub, ambient, inclusion


def test_zero_section_reflection_line():
    c2, sub, ambient, inclusion = c2_minus_line()
    sc = ZeroSectionScenario(c2, sub, ambient, inclusion, line(c2), 4)
    report = check_zero_section(sc)
    assert report.passed
    assert report.entries[1].lhs == "2"  # 1 - (-1)^{-1}
    assert report.entries[1].rhs == "2"


def test_zero_section_euler_omission_fails():
    c2, sub, ambient, inclusion = c2_minus_line()
    sc = ZeroSectionScenario(c2, sub, ambient, inclusion, line(c2), 4)
    report = check_zero_section(sc, euler_factor="omit")
    assert not report.passed
    assert report.first_failure["class"] == 0  # unit eigenvalue at the identity
    assert "series mismatch" in report.first_failure["detail"]


def test_zero_section_v_equals_w(s3):
    rep = standard_rep(s3)
    sc = ZeroSectionScenario(
        s3, rep, rep, Matrix.identity(2), line(s3), 4
    )
    assert sc.normal.dim == 0
    report = check_zero_section(sc)
    assert report.passed
    chi = supertrace_class(line(s3))
    assert [e.lhs for e in report.entries] == [str(v) for v in chi.values]
    assert [e.rhs for e in report.entries] == [str(v) for v in chi.values]


def test_zero_section_quotient_is_standard_summand(s3):
    perm = Representation.permutation(
        s3, [list(perm_of_name(s3.name(g))) for g in range(6)]
    )
    inclusion = Matrix.from_rows([[1], [1], [1]])
    sc = ZeroSectionScenario(
        s3, Representation.trivial(s3), perm, inclusion, line(s3), 5
    )
    assert [str(v) for v in character(sc.normal).values] == ["2", "0", "-1"]
    assert check_zero_section(sc).passed


def test_zero_section_mixed_weights_at_degree_six():
    c6 = FiniteGroup.cyclic(6)
    ambient = Representation.one_dimensional(c6, tuple(E(6, k) for k in range(6)))
    for j in (2, 3):
        other = Representation.one_dimensional(
            c6, tuple(E(6, (j * k) % 6) for k in range(6))
        )
        ambient = direct_sum(ambient, other)
    c6_zero = Representation.zero_dimensional(c6)
    inclusion = Matrix.from_rows([[], [], []], ncols=0)
    sc = ZeroSectionScenario(c6, c6_zero, ambient, inclusion, line(c6), 6)
    assert check_zero_section(sc).passed


def test_zero_section_rejects_non_equivariant_inclusion(s3):
    rep = standard_rep(s3)
    bad = Matrix.from_rows([[1], [0]])
    with pytest.raises(ValueError, match="equivariant"):
        ZeroSectionScenario(s3, Representation.trivial(s3), rep, bad, line(s3), 3)


# -- general degree zero ------------------------------------------------------


def test_general_degree0_self_embedding_line():
    c2 = FiniteGroup.cyclic(2)
    emb = identity_embedding(c2)
    sub = Representation.zero_dimensional(c2)
    ambient = Representation.one_dimensional(c2, (1, -1))
    inclusion = Matrix.from_rows([[]], ncols=0)
    sc = GeneralScenario(emb, sub, ambient, inclusion, line(c2), 4)
    report = check_general_degree0(sc)
    assert report.passed
    assert report.entries[0].status == "skipped"
    assert report.entries[1].lhs == "2"
    assert report.entries[1].rhs == "2"


def c2_in_c4_scenario():
    c4 = FiniteGroup.cyclic(4)
    sub_group, emb = subgroup_embedding(c4, [0, 2])
    sub = Representation.zero_dimensional(c4)
    ambient = Representation.cyclic_weight(c4, 1)
    inclusion = Matrix.from_rows([[]], ncols=0)
    return GeneralScenario(emb, sub, ambient, inclusion, line(sub_group), 4)


def test_general_degree0_order_two_inside_order_four():
    report = check_general_degree0(c2_in_c4_scenario())
    assert report.passed
    by_class = {e.class_index: e for e in report.entries}
    assert by_class[0].status == "skipped"
    assert by_class[2].lhs == "4"  # (4/2) * (1 - (-1))
    assert by_class[2].rhs == "4"


def test_general_degree0_wrong_inversion_fails():
    c4 = FiniteGroup.cyclic(4)
    emb = identity_embedding(c4)
    sub = Representation.zero_dimensional(c4)
    ambient = Representation.cyclic_weight(c4, 1)
    inclusion = Matrix.from_rows([[]], ncols=0)
    sc = GeneralScenario(emb, sub, ambient, inclusion, line(c4), 4)
    assert check_general_degree0(sc).passed
    report = check_general_degree0(sc, inversion="direct")
    assert not report.passed
    assert report.first_failure["class"] == 1  # eigenvalue E(4) is not real


def test_general_degree0_all_skipped_when_fixed_everywhere():
    c2 = FiniteGroup.cyclic(2)
    emb = identity_embedding(c2)
    sub = Representation.zero_dimensional(c2)
    ambient = Representation.trivial(c2)
    inclusion = Matrix.from_rows([[]], ncols=0)
    sc = GeneralScenario(emb, sub, ambient, inclusion, line(c2), 3)
    report = check_general_degree0(sc)
    assert report.passed
    assert all(e.status == "skipped" for e in report.entries)
    assert all("fixed locus" in e.detail for e in report.entries)


# -- Todd pullback -------------------------------------------------------------


def test_td_pullback_identity_embedding(s3):
    emb = identity_embedding(s3)
    rep = standard_rep(s3)
    sc = GeneralScenario(
        emb,
        Representation.zero_dimensional(s3),
        rep,
        Matrix.from_rows([[], []], ncols=0),
        line(s3),
        4,
    )
    assert check_td_pullback(sc).passed


def test_td_pullback_standard_rep(s3, c2_in_s3):
    sub, emb = c2_in_s3
    rep = standard_rep(s3)
    sc = GeneralScenario(
        emb,
        Representation.zero_dimensional(s3),
        rep,
        Matrix.from_rows([[], []], ncols=0),
        line(sub),
        4,
    )
    report = check_td_pullback(sc)
    assert report.passed
    assert len(report.entries) == 2
    assert report.entries[0].lhs == report.entries[0].rhs


def test_scenario_rejects_non_invariant_sub(s3, c2_in_s3):
    sub, emb = c2_in_s3
    rep = standard_rep(s3)
    with pytest.raises(ValueError, match="equivariant|invariant"):
        GeneralScenario(
            emb,
            Representation.trivial(s3),
            rep,
            Matrix.from_rows([[1], [0]]),
            line(sub),
            4,
        )


def test_scenario_rejects_non_equivariant_differential(s3, c2_in_s3):
    sub, emb = c2_in_s3
    triv = Representation.trivial(sub)
    sign = Representation.one_dimensional(
        sub, (Cyclotomic.one(), -Cyclotomic.one())
    )
    d = Matrix.from_rows([[1]])
    broken = EquivariantComplex(sub, 0, (triv, sign), (d,), check=False)
    with pytest.raises(ValueError, match="equivariant"):
        IsoSpatialScenario(emb, Representation.trivial(s3), broken)


# -- functoriality ---------------------------------------------------------------


def test_functoriality_standard_restriction(s3, c2_in_s3):
    sub, emb = c2_in_s3
    cx = EquivariantComplex.single(standard_rep(s3))
    report = check_functoriality(emb, cx)
    assert report.passed
    assert [e.lhs for e in report.entries] == ["2", "0"]
    assert [e.rhs for e in report.entries] == ["2", "0"]


def test_functoriality_identity_embedding(s3):
    emb = identity_embedding(s3)
    rng = random.Random(11)
    assert check_functoriality(emb, random_complex(rng, s3)).passed


def test_functoriality_random_pairs(s3, c3_in_s3):
    sub, emb = c3_in_s3
    rng = random.Random(23)
    for _ in range(4):
        assert check_functoriality(emb, random_complex(rng, s3, max_dim=3)).passed


# -- reports --------------------------------------------------------------------


def test_report_shape_and_hash_stability(s3, c2_in_s3):
    sub, emb = c2_in_s3
    sc1 = IsoSpatialScenario(emb, Representation.trivial(s3), line(sub))
    sc2 = IsoSpatialScenario(emb, Representation.trivial(s3), line(sub))
    assert sc1.hash() == sc2.hash()
    sc3 = IsoSpatialScenario(emb, Representation.trivial(s3), line(sub, degree=1))
    assert sc1.hash() != sc3.hash()
    report = check_iso_spatial(sc1).to_dict()
    assert set(report) == {"check", "scenario", "passed", "classes", "first_failure"}
    assert report["passed"] is True
    assert report["first_failure"] is None
    assert [c["class"] for c in report["classes"]] == [0, 1, 2]
    assert all(c["status"] == "pass" for c in report["classes"])
