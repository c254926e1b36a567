"""Command-line layer: expression grammar, scenario files, exit codes."""

import json
import random
from fractions import Fraction
from pathlib import Path

import pytest

from orbichern.exactnum import Cyclotomic
from orbichern.cli import (
    CycParseError,
    LoadError,
    load_scenario,
    main,
    parse_cyclotomic,
    parse_scenario,
    print_cyclotomic,
)

E = Cyclotomic.root_of_unity
FIXTURES = Path(__file__).parent / "fixtures"


def fix(name):
    return str(FIXTURES / name)


# -- expression grammar ------------------------------------------------------


def test_parse_single_root():
    assert parse_cyclotomic("E(4)") == E(4)


def test_parse_mixed_expression():
    # 1/2 - E(3)^2 = 1/2 - (-1 - E(3)) = 3/2 + E(3)
    got = parse_cyclotomic("1/2 - E(3)^2")
    assert got == Cyclotomic.from_rational(Fraction(3, 2)) + E(3)


def test_parse_whitespace_insensitive():
    a = parse_cyclotomic("1/2-E(3)^2")
    b = parse_cyclotomic("  1/2  -  E( 3 ) ^ 2  ")
    assert a == b


def test_parse_products_and_parens():
    assert parse_cyclotomic("(1 + E(8)) * 2") == (Cyclotomic.one() + E(8)) * 2
    assert parse_cyclotomic("2*3/4") == Cyclotomic.from_rational(Fraction(3, 2))
    assert parse_cyclotomic("-E(4)") == -E(4)
    assert parse_cyclotomic("E(12)^7") == E(12, 7)


def test_parse_error_positions():
    for text, pos in [
        ("E(0)", 0),
        ("1/0", 2),
        ("2 +", 3),
        ("E(4", 3),
        ("", 0),
        ("1 ** 2", 3),
        ("1 + 2)", 5),
    ]:
        with pytest.raises(CycParseError) as err:
            parse_cyclotomic(text)
        assert err.value.position == pos, text


def test_parse_rejects_non_string():
    with pytest.raises(CycParseError):
        parse_cyclotomic(7)


def test_printer_round_trip_thousand_values():
    rng = random.Random(0xC1C10)
    orders = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12]
    for _ in range(1000):
        n = rng.choice(orders)
        v = Cyclotomic.from_rational(
            Fraction(rng.randint(-12, 12), rng.randint(1, 12))
        )
        for _ in range(rng.randint(0, 4)):
            coeff = Fraction(rng.randint(-12, 12), rng.randint(1, 12))
            v = v + Cyclotomic.from_rational(coeff) * E(n, rng.randrange(n))
        assert parse_cyclotomic(print_cyclotomic(v)) == v


# -- scenario loading --------------------------------------------------------


def test_minimal_scenario_loads():
    sc = load_scenario(fix("trivial_group.json"))
    assert set(sc.groups) == {"e"}
    assert sc.groups["e"].size == 1


def test_s3_scenario_loads_with_all_pieces():
    sc = load_scenario(fix("s3_standard.json"))
    assert sc.groups["S3"].size == 6
    assert sc.representations["std"].dim == 2
    assert sc.embeddings["C2inS3"].target is sc.groups["S3"]
    assert sc.charts["X"].dim == 2
    assert len(sc.blocks["rrg_iso"]) == 1


def test_load_rejects_non_homomorphic_matrices():
    data = {
        "groups": {"C2": {"cyclic": 2}},
        "representations": {"bad": {"group": "C2", "matrices": [[["1"]], [["2"]]]}},
    }
    with pytest.raises(LoadError) as err:
        parse_scenario(data)
    assert "pair (1, 1)" in str(err.value)
    assert err.value.pointer == "/representations/bad"


def test_load_rejects_unknown_reference():
    data = {"representations": {"r": {"group": "nope", "trivial": True}}}
    with pytest.raises(LoadError) as err:
        parse_scenario(data)
    assert err.value.pointer == "/representations/r/group"


def test_load_rejects_bad_expression_with_pointer():
    data = {
        "groups": {"C1": {"cyclic": 1}},
        "representations": {"r": {"group": "C1", "values": ["E(0)"]}},
    }
    with pytest.raises(LoadError) as err:
        parse_scenario(data)
    assert err.value.pointer == "/representations/r/values/0"


def test_load_rejects_wrong_schema_version():
    with pytest.raises(LoadError):
        parse_scenario({"schema_version": 99})


def test_load_rejects_non_group_table():
    data = {"groups": {"G": {"table": [[0, 1], [1, 1]]}}}
    with pytest.raises(LoadError) as err:
        parse_scenario(data)
    assert err.value.pointer == "/groups/G"


def test_load_rejects_invariant_violation_in_rrg_block():
    # an inclusion that is not equivariant is refused at load by default
    data = {
        "groups": {"C2": {"cyclic": 2}},
        "representations": {
            "triv": {"group": "C2", "trivial": True},
            "sign": {"group": "C2", "values": ["1", "-1"]},
        },
        "complexes": {"L": {"group": "C2", "pieces": ["triv"], "differentials": []}},
        "rrg_zero_section": [
            {
                "group": "C2",
                "sub": "triv",
                "ambient": "sign",
                "inclusion": [["1"]],
                "complex": "L",
            }
        ],
    }
    with pytest.raises(LoadError) as err:
        parse_scenario(data)
    assert "equivariant" in str(err.value)


# -- command execution -------------------------------------------------------


def test_rrg_iso_table_shows_induced_values_twice(capsys):
    code = main(["rrg-iso", fix("s3_standard.json")])
    out = capsys.readouterr().out
    assert code == 0
    assert "lhs=3  rhs=3" in out
    assert "lhs=1  rhs=1" in out
    assert "lhs=0  rhs=0" in out
    assert out.strip().endswith("OK")


def test_todd_truncated_series(capsys):
    code = main(["todd", fix("todd_line.json"), "--trunc", "2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "1 + 1/2*x0 + 1/12*x0^2" in out


def test_induce_matches_both_routes(capsys):
    code = main(["induce", fix("s3_standard.json")])
    out = capsys.readouterr().out
    assert code == 0
    assert "lhs=3  rhs=3" in out


def test_chern_degree_zero_equals_supertrace(capsys):
    code = main(["chern", fix("s3_standard.json")])
    out = capsys.readouterr().out
    assert code == 0
    assert "fixed dim 2: 2" in out
    assert "fixed dim 1: 0" in out
    assert "fixed dim 0: -1" in out


def test_inertia_two_point_components(capsys):
    code = main(["inertia", fix("s3_standard.json")])
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("orbits pt/2") == 2
    assert "model group order 6" in out
    assert "model group order 2" in out


def test_groupoid_check_suite_passes(capsys):
    code = main(["groupoid-check", fix("s3_standard.json")])
    out = capsys.readouterr().out
    assert code == 0
    assert "graph-embedding: pass" in out
    assert "factorize-round-trip: pass" in out
    assert "morita-decomposition: pass" in out


def test_general_fixture_value_four(capsys):
    code = main(["rrg-general", fix("c2_in_c4_general.json")])
    out = capsys.readouterr().out
    assert code == 0
    assert "lhs=4  rhs=4" in out
    assert "td-pullback" in out


def test_zero_section_fixture_passes(capsys):
    code = main(["rrg-zero-section", fix("zero_section_reflection.json")])
    out = capsys.readouterr().out
    assert code == 0
    assert "lhs=2  rhs=2" in out


CORRUPTED = [
    ("rrg-iso", "corrupt_weight_one.json"),
    ("rrg-iso", "corrupt_weight_inverted.json"),
    ("rrg-general", "corrupt_inversion_direct.json"),
    ("rrg-zero-section", "corrupt_euler_omit.json"),
    ("rrg-iso", "corrupt_nonequivariant_diff.json"),
    ("groupoid-check", "corrupt_action.json"),
]


@pytest.mark.parametrize("command,fixture", CORRUPTED)
def test_corrupted_fixture_fails_with_exit_one(command, fixture, capsys):
    code = main([command, fix(fixture)])
    out = capsys.readouterr().out
    assert code == 1
    assert out.strip().endswith("FAILED")


def test_corrupted_zero_section_names_first_monomial(capsys):
    code = main(["rrg-zero-section", fix("corrupt_euler_omit.json")])
    out = capsys.readouterr().out
    assert code == 1
    assert "series mismatch at exponent" in out


def test_corrupted_differential_message(capsys):
    code = main(["rrg-iso", fix("corrupt_nonequivariant_diff.json")])
    out = capsys.readouterr().out
    assert code == 1
    assert "not equivariant" in out


def test_json_reports_identical_across_parallel(capsys):
    outputs = []
    for workers in ("1", "4"):
        code = main(
            ["rrg-iso", fix("s3_standard.json"), "--json", "--parallel", workers]
        )
        assert code == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]
    report = json.loads(outputs[0])
    assert report["schema_version"] == 1
    assert report["passed"] is True
    check = report["blocks"][0]["checks"][0]
    assert check["first_failure"] is None
    assert [e["lhs"] for e in check["classes"]] == ["3", "1", "0"]


def test_json_failure_carries_first_failure(capsys):
    code = main(["rrg-iso", fix("corrupt_weight_one.json"), "--json"])
    out = capsys.readouterr().out
    assert code == 1
    report = json.loads(out)
    assert report["passed"] is False
    failure = report["blocks"][0]["checks"][0]["first_failure"]
    assert failure is not None and failure["status"] == "fail"


def test_unknown_command_is_usage_error(capsys):
    assert main(["frobnicate", "x.json"]) == 2


def test_missing_file_is_load_error(capsys):
    assert main(["rrg-iso", str(FIXTURES / "no_such_file.json")]) == 2


def test_malformed_json_is_load_error(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    assert main(["induce", str(p)]) == 2


def test_negative_trunc_is_usage_error(capsys):
    assert main(["todd", fix("todd_line.json"), "--trunc", "-1"]) == 2
