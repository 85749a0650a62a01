"""Scenario format round-trips, evaluation semantics, built-in library."""

import pytest

from proxyvote.protocol import ElectionConfig
from proxyvote.runner import Action
from proxyvote.scenarios import (
    Scenario,
    ScenarioError,
    builtin_scenarios,
    load_scenario,
    parse_scenario,
    render_scenario,
    run_scenario,
)

SAMPLE = """\
pv-scenario v1
name: sample
voters: 3
candidates: C1 C2
mix-window: 2
audit: off
[script]
cast 0 C1
cast 1 C1
cast 2 C2
[expect]
count C1 = 2
count C2 = 1
total-valid = 3
chain = accept
"""


class TestFormat:
    def test_parse_sample(self):
        s = parse_scenario(SAMPLE)
        assert s.name == "sample"
        assert s.cfg.num_voters == 3
        assert len(s.script) == 3
        assert s.expected["counts"] == {"C1": 2, "C2": 1}
        assert s.expected["chain"] == "accept"

    def test_round_trip(self):
        s = parse_scenario(SAMPLE)
        assert parse_scenario(render_scenario(s)).expected == s.expected

    def test_comments_and_blanks_ignored(self):
        text = SAMPLE.replace("[script]", "# a comment\n\n[script]")
        assert parse_scenario(text).name == "sample"

    def test_missing_header_rejected(self):
        with pytest.raises(ScenarioError):
            parse_scenario("name: x\n")

    def test_missing_required_field(self):
        with pytest.raises(ScenarioError, match="voters"):
            parse_scenario("pv-scenario v1\nname: x\ncandidates: A B\n")

    def test_bad_action_line_number(self):
        bad = SAMPLE.replace("cast 1 C1", "launch 1 C1")
        with pytest.raises(ScenarioError, match="line"):
            parse_scenario(bad)

    def test_unknown_expectation_rejected(self):
        bad = SAMPLE + "sandwiches = 4\n"
        with pytest.raises(ScenarioError):
            parse_scenario(bad)

    def test_expectation_references_validated(self):
        with pytest.raises(ScenarioError, match="unknown candidate"):
            Scenario("x", ElectionConfig(2, ["A", "B"]),
                     [Action("cast", 0, "A")], {"counts": {"Z": 1}})
        with pytest.raises(ValueError):
            Scenario("x", ElectionConfig(2, ["A", "B"]),
                     [Action("cast", 7, "A")], {})

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "s.txt"
        path.write_text(SAMPLE)
        assert load_scenario(path).name == "sample"


class TestEvaluation:
    def test_sample_passes(self):
        passed, diffs, _ = run_scenario(parse_scenario(SAMPLE), seed=8)
        assert passed, diffs

    def test_wrong_expectation_fails_with_diff(self):
        s = parse_scenario(SAMPLE.replace("count C1 = 2", "count C1 = 3"))
        passed, diffs, _ = run_scenario(s, seed=8)
        assert not passed
        assert any("count[C1]" in d for d in diffs)

    def test_unexpected_rejections_flagged(self):
        text = SAMPLE.replace("cast 1 C1", "double-cast 1 C1")
        text = text.replace("count C1 = 2", "count C1 = 2\nrejected reject-unknown-credential = 0")
        s = parse_scenario(text)
        passed, diffs, _ = run_scenario(s, seed=8)
        assert not passed  # the used-credential rejection is unaccounted for


class TestBuiltins:
    @pytest.mark.parametrize("name", sorted(builtin_scenarios()))
    def test_builtin_passes(self, name):
        passed, diffs, _ = run_scenario(builtin_scenarios()[name], seed=1234)
        assert passed, f"{name}: {diffs}"

    def test_builtins_render_and_parse(self):
        for name, s in builtin_scenarios().items():
            rendered = render_scenario(s)
            reparsed = parse_scenario(rendered)
            assert reparsed.name == s.name
            assert reparsed.expected == s.expected
            assert [a.render() for a in reparsed.script] \
                == [a.render() for a in s.script]


class TestShippedScenarioFiles:
    def test_files_match_builtins(self):
        # the scenarios/ directory is generated from the built-in library;
        # keep them in lockstep
        import pathlib
        root = pathlib.Path(__file__).resolve().parent.parent / "scenarios"
        library = builtin_scenarios()
        files = {p.stem: p for p in root.glob("*.txt")}
        assert set(files) == set(library)
        for name, path in files.items():
            assert path.read_text() == render_scenario(library[name])

    def test_shipped_file_runs_via_loader(self):
        import pathlib
        root = pathlib.Path(__file__).resolve().parent.parent / "scenarios"
        scenario = load_scenario(root / "forged-credential.txt")
        passed, diffs, _ = run_scenario(scenario, seed=5)
        assert passed, diffs
