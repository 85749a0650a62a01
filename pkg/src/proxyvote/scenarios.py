"""Declarative adversarial scenarios: text format, evaluation, built-ins.

A scenario bundles an election configuration, a scripted action sequence
and structured expectations, so new attack variations are plain text files
rather than code.  Format (version header, key: value lines, two sections):

    pv-scenario v1
    name: double-cast
    voters: 5
    candidates: C1 C2
    mix-window: 3
    audit: off
    [script]
    cast 0 C1
    double-cast 1 C2
    [expect]
    count C1 = 1
    count C2 = 1
    rejected reject-used-credential = 1
    chain = accept

Expectation keys:

    count <candidate> = N          exact tally count
    rejected <reason> = N          exact proxy rejection count for reason
    total-valid = N / unopened = N
    claims = N                     claim entries in the audit phase
    verdict <voter> = verified|missing
    coercer-accepts = yes          every forged credential verified
    chain = accept | reject@N      verify_chain result on the (possibly
                                   tampered) persisted board file
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field

from . import bulletin
from .protocol import ElectionConfig
from .runner import Action, ElectionResult, run_election, validate_script


class ScenarioError(ValueError):
    pass


@dataclass
class Scenario:
    name: str
    cfg: ElectionConfig
    script: list
    expected: dict = field(default_factory=dict)

    def __post_init__(self):
        validate_script(self.cfg, self.script)
        for cid in self.expected.get("counts", {}):
            if cid not in self.cfg.candidates:
                raise ScenarioError(f"expectation references unknown candidate {cid!r}")
        for voter in self.expected.get("verdicts", {}):
            if not 0 <= voter < self.cfg.num_voters:
                raise ScenarioError(f"expectation references unknown voter {voter}")


_HEADER = "pv-scenario v1"


def parse_scenario(text: str) -> Scenario:
    lines = [ln.rstrip() for ln in text.splitlines()]
    if not lines or lines[0].strip() != _HEADER:
        raise ScenarioError(f"expected header {_HEADER!r}")
    meta = {}
    script = []
    expected = {"counts": {}, "rejected": {}, "verdicts": {}}
    section = "meta"
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "[script]":
            section = "script"
            continue
        if line == "[expect]":
            section = "expect"
            continue
        if section == "meta":
            if ":" not in line:
                raise ScenarioError(f"line {lineno}: expected 'key: value'")
            key, _, value = line.partition(":")
            meta[key.strip()] = value.strip()
        elif section == "script":
            try:
                script.append(Action.parse(line))
            except (ValueError, IndexError) as exc:
                raise ScenarioError(f"line {lineno}: {exc}") from None
        else:
            _parse_expectation(line, lineno, expected)
    for required in ("name", "voters", "candidates"):
        if required not in meta:
            raise ScenarioError(f"missing required field {required!r}")
    expected = {k: v for k, v in expected.items() if v or not isinstance(v, dict)}
    cfg = ElectionConfig(
        num_voters=int(meta["voters"]),
        candidates=meta["candidates"].split(),
        audit_enabled=meta.get("audit", "off") in ("on", "yes", "true"),
        mix_window=int(meta.get("mix-window", "1")),
        credentials_per_voter=int(meta.get("credentials-per-voter", "1")),
        ring_cap=None if meta.get("ring-cap", "none") in ("none", "")
        else int(meta["ring-cap"]),
        security_tag=meta.get("tag", "pv-election-v1"),
    )
    return Scenario(meta["name"], cfg, script, expected)


def _parse_expectation(line: str, lineno: int, expected: dict):
    if "=" not in line:
        raise ScenarioError(f"line {lineno}: expected '<key> = <value>'")
    left, _, right = line.partition("=")
    left = left.strip().split()
    right = right.strip()
    try:
        if left[0] == "count":
            expected["counts"][left[1]] = int(right)
        elif left[0] == "rejected":
            expected["rejected"][left[1]] = int(right)
        elif left[0] == "verdict":
            expected["verdicts"][int(left[1])] = right
        elif left[0] == "total-valid":
            expected["total_valid"] = int(right)
        elif left[0] == "unopened":
            expected["unopened"] = int(right)
        elif left[0] == "claims":
            expected["claims"] = int(right)
        elif left[0] == "coercer-accepts":
            expected["coercer_accepts"] = right in ("yes", "true", "on")
        elif left[0] == "chain":
            expected["chain"] = right
        else:
            raise ScenarioError(f"line {lineno}: unknown expectation {left[0]!r}")
    except (IndexError, ValueError) as exc:
        raise ScenarioError(f"line {lineno}: {exc}") from None


def render_scenario(s: Scenario) -> str:
    lines = [_HEADER,
             f"name: {s.name}",
             f"voters: {s.cfg.num_voters}",
             f"candidates: {' '.join(s.cfg.candidates)}",
             f"mix-window: {s.cfg.mix_window}",
             f"audit: {'on' if s.cfg.audit_enabled else 'off'}"]
    if s.cfg.credentials_per_voter != 1:
        lines.append(f"credentials-per-voter: {s.cfg.credentials_per_voter}")
    if s.cfg.ring_cap is not None:
        lines.append(f"ring-cap: {s.cfg.ring_cap}")
    lines.append("[script]")
    lines.extend(a.render() for a in s.script)
    lines.append("[expect]")
    for cid, n in s.expected.get("counts", {}).items():
        lines.append(f"count {cid} = {n}")
    for reason, n in s.expected.get("rejected", {}).items():
        lines.append(f"rejected {reason} = {n}")
    for voter, verdict in s.expected.get("verdicts", {}).items():
        lines.append(f"verdict {voter} = {verdict}")
    for key, label in (("total_valid", "total-valid"), ("unopened", "unopened"),
                       ("claims", "claims")):
        if key in s.expected:
            lines.append(f"{label} = {s.expected[key]}")
    if "coercer_accepts" in s.expected:
        lines.append(f"coercer-accepts = {'yes' if s.expected['coercer_accepts'] else 'no'}")
    if "chain" in s.expected:
        lines.append(f"chain = {s.expected['chain']}")
    return "\n".join(lines) + "\n"


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def evaluate(scenario: Scenario, result: ElectionResult,
             board_path) -> list:
    """Compare an election result against the scenario's expectations.

    Returns a list of human-readable mismatch strings; empty means pass.
    """
    diffs = []
    exp = scenario.expected
    for cid, want in exp.get("counts", {}).items():
        got = result.report.counts.get(cid, 0)
        if got != want:
            diffs.append(f"count[{cid}]: expected {want}, got {got}")
    for reason, want in exp.get("rejected", {}).items():
        got = result.rejections.get(reason, 0)
        if got != want:
            diffs.append(f"rejected[{reason}]: expected {want}, got {got}")
    extra = {r: n for r, n in result.rejections.items()
             if n and r not in exp.get("rejected", {})}
    if exp.get("rejected") is not None and extra and "rejected" in exp and exp["rejected"]:
        diffs.append(f"unexpected rejections: {extra}")
    if "total_valid" in exp and result.report.total_valid != exp["total_valid"]:
        diffs.append(f"total-valid: expected {exp['total_valid']}, "
                     f"got {result.report.total_valid}")
    if "unopened" in exp and result.report.unopened != exp["unopened"]:
        diffs.append(f"unopened: expected {exp['unopened']}, "
                     f"got {result.report.unopened}")
    if "claims" in exp and result.claims != exp["claims"]:
        diffs.append(f"claims: expected {exp['claims']}, got {result.claims}")
    for voter, want in exp.get("verdicts", {}).items():
        got = (result.verdicts or {}).get(voter)
        if got != want:
            diffs.append(f"verdict[{voter}]: expected {want}, got {got}")
    if "coercer_accepts" in exp:
        got = bool(result.coercer_checks) and all(result.coercer_checks)
        if got != exp["coercer_accepts"]:
            diffs.append(f"coercer-accepts: expected {exp['coercer_accepts']}, "
                         f"got {got} ({result.coercer_checks})")
    if "chain" in exp:
        try:
            board = bulletin.load(board_path)
            ok, bad = board.verify_chain()
        except bulletin.BulletinError as exc:
            ok, bad = False, _seq_from_error(str(exc))
        want = exp["chain"]
        if want == "accept":
            if not ok:
                diffs.append(f"chain: expected accept, rejected at {bad}")
        elif want.startswith("reject@"):
            want_seq = int(want.split("@", 1)[1])
            if ok:
                diffs.append(f"chain: expected reject@{want_seq}, got accept")
            elif bad != want_seq:
                diffs.append(f"chain: expected reject@{want_seq}, rejected at {bad}")
        else:
            diffs.append(f"chain: unknown expectation {want!r}")
    return diffs


def _seq_from_error(text: str):
    # bulletin.load reports "chain verification failed at entry N (...)"
    for token in text.replace("(", " ").split():
        if token.isdigit():
            return int(token)
    return None


def run_scenario(scenario: Scenario, seed=None, board_path=None):
    """Execute and evaluate; returns (passed, diffs, result)."""
    cleanup = False
    if board_path is None:
        fd, board_path = tempfile.mkstemp(prefix="pv-board-", suffix=".txt")
        os.close(fd)
        cleanup = True
    try:
        result = run_election(scenario.cfg, scenario.script, seed=seed,
                              board_path=board_path)
        diffs = evaluate(scenario, result, board_path)
        return not diffs, diffs, result
    finally:
        if cleanup:
            os.unlink(board_path)


# ---------------------------------------------------------------------------
# built-in scenario library
# ---------------------------------------------------------------------------

def builtin_scenarios() -> dict:
    """Named scenarios covering the protocol's security arguments."""
    lib = {}

    lib["double-cast"] = Scenario(
        "double-cast",
        ElectionConfig(5, ["C1", "C2"], mix_window=3),
        [Action("cast", 0, "C1"), Action("double-cast", 1, "C2"),
         Action("cast", 2, "C1"), Action("cast", 3, "C2"), Action("abstain", 4)],
        {"counts": {"C1": 2, "C2": 2},
         "rejected": {"reject-used-credential": 1},
         "total_valid": 4, "unopened": 0, "chain": "accept"})

    lib["forged-credential"] = Scenario(
        "forged-credential",
        ElectionConfig(4, ["C1", "C2"], mix_window=2),
        [Action("cast", 0, "C1"), Action("forge-cast", 1, "C2"),
         Action("cast", 2, "C2"), Action("cast", 3, "C1")],
        {"counts": {"C1": 2, "C2": 1},
         "rejected": {"reject-unknown-credential": 1},
         "total_valid": 3, "chain": "accept"})

    lib["coerce-and-forge"] = Scenario(
        "coerce-and-forge",
        ElectionConfig(4, ["C1", "C2"], mix_window=2),
        [Action("coerce-forge", 0, "C1"), Action("cast", 1, "C2"),
         Action("cast", 2, "C1"), Action("cast", 3, "C2")],
        {"counts": {"C1": 2, "C2": 2},
         "rejected": {"reject-unknown-credential": 1},
         "coercer_accepts": True, "chain": "accept"})

    lib["randomization-attack"] = Scenario(
        "randomization-attack",
        ElectionConfig(4, ["C1", "C2"], mix_window=2),
        [Action("randomization", 0, "C1"), Action("cast", 1, "C1"),
         Action("cast", 2, "C2"), Action("cast", 3, "C1")],
        {"counts": {"C1": 3, "C2": 1},
         "rejected": {"reject-unknown-credential": 1},
         "chain": "accept"})

    lib["forced-abstention-attack"] = Scenario(
        "forced-abstention-attack",
        ElectionConfig(4, ["C1", "C2"], mix_window=2),
        [Action("forced-abstention", 0, "C2"), Action("cast", 1, "C1"),
         Action("cast", 2, "C2"), Action("cast", 3, "C1")],
        {"counts": {"C1": 2, "C2": 2}, "total_valid": 4, "chain": "accept"})

    lib["simulation-attack"] = Scenario(
        "simulation-attack",
        ElectionConfig(4, ["C1", "C2"], mix_window=2),
        [Action("simulation", 0, "C2"), Action("cast", 1, "C1"),
         Action("cast", 2, "C2"), Action("cast", 3, "C1")],
        {"counts": {"C1": 2, "C2": 2},
         "rejected": {"reject-unknown-credential": 1},
         "coercer_accepts": True, "chain": "accept"})

    lib["tamper-board"] = Scenario(
        "tamper-board",
        ElectionConfig(3, ["C1", "C2"], mix_window=1),
        [Action("cast", 0, "C1"), Action("cast", 1, "C2"),
         Action("cast", 2, "C1"), Action("tamper-board", seq=7)],
        {"counts": {"C1": 2, "C2": 1}, "chain": "reject@7"})

    lib["withhold-key"] = Scenario(
        "withhold-key",
        ElectionConfig(4, ["C1", "C2"], mix_window=2),
        [Action("cast", 0, "C1"), Action("cast", 1, "C2"),
         Action("cast", 2, "C2"), Action("cast", 3, "C1"),
         Action("withhold-key", candidate="C2")],
        {"counts": {"C1": 2, "C2": 0}, "unopened": 2, "total_valid": 2,
         "chain": "accept"})

    lib["suppressed-ballot"] = Scenario(
        "suppressed-ballot",
        ElectionConfig(4, ["C1", "C2"], mix_window=2, audit_enabled=True),
        [Action("cast", 0, "C1"), Action("suppress", 1, "C2"),
         Action("cast", 2, "C2"), Action("cast", 3, "C1")],
        {"counts": {"C1": 2, "C2": 1}, "claims": 1,
         "verdicts": {0: "verified", 1: "missing", 2: "verified", 3: "verified"},
         "chain": "accept"})

    return lib
