"""Acceptance gate: nine numbered criteria, each printing one PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines as they complete.  Tolerances and trial counts are pinned here and
nowhere else.
"""

import random
import statistics
import time

import pytest

from proxyvote import kp_pre, mdvs
from proxyvote.bench import run_bench
from proxyvote.groups import OpCounter, rand_scalar, setup_group
from proxyvote.protocol import ElectionConfig
from proxyvote.runner import (
    Action,
    all_cast_script,
    run_election,
    tamper_board_file,
    verify_board,
)
from proxyvote.scenarios import builtin_scenarios, run_scenario
from recount_oracle import recount


def _report(n, label, detail=""):
    print(f"\nACCEPTANCE {n} ({label}): PASS {detail}")


@pytest.fixture(scope="module")
def actx():
    return setup_group(b"pv-acceptance-v1")


def test_criterion_1_pre_correctness_1000_instances(actx):
    ctx = actx
    rng = random.Random(1001)
    start = time.perf_counter()
    for _ in range(1000):
        kp = kp_pre.keygen(ctx, rng)
        m = ctx.exp_gt(ctx.Z, rand_scalar(rng))
        c2 = kp_pre.enc2(kp.public, m, ctx, rng)
        assert kp_pre.dec2(kp, c2, ctx) == m
    for _ in range(1000):
        alice = kp_pre.keygen(ctx, rng)
        bob = kp_pre.keygen(ctx, rng)
        m = ctx.exp_gt(ctx.Z, rand_scalar(rng))
        rk = kp_pre.rekeygen(alice, bob.public, ctx, rng)
        c2 = kp_pre.enc2(alice.public, m, ctx, rng)
        c1 = kp_pre.reenc(rk, c2, ctx, rng)
        assert c1 is not None
        assert kp_pre.dec1(bob, c1, ctx) == m
    elapsed = time.perf_counter() - start
    assert elapsed < 60, f"correctness suite took {elapsed:.1f}s (limit 60s)"
    _report(1, "PRE correctness", f"2x1000 instances, {elapsed:.1f}s")


def test_criterion_2_malformed_rejection_500(actx):
    ctx = actx
    rng = random.Random(1002)
    alice = kp_pre.keygen(ctx, rng)
    bob = kp_pre.keygen(ctx, rng)
    rk = kp_pre.rekeygen(alice, bob.public, ctx, rng)
    rejected = 0
    for i in range(500):
        m = ctx.exp_gt(ctx.Z, rand_scalar(rng))
        c = kp_pre.enc2(alice.public, m, ctx, rng)
        mode = i % 3
        if mode == 0:  # shift beta off the shared exponent
            bad = kp_pre.CiphertextL2(
                c.alpha, c.beta * ctx.exp_g2(ctx.h, rng.randrange(1, ctx.q)),
                c.gamma)
        elif mode == 1:  # shift alpha instead
            bad = kp_pre.CiphertextL2(
                c.alpha * ctx.exp_g1(ctx.g, rng.randrange(1, ctx.q)),
                c.beta, c.gamma)
        else:  # replace beta with an unrelated exponent entirely
            bad = kp_pre.CiphertextL2(
                c.alpha, ctx.exp_g2(ctx.h, rng.randrange(1, ctx.q)), c.gamma)
        if kp_pre.reenc(rk, bad, ctx, rng) is None and kp_pre.dec2(alice, bad, ctx) is None:
            rejected += 1
    assert rejected == 500, f"only {rejected}/500 corrupted ciphertexts rejected"
    _report(2, "malformed-ciphertext rejection", "500/500 rejected by reenc and dec2")


def test_criterion_3_rerandomization_1000(actx):
    ctx = actx
    rng = random.Random(1003)
    pseudonym = kp_pre.keygen(ctx, rng)
    candidate = kp_pre.keygen(ctx, rng)
    ballot = kp_pre.rekeygen(pseudonym, candidate.public, ctx, rng)
    marker = ctx.exp_gt(ctx.Z, 424242)
    delta = kp_pre.enc2(pseudonym.public, marker, ctx, rng)
    seen = set()
    for _ in range(1000):
        delta_prime = kp_pre.reenc(ballot, delta, ctx, rng)
        seen.add(delta_prime.to_bytes())
        assert kp_pre.dec1(candidate, delta_prime, ctx) == marker
    assert len(seen) == 1000, "re-encryptions were not pairwise distinct"
    _report(3, "re-randomization", "1000 pairwise-distinct, equal decryptions")


def test_criterion_4_end_to_end_100_voters():
    cfg = ElectionConfig(100, [f"C{i}" for i in range(1, 6)], mix_window=10)
    script = all_cast_script(cfg, seed=2024)
    start = time.perf_counter()
    result = run_election(cfg, script, seed=2024)
    elapsed = time.perf_counter() - start
    expected_counts, _, _ = recount(cfg, script)
    assert result.report.counts == expected_counts, "tally differs from recount"
    assert result.report.total_valid == 100
    ok, bad = result.board.verify_chain()
    assert ok, f"board chain failed at {bad}"
    assert elapsed < 120, f"election took {elapsed:.1f}s (limit 120s)"
    _report(4, "end-to-end election",
            f"100 voters x 5 candidates, recount exact, {elapsed:.1f}s")


def test_criterion_5_unreusability_eligibility():
    voters = 45
    cfg = ElectionConfig(voters, ["A", "B"], mix_window=5)
    script = []
    for v in range(20):
        script.append(Action("double-cast", v, "A" if v % 2 else "B"))
    for v in range(20, 40):
        script.append(Action("forge-cast", v, "A"))
    for v in range(40, 45):
        script.append(Action("cast", v, "B"))
    result = run_election(cfg, script, seed=55)
    expected_counts, expected_rejected, _ = recount(cfg, script)
    assert result.report.counts == expected_counts, "extra or missing votes counted"
    assert result.report.total_valid == 25
    assert result.rejections.get("reject-used-credential") == 20
    assert result.rejections.get("reject-unknown-credential") == 20
    assert set(result.rejections) == {"reject-used-credential",
                                      "reject-unknown-credential"}
    _report(5, "unreusability/eligibility",
            "20 double-casts + 20 forged casts, 0 extra votes, reasons exact")


def test_criterion_6_coercion_scenarios(actx):
    ctx = actx
    rng = random.Random(1006)
    # every voter position can forge a verifying credential
    n = 6
    admin = mdvs.dv_keygen(ctx, rng)
    voters = [mdvs.dv_keygen(ctx, rng) for _ in range(n)]
    ring = (admin.y, *[v.y for v in voters])
    for idx, voter in enumerate(voters):
        fake_pk = kp_pre.keygen(ctx, rng).public
        forged = mdvs.mdvs_forge(voter.x, idx + 1, ring, fake_pk.to_bytes(),
                                 ctx, rng)
        assert mdvs.mdvs_verify(forged, fake_pk.to_bytes(), ctx), \
            f"forgery from position {idx + 1} failed to verify"
    # the three coercion-attack scenarios meet their declared expectations
    library = builtin_scenarios()
    for name in ("randomization-attack", "forced-abstention-attack",
                 "simulation-attack", "coerce-and-forge"):
        passed, diffs, _ = run_scenario(library[name], seed=1006)
        assert passed, f"{name}: {diffs}"
    _report(6, "coercion defence",
            f"forgeries verify from all {n} positions; attack scenarios pass")


def test_criterion_7_audit_extension(tmp_path):
    # honest run: every participating voter verified
    cfg = ElectionConfig(6, ["A", "B"], mix_window=3, audit_enabled=True)
    result = run_election(cfg, seed=77)
    assert result.verdicts and all(v == "verified"
                                   for v in result.verdicts.values())
    assert result.claims == 0
    # one suppressed ballot: exactly one claim entry
    passed, diffs, sup_result = run_scenario(
        builtin_scenarios()["suppressed-ballot"], seed=77)
    assert passed, diffs
    assert sup_result.claims == 1
    # one tampered byte: verification rejects naming the index
    board_path = tmp_path / "audit-board.txt"
    run_election(cfg, seed=77, board_path=board_path)
    tamper_board_file(board_path, 9)
    ok, detail = verify_board(board_path)
    assert not ok and "9" in detail, detail
    _report(7, "audit extension",
            "honest 100% verified; 1 suppression -> 1 claim; tamper caught at 9")


def test_criterion_8_benchmark():
    report = run_bench(10, [f"C{i}" for i in range(1, 6)], seed=88,
                       mix_window=5)
    opening = next(c for c in report.cells
                   if (c.phase, c.entity) == ("open", "candidate"))
    assert opening.measured == OpCounter(exp_gt=1), \
        f"opening cost {opening.measured}, expected exactly one E2"
    assert report.all_cells_match, "a measured cell deviates from the derived table"
    flagged = [c for c in report.cells if c.undefined_terms]
    assert len(flagged) == 3, "undefined-S cells must be flagged"
    assert report.per_ballot_generation_ms < 100, \
        f"ballot generation {report.per_ballot_generation_ms:.1f} ms (limit 100)"
    _report(8, "benchmark",
            f"opening = 1 E2 exactly; derived table matched; "
            f"ballot generation {report.per_ballot_generation_ms:.1f} ms")


def test_criterion_9_tally_linearity():
    voter_counts = (10, 50, 100, 200)
    entries = []
    for n in voter_counts:
        cfg = ElectionConfig(n, ["A", "B", "C"], mix_window=10, ring_cap=8)
        result = run_election(cfg, seed=99)
        entries.append(len(result.board))
        assert result.report.total_valid == n
    fit = statistics.linear_regression(voter_counts, entries)
    per_vote = 3  # rekey-list entry + ballot + transaction
    assert abs(fit.slope - per_vote) <= 0.01 * per_vote, \
        f"slope {fit.slope:.4f} deviates from {per_vote} by more than 1%"
    _report(9, "tally linearity",
            f"entries {entries} at {voter_counts} voters; slope {fit.slope:.4f}")
