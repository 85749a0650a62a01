"""Protocol entities and phases: setup, dispatch, casting, opening, tally, audit."""

import dataclasses
import itertools
import json
import random

import pytest

from proxyvote import envelope as env
from proxyvote import kp_pre, mdvs
from proxyvote.bulletin import BoardState
from proxyvote.groups import setup_group
from proxyvote.protocol import (
    Administrator,
    AmbiguousTransactionError,
    BallotMessage,
    Candidate,
    Credential,
    CredentialAbort,
    CredentialTable,
    ElectionConfig,
    MixChannel,
    ProtocolError,
    Proxy,
    TallyReport,
    Voter,
    VotingTransaction,
    run_audit,
    run_tally_script,
)
from proxyvote.runner import Action, run_election


def make_parties(ctx, num_voters=3, candidates=("C1", "C2"), seed=5, **cfg_kw):
    cfg = ElectionConfig(num_voters=num_voters, candidates=list(candidates), **cfg_kw)
    rng = random.Random(seed)
    admin = Administrator(ctx, cfg, rng)
    proxy = Proxy(ctx, cfg, rng)
    voters = [Voter(ctx, i, rng) for i in range(num_voters)]
    cands = {cid: Candidate(ctx, cid, rng) for cid in candidates}
    admin.register_voters([v.public_identity for v in voters])
    return cfg, admin, proxy, voters, cands


class TestElectionConfig:
    def test_minimums(self):
        with pytest.raises(ValueError):
            ElectionConfig(0, ["A", "B"])
        with pytest.raises(ValueError):
            ElectionConfig(1, ["A"])
        with pytest.raises(ValueError):
            ElectionConfig(1, ["A", "A"])
        with pytest.raises(ValueError):
            ElectionConfig(1, ["A", "B"], mix_window=0)
        ElectionConfig(1, ["YES", "NO"])  # two candidates are enough


class TestAdminSetup:
    def test_board_contents_counted(self, ctx):
        cfg, admin, proxy, voters, cands = make_parties(ctx, 3, ("C1", "C2"))
        board = BoardState()
        admin.publish_setup(board)
        for cand in cands.values():
            cand.publish_key(board)
        assert len(board.query(kind="rekey-list")) == 3
        assert len(board.query(kind="candidate-key")) == 2
        assert len(board.query(kind="params")) == 1
        assert len(board.query(kind="admin-cert")) == 1
        assert len(board.query(kind="hash-spec")) == 1
        assert board.query(kind="hash-spec")[0].payload == b"sha-256"

    def test_rekeys_satisfy_consistency_identity(self, ctx):
        cfg, admin, proxy, voters, _ = make_parties(ctx, 3)
        board = BoardState()
        admin.publish_setup(board)
        for j, rk in admin.rekey_list.items():
            voter_pk2 = voters[j].pre_keys.public.pk2
            lhs = ctx.pair(rk.r1, ctx.h)
            rhs = (ctx.pair(voter_pk2, rk.r2)
                   * ctx.exp_gt(ctx.pair(voter_pk2, ctx.h), admin.pre_keys.sk1))
            assert lhs == rhs

    def test_admin_cert_verifies(self, ctx):
        cfg, admin, proxy, voters, _ = make_parties(ctx)
        board = BoardState()
        admin.publish_setup(board)
        payload = board.query(kind="admin-cert")[0].payload
        body, sig_bytes = payload[:-65], payload[-65:]
        sig = mdvs.SchnorrSignature.from_bytes(sig_bytes)
        assert mdvs.schnorr_verify(admin.dv_keys.y, body, sig, ctx)

    def test_duplicate_setup_rejected(self, ctx):
        cfg, admin, proxy, voters, _ = make_parties(ctx)
        board = BoardState()
        admin.publish_setup(board)
        with pytest.raises(ProtocolError, match="fresh board"):
            admin.publish_setup(board)


class TestDispatch:
    def _dispatch(self, ctx, seed=5, num_voters=4, corrupt=None, **kw):
        cfg, admin, proxy, voters, cands = make_parties(
            ctx, num_voters=num_voters, seed=seed, **kw)
        board = BoardState()
        admin.publish_setup(board)
        proxy.load_rekeys(board)
        assignments = []
        for i in range(num_voters * cfg.credentials_per_voter):
            sealed = admin.issue_credential()
            if corrupt is not None:
                sealed = corrupt(i, sealed)
            j, delivered = proxy.dispatch(sealed)
            while delivered is None:
                sealed = admin.issue_credential()
                j, delivered = proxy.dispatch(sealed)
            voters[j].receive(delivered)
            assignments.append(j)
        proxy.install_roster(admin.pack_roster(proxy.pre_keys.public))
        return cfg, admin, proxy, voters, cands, assignments

    def test_every_voter_gets_exactly_one_verifying_credential(self, ctx):
        _, _, _, voters, _, assignments = self._dispatch(ctx)
        assert sorted(assignments) == list(range(4))
        for voter in voters:
            creds = voter.unwrap_credentials()
            assert len(creds) == 1
            sk_short, credential = creds[0]
            assert mdvs.mdvs_verify(credential.sig,
                                    credential.pubkey.to_bytes(), ctx)
            assert sk_short.public == credential.pubkey

    def test_assignment_is_permutation_under_k(self, ctx):
        _, _, _, _, _, assignments = self._dispatch(ctx, credentials_per_voter=2)
        assert sorted(assignments) == [0, 0, 1, 1, 2, 2, 3, 3]

    def test_seed_changes_permutation(self, ctx):
        perms = set()
        for seed in range(8):
            _, _, _, _, _, assignments = self._dispatch(ctx, seed=seed, num_voters=4)
            perms.add(tuple(assignments))
        assert len(perms) > 1

    def test_exhausted_slots_error(self, ctx):
        cfg, admin, proxy, voters, _, _ = self._dispatch(ctx)
        with pytest.raises(ProtocolError, match="C5"):
            proxy.dispatch(admin.issue_credential())

    def test_corrupted_envelope_reissued(self, ctx):
        hits = []

        def corrupt(i, sealed):
            if i == 1 and not hits:
                hits.append(i)
                bad_kem = kp_pre.CiphertextL2(sealed.kem.alpha,
                                              sealed.kem.beta * ctx.h,
                                              sealed.kem.gamma)
                return dataclasses.replace(sealed, kem=bad_kem)
            return sealed

        cfg, admin, proxy, voters, _, assignments = self._dispatch(
            ctx, corrupt=corrupt)
        assert hits == [1]
        assert proxy.rejections.get("reenc-reject-dispatch") == 1
        assert sorted(assignments) == list(range(4))  # delivery completed

    def test_roster_table_populated(self, ctx):
        _, admin, proxy, _, _, _ = self._dispatch(ctx)
        assert len(proxy.table) == 4
        for credential in admin.issued:
            row = proxy.table.lookup(credential.digest())
            assert row is not None and not row.used


class TestVoterReceive:
    def test_perturbed_signature_aborts(self, ctx):
        cfg, admin, proxy, voters, _ = make_parties(ctx)
        # deliver a credential whose signature was tampered with post-issue
        rng = random.Random(6)
        sk_short = kp_pre.keygen(ctx, rng)
        ring = (admin.dv_keys.y, *[v.public_identity[1] for v in voters])
        sig = mdvs.mdvs_sign(admin.dv_keys.x, ring, sk_short.public.to_bytes(),
                             ctx, rng)
        bad_sig = mdvs.MdvsSignature(
            ((sig.challenges[0] + 1) % ctx.q, *sig.challenges[1:]),
            sig.responses, sig.ring)
        credential = Credential(sk_short.public, bad_sig)
        payload = sk_short.to_bytes() + credential.to_bytes()
        sealed = env.hybrid_enc(voters[0].pre_keys.public, payload, ctx, rng)
        voters[0].receive(sealed)
        with pytest.raises(CredentialAbort, match="B2"):
            voters[0].unwrap_credentials()
        assert voters[0].denounced

    def test_wrong_recipient_dem_auth_failure(self, ctx):
        cfg, admin, proxy, voters, _ = make_parties(ctx)
        rng = random.Random(7)
        sealed = env.hybrid_enc(voters[0].pre_keys.public, b"\x01" * 40, ctx, rng)
        voters[1].receive(sealed)
        with pytest.raises(CredentialAbort, match="dem-auth-failed"):
            voters[1].unwrap_credentials()


@pytest.fixture(scope="module")
def election(ctx):
    """A small fully-dispatched election ready for casting."""
    cfg, admin, proxy, voters, cands = make_parties(
        ctx, num_voters=3, candidates=("C1", "C2"), seed=11)
    board = BoardState()
    admin.publish_setup(board)
    for cand in cands.values():
        cand.publish_key(board)
    proxy.load_rekeys(board)
    for _ in range(3):
        j, delivered = proxy.dispatch(admin.issue_credential())
        voters[j].receive(delivered)
    proxy.install_roster(admin.pack_roster(proxy.pre_keys.public))
    admin.open_phase(board, "dispatch")
    admin.open_phase(board, "cast")
    proxy.begin_casting(board)
    base = int.from_bytes(board.query(kind="stp-base")[0].payload, "big")
    for cand in cands.values():
        cand.observe_stp_base(base)
    for voter in voters:
        voter.unwrap_credentials()
    return cfg, admin, proxy, voters, cands, board


class TestCastAndProcess:
    def test_cast_then_process_yields_one_transaction(self, ctx, election):
        cfg, admin, proxy, voters, cands, board = election
        before = len(board.query(kind="transaction"))
        message = voters[0].make_ballot(cands["C1"].pre_keys.public, slot=0)
        seq = proxy.process_ballot(board, message)
        assert seq is not None
        assert len(board.query(kind="transaction")) == before + 1

    def test_same_credential_same_hash(self, ctx, election):
        cfg, admin, proxy, voters, cands, board = election
        m1 = voters[1].make_ballot(cands["C1"].pre_keys.public, slot=0)
        m2 = voters[1].make_ballot(cands["C2"].pre_keys.public, slot=0)
        assert m1.cred_hash == m2.cred_hash
        assert m1.ballot != m2.ballot

    def test_used_credential_rejected(self, ctx, election):
        cfg, admin, proxy, voters, cands, board = election
        message = voters[1].make_ballot(cands["C2"].pre_keys.public, slot=0)
        first = proxy.process_ballot(board, message)
        again = voters[1].make_ballot(cands["C2"].pre_keys.public, slot=0)
        second = proxy.process_ballot(board, again)
        assert first is not None and second is None
        assert proxy.rejections.get("reject-used-credential", 0) >= 1

    def test_unknown_hash_rejected(self, ctx, election):
        cfg, admin, proxy, voters, cands, board = election
        message = voters[2].make_ballot(cands["C1"].pre_keys.public, slot=0)
        fake = BallotMessage(message.ballot, bytes(32))
        assert proxy.process_ballot(board, fake) is None
        assert proxy.rejections.get("reject-unknown-credential", 0) >= 1

    def test_transaction_decrypts_to_marker_for_target_only(self, ctx, election):
        cfg, admin, proxy, voters, cands, board = election
        entries = board.query(kind="transaction")
        txn = VotingTransaction.from_bytes(entries[0].payload)
        marker = ctx.exp_gt(ctx.Z, txn.stp)
        c1 = cands["C1"]
        c2 = cands["C2"]
        plain1 = kp_pre.dec1(c1.pre_keys, txn.delta, ctx)
        plain2 = kp_pre.dec1(c2.pre_keys, txn.delta, ctx)
        assert (plain1 == marker) != (plain2 == marker)  # exactly one owner


class TestMixChannel:
    def test_window_batches_release(self, ctx, election):
        cfg, admin, proxy, voters, cands, board = election
        rng = random.Random(3)
        fresh = BoardState()
        fresh.append("cast", "phase", b"cast")
        mix = MixChannel(fresh, window=3, rng=rng)
        msgs = [BallotMessage(
            voters[0].make_ballot(cands["C1"].pre_keys.public, slot=0).ballot,
            bytes([i]) * 32) for i in range(3)]
        mix.submit(msgs[0])
        mix.submit(msgs[1])
        assert len(fresh.query(kind="ballot")) == 0  # window not full yet
        mix.submit(msgs[2])
        assert len(fresh.query(kind="ballot")) == 3  # released in one batch

    def test_all_release_orders_occur_over_seeds(self, ctx, election):
        cfg, admin, proxy, voters, cands, board = election
        ballot = voters[0].make_ballot(cands["C1"].pre_keys.public, slot=0).ballot
        msgs = [BallotMessage(ballot, bytes([i]) * 32) for i in range(3)]
        orders = set()
        for seed in range(60):
            fresh = BoardState()
            mix = MixChannel(fresh, window=3, rng=random.Random(seed))
            for m in msgs:
                mix.submit(m)
            order = tuple(e.payload[-32] for e in fresh.query(kind="ballot"))
            orders.add(order)
        assert orders == set(itertools.permutations(range(3)))

    def test_flush_releases_partial_batch(self, ctx, election):
        cfg, admin, proxy, voters, cands, board = election
        fresh = BoardState()
        mix = MixChannel(fresh, window=10, rng=random.Random(1))
        ballot = voters[0].make_ballot(cands["C1"].pre_keys.public, slot=0).ballot
        mix.submit(BallotMessage(ballot, bytes(32)))
        assert len(fresh.query(kind="ballot")) == 0
        mix.flush()
        assert len(fresh.query(kind="ballot")) == 1


class TestOpeningAndTally:
    def test_running_counts_match_script(self, ctx):
        result = run_election(
            ElectionConfig(3, ["C1", "C2"], mix_window=1),
            [Action("cast", 0, "C1"), Action("cast", 1, "C1"),
             Action("cast", 2, "C2")], seed=21)
        assert result.report.counts == {"C1": 2, "C2": 1}
        assert result.report.total_valid == 3
        assert result.report.unopened == 0

    def test_candidate_running_count_is_private_and_correct(self, ctx, election):
        cfg, admin, proxy, voters, cands, board = election
        # C1 received exactly the C1-targeted transactions processed so far
        c1_count = cands["C1"].running_count
        c1_check = 0
        for entry in board.query(kind="transaction"):
            txn = VotingTransaction.from_bytes(entry.payload)
            marker = ctx.exp_gt(ctx.Z, txn.stp)
            if kp_pre.dec1(cands["C1"].pre_keys, txn.delta, ctx) == marker:
                c1_check += 1
        for cand in cands.values():
            cand.open_new_transactions(board)
        assert cands["C1"].running_count == max(c1_count, c1_check)

    def test_foreign_decryptions_not_retained(self, ctx, election):
        # candidate state keeps a count and a marker, never other candidates'
        # decrypted values
        cfg, admin, proxy, voters, cands, board = election
        cand = cands["C2"]
        state_types = {type(v) for v in vars(cand).values()}
        assert list not in state_types or all(
            not isinstance(v, list) or not v for v in vars(cand).values())
        assert isinstance(cand.running_count, int)

    def test_voter_api_exposes_no_counts(self):
        count_like = [name for name in dir(Voter)
                      if "count" in name.lower() or "tally" in name.lower()]
        assert count_like == []

    def test_zero_transactions_zero_count(self, ctx):
        cand = Candidate(ctx, "X", random.Random(1))
        cand.observe_stp_base(100)
        assert cand.running_count == 0

    def test_tally_report_invariants(self, ctx):
        cfg = ElectionConfig(4, ["C1", "C2"], mix_window=2)
        result = run_election(cfg, seed=33)
        rep = result.report
        assert rep.total_valid == sum(rep.counts.values())
        assert rep.total_valid + rep.unopened == result.transactions

    def test_abstention_reduces_total(self, ctx):
        cfg = ElectionConfig(3, ["C1", "C2"], mix_window=1)
        result = run_election(cfg, [Action("cast", 0, "C1"),
                                    Action("cast", 1, "C2"),
                                    Action("abstain", 2)], seed=4)
        assert result.report.total_valid == 2

    def test_withheld_key_lands_in_unopened(self, ctx):
        cfg = ElectionConfig(3, ["C1", "C2"], mix_window=1)
        result = run_election(cfg, [Action("cast", 0, "C1"),
                                    Action("cast", 1, "C2"),
                                    Action("cast", 2, "C2"),
                                    Action("withhold-key", candidate="C2")],
                              seed=4)
        assert result.report.counts == {"C1": 1, "C2": 0}
        assert result.report.unopened == 2

    def test_ambiguous_transaction_fatal(self, ctx):
        # two published candidate secrets that are the same key must trip the
        # consistency alarm
        rng = random.Random(12)
        board = BoardState()
        board.append("setup", "params", setup_group(b"pv-test-suite-v1").params_bytes())
        keys = kp_pre.keygen(ctx, rng)
        from proxyvote.protocol import _encode_id
        from proxyvote.groups import scalar_to_bytes
        board.append("setup", "candidate-key",
                     _encode_id("A") + keys.public.to_bytes())
        board.append("setup", "candidate-key",
                     _encode_id("B") + keys.public.to_bytes())
        board.append("cast", "stp-base", (1000).to_bytes(8, "big"))
        marker = ctx.exp_gt(ctx.Z, 1000)
        delta = kp_pre.enc2(keys.public, marker, ctx, rng)
        rk = kp_pre.rekeygen(keys, keys.public, ctx, rng)
        delta_prime = kp_pre.reenc(rk, delta, ctx, rng)
        board.append("cast", "transaction",
                     VotingTransaction(delta_prime, 1000).to_bytes())
        for cid in ("A", "B"):
            board.append("tally", "candidate-secret",
                         _encode_id(cid) + scalar_to_bytes(keys.sk1)
                         + scalar_to_bytes(keys.sk2))
        with pytest.raises(AmbiguousTransactionError):
            run_tally_script(board, ctx, publish=False)


class TestAudit:
    def test_honest_run_all_verified(self, ctx):
        cfg = ElectionConfig(4, ["C1", "C2"], mix_window=2, audit_enabled=True)
        result = run_election(cfg, seed=5)
        assert result.verdicts is not None
        assert all(v == "verified" for v in result.verdicts.values())
        assert result.claims == 0

    def test_suppressed_ballot_yields_one_claim(self, ctx):
        cfg = ElectionConfig(4, ["C1", "C2"], mix_window=2, audit_enabled=True)
        script = [Action("cast", 0, "C1"), Action("suppress", 1, "C2"),
                  Action("cast", 2, "C2"), Action("cast", 3, "C1")]
        result = run_election(cfg, script, seed=5)
        assert result.verdicts[1] == "missing"
        assert sum(1 for v in result.verdicts.values() if v == "missing") == 1
        assert result.claims == 1

    def test_wrong_key_fails_all_verdicts(self, ctx):
        cfg, admin, proxy, voters, cands = make_parties(
            ctx, 3, seed=9, audit_enabled=True)
        board = BoardState()
        admin.publish_setup(board)
        for cand in cands.values():
            cand.publish_key(board)
        proxy.load_rekeys(board)
        for _ in range(3):
            j, delivered = proxy.dispatch(admin.issue_credential())
            voters[j].receive(delivered)
        proxy.install_roster(admin.pack_roster(proxy.pre_keys.public))
        admin.open_phase(board, "cast")
        proxy.begin_casting(board)
        participants = {}
        for voter in voters:
            voter.unwrap_credentials()
            message = voter.make_ballot(cands["C1"].pre_keys.public)
            proxy.process_ballot(board, message)
            participants[voter.index] = [voter.credentials[0][1]]
        verdicts = run_audit(board, proxy, participants, override_key=bytes(32))
        assert all(v == "missing" for v in verdicts.values())

    def test_audit_requires_flag(self, ctx):
        cfg, admin, proxy, voters, cands = make_parties(ctx, 2, seed=1)
        with pytest.raises(ProtocolError):
            run_audit(BoardState(), proxy, {})


class TestCoercionDefence:
    def test_forged_credential_verifies_but_is_rejected_only_by_table(self, ctx, election):
        cfg, admin, proxy, voters, cands, board = election
        roster_dv = [v.public_identity[1] for v in voters]
        fake_keys, fake_cred = voters[2].forge_credential(admin.dv_keys.y, roster_dv)
        # the coercer's check passes: the signature is valid
        assert mdvs.mdvs_verify(fake_cred.sig, fake_cred.pubkey.to_bytes(), ctx)
        # same shape as a genuine credential
        genuine = voters[2].credentials[0][1]
        assert len(fake_cred.to_bytes()) == len(genuine.to_bytes())
        # casting with it fails only because the hash is unknown to the table
        ballot = voters[2].make_forged_ballot(
            fake_keys, fake_cred, cands["C1"].pre_keys.public)
        before = dict(proxy.rejections)
        assert proxy.process_ballot(board, ballot) is None
        assert (proxy.rejections.get("reject-unknown-credential", 0)
                == before.get("reject-unknown-credential", 0) + 1)

    def test_repeated_coercion_same_fake(self, ctx, election):
        # the voter can hand out the same fake any number of times
        cfg, admin, proxy, voters, cands, board = election
        roster_dv = [v.public_identity[1] for v in voters]
        rng_state = voters[2].rng.getstate() if voters[2].rng else None
        fake_keys, fake_cred = voters[2].forge_credential(admin.dv_keys.y, roster_dv)
        for _ in range(3):
            assert mdvs.mdvs_verify(fake_cred.sig, fake_cred.pubkey.to_bytes(), ctx)


class TestCredentialTable:
    def test_used_flag_flips_once(self, ctx, rng):
        table = CredentialTable()
        sk = kp_pre.keygen(ctx, rng)
        ring = (ctx.exp_g1(ctx.g, 5), ctx.exp_g1(ctx.g, 7))
        sig = mdvs.MdvsSignature((1, 2), (3, 4), ring)
        credential = Credential(sk.public, sig)
        table.insert(credential)
        digest = credential.digest()
        table.mark_used(digest)
        assert table.lookup(digest).used
        with pytest.raises(ProtocolError):
            table.mark_used(digest)


class TestSerializationFormats:
    def test_ballot_message_round_trip(self, ctx, election):
        cfg, admin, proxy, voters, cands, board = election
        message = voters[0].make_ballot(cands["C1"].pre_keys.public, slot=0)
        assert BallotMessage.from_bytes(message.to_bytes()) == message

    def test_transaction_round_trip(self, ctx, election):
        cfg, admin, proxy, voters, cands, board = election
        entry = board.query(kind="transaction")[0]
        txn = VotingTransaction.from_bytes(entry.payload)
        assert txn.to_bytes() == entry.payload

    def test_credential_round_trip(self, ctx, election):
        cfg, admin, proxy, voters, cands, board = election
        credential = voters[0].credentials[0][1]
        assert Credential.from_bytes(credential.to_bytes()) == credential

    def test_tally_report_json_round_trip(self):
        rep = TallyReport({"A": 2, "B": 1}, 3, {"reject-used-credential": 1}, 0)
        assert TallyReport.from_json(rep.to_json()) == rep
