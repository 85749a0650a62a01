"""End-to-end election orchestration and scripted adversarial actions.

``run_election`` drives the five phases over in-memory entities, executes a
vote script (including misbehaving-voter and misbehaving-proxy actions),
and returns everything an assertion might want: the tally report, the
board, per-phase operation counters, proxy rejection tallies, audit
verdicts and message sizes.  Given a seed the whole run is deterministic,
down to the persisted board bytes.

Script actions (voter indices are 0-based):

    cast V C              honest vote by voter V for candidate C
    double-cast V C       V submits the same credential twice (2nd rejected)
    forge-cast V C        V casts with a self-forged credential (rejected)
    abstain V             V does nothing
    coerce-forge V C      V hands a forged credential to a coercer, who
                          verifies it (accepts) and casts with it
                          (rejected unknown); V still votes C for real
    randomization V C     coercer forces randomly composed ballot material;
                          V complies using a forged credential, then votes C
    simulation V C        V divulged fake keying material pre-election; the
                          adversary votes in V's name (rejected); V votes C
    forced-abstention V C coercer demands abstention; V votes C anyway
    suppress V C          V votes C but a malicious proxy drops the ballot
    withhold-key C        candidate C never publishes its tally secret
    tamper-board N        flip one payload byte of entry N in the persisted
                          board file after the run
"""

from __future__ import annotations

import random
import time
from contextlib import contextmanager
from dataclasses import dataclass

from . import bulletin, envelope as env, kp_pre, mdvs
from .bulletin import BoardState, BulletinError
from .groups import OpCounter, setup_group
from .protocol import (
    Administrator,
    BallotMessage,
    Candidate,
    CredentialAbort,
    ElectionConfig,
    MixChannel,
    ProtocolError,
    Proxy,
    TallyReport,
    Voter,
    VotingTransaction,
    rebuild_context,
    run_audit,
    run_tally_script,
)

_VOTER_ACTIONS = {"cast", "double-cast", "forge-cast", "abstain", "coerce-forge",
                  "randomization", "simulation", "forced-abstention", "suppress"}
_OTHER_ACTIONS = {"withhold-key", "tamper-board"}


@dataclass(frozen=True)
class Action:
    kind: str
    voter: "int | None" = None
    candidate: "str | None" = None
    seq: "int | None" = None

    @classmethod
    def parse(cls, line: str) -> "Action":
        parts = line.split()
        kind = parts[0]
        if kind in ("abstain",):
            return cls(kind, voter=int(parts[1]))
        if kind == "withhold-key":
            return cls(kind, candidate=parts[1])
        if kind == "tamper-board":
            return cls(kind, seq=int(parts[1]))
        if kind in _VOTER_ACTIONS:
            return cls(kind, voter=int(parts[1]), candidate=parts[2])
        raise ValueError(f"unknown action {kind!r}")

    def render(self) -> str:
        if self.kind == "abstain":
            return f"abstain {self.voter}"
        if self.kind == "withhold-key":
            return f"withhold-key {self.candidate}"
        if self.kind == "tamper-board":
            return f"tamper-board {self.seq}"
        return f"{self.kind} {self.voter} {self.candidate}"


def validate_script(cfg: ElectionConfig, script):
    for action in script:
        if action.kind not in _VOTER_ACTIONS | _OTHER_ACTIONS:
            raise ValueError(f"unknown action {action.kind!r}")
        if action.voter is not None and not 0 <= action.voter < cfg.num_voters:
            raise ValueError(f"voter index {action.voter} out of range")
        if action.candidate is not None and action.candidate not in cfg.candidates:
            raise ValueError(f"unknown candidate {action.candidate!r}")


def all_cast_script(cfg: ElectionConfig, seed=None):
    """Every voter casts; choices drawn uniformly from the candidate slate."""
    rng = random.Random(f"script:{seed}")
    return [Action("cast", voter=i, candidate=rng.choice(cfg.candidates))
            for i in range(cfg.num_voters)]


@dataclass
class ElectionResult:
    config: ElectionConfig
    report: TallyReport
    board: BoardState
    head_hash: bytes
    rejections: dict
    verdicts: "dict | None"
    claims: int
    coercer_checks: list
    phase_counters: dict          # (phase, role) -> OpCounter
    sizes: dict                   # message name -> bytes
    timings: dict                 # phase -> seconds
    credentials_issued: int
    ballots_submitted: int
    transactions: int
    participants: dict            # voter index -> [Credential]
    board_path: "str | None"


def _rng(seed, name):
    if seed is None:
        return None
    return random.Random(f"pv:{seed}:{name}")


class _PhaseMeter:
    """Per-phase deltas of the per-role counter totals."""

    def __init__(self, roles):
        self.roles = roles  # role name -> list of entities with .counter
        self._last = {role: OpCounter() for role in roles}
        self.cells = {}
        self.timings = {}
        self._t0 = time.perf_counter()

    def _totals(self):
        return {role: sum((e.counter for e in ents), OpCounter())
                for role, ents in self.roles.items()}

    def snapshot(self, phase: str):
        now = self._totals()
        for role in self.roles:
            self.cells[(phase, role)] = now[role] - self._last[role]
        self._last = now
        t1 = time.perf_counter()
        self.timings[phase] = t1 - self._t0
        self._t0 = t1


def run_election(cfg: ElectionConfig, script=None, seed=None,
                 board_path=None, probes=None, concurrent_open=False,
                 _corrupt_dispatch=None) -> ElectionResult:
    """Execute all five phases for the scripted election.

    ``probes``, when a dict, collects per-call measurements for the
    benchmark: probe name -> list of {"ops": OpCounter, "seconds": float}.
    ``concurrent_open`` runs each candidate's transaction opening on its
    own thread (entity state is confined, the board is only read), which
    exercises the confinement contract; tallies stay identical but wall
    times and per-phase counter attribution are not meaningful that way.
    """
    if script is None:
        script = all_cast_script(cfg, seed)
    script = [Action.parse(a) if isinstance(a, str) else a for a in script]
    validate_script(cfg, script)

    ctx = setup_group(cfg.security_tag.encode())
    admin = Administrator(ctx, cfg, _rng(seed, "admin"))
    proxy = Proxy(ctx, cfg, _rng(seed, "proxy"))
    voters = [Voter(ctx, i, _rng(seed, f"voter{i}")) for i in range(cfg.num_voters)]
    candidates = {cid: Candidate(ctx, cid, _rng(seed, f"cand:{cid}"))
                  for cid in cfg.candidates}
    rng_mix = _rng(seed, "mix")
    rng_adv = _rng(seed, "adversary")

    meter = _PhaseMeter({
        "administrator": [admin],
        "proxy": [proxy],
        "voter": voters,
        "candidate": list(candidates.values()),
    })
    meter.snapshot("init")  # long-term key generation at construction
    board = BoardState()
    sizes = {}

    @contextmanager
    def _probe(name):
        if probes is None:
            yield
            return
        counter = OpCounter()
        t0 = time.perf_counter()
        with ctx.record(counter):
            yield
        probes.setdefault(name, []).append(
            {"ops": counter, "seconds": time.perf_counter() - t0})

    # ---- setup -------------------------------------------------------------
    admin.register_voters([v.public_identity for v in voters])
    admin.publish_setup(board)
    for cid in cfg.candidates:
        candidates[cid].publish_key(board)
    sizes["rekey"] = len(next(iter(admin.rekey_list.values())).to_bytes())
    meter.snapshot("setup")

    # ---- credential dispatching ---------------------------------------------
    admin.open_phase(board, "dispatch")
    proxy.load_rekeys(board)
    total_creds = cfg.num_voters * cfg.credentials_per_voter
    issued = 0
    for i in range(total_creds):
        with _probe("issue-credential"):
            sealed = admin.issue_credential()
        if _corrupt_dispatch is not None:
            sealed = _corrupt_dispatch(i, sealed)
        sizes.setdefault("credential-envelope-l2", len(sealed.to_bytes()))
        with _probe("dispatch-credential"):
            j, delivered = proxy.dispatch(sealed)
        while delivered is None:  # corrupted in transit: reissue (C5 retry)
            sealed = admin.issue_credential()
            j, delivered = proxy.dispatch(sealed)
        sizes.setdefault("credential-envelope-l1", len(delivered.to_bytes()))
        voters[j].receive(delivered)
        issued += 1
    roster = admin.pack_roster(proxy.pre_keys.public)
    proxy.install_roster(roster)
    meter.snapshot("dispatch")

    # ---- ballot casting ------------------------------------------------------
    admin.open_phase(board, "cast")
    proxy.begin_casting(board)
    stp_base = int.from_bytes(board.query(kind="stp-base")[0].payload, "big")
    for cand in candidates.values():
        cand.observe_stp_base(stp_base)
    mix = MixChannel(board, cfg.mix_window, rng_mix)
    candidate_pubs = {cid: candidates[cid].pre_keys.public for cid in cfg.candidates}
    roster_dv = [v.public_identity[1] for v in voters]

    participants = {}
    coercer_checks = []
    withheld = {a.candidate for a in script if a.kind == "withhold-key"}
    tampers = [a.seq for a in script if a.kind == "tamper-board"]

    def real_cast(voter: Voter, cid: str, slot=None):
        slot, used = voter.peek_credential(slot)
        with _probe("make-ballot"):
            message = voter.make_ballot(candidate_pubs[cid], slot=slot)
        sizes.setdefault("ballot-message", len(message.to_bytes()))
        participants.setdefault(voter.index, [])
        if used not in participants[voter.index]:
            participants[voter.index].append(used)
        mix.submit(message)

    def adversary_cast(fake_keys, fake_credential, cid):
        # the adversary's own computation lands in no entity's cost cell
        ballot = kp_pre.rekeygen(fake_keys, candidate_pubs[cid], ctx, rng_adv)
        mix.submit(BallotMessage(ballot, fake_credential.digest()))

    for action in script:
        if action.kind in ("withhold-key", "tamper-board"):
            continue
        voter = voters[action.voter]
        if voter.inbox:
            with _probe("voter-unwrap"):
                voter.unwrap_credentials()
        if action.kind == "abstain":
            continue
        if action.kind == "cast":
            real_cast(voter, action.candidate)
        elif action.kind == "double-cast":
            real_cast(voter, action.candidate, slot=0)
            real_cast(voter, action.candidate, slot=0)
        elif action.kind == "forge-cast":
            fake_keys, fake_cred = voter.forge_credential(
                admin.dv_keys.y, roster_dv, cfg.ring_cap)
            ballot = voter.make_forged_ballot(fake_keys, fake_cred,
                                              candidate_pubs[action.candidate])
            mix.submit(ballot)
        elif action.kind in ("coerce-forge", "simulation"):
            fake_keys, fake_cred = voter.forge_credential(
                admin.dv_keys.y, roster_dv, cfg.ring_cap)
            coercer_checks.append(mdvs.mdvs_verify(
                fake_cred.sig, fake_cred.pubkey.to_bytes(), ctx))
            adversary_cast(fake_keys, fake_cred,
                           cfg.candidates[0] if action.kind == "simulation"
                           else action.candidate)
            real_cast(voter, action.candidate)
        elif action.kind == "randomization":
            fake_keys, fake_cred = voter.forge_credential(
                admin.dv_keys.y, roster_dv, cfg.ring_cap)
            random_target = (rng_adv or random).choice(cfg.candidates)
            adversary_cast(fake_keys, fake_cred, random_target)
            real_cast(voter, action.candidate)
        elif action.kind == "forced-abstention":
            real_cast(voter, action.candidate)
        elif action.kind == "suppress":
            _slot, credential = voter.peek_credential()
            proxy._suppress_hashes.add(credential.digest())
            real_cast(voter, action.candidate)
    mix.flush()

    ballots_submitted = 0
    for entry in board.query(kind="ballot"):
        ballots_submitted += 1
        message = BallotMessage.from_bytes(entry.payload)
        with _probe("process-ballot"):
            seq = proxy.process_ballot(board, message)
        if seq is not None:
            sizes.setdefault("transaction", len(board.entries[seq].payload))
            txn_entry = board.entries[seq]
            if concurrent_open:
                import threading
                threads = [threading.Thread(target=cand.open_entry,
                                            args=(txn_entry,))
                           for cand in candidates.values()]
                for t in threads:
                    t.start()
                for t in threads:
                    t.join()
            else:
                for cand in candidates.values():
                    with _probe("open-transaction"):
                        cand.open_entry(txn_entry)
    proxy.publish_rejection_summary(board)
    meter.snapshot("cast")

    # ---- ballot opening -------------------------------------------------------
    admin.open_phase(board, "open")
    for cand in candidates.values():
        cand.open_new_transactions(board)
    meter.snapshot("open")

    # ---- tallying ---------------------------------------------------------------
    admin.trigger_tally(board)
    for cid in cfg.candidates:
        if cid not in withheld:
            candidates[cid].publish_secret(board)
            sizes.setdefault(
                "candidate-secret",
                len(board.query(kind="candidate-secret")[-1].payload))
    tally_counter = OpCounter()
    with ctx.record(tally_counter):
        report = run_tally_script(board, ctx)
    meter.snapshot("tally")
    meter.cells[("tally", "tally-script")] = tally_counter

    # ---- verifying and auditing ---------------------------------------------------
    verdicts = None
    claims = 0
    if cfg.audit_enabled:
        admin.open_phase(board, "audit")
        verdicts = run_audit(board, proxy, participants)
        claims = len(board.query(kind="claim"))
    meter.snapshot("audit")

    if board_path is not None:
        board.persist(board_path)
        for seq in tampers:
            tamper_board_file(board_path, seq)

    return ElectionResult(
        config=cfg,
        report=report,
        board=board,
        head_hash=board.head_hash,
        rejections=dict(proxy.rejections),
        verdicts=verdicts,
        claims=claims,
        coercer_checks=coercer_checks,
        phase_counters=meter.cells,
        sizes=sizes,
        timings=meter.timings,
        credentials_issued=issued,
        ballots_submitted=ballots_submitted,
        transactions=len(board.query(kind="transaction")),
        participants=participants,
        board_path=board_path,
    )


def tamper_board_file(path, seq: int):
    """Flip one payload byte of entry ``seq`` in a persisted board file."""
    import base64

    with open(path) as fh:
        lines = fh.read().splitlines()
    lineno = seq + 1  # header occupies line 0
    parts = lines[lineno].split("\t")
    payload = bytearray(base64.b64decode(parts[3]))
    if not payload:
        raise ValueError(f"entry {seq} has empty payload; nothing to tamper")
    payload[0] ^= 0x01
    parts[3] = base64.b64encode(bytes(payload)).decode()
    lines[lineno] = "\t".join(parts)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def verify_board(path):
    """Load a board file, check the chain, reproduce the tally.

    Returns (True, detail) when the chain verifies and an independent rerun
    of the tally script over board contents matches the published result.
    """
    try:
        board = bulletin.load(path)
    except (BulletinError, OSError) as exc:
        return False, f"board rejected: {exc}"
    try:
        ctx = rebuild_context(board)
    except Exception as exc:  # noqa: BLE001 - surface the detail
        return False, f"cannot rebuild group context: {exc}"
    published = board.query(kind="tally-result")
    if not published:
        return False, "board has no tally-result entry"
    reported = TallyReport.from_json(published[-1].payload.decode())
    recount = run_tally_script(board, ctx, publish=False)
    if recount.counts != reported.counts:
        for cid in sorted(set(recount.counts) | set(reported.counts)):
            a = reported.counts.get(cid)
            b = recount.counts.get(cid)
            if a != b:
                return False, (f"tally mismatch for candidate {cid}: "
                               f"published {a}, recount {b}")
    if recount.unopened != reported.unopened:
        return False, (
            f"unopened-transaction mismatch: published {reported.unopened}, "
            f"recount {recount.unopened}; transactions without a matching "
            "published candidate key cannot be opened")
    if recount.rejected != reported.rejected or recount.total_valid != reported.total_valid:
        return False, "tally metadata mismatch between publication and recount"
    return True, "chain intact; published tally reproduced from board contents"
