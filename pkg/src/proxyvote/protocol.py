"""The five-phase voting protocol: entities, messages, tally and audit.

Entities are deterministic state machines exchanging messages through the
bulletin board plus a few modeled direct channels (credential delivery and
the credential-roster transfer, which the underlying design keeps off the
board purely to cut volume).  The anonymous channel for ballot submission
is modeled by :class:`MixChannel`: identity-stripped messages accumulate
in a window and are released to the board in shuffled batches.

Flow per election round:

  setup     administrator publishes parameters, a self-signed certificate,
            the hash spec, one re-encryption key per registered voter, and
            every candidate publishes its election public key
  dispatch  administrator mints one pseudonym key pair + signed credential
            per slot, envelope-encrypts them to itself and hands them to
            the proxy, which re-encrypts each to a uniformly chosen unused
            voter and delivers it; the credential roster travels to the
            proxy encrypted under the proxy key
  cast      voters unwrap and verify credentials, build a ballot (a
            re-encryption key towards their candidate) plus the credential
            hash, and submit through the mix; the proxy validates hashes
            against its table, encrypts a timestamp marker to the ballot's
            pseudonym, re-encrypts it with the ballot and publishes the
            resulting transaction
  open      candidates decrypt transactions with their own key and count
            the ones carrying their timestamp marker (running, private)
  tally     candidates publish their secret keys; the tally script opens
            every transaction and publishes the counts
  audit     (optional) the proxy reveals the commitment key; voters check
            that some transaction commits to their credential and file
            claims otherwise

Timestamps are a logical monotone counter (seeded runs use a seed-derived
base instead of the wall clock) and the plaintext of a transaction is the
Z^timestamp marker, which is what makes "this decryption belongs to me"
recognizable to exactly the matching key holder.
"""

from __future__ import annotations

import hashlib
import json
import secrets as _secrets
import time
from dataclasses import dataclass

from . import envelope as env
from . import kp_pre
from . import mdvs
from .bulletin import BoardState
from .groups import (
    GroupContext,
    OpCounter,
    context_from_params,
    scalar_from_bytes,
    scalar_to_bytes,
)

CRED_HASH_LEN = 32


class ProtocolError(Exception):
    """Protocol-layer failure; message carries the step identifier."""


class CredentialAbort(ProtocolError):
    """Voter-side abort: delivered credential failed verification (B2)."""


class AmbiguousTransactionError(ProtocolError):
    """Two candidate keys both recognize one transaction; fatal inconsistency."""


# ---------------------------------------------------------------------------
# configuration and message types
# ---------------------------------------------------------------------------

@dataclass
class ElectionConfig:
    num_voters: int
    candidates: list
    audit_enabled: bool = False
    mix_window: int = 1
    tally_date: str = "tally-date"
    credentials_per_voter: int = 1
    ring_cap: int | None = None
    security_tag: str = "pv-election-v1"

    def __post_init__(self):
        if self.num_voters < 1:
            raise ValueError("at least one voter required")
        if len(self.candidates) < 2:
            raise ValueError("at least two candidates required")
        if len(set(self.candidates)) != len(self.candidates):
            raise ValueError("candidate identifiers must be unique")
        if self.mix_window < 1:
            raise ValueError("mix window must be >= 1")
        if self.credentials_per_voter < 1:
            raise ValueError("credentials per voter must be >= 1")
        if self.ring_cap is not None and self.ring_cap < 1:
            raise ValueError("ring cap must be >= 1 when set")


@dataclass(frozen=True)
class Credential:
    """Pseudonym public key plus the administrator's ring signature on it."""

    pubkey: kp_pre.PrePublicKey
    sig: mdvs.MdvsSignature

    def to_bytes(self) -> bytes:
        return self.pubkey.to_bytes() + self.sig.to_bytes()

    @classmethod
    def from_bytes(cls, buf: bytes) -> "Credential":
        pk = kp_pre.PrePublicKey.from_bytes(buf[:kp_pre.PUBKEY_LEN])
        sig = mdvs.MdvsSignature.from_bytes(buf[kp_pre.PUBKEY_LEN:])
        return cls(pk, sig)

    def digest(self) -> bytes:
        return hashlib.sha256(self.to_bytes()).digest()


@dataclass(frozen=True)
class BallotMessage:
    ballot: kp_pre.ReKey
    cred_hash: bytes

    def __post_init__(self):
        if len(self.cred_hash) != CRED_HASH_LEN:
            raise ValueError("credential hash must be 32 bytes")

    def to_bytes(self) -> bytes:
        return self.ballot.to_bytes() + self.cred_hash

    @classmethod
    def from_bytes(cls, buf: bytes) -> "BallotMessage":
        return cls(kp_pre.ReKey.from_bytes(buf[:kp_pre.REKEY_LEN]),
                   buf[kp_pre.REKEY_LEN:])


@dataclass(frozen=True)
class VotingTransaction:
    delta: kp_pre.CiphertextL1
    stp: int
    commitment: "env.Commitment | None" = None

    def to_bytes(self) -> bytes:
        out = self.delta.to_bytes() + self.stp.to_bytes(8, "big")
        if self.commitment is None:
            return out + b"\x00"
        return out + b"\x01" + self.commitment.to_bytes()

    @classmethod
    def from_bytes(cls, buf: bytes) -> "VotingTransaction":
        delta = kp_pre.CiphertextL1.from_bytes(buf[:kp_pre.CT1_LEN])
        stp = int.from_bytes(buf[kp_pre.CT1_LEN:kp_pre.CT1_LEN + 8], "big")
        flag = buf[kp_pre.CT1_LEN + 8]
        commitment = None
        if flag == 1:
            commitment = env.Commitment.from_bytes(buf[kp_pre.CT1_LEN + 9:])
        return cls(delta, stp, commitment)


@dataclass
class CredentialRow:
    credential: Credential
    used: bool = False


class CredentialTable:
    """Hash-keyed roster of issued credentials with one-way used flags."""

    def __init__(self):
        self.rows = {}

    def insert(self, credential: Credential):
        self.rows[credential.digest()] = CredentialRow(credential)

    def lookup(self, cred_hash: bytes) -> "CredentialRow | None":
        return self.rows.get(cred_hash)

    def mark_used(self, cred_hash: bytes):
        row = self.rows[cred_hash]
        if row.used:
            raise ProtocolError("credential already used; flag flips only once")
        row.used = True

    def __len__(self):
        return len(self.rows)


@dataclass
class TallyReport:
    counts: dict
    total_valid: int
    rejected: dict
    unopened: int

    def to_json(self) -> str:
        return json.dumps({
            "counts": self.counts,
            "total_valid": self.total_valid,
            "rejected": self.rejected,
            "unopened": self.unopened,
        }, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "TallyReport":
        d = json.loads(text)
        return cls(d["counts"], d["total_valid"], d["rejected"], d["unopened"])


# board payload helpers ------------------------------------------------------

def _encode_id(cid: str) -> bytes:
    raw = cid.encode()
    return len(raw).to_bytes(1, "big") + raw


def _decode_id(buf: bytes):
    n = buf[0]
    return buf[1:1 + n].decode(), buf[1 + n:]


# ---------------------------------------------------------------------------
# entities
# ---------------------------------------------------------------------------

class Administrator:
    """Election holder: sets up parameters, issues credentials, triggers phases."""

    def __init__(self, ctx: GroupContext, cfg: ElectionConfig, rng=None):
        self.ctx = ctx
        self.cfg = cfg
        self.rng = rng
        self.counter = OpCounter()
        with ctx.record(self.counter):
            self.pre_keys = kp_pre.keygen(ctx, rng)
            self.dv_keys = mdvs.dv_keygen(ctx, rng)
        self.voter_roster = []        # (pre_pub, dv_pub) per registered voter
        self.rekey_list = {}          # voter index -> ReKey towards that voter
        self.issued = []              # credentials, issue order

    def register_voters(self, roster):
        self.voter_roster = list(roster)

    def publish_setup(self, board: BoardState):
        if len(board) != 0:
            raise ProtocolError("S1: setup requires a fresh board")
        board.append("setup", "phase", b"setup")
        board.append("setup", "params", self.ctx.params_bytes())
        cert_body = self.dv_keys.y.to_bytes() + self.pre_keys.public.to_bytes()
        with self.ctx.record(self.counter):
            cert_sig = mdvs.schnorr_sign(self.dv_keys.x, cert_body, self.ctx, self.rng)
        board.append("setup", "admin-cert", cert_body + cert_sig.to_bytes())
        board.append("setup", "hash-spec", b"sha-256")
        for j, (pre_pub, _dv_pub) in enumerate(self.voter_roster):
            with self.ctx.record(self.counter):
                rk = kp_pre.rekeygen(self.pre_keys, pre_pub, self.ctx, self.rng)
            self.rekey_list[j] = rk
            board.append("setup", "rekey-list", j.to_bytes(4, "big") + rk.to_bytes())

    def _signing_ring(self):
        dv_keys = [dv for _pre, dv in self.voter_roster]
        cap = self.cfg.ring_cap
        if cap is not None and cap < len(dv_keys):
            dv_keys = self.rng.sample(dv_keys, cap) if self.rng else dv_keys[:cap]
        return (self.dv_keys.y, *dv_keys)

    def issue_credential(self):
        """C1-C3: mint a pseudonym key pair, sign it, envelope it to self."""
        with self.ctx.record(self.counter):
            sk_short = kp_pre.keygen(self.ctx, self.rng)
            ring = self._signing_ring()
            sig = mdvs.mdvs_sign(self.dv_keys.x, ring,
                                 sk_short.public.to_bytes(), self.ctx, self.rng)
            credential = Credential(sk_short.public, sig)
            payload = sk_short.to_bytes() + credential.to_bytes()
            sealed = env.hybrid_enc(self.pre_keys.public, payload, self.ctx, self.rng)
        self.issued.append(credential)
        return sealed

    def pack_roster(self, proxy_pub: kp_pre.PrePublicKey) -> env.HybridCiphertext:
        """Encrypt the full credential list for the proxy's table."""
        blob = bytearray(len(self.issued).to_bytes(4, "big"))
        for cred in self.issued:
            raw = cred.to_bytes()
            blob += len(raw).to_bytes(4, "big") + raw
        with self.ctx.record(self.counter):
            return env.hybrid_enc(proxy_pub, bytes(blob), self.ctx, self.rng)

    def open_phase(self, board: BoardState, phase: str):
        board.append(phase, "phase", phase.encode())

    def trigger_tally(self, board: BoardState):
        board.append("tally", "phase", b"tally")
        board.append("tally", "tally-trigger", self.cfg.tally_date.encode())


class Proxy:
    """Honest-but-curious dispatcher and ballot processor."""

    def __init__(self, ctx: GroupContext, cfg: ElectionConfig, rng=None):
        self.ctx = ctx
        self.cfg = cfg
        self.rng = rng
        self.counter = OpCounter()
        with ctx.record(self.counter):
            self.pre_keys = kp_pre.keygen(ctx, rng)
        self.rekey_list = {}
        self.table = CredentialTable()
        self.rejections = {}          # reason -> count, proxy-local
        self._assign_pool = []        # unused voter indices for dispatching
        self._stp = None
        self._stp_base = None
        self.commit_key = None
        if cfg.audit_enabled:
            self.commit_key = (bytes(rng.randrange(256) for _ in range(32))
                               if rng is not None else _secrets.token_bytes(32))
        self._suppress_hashes = set()  # adversarial-scenario seam

    # -- dispatching ---------------------------------------------------------

    def load_rekeys(self, board: BoardState):
        for entry in board.query(kind="rekey-list"):
            j = int.from_bytes(entry.payload[:4], "big")
            self.rekey_list[j] = kp_pre.ReKey.from_bytes(entry.payload[4:])
        self._assign_pool = [j for j in range(self.cfg.num_voters)
                             for _ in range(self.cfg.credentials_per_voter)]

    def dispatch(self, sealed: env.HybridCiphertext):
        """C5-C7: re-encrypt a credential envelope to a random unused voter.

        Returns (voter_index, envelope) or (None, None) when the incoming
        envelope fails the re-encryption validity check.
        """
        if not self._assign_pool:
            raise ProtocolError("C5: more credentials than voter slots")
        pick = (self.rng.randrange(len(self._assign_pool)) if self.rng is not None
                else _secrets.randbelow(len(self._assign_pool)))
        j = self._assign_pool[pick]
        with self.ctx.record(self.counter):
            out = env.hybrid_reenc(self.rekey_list[j], sealed, self.ctx, self.rng)
        if out is None:
            self._reject("reenc-reject-dispatch")
            return None, None
        self._assign_pool.pop(pick)
        return j, out

    def install_roster(self, sealed: env.HybridCiphertext):
        with self.ctx.record(self.counter):
            blob = env.hybrid_dec(self.pre_keys, sealed, self.ctx)
        count = int.from_bytes(blob[:4], "big")
        off = 4
        for _ in range(count):
            n = int.from_bytes(blob[off:off + 4], "big")
            off += 4
            self.table.insert(Credential.from_bytes(blob[off:off + n]))
            off += n

    # -- ballot processing -----------------------------------------------------

    def begin_casting(self, board: BoardState):
        if self._stp_base is None:
            if self.rng is not None:
                self._stp_base = 1_600_000_000 + self.rng.randrange(1_000_000)
            else:
                self._stp_base = int(time.time())
        self._stp = self._stp_base
        board.append("cast", "stp-base", self._stp_base.to_bytes(8, "big"))

    def _reject(self, reason: str):
        self.rejections[reason] = self.rejections.get(reason, 0) + 1

    def process_ballot(self, board: BoardState, message: BallotMessage):
        """B6-B9: validate the credential hash, encrypt a timestamp marker to
        the pseudonym, re-encrypt with the ballot, publish the transaction.

        Returns the board sequence number of the published transaction, or
        None with the rejection reason recorded locally.
        """
        row = self.table.lookup(message.cred_hash)
        if row is None:
            self._reject("reject-unknown-credential")
            return None
        if row.used:
            self._reject("reject-used-credential")
            return None
        if message.cred_hash in self._suppress_hashes:
            # malicious-proxy seam: swallow the ballot silently
            self.table.mark_used(message.cred_hash)
            self._stp += 1
            return None
        stp = self._stp
        with self.ctx.record(self.counter):
            marker = self.ctx.exp_gt(self.ctx.Z, stp)
            delta = kp_pre.enc2(row.credential.pubkey, marker, self.ctx, self.rng)
            delta_prime = kp_pre.reenc(message.ballot, delta, self.ctx, self.rng)
        if delta_prime is None:
            self._reject("reject-invalid-ballot")
            return None
        self.table.mark_used(message.cred_hash)
        self._stp += 1
        commitment = None
        if self.cfg.audit_enabled:
            commitment = env.commit(self.commit_key,
                                    row.credential.to_bytes())
        txn = VotingTransaction(delta_prime, stp, commitment)
        return board.append("cast", "transaction", txn.to_bytes())

    def publish_rejection_summary(self, board: BoardState):
        payload = json.dumps(self.rejections, sort_keys=True).encode()
        board.append("cast", "rejection-summary", payload)

    def publish_commit_key(self, board: BoardState, override: "bytes | None" = None):
        key = override if override is not None else self.commit_key
        board.append("audit", "commit-key", key)


class Voter:
    """Holds long-term keys, receives a pseudonym credential, casts a ballot."""

    def __init__(self, ctx: GroupContext, index: int, rng=None):
        self.ctx = ctx
        self.index = index
        self.rng = rng
        self.counter = OpCounter()
        with ctx.record(self.counter):
            self.pre_keys = kp_pre.keygen(ctx, rng)
            self.dv_keys = mdvs.dv_keygen(ctx, rng)
        self.inbox = []               # sealed credential envelopes
        self.credentials = []         # (short-term keypair, Credential)
        self._spent = set()           # locally spent credential slots
        self.denounced = False

    @property
    def public_identity(self):
        return (self.pre_keys.public, self.dv_keys.y)

    def receive(self, sealed: env.HybridCiphertext):
        self.inbox.append(sealed)

    def unwrap_credentials(self):
        """B1-B2 for every delivered envelope; aborts on a bad signature."""
        while self.inbox:
            sealed = self.inbox.pop(0)
            with self.ctx.record(self.counter):
                try:
                    payload = env.hybrid_dec(self.pre_keys, sealed, self.ctx)
                except env.EnvelopeReject as exc:
                    self.denounced = True
                    raise CredentialAbort(f"B1: {exc.reason}") from None
                sk_short = kp_pre.PreKeyPair.from_bytes(payload[:kp_pre.KEYPAIR_LEN])
                credential = Credential.from_bytes(payload[kp_pre.KEYPAIR_LEN:])
                ok = mdvs.mdvs_verify(credential.sig,
                                      credential.pubkey.to_bytes(), self.ctx)
            if not ok:
                self.denounced = True
                raise CredentialAbort("B2: invalid-credential")
            self.credentials.append((sk_short, credential))
        return self.credentials

    def _next_unspent_slot(self) -> int:
        for i in range(len(self.credentials)):
            if i not in self._spent:
                return i
        raise ProtocolError("B3: voter has no unspent credential")

    def make_ballot(self, candidate_pub: kp_pre.PrePublicKey,
                    slot: "int | None" = None) -> BallotMessage:
        """B3-B4: ballot = rekey(pseudonym -> candidate) plus credential hash.

        ``slot`` defaults to the next locally unspent credential; passing an
        explicit slot reuses that credential (the double-cast case).
        """
        if not self.credentials:
            raise ProtocolError("B3: voter holds no verified credential")
        if slot is None:
            slot = self._next_unspent_slot()
        self._spent.add(slot)
        sk_short, credential = self.credentials[slot]
        with self.ctx.record(self.counter):
            ballot = kp_pre.rekeygen(sk_short, candidate_pub, self.ctx, self.rng)
        return BallotMessage(ballot, credential.digest())

    def peek_credential(self, slot: "int | None" = None):
        """(slot, credential) that the next cast would use, without spending."""
        if slot is None:
            slot = self._next_unspent_slot()
        return slot, self.credentials[slot][1]

    def make_forged_ballot(self, fake_keys: kp_pre.PreKeyPair,
                           fake_credential: Credential,
                           candidate_pub: kp_pre.PrePublicKey) -> BallotMessage:
        """Ballot backed by a self-made credential (coercion-defence traffic)."""
        with self.ctx.record(self.counter):
            ballot = kp_pre.rekeygen(fake_keys, candidate_pub, self.ctx, self.rng)
        return BallotMessage(ballot, fake_credential.digest())

    def forge_credential(self, admin_dv_pub, roster_dv_keys,
                         ring_cap: "int | None" = None):
        """Coercion defence: fabricate a credential that verifies but was
        never issued.  The forged signature uses this voter's verifier slot."""
        keys = list(roster_dv_keys)
        if ring_cap is not None and ring_cap < len(keys):
            others = [y for y in keys if y != self.dv_keys.y]
            sampled = self.rng.sample(others, ring_cap - 1) if self.rng \
                else others[:ring_cap - 1]
            keys = sampled + [self.dv_keys.y]
        ring = (admin_dv_pub, *keys)
        my_slot = ring.index(self.dv_keys.y)
        with self.ctx.record(self.counter):
            fake_keys = kp_pre.keygen(self.ctx, self.rng)
            sig = mdvs.mdvs_forge(self.dv_keys.x, my_slot, ring,
                                  fake_keys.public.to_bytes(), self.ctx, self.rng)
        return fake_keys, Credential(fake_keys.public, sig)

    def audit_verdict(self, board: BoardState, commit_key: bytes,
                      credential: Credential) -> str:
        expected = env.commit(commit_key, credential.to_bytes())
        for entry in board.query(kind="transaction"):
            txn = VotingTransaction.from_bytes(entry.payload)
            if txn.commitment is not None and txn.commitment == expected:
                return "verified"
        return "missing"


class Candidate:
    """Opens its own transactions as they appear; publishes its key at tally."""

    def __init__(self, ctx: GroupContext, candidate_id: str, rng=None):
        self.ctx = ctx
        self.candidate_id = candidate_id
        self.rng = rng
        self.counter = OpCounter()
        with ctx.record(self.counter):
            self.pre_keys = kp_pre.keygen(ctx, rng)
        self.running_count = 0
        self._mark = None
        self._mark_stp = None
        self._opened_seqs = set()

    def publish_key(self, board: BoardState):
        board.append("setup", "candidate-key",
                     _encode_id(self.candidate_id) + self.pre_keys.public.to_bytes())

    def observe_stp_base(self, base: int):
        """One-time marker bootstrap; later markers advance by multiplication."""
        with self.ctx.record(self.counter):
            self._mark = self.ctx.exp_gt(self.ctx.Z, base)
        self._mark_stp = base

    def _marker_for(self, stp: int):
        if self._mark is None or stp < self._mark_stp:
            raise ProtocolError("candidate missed the timestamp base entry")
        while self._mark_stp < stp:
            self._mark = self._mark * self.ctx.Z
            self._mark_stp += 1
        return self._mark

    def open_transaction(self, txn: VotingTransaction) -> bool:
        """Decrypt with own key; count iff the marker matches (exactly one
        target-group exponentiation, the decryption itself)."""
        marker = self._marker_for(txn.stp)
        with self.ctx.record(self.counter):
            plain = kp_pre.dec1(self.pre_keys, txn.delta, self.ctx)
        if plain == marker:
            self.running_count += 1
            return True
        return False

    def open_entry(self, entry) -> bool:
        """Open one board entry exactly once; repeat calls are no-ops."""
        if entry.seq in self._opened_seqs:
            return False
        self._opened_seqs.add(entry.seq)
        return self.open_transaction(VotingTransaction.from_bytes(entry.payload))

    def open_new_transactions(self, board: BoardState) -> int:
        """Scan the board for unseen transactions; returns how many matched."""
        matched = 0
        for entry in board.query(kind="transaction"):
            if self.open_entry(entry):
                matched += 1
        return matched

    def publish_secret(self, board: BoardState):
        board.append("tally", "candidate-secret",
                     _encode_id(self.candidate_id)
                     + scalar_to_bytes(self.pre_keys.sk1)
                     + scalar_to_bytes(self.pre_keys.sk2))


class MixChannel:
    """Identity-stripping batch shuffle standing in for an anonymous channel."""

    def __init__(self, board: BoardState, window: int, rng=None):
        self.board = board
        self.window = window
        self.rng = rng
        self._queue = []
        self.released = 0

    def submit(self, message: BallotMessage):
        self._queue.append(message.to_bytes())
        if len(self._queue) >= self.window:
            self._release()

    def _release(self):
        batch = self._queue
        self._queue = []
        if self.rng is not None:
            self.rng.shuffle(batch)
        else:
            import secrets as _secrets
            _secrets.SystemRandom().shuffle(batch)
        for raw in batch:
            self.board.append("cast", "ballot", raw)
            self.released += 1

    def flush(self):
        if self._queue:
            self._release()


# ---------------------------------------------------------------------------
# tally script and audit
# ---------------------------------------------------------------------------

def _load_candidate_secrets(board: BoardState):
    secrets_by_id = {}
    for entry in board.query(kind="candidate-secret"):
        cid, rest = _decode_id(entry.payload)
        sk1 = scalar_from_bytes(rest[:32])
        sk2 = scalar_from_bytes(rest[32:64])
        secrets_by_id[cid] = (sk1, sk2)
    return secrets_by_id


def _candidate_ids(board: BoardState):
    ids = []
    for entry in board.query(kind="candidate-key"):
        cid, _ = _decode_id(entry.payload)
        ids.append(cid)
    return ids


def run_tally_script(board: BoardState, ctx: GroupContext,
                     publish: bool = True) -> TallyReport:
    """Count every transaction from board contents alone.

    A transaction is assigned to the unique candidate whose published secret
    decrypts it to its timestamp marker; transactions no published key opens
    are reported unopened.  Two keys matching one transaction is treated as
    a fatal inconsistency.
    """
    candidate_ids = _candidate_ids(board)
    secrets_by_id = _load_candidate_secrets(board)
    keypairs = {}
    for cid, (sk1, sk2) in secrets_by_id.items():
        with ctx.uncounted():
            keypairs[cid] = kp_pre.PreKeyPair(
                sk1, sk2, ctx.exp_gt(ctx.Z, sk1), ctx.exp_g1(ctx.g, sk2))
    base_entries = board.query(kind="stp-base")
    counts = {cid: 0 for cid in candidate_ids}
    unopened = 0
    txns = board.query(kind="transaction")
    mark = None
    mark_stp = None
    if txns and base_entries:
        base = int.from_bytes(base_entries[0].payload, "big")
        mark = ctx.exp_gt(ctx.Z, base)
        mark_stp = base
    for entry in txns:
        txn = VotingTransaction.from_bytes(entry.payload)
        if mark is None or txn.stp < mark_stp:
            raise ProtocolError("tally: transaction precedes the timestamp base")
        while mark_stp < txn.stp:
            mark = mark * ctx.Z
            mark_stp += 1
        owner = None
        for cid, keys in keypairs.items():
            if kp_pre.dec1(keys, txn.delta, ctx) == mark:
                if owner is not None:
                    raise AmbiguousTransactionError(
                        f"transaction {entry.seq} opens for both {owner} and {cid}")
                owner = cid
        if owner is None:
            unopened += 1
        else:
            counts[owner] += 1
    rejected = {}
    summary = board.query(kind="rejection-summary")
    if summary:
        rejected = json.loads(summary[0].payload.decode())
    report = TallyReport(counts, sum(counts.values()), rejected, unopened)
    if publish:
        board.append("tally", "tally-result", report.to_json().encode())
    return report


def run_audit(board: BoardState, proxy: Proxy, participants,
              override_key: "bytes | None" = None) -> dict:
    """Audit phase: reveal the commitment key, collect per-voter verdicts,
    append one claim entry per voter whose ballot is not accounted for.

    ``participants`` maps voter index -> list of credentials that voter cast
    with; the verdict is "verified" only when every one of them is committed
    to by some published transaction.
    """
    if not proxy.cfg.audit_enabled:
        raise ProtocolError("audit phase requires audit_enabled")
    proxy.publish_commit_key(board, override_key)
    published_key = board.query(kind="commit-key")[-1].payload
    on_board = set()
    for entry in board.query(kind="transaction"):
        txn = VotingTransaction.from_bytes(entry.payload)
        if txn.commitment is not None:
            on_board.add(txn.commitment.digest)
    verdicts = {}
    for voter, credentials in sorted(participants.items()):
        missing = [c for c in credentials
                   if env.commit(published_key, c.to_bytes()).digest not in on_board]
        if not missing:
            verdicts[voter] = "verified"
            continue
        verdicts[voter] = "missing"
        for credential in missing:
            expected = env.commit(published_key, credential.to_bytes())
            claim = json.dumps({
                "voter": voter,
                "expected_commitment": expected.to_bytes().hex(),
            }, sort_keys=True).encode()
            board.append("audit", "claim", claim)
    return verdicts


def rebuild_context(board: BoardState) -> GroupContext:
    """Reconstruct the group context from the board's params entry."""
    params = board.query(kind="params")
    if not params:
        raise ProtocolError("board has no params entry")
    return context_from_params(params[0].payload)
