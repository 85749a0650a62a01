"""Hash-chained, append-only bulletin board with on-disk persistence.

The board is the protocol's single broadcast medium: every published
message becomes one chained entry.  Tampering with any stored entry breaks
the chain from that point on; truncating the tail is detectable only
against an externally remembered head hash, which callers should record
out of band (``BoardState.head_hash``).

Entries carry a phase label; phases may only move forward through
setup -> dispatch -> cast -> open -> tally -> audit, so a board is also a
record of the election's progression.

File format (version header + one entry per line, tab separated):

    pv-board v1
    <seq>\t<phase>\t<kind>\t<payload base64>\t<prev hash hex>\t<entry hash hex>

Hashing is SHA-256 over
``seq_8B || phase || 0x00 || kind || 0x00 || len(payload)_4B || payload || prev_hash``;
entry 0 chains from a fixed genesis constant.
"""

from __future__ import annotations

import base64
import hashlib
from dataclasses import dataclass, field

PHASES = ("setup", "dispatch", "cast", "open", "tally", "audit")
GENESIS = hashlib.sha256(b"pv-board-genesis-v1").digest()
MAX_PAYLOAD = 1 << 20
_FILE_HEADER = "pv-board v1"


class BulletinError(Exception):
    pass


def _entry_hash(seq: int, phase: str, kind: str, payload: bytes, prev_hash: bytes) -> bytes:
    h = hashlib.sha256()
    h.update(seq.to_bytes(8, "big"))
    h.update(phase.encode())
    h.update(b"\x00")
    h.update(kind.encode())
    h.update(b"\x00")
    h.update(len(payload).to_bytes(4, "big"))
    h.update(payload)
    h.update(prev_hash)
    return h.digest()


@dataclass(frozen=True)
class BulletinEntry:
    seq: int
    phase: str
    kind: str
    payload: bytes
    prev_hash: bytes
    entry_hash: bytes


@dataclass
class BoardState:
    """Append-only entry list; nothing in the public API mutates history."""

    entries: list = field(default_factory=list)

    @property
    def head_hash(self) -> bytes:
        return self.entries[-1].entry_hash if self.entries else GENESIS

    def __len__(self) -> int:
        return len(self.entries)

    def append(self, phase: str, kind: str, payload: bytes) -> int:
        if phase not in PHASES:
            raise BulletinError(f"unknown phase {phase!r}")
        if len(payload) > MAX_PAYLOAD:
            raise BulletinError("payload exceeds 1 MiB limit")
        if self.entries:
            latest = max(PHASES.index(e.phase) for e in self.entries)
            if PHASES.index(phase) < latest:
                raise BulletinError(
                    f"phase regression: {phase!r} after {PHASES[latest]!r} began")
        seq = len(self.entries)
        prev = self.head_hash
        entry = BulletinEntry(seq, phase, kind, bytes(payload), prev,
                              _entry_hash(seq, phase, kind, payload, prev))
        self.entries.append(entry)
        return seq

    def verify_chain(self):
        """(True, None) when every hash and link recomputes; else (False, seq)."""
        prev = GENESIS
        latest_phase = 0
        for i, e in enumerate(self.entries):
            if e.seq != i or e.phase not in PHASES:
                return False, i
            idx = PHASES.index(e.phase)
            if idx < latest_phase:
                return False, i
            latest_phase = max(latest_phase, idx)
            if e.prev_hash != prev:
                return False, i
            if e.entry_hash != _entry_hash(e.seq, e.phase, e.kind, e.payload, e.prev_hash):
                return False, i
            prev = e.entry_hash
        return True, None

    def query(self, phase: str | None = None, kind: str | None = None):
        """Order-preserving filtered view."""
        return [e for e in self.entries
                if (phase is None or e.phase == phase)
                and (kind is None or e.kind == kind)]

    def persist(self, path) -> None:
        lines = [_FILE_HEADER]
        for e in self.entries:
            lines.append("\t".join((
                str(e.seq), e.phase, e.kind,
                base64.b64encode(e.payload).decode(),
                e.prev_hash.hex(), e.entry_hash.hex())))
        with open(path, "w", encoding="ascii") as fh:
            fh.write("\n".join(lines))
            if lines:
                fh.write("\n")


def load(path) -> BoardState:
    """Parse and chain-verify a persisted board; errors name the bad line."""
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read()
    if not text.strip():
        return BoardState()
    lines = text.splitlines()
    if lines[0] != _FILE_HEADER:
        raise BulletinError(f"line 1: expected header {_FILE_HEADER!r}")
    board = BoardState()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 6:
            raise BulletinError(f"line {lineno}: expected 6 fields, got {len(parts)}")
        try:
            entry = BulletinEntry(
                int(parts[0]), parts[1], parts[2],
                base64.b64decode(parts[3], validate=True),
                bytes.fromhex(parts[4]), bytes.fromhex(parts[5]))
        except (ValueError, base64.binascii.Error) as exc:
            raise BulletinError(f"line {lineno}: {exc}") from None
        board.entries.append(entry)
    ok, bad = board.verify_chain()
    if not ok:
        raise BulletinError(f"chain verification failed at entry {bad} "
                            f"(line {bad + 2})")
    return board
