"""Hybrid encryption over the PRE scheme, plus the audit bit commitment.

The PRE plaintext space is the pairing target group, so structured payloads
(key material, credentials) ride in a KEM-DEM envelope: the KEM encapsulates
a random target-group element through the re-encryptable scheme and the DEM
is ChaCha20-Poly1305 under a key derived from that element.  Re-encryption
touches only the KEM part, which is exactly what lets the proxy re-address
an envelope without seeing the payload.

The DEM key and nonce are both derived from the encapsulated element, so a
fresh KEM secret per message keeps nonces unique while leaving envelopes
byte-reproducible under a seeded randomness source.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import ChaCha20Poly1305

from . import kp_pre
from .groups import GroupContext, GroupError, GTElement, rand_nonzero_scalar

_AAD = b"pv-hybrid-v1"
MAX_PAYLOAD = 1 << 20


class EnvelopeReject(Exception):
    """Decryption rejected; ``reason`` is 'kem-invalid' or 'dem-auth-failed'."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class HybridCiphertext:
    kem: object  # CiphertextL2 or CiphertextL1, matching level
    dem: bytes
    level: int

    def to_bytes(self) -> bytes:
        kem_bytes = self.kem.to_bytes()
        return (bytes([self.level]) + kem_bytes
                + len(self.dem).to_bytes(4, "big") + self.dem)

    @classmethod
    def from_bytes(cls, buf: bytes) -> "HybridCiphertext":
        if not buf:
            raise GroupError("empty envelope")
        level = buf[0]
        if level == 2:
            kem_len = kp_pre.CT2_LEN
            parser = kp_pre.CiphertextL2.from_bytes
        elif level == 1:
            kem_len = kp_pre.CT1_LEN
            parser = kp_pre.CiphertextL1.from_bytes
        else:
            raise GroupError("bad envelope level tag")
        kem = parser(buf[1:1 + kem_len])
        dem_len = int.from_bytes(buf[1 + kem_len:5 + kem_len], "big")
        dem = buf[5 + kem_len:]
        if len(dem) != dem_len:
            raise GroupError("envelope length mismatch")
        return cls(kem, dem, level)


def _dem_keys(shared: GTElement):
    material = shared.to_bytes()
    key = hashlib.sha256(b"dem-key|" + material).digest()
    nonce = hashlib.sha256(b"dem-nonce|" + material).digest()[:12]
    return key, nonce


def hybrid_enc(pk: kp_pre.PrePublicKey, payload: bytes, ctx: GroupContext,
               rng=None) -> HybridCiphertext:
    """Encrypt an arbitrary payload re-encryptably under ``pk``."""
    if not payload:
        raise ValueError("payload must be non-empty")
    if len(payload) > MAX_PAYLOAD:
        raise ValueError("payload too large")
    shared = ctx.exp_gt(ctx.Z, rand_nonzero_scalar(rng))
    kem = kp_pre.enc2(pk, shared, ctx, rng)
    key, nonce = _dem_keys(shared)
    dem = ChaCha20Poly1305(key).encrypt(nonce, payload, _AAD)
    return HybridCiphertext(kem, dem, 2)


def hybrid_reenc(rk: kp_pre.ReKey, c: HybridCiphertext, ctx: GroupContext,
                 rng=None) -> "HybridCiphertext | None":
    """Re-address an envelope; None when the level or validity check fails."""
    if c.level != 2:
        return None
    kem = kp_pre.reenc(rk, c.kem, ctx, rng)
    if kem is None:
        return None
    return HybridCiphertext(kem, c.dem, 1)


def hybrid_dec(sk: kp_pre.PreKeyPair, c: HybridCiphertext,
               ctx: GroupContext) -> bytes:
    """Open an envelope at either level; raises :class:`EnvelopeReject`."""
    if c.level == 2:
        shared = kp_pre.dec2(sk, c.kem, ctx)
        if shared is None:
            raise EnvelopeReject("kem-invalid")
    else:
        shared = kp_pre.dec1(sk, c.kem, ctx)
    key, nonce = _dem_keys(shared)
    try:
        return ChaCha20Poly1305(key).decrypt(nonce, c.dem, _AAD)
    except (InvalidTag, ValueError):
        raise EnvelopeReject("dem-auth-failed") from None


# ---------------------------------------------------------------------------
# bit commitment for the individual-verifiability extension
# ---------------------------------------------------------------------------

COMMITMENT_LEN = 32


@dataclass(frozen=True)
class Commitment:
    digest: bytes

    def to_bytes(self) -> bytes:
        return self.digest

    @classmethod
    def from_bytes(cls, buf: bytes) -> "Commitment":
        if len(buf) != COMMITMENT_LEN:
            raise GroupError("commitment must be 32 bytes")
        return cls(bytes(buf))


def commit(key: bytes, payload: bytes) -> Commitment:
    """Hash commitment H(key || payload); key is a fixed 32-byte secret."""
    if len(key) != 32:
        raise ValueError("commitment key must be 32 bytes")
    return Commitment(hashlib.sha256(key + payload).digest())


def verify_commit(c: Commitment, key: bytes, payload: bytes) -> bool:
    if len(key) != 32:
        return False
    return c.digest == hashlib.sha256(key + payload).digest()
