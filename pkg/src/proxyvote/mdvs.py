"""Multi-designated-verifier signatures as one-out-of-n OR proofs.

The administrator signs a credential towards the set of legal voters; the
signature convinces exactly the parties whose keys are in the ring, because
every one of them could have produced an identical-looking signature with
:func:`mdvs_forge`.  That forgeability is the protocol's coercion defence:
a coerced voter hands out a self-made credential that verifies fine but was
never issued.

Construction: Schnorr OR composition (Fiat-Shamir).  For ring keys
y_0..y_{n-1} the signer simulates every slot but its own with random
(challenge, response) pairs, commits honestly in its own slot, and splits
the hash of all commitments so that the challenges sum to it:

    a_l = g^{z_l} * y_l^{-c_l}            (recomputed by the verifier)
    sum(c_l) = H(ring, message, a_0..a_{n-1})   (mod group order)

Signer slot is ring[0] by convention; forgers occupy their own slot >= 1.
Verification is public (no verifier secret required); designated-verifier
semantics come from forgeability, not from a secret verification key.

A plain single-key Schnorr signature (the n=1 degenerate case) is included
for the administrator's self-signed certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groups import (
    G1Element,
    GroupContext,
    GroupError,
    hash_to_scalar,
    rand_scalar,
    rand_nonzero_scalar,
    scalar_to_bytes,
    scalar_from_bytes,
)

_TAG_MDVS = 0x21
_TAG_SCHNORR = 0x22
_CHALLENGE_DOMAIN = b"mdvs-or-proof-v1"
_SCHNORR_DOMAIN = b"schnorr-v1"


@dataclass(frozen=True)
class DvKeyPair:
    """Long-term signature key pair y = g^x."""

    x: int
    y: G1Element


def dv_keygen(ctx: GroupContext, rng=None) -> DvKeyPair:
    x = rand_nonzero_scalar(rng)
    return DvKeyPair(x, ctx.exp_g1(ctx.g, x))


@dataclass(frozen=True)
class MdvsSignature:
    challenges: tuple
    responses: tuple
    ring: tuple  # of G1Element, signer key first

    def to_bytes(self) -> bytes:
        n = len(self.ring)
        out = bytearray([_TAG_MDVS])
        out += n.to_bytes(2, "big")
        for y in self.ring:
            out += y.to_bytes()
        for c in self.challenges:
            out += scalar_to_bytes(c)
        for z in self.responses:
            out += scalar_to_bytes(z)
        return bytes(out)

    @classmethod
    def from_bytes(cls, buf: bytes) -> "MdvsSignature":
        if len(buf) < 3 or buf[0] != _TAG_MDVS:
            raise GroupError("bad signature encoding")
        n = int.from_bytes(buf[1:3], "big")
        if n < 2 or len(buf) != 3 + n * (33 + 32 + 32):
            raise GroupError("bad signature length")
        off = 3
        ring = tuple(G1Element.from_bytes(buf[off + 33 * i:off + 33 * (i + 1)])
                     for i in range(n))
        off += 33 * n
        challenges = tuple(scalar_from_bytes(buf[off + 32 * i:off + 32 * (i + 1)])
                           for i in range(n))
        off += 32 * n
        responses = tuple(scalar_from_bytes(buf[off + 32 * i:off + 32 * (i + 1)])
                          for i in range(n))
        return cls(challenges, responses, ring)


def _ring_challenge(ring, message: bytes, commitments) -> int:
    buf = bytearray()
    buf += len(ring).to_bytes(2, "big")
    for y in ring:
        buf += y.to_bytes()
    buf += len(message).to_bytes(4, "big")
    buf += message
    for a in commitments:
        buf += a.to_bytes()
    return hash_to_scalar(bytes(buf), domain=_CHALLENGE_DOMAIN)


def _or_sign(secret: int, real_index: int, ring, message: bytes,
             ctx: GroupContext, rng) -> MdvsSignature:
    n = len(ring)
    q = ctx.q
    challenges = [0] * n
    responses = [0] * n
    commitments = [None] * n
    with ctx.uncounted():
        # simulate every slot but the real one
        for l in range(n):
            if l == real_index:
                continue
            challenges[l] = rand_scalar(rng)
            responses[l] = rand_scalar(rng)
            commitments[l] = (ctx.exp_g1(ctx.g, responses[l])
                              * ctx.exp_g1(ring[l], q - challenges[l]))
        nonce = rand_nonzero_scalar(rng)
        commitments[real_index] = ctx.exp_g1(ctx.g, nonce)
        total = _ring_challenge(ring, message, commitments)
        c_real = (total - sum(challenges)) % q
        challenges[real_index] = c_real
        responses[real_index] = (nonce + c_real * secret) % q
    return MdvsSignature(tuple(challenges), tuple(responses), tuple(ring))


def mdvs_sign(x_signer: int, ring, message: bytes, ctx: GroupContext,
              rng=None) -> MdvsSignature:
    """Sign towards the designated-verifier ring; signer key must be ring[0]."""
    ring = tuple(ring)
    if len(ring) < 2:
        raise ValueError("ring must contain the signer and at least one verifier")
    with ctx.uncounted():
        if ctx.exp_g1(ctx.g, x_signer) != ring[0]:
            raise ValueError("signer secret does not match ring[0]")
    ctx.count_signature()
    return _or_sign(x_signer, 0, ring, message, ctx, rng)


def mdvs_forge(x_verifier: int, verifier_index: int, ring, message: bytes,
               ctx: GroupContext, rng=None) -> MdvsSignature:
    """Any designated verifier fabricates an indistinguishable signature."""
    ring = tuple(ring)
    if not 1 <= verifier_index < len(ring):
        raise ValueError("forger must occupy a verifier slot (index >= 1)")
    with ctx.uncounted():
        if ctx.exp_g1(ctx.g, x_verifier) != ring[verifier_index]:
            raise ValueError("forger secret does not match the claimed ring slot")
    ctx.count_signature()
    return _or_sign(x_verifier, verifier_index, ring, message, ctx, rng)


def mdvs_verify(sig: MdvsSignature, message: bytes, ctx: GroupContext) -> bool:
    """Publicly checkable OR-proof verification."""
    ctx.count_verification()
    n = len(sig.ring)
    if n < 2 or len(sig.challenges) != n or len(sig.responses) != n:
        return False
    q = ctx.q
    with ctx.uncounted():
        commitments = [
            ctx.exp_g1(ctx.g, sig.responses[l])
            * ctx.exp_g1(sig.ring[l], q - sig.challenges[l])
            for l in range(n)
        ]
        total = _ring_challenge(sig.ring, message, commitments)
    return sum(sig.challenges) % q == total


# ---------------------------------------------------------------------------
# plain Schnorr (administrator certificate)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SchnorrSignature:
    challenge: int
    response: int

    def to_bytes(self) -> bytes:
        return (bytes([_TAG_SCHNORR]) + scalar_to_bytes(self.challenge)
                + scalar_to_bytes(self.response))

    @classmethod
    def from_bytes(cls, buf: bytes) -> "SchnorrSignature":
        if len(buf) != 65 or buf[0] != _TAG_SCHNORR:
            raise GroupError("bad schnorr encoding")
        return cls(scalar_from_bytes(buf[1:33]), scalar_from_bytes(buf[33:]))


def schnorr_sign(x: int, message: bytes, ctx: GroupContext, rng=None) -> SchnorrSignature:
    ctx.count_signature()
    with ctx.uncounted():
        y = ctx.exp_g1(ctx.g, x)
        nonce = rand_nonzero_scalar(rng)
        a = ctx.exp_g1(ctx.g, nonce)
        c = hash_to_scalar(y.to_bytes() + a.to_bytes()
                           + len(message).to_bytes(4, "big") + message,
                           domain=_SCHNORR_DOMAIN)
    return SchnorrSignature(c, (nonce + c * x) % ctx.q)


def schnorr_verify(y: G1Element, message: bytes, sig: SchnorrSignature,
                   ctx: GroupContext) -> bool:
    ctx.count_verification()
    with ctx.uncounted():
        a = ctx.exp_g1(ctx.g, sig.response) * ctx.exp_g1(y, ctx.q - sig.challenge)
        c = hash_to_scalar(y.to_bytes() + a.to_bytes()
                           + len(message).to_bytes(4, "big") + message,
                           domain=_SCHNORR_DOMAIN)
    return c == sig.challenge
