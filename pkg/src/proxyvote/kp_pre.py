"""Single-use unidirectional key-private proxy re-encryption.

Pairing-based scheme over the shared :class:`~proxyvote.groups.GroupContext`:

    keygen      pk = (Z^a1, g^a2), sk = (a1, a2)
    rekeygen    rk(i->j) = ((g^{a_j2})^{a_i1 + r}, h^r, e(g^{a_j2}, h)^w, Z^w)
    enc2        c = (g^k, h^k, m * Z^{a_i1 k})            "second level"
    reenc       validity check e(alpha, h) = e(g, beta), then
                t1 = e(rk1, beta), t2 = gamma * e(alpha, rk2),
                re-randomized by w': (t1 * rk3^{w'}, t2 * rk4^{w'})
    dec2        m = gamma / e(alpha, h)^{a1} after the same validity check
    dec1        m = t2 / t1^{1/a2}

A re-encryption key leaks neither party's public key (key privacy), and a
first-level ciphertext cannot be re-encrypted again (single use).  The
re-randomization in reenc makes repeated re-encryptions of the same pair
mutually unlinkable while decrypting identically.

Rejection (the scheme's "outputs bottom and aborts") is a distinguishable
return value, ``None``, never an exception: the proxy's job is to log and
skip malformed inputs, not to crash.

All randomness comes from an injected ``rng`` (``random.Random`` interface);
the default is a system CSPRNG.  The keyword-only ``_blinding`` / ``_k`` /
``_w_prime`` arguments are test hooks that pin the sampled values and exist
so degenerate-randomness cases can be exercised; production callers must
not pass them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groups import (
    G1Element,
    G2Element,
    GroupContext,
    GroupError,
    GTElement,
    rand_nonzero_scalar,
    scalar_inv,
    scalar_to_bytes,
    scalar_from_bytes,
)

_TAG_PUBKEY = 0x10
_TAG_REKEY = 0x11
_TAG_CT2 = 0x12
_TAG_CT1 = 0x13
_TAG_KEYPAIR = 0x14

PUBKEY_LEN = 1 + 384 + 33
REKEY_LEN = 1 + 33 + 65 + 384 + 384
CT2_LEN = 1 + 33 + 65 + 384
CT1_LEN = 1 + 384 + 384
KEYPAIR_LEN = 1 + 32 + 32 + 384 + 33


@dataclass(frozen=True)
class PrePublicKey:
    """Public half of a PRE key pair: (pk1, pk2) = (Z^sk1, g^sk2)."""

    pk1: GTElement
    pk2: G1Element

    def to_bytes(self) -> bytes:
        return bytes([_TAG_PUBKEY]) + self.pk1.to_bytes() + self.pk2.to_bytes()

    @classmethod
    def from_bytes(cls, buf: bytes) -> "PrePublicKey":
        if len(buf) != PUBKEY_LEN or buf[0] != _TAG_PUBKEY:
            raise GroupError("bad PRE public key encoding")
        return cls(GTElement.from_bytes(buf[1:385]), G1Element.from_bytes(buf[385:]))


@dataclass(frozen=True)
class PreKeyPair:
    sk1: int
    sk2: int
    pk1: GTElement
    pk2: G1Element

    @property
    def public(self) -> PrePublicKey:
        return PrePublicKey(self.pk1, self.pk2)

    def to_bytes(self) -> bytes:
        return (bytes([_TAG_KEYPAIR]) + scalar_to_bytes(self.sk1)
                + scalar_to_bytes(self.sk2) + self.pk1.to_bytes() + self.pk2.to_bytes())

    @classmethod
    def from_bytes(cls, buf: bytes) -> "PreKeyPair":
        if len(buf) != KEYPAIR_LEN or buf[0] != _TAG_KEYPAIR:
            raise GroupError("bad PRE key pair encoding")
        return cls(
            scalar_from_bytes(buf[1:33]),
            scalar_from_bytes(buf[33:65]),
            GTElement.from_bytes(buf[65:449]),
            G1Element.from_bytes(buf[449:]),
        )


@dataclass(frozen=True)
class ReKey:
    """Re-encryption key; doubles as the ballot in the voting protocol."""

    r1: G1Element
    r2: G2Element
    r3: GTElement
    r4: GTElement

    def to_bytes(self) -> bytes:
        return (bytes([_TAG_REKEY]) + self.r1.to_bytes() + self.r2.to_bytes()
                + self.r3.to_bytes() + self.r4.to_bytes())

    @classmethod
    def from_bytes(cls, buf: bytes) -> "ReKey":
        if len(buf) != REKEY_LEN or buf[0] != _TAG_REKEY:
            raise GroupError("bad rekey encoding")
        return cls(
            G1Element.from_bytes(buf[1:34]),
            G2Element.from_bytes(buf[34:99]),
            GTElement.from_bytes(buf[99:483]),
            GTElement.from_bytes(buf[483:]),
        )


@dataclass(frozen=True)
class CiphertextL2:
    """Re-encryptable ciphertext (g^k, h^k, m * pk1^k)."""

    alpha: G1Element
    beta: G2Element
    gamma: GTElement

    def to_bytes(self) -> bytes:
        return (bytes([_TAG_CT2]) + self.alpha.to_bytes() + self.beta.to_bytes()
                + self.gamma.to_bytes())

    @classmethod
    def from_bytes(cls, buf: bytes) -> "CiphertextL2":
        if len(buf) != CT2_LEN or buf[0] != _TAG_CT2:
            raise GroupError("bad level-2 ciphertext encoding")
        return cls(
            G1Element.from_bytes(buf[1:34]),
            G2Element.from_bytes(buf[34:99]),
            GTElement.from_bytes(buf[99:]),
        )


@dataclass(frozen=True)
class CiphertextL1:
    """Re-encrypted ciphertext (Z^{a2 y}, m * Z^y); cannot be re-encrypted."""

    t1: GTElement
    t2: GTElement

    def to_bytes(self) -> bytes:
        return bytes([_TAG_CT1]) + self.t1.to_bytes() + self.t2.to_bytes()

    @classmethod
    def from_bytes(cls, buf: bytes) -> "CiphertextL1":
        if len(buf) != CT1_LEN or buf[0] != _TAG_CT1:
            raise GroupError("bad level-1 ciphertext encoding")
        return cls(GTElement.from_bytes(buf[1:385]), GTElement.from_bytes(buf[385:]))


def keygen(ctx: GroupContext, rng=None) -> PreKeyPair:
    """Fresh key pair with nonzero secrets (zero would break dec1's 1/a2)."""
    sk1 = rand_nonzero_scalar(rng)
    sk2 = rand_nonzero_scalar(rng)
    return PreKeyPair(sk1, sk2, ctx.exp_gt(ctx.Z, sk1), ctx.exp_g1(ctx.g, sk2))


def rekeygen(sk_i: PreKeyPair, pk_j: PrePublicKey, ctx: GroupContext,
             rng=None, *, _blinding=None) -> ReKey:
    """Delegation key i -> j from i's secret and j's public key."""
    if _blinding is None:
        r = rand_nonzero_scalar(rng)
        w = rand_nonzero_scalar(rng)
    else:
        r, w = _blinding
    r1 = ctx.exp_g1(pk_j.pk2, (sk_i.sk1 + r) % ctx.q)
    r2 = ctx.exp_g2(ctx.h, r)
    r3 = ctx.exp_gt(ctx.pair(pk_j.pk2, ctx.h), w)
    r4 = ctx.exp_gt(ctx.Z, w)
    return ReKey(r1, r2, r3, r4)


def enc2(pk_i: PrePublicKey, m: GTElement, ctx: GroupContext,
         rng=None, *, _k=None) -> CiphertextL2:
    """Second-level encryption of a target-group message."""
    k = rand_nonzero_scalar(rng) if _k is None else _k
    return CiphertextL2(
        ctx.exp_g1(ctx.g, k),
        ctx.exp_g2(ctx.h, k),
        m * ctx.exp_gt(pk_i.pk1, k),
    )


def _well_formed(c: CiphertextL2, ctx: GroupContext) -> "GTElement | None":
    """Validity check e(alpha, h) = e(g, beta); returns e(alpha, h) on success."""
    lhs = ctx.pair(c.alpha, ctx.h)
    rhs = ctx.pair(ctx.g, c.beta)
    return lhs if lhs == rhs else None


def reenc(rk: ReKey, c: CiphertextL2, ctx: GroupContext,
          rng=None, *, _w_prime=None) -> "CiphertextL1 | None":
    """Transform a second-level ciphertext; None signals the validity-check abort."""
    if not isinstance(c, CiphertextL2):
        raise TypeError("only second-level ciphertexts can be re-encrypted")
    if _well_formed(c, ctx) is None:
        return None
    t1 = ctx.pair(rk.r1, c.beta)
    t2 = c.gamma * ctx.pair(c.alpha, rk.r2)
    w_prime = rand_nonzero_scalar(rng) if _w_prime is None else _w_prime
    return CiphertextL1(
        t1 * ctx.exp_gt(rk.r3, w_prime),
        t2 * ctx.exp_gt(rk.r4, w_prime),
    )


def dec2(sk_i: PreKeyPair, c: CiphertextL2, ctx: GroupContext) -> "GTElement | None":
    """Decrypt a second-level ciphertext; None on validity-check failure."""
    mark = _well_formed(c, ctx)
    if mark is None:
        return None
    return c.gamma / ctx.exp_gt(mark, sk_i.sk1)


def dec1(sk_j: PreKeyPair, c: CiphertextL1, ctx: GroupContext) -> GTElement:
    """Decrypt a first-level ciphertext; always yields some element (no
    public validity predicate exists at this level)."""
    return c.t2 / ctx.exp_gt(c.t1, scalar_inv(sk_j.sk2))
