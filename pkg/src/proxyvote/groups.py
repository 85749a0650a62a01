"""Bilinear group abstraction over BN254 with canonical serialization.

The protocol is written against a symmetric-looking interface: one source
group G with two independent generators g and h, a target group GT and a
pairing e(.,.) with Z = e(g, h).  Internally this is realized on the
asymmetric BN254 (alt_bn128) curve by keeping powers of g in G1 and powers
of h in G2; every pairing in the schemes pairs a g-side element with an
h-side element, so the asymmetry never shows through the API.

Two interchangeable arithmetic backends provide the byte-level operations:
the GMP-backed C accelerator ``_fastcore`` (preferred) and the pure-Python
``_purecore`` fallback.

Canonical encodings (big-endian, fixed length):
    scalar      32 bytes
    G1 element  33 bytes compressed (flag byte + x); flag 0x00 = identity,
                0x02/0x03 = parity of y
    G2 element  65 bytes compressed (flag byte + x.a + x.b); sign bit is
                the parity of y.a, or of y.b when y.a = 0
    GT element 384 bytes (12 Fp coefficients, tower order low to high)
"""

from __future__ import annotations

import hashlib
import secrets
import threading
from contextlib import contextmanager
from dataclasses import dataclass

from gmpy2 import invert as _gmp_invert, mpz, powmod

try:
    from . import _fastcore as _core

    BACKEND = "fastcore"
except ImportError:  # pragma: no cover - depends on build environment
    from . import _purecore as _core

    BACKEND = "purecore"

_EXP_FIXED = getattr(_core, "fp12_exp_gt_fixed", None)

CURVE_NAME = "bn254"
FIELD_MODULUS = 21888242871839275222246405745257275088696311157297823662689037894645226208583
CURVE_ORDER = 21888242871839275222246405745257275088548364400416034343698204186575808495617

_P = FIELD_MODULUS
_Q = CURVE_ORDER
_G2_COFACTOR = 2 * _P - _Q  # order of the twist is q * (2p - q)

_G1_GEN_RAW = (1).to_bytes(32, "big") + (2).to_bytes(32, "big")
_G1_INF_RAW = b"\x00" * 64
_G2_INF_RAW = b"\x00" * 128
_GT_ONE_RAW = b"\x00" * 31 + b"\x01" + b"\x00" * 352

_sysrand = secrets.SystemRandom()


class GroupError(ValueError):
    """Malformed or non-canonical group element encoding."""


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------

def rand_scalar(rng=None) -> int:
    """Uniform scalar in [0, q)."""
    rng = rng or _sysrand
    return rng.randrange(_Q)


def rand_nonzero_scalar(rng=None) -> int:
    """Uniform scalar in [1, q); used for secret keys and blinding values."""
    rng = rng or _sysrand
    return rng.randrange(1, _Q)


def scalar_inv(x: int) -> int:
    if x % _Q == 0:
        raise ZeroDivisionError("no inverse of 0 mod group order")
    return int(_gmp_invert(mpz(x), mpz(_Q)))


def hash_to_scalar(data: bytes, domain: bytes = b"") -> int:
    """Deterministic scalar in [0, q); 512-bit digest keeps the bias negligible."""
    h = hashlib.sha512()
    h.update(len(domain).to_bytes(2, "big"))
    h.update(domain)
    h.update(data)
    return int.from_bytes(h.digest(), "big") % _Q


def scalar_to_bytes(x: int) -> bytes:
    return (x % _Q).to_bytes(32, "big")


def scalar_from_bytes(buf: bytes) -> int:
    if len(buf) != 32:
        raise GroupError("scalar must be 32 bytes")
    v = int.from_bytes(buf, "big")
    if v >= _Q:
        raise GroupError("scalar not reduced")
    return v


# ---------------------------------------------------------------------------
# operation counter
# ---------------------------------------------------------------------------

@dataclass
class OpCounter:
    """Counts the operations the cost model cares about.

    exp_g counts exponentiations on the source-group side (g-side and
    h-side alike); exp_gt counts target-group exponentiations; pairings
    counts pairing evaluations; sigs/vfys count signature operations as
    opaque units.
    """

    exp_g: int = 0
    exp_gt: int = 0
    pairings: int = 0
    sigs: int = 0
    vfys: int = 0

    def copy(self) -> "OpCounter":
        return OpCounter(self.exp_g, self.exp_gt, self.pairings, self.sigs, self.vfys)

    def __sub__(self, other: "OpCounter") -> "OpCounter":
        return OpCounter(
            self.exp_g - other.exp_g,
            self.exp_gt - other.exp_gt,
            self.pairings - other.pairings,
            self.sigs - other.sigs,
            self.vfys - other.vfys,
        )

    def __add__(self, other: "OpCounter") -> "OpCounter":
        return OpCounter(
            self.exp_g + other.exp_g,
            self.exp_gt + other.exp_gt,
            self.pairings + other.pairings,
            self.sigs + other.sigs,
            self.vfys + other.vfys,
        )

    def as_dict(self) -> dict:
        return {
            "exp_g": self.exp_g,
            "exp_gt": self.exp_gt,
            "pairings": self.pairings,
            "sigs": self.sigs,
            "vfys": self.vfys,
        }


# ---------------------------------------------------------------------------
# group elements
# ---------------------------------------------------------------------------

class G1Element:
    """Element of the g-side source group; immutable, bytes-backed."""

    __slots__ = ("raw",)

    def __init__(self, raw: bytes):
        self.raw = raw

    def __mul__(self, other: "G1Element") -> "G1Element":
        return G1Element(_core.g1_add(self.raw, other.raw))

    def inverse(self) -> "G1Element":
        return G1Element(_core.g1_neg(self.raw))

    def is_identity(self) -> bool:
        return self.raw == _G1_INF_RAW

    def __eq__(self, other) -> bool:
        return isinstance(other, G1Element) and self.raw == other.raw

    def __hash__(self):
        return hash(("g1", self.raw))

    def __repr__(self):
        return f"G1Element({self.to_bytes().hex()[:16]}...)"

    def to_bytes(self) -> bytes:
        if self.is_identity():
            return b"\x00" * 33
        x, y = self.raw[:32], int.from_bytes(self.raw[32:], "big")
        return bytes([0x02 | (y & 1)]) + x

    @classmethod
    def from_bytes(cls, buf: bytes) -> "G1Element":
        if len(buf) != 33:
            raise GroupError("G1 encoding must be 33 bytes")
        flag = buf[0]
        if flag == 0x00:
            if buf != b"\x00" * 33:
                raise GroupError("non-canonical G1 identity encoding")
            return cls(_G1_INF_RAW)
        if flag not in (0x02, 0x03):
            raise GroupError("bad G1 flag byte")
        x = int.from_bytes(buf[1:], "big")
        if x >= _P:
            raise GroupError("G1 x coordinate out of range")
        y = _sqrt_fp((x * x % _P) * x % _P + 3)
        if y is None:
            raise GroupError("G1 x coordinate not on curve")
        if (y & 1) != (flag & 1):
            y = _P - y
        return cls(x.to_bytes(32, "big") + y.to_bytes(32, "big"))


class G2Element:
    """Element of the h-side source group; immutable, bytes-backed."""

    __slots__ = ("raw",)

    def __init__(self, raw: bytes):
        self.raw = raw

    def __mul__(self, other: "G2Element") -> "G2Element":
        return G2Element(_core.g2_add(self.raw, other.raw))

    def inverse(self) -> "G2Element":
        return G2Element(_core.g2_neg(self.raw))

    def is_identity(self) -> bool:
        return self.raw == _G2_INF_RAW

    def __eq__(self, other) -> bool:
        return isinstance(other, G2Element) and self.raw == other.raw

    def __hash__(self):
        return hash(("g2", self.raw))

    def __repr__(self):
        return f"G2Element({self.to_bytes().hex()[:16]}...)"

    def to_bytes(self) -> bytes:
        if self.is_identity():
            return b"\x00" * 65
        xa = self.raw[:32]
        xb = self.raw[32:64]
        ya = int.from_bytes(self.raw[64:96], "big")
        yb = int.from_bytes(self.raw[96:], "big")
        sign = (ya & 1) if ya != 0 else (yb & 1)
        return bytes([0x02 | sign]) + xa + xb

    @classmethod
    def from_bytes(cls, buf: bytes) -> "G2Element":
        if len(buf) != 65:
            raise GroupError("G2 encoding must be 65 bytes")
        flag = buf[0]
        if flag == 0x00:
            if buf != b"\x00" * 65:
                raise GroupError("non-canonical G2 identity encoding")
            return cls(_G2_INF_RAW)
        if flag not in (0x02, 0x03):
            raise GroupError("bad G2 flag byte")
        xa = int.from_bytes(buf[1:33], "big")
        xb = int.from_bytes(buf[33:], "big")
        if xa >= _P or xb >= _P:
            raise GroupError("G2 x coordinate out of range")
        rhs = _f2add(_f2mul(_f2sq((xa, xb)), (xa, xb)), _TWIST_B)
        y = _sqrt_fp2(rhs)
        if y is None:
            raise GroupError("G2 x coordinate not on twist")
        sign = (y[0] & 1) if y[0] != 0 else (y[1] & 1)
        if sign != (flag & 1):
            y = (-y[0] % _P, -y[1] % _P)
        raw = (xa.to_bytes(32, "big") + xb.to_bytes(32, "big")
               + y[0].to_bytes(32, "big") + y[1].to_bytes(32, "big"))
        pt = cls(raw)
        if not _core.g2_is_on_curve(raw):  # belt and braces; sqrt was verified
            raise GroupError("G2 point not on twist")
        if not pt.in_subgroup():
            raise GroupError("G2 point not in the prime-order subgroup")
        return pt

    def in_subgroup(self) -> bool:
        if self.is_identity():
            return True
        return _core.g2_mul(self.raw, _Q.to_bytes(32, "big")) == _G2_INF_RAW


class GTElement:
    """Element of the target group; immutable, bytes-backed (384 bytes)."""

    __slots__ = ("raw",)

    def __init__(self, raw: bytes):
        self.raw = raw

    def __mul__(self, other: "GTElement") -> "GTElement":
        return GTElement(_core.fp12_mul(self.raw, other.raw))

    def __truediv__(self, other: "GTElement") -> "GTElement":
        return GTElement(_core.fp12_mul(self.raw, _core.fp12_inv(other.raw)))

    def inverse(self) -> "GTElement":
        return GTElement(_core.fp12_inv(self.raw))

    def is_identity(self) -> bool:
        return self.raw == _GT_ONE_RAW

    def __eq__(self, other) -> bool:
        return isinstance(other, GTElement) and self.raw == other.raw

    def __hash__(self):
        return hash(("gt", self.raw))

    def __repr__(self):
        return f"GTElement({self.raw.hex()[:16]}...)"

    def to_bytes(self) -> bytes:
        return self.raw

    @classmethod
    def from_bytes(cls, buf: bytes) -> "GTElement":
        if len(buf) != 384:
            raise GroupError("GT encoding must be 384 bytes")
        for i in range(0, 384, 32):
            if int.from_bytes(buf[i:i + 32], "big") >= _P:
                raise GroupError("GT coefficient out of range")
        elem = cls(bytes(buf))
        if buf == b"\x00" * 384:
            raise GroupError("GT zero is not a group element")
        # Unitarity x * conj(x) = 1 holds for everything the pairing and its
        # closure under mul/inv/exp can produce; cheap sanity filter.
        if elem * elem.conjugate() != GT_IDENTITY:
            raise GroupError("GT element fails unitarity check")
        return elem

    def conjugate(self) -> "GTElement":
        out = bytearray(self.raw[:192])
        for i in range(192, 384, 32):
            v = int.from_bytes(self.raw[i:i + 32], "big")
            out += ((-v) % _P).to_bytes(32, "big")
        return GTElement(bytes(out))


GT_IDENTITY = GTElement(_GT_ONE_RAW)
G1_IDENTITY = G1Element(_G1_INF_RAW)
G2_IDENTITY = G2Element(_G2_INF_RAW)


# ---------------------------------------------------------------------------
# square roots (decompression, hash-to-group)
# ---------------------------------------------------------------------------

_TWIST_B = (
    19485874751759354771024239261021720505790618469301721065564631296452457478373,
    266929791119991161246907387137283842545076965332900288569378510910307636690)


def _f2mul(x, y):
    a, b = x
    c, d = y
    v0 = a * c
    v1 = b * d
    return ((v0 - v1) % _P, ((a + b) * (c + d) - v0 - v1) % _P)


def _f2sq(x):
    a, b = x
    return ((a + b) * (a - b) % _P, 2 * a * b % _P)


def _f2add(x, y):
    return ((x[0] + y[0]) % _P, (x[1] + y[1]) % _P)


def _sqrt_fp(a: int):
    # p = 3 mod 4, so a^((p+1)/4) is a root whenever one exists
    a %= _P
    r = int(powmod(a, (_P + 1) // 4, _P))
    return r if r * r % _P == a else None


def _sqrt_fp2(a):
    a0, a1 = a[0] % _P, a[1] % _P
    if a1 == 0:
        r = _sqrt_fp(a0)
        if r is not None:
            return (r, 0)
        r = _sqrt_fp(-a0 % _P)
        if r is not None:
            return (0, r)  # (0 + r*i)^2 = -r^2 = a0
        return None
    norm = (a0 * a0 + a1 * a1) % _P
    lam = _sqrt_fp(norm)
    if lam is None:
        return None
    inv2 = (_P + 1) // 2
    delta = (a0 + lam) * inv2 % _P
    x0 = _sqrt_fp(delta)
    if x0 is None:
        delta = (a0 - lam) * inv2 % _P
        x0 = _sqrt_fp(delta)
        if x0 is None:
            return None
    x1 = a1 * int(_gmp_invert(mpz(2 * x0), mpz(_P))) % _P
    if _f2sq((x0, x1)) != (a0, a1):
        return None
    return (x0, x1)


def _hash_to_g2(tag: bytes) -> bytes:
    """Deterministic try-and-increment hash onto the h-side subgroup."""
    cofactor = _G2_COFACTOR.to_bytes(33, "big")
    for ctr in range(256):
        seed = hashlib.sha256(b"hash-to-g2|" + len(tag).to_bytes(2, "big") + tag
                              + ctr.to_bytes(2, "big"))
        xa = int.from_bytes(hashlib.sha512(seed.digest() + b"|a").digest(), "big") % _P
        xb = int.from_bytes(hashlib.sha512(seed.digest() + b"|b").digest(), "big") % _P
        rhs = _f2add(_f2mul(_f2sq((xa, xb)), (xa, xb)), _TWIST_B)
        y = _sqrt_fp2(rhs)
        if y is None:
            continue
        raw = (xa.to_bytes(32, "big") + xb.to_bytes(32, "big")
               + y[0].to_bytes(32, "big") + y[1].to_bytes(32, "big"))
        raw = _core.g2_mul(raw, cofactor)
        if raw == _G2_INF_RAW:
            continue
        return raw
    raise GroupError("hash-to-group failed to find a point")  # unreachable in practice


# ---------------------------------------------------------------------------
# group context
# ---------------------------------------------------------------------------

class GroupContext:
    """Shared group parameters plus the operation-counting entry points.

    Immutable after construction.  All exponentiations and pairings that the
    cost model counts go through the ``exp_*`` / ``pair`` methods; counters
    are attached per scope with :meth:`record` or :meth:`measure` and live in
    thread-local storage, so concurrent use with independent scopes is safe.
    """

    __slots__ = ("tag", "g", "h", "q", "Z", "_scopes")

    def __init__(self, tag: bytes, g: G1Element, h: G2Element, Z: GTElement):
        self.tag = tag
        self.g = g
        self.h = h
        self.q = _Q
        self.Z = Z
        self._scopes = threading.local()

    # -- counting ----------------------------------------------------------

    def _stack(self):
        stack = getattr(self._scopes, "stack", None)
        if stack is None:
            stack = []
            self._scopes.stack = stack
        return stack

    def _bump(self, field: str, amount: int = 1):
        for counter, suspended in self._stack():
            if not suspended:
                setattr(counter, field, getattr(counter, field) + amount)

    @contextmanager
    def record(self, counter: OpCounter):
        """Attach an existing counter to every counted operation in scope."""
        stack = self._stack()
        stack.append((counter, False))
        try:
            yield counter
        finally:
            stack.pop()

    @contextmanager
    def measure(self):
        """Fresh counter for the duration of the scope."""
        with self.record(OpCounter()) as counter:
            yield counter

    @contextmanager
    def uncounted(self):
        """Suspend exponentiation/pairing counting (signature internals)."""
        stack = self._stack()
        saved = list(stack)
        stack[:] = [(c, True) for c, _ in stack]
        try:
            yield
        finally:
            stack[:] = saved

    def count_signature(self):
        self._bump("sigs")

    def count_verification(self):
        self._bump("vfys")

    # -- counted group operations -------------------------------------------

    def exp_g1(self, base: G1Element, k: int) -> G1Element:
        self._bump("exp_g")
        return G1Element(_core.g1_mul(base.raw, scalar_to_bytes(k)))

    def exp_g2(self, base: G2Element, k: int) -> G2Element:
        self._bump("exp_g")
        return G2Element(_core.g2_mul(base.raw, scalar_to_bytes(k)))

    def exp_gt(self, base: GTElement, k: int) -> GTElement:
        self._bump("exp_gt")
        if _EXP_FIXED is not None and base.raw == self.Z.raw:
            return GTElement(_EXP_FIXED(base.raw, scalar_to_bytes(k)))
        return GTElement(_core.fp12_exp_gt(base.raw, scalar_to_bytes(k)))

    def pair(self, a: G1Element, b: G2Element) -> GTElement:
        self._bump("pairings")
        return GTElement(_core.pairing(a.raw, b.raw))

    # -- validity -----------------------------------------------------------

    def g1_valid(self, elem: G1Element) -> bool:
        return _core.g1_is_on_curve(elem.raw)

    def g2_valid(self, elem: G2Element) -> bool:
        return _core.g2_is_on_curve(elem.raw) and elem.in_subgroup()

    # -- serialization -------------------------------------------------------

    def params_bytes(self) -> bytes:
        """Canonical public-parameter blob (board `params` payload)."""
        out = bytearray(b"pv-params v1\x00")
        out += CURVE_NAME.encode()
        out += b"\x00"
        out += len(self.tag).to_bytes(2, "big")
        out += self.tag
        out += self.g.to_bytes()
        out += self.h.to_bytes()
        out += self.Z.to_bytes()
        return bytes(out)

    def __repr__(self):
        return f"GroupContext(tag={self.tag!r}, curve={CURVE_NAME}, backend={BACKEND})"


def setup_group(security_tag: bytes) -> GroupContext:
    """Build the shared group context; deterministic for a fixed tag.

    g is the standard curve generator; h is hashed from the tag so that
    nobody knows a discrete log relation between g and h; Z = e(g, h).
    """
    if isinstance(security_tag, str):
        security_tag = security_tag.encode()
    if not security_tag:
        raise ValueError("security tag must be non-empty")
    g = G1Element(_G1_GEN_RAW)
    h = G2Element(_hash_to_g2(security_tag))
    Z = GTElement(_core.pairing(g.raw, h.raw))
    return GroupContext(security_tag, g, h, Z)


def context_from_params(buf: bytes) -> GroupContext:
    """Rebuild a context from a params blob, verifying internal consistency."""
    if not buf.startswith(b"pv-params v1\x00"):
        raise GroupError("unknown params format")
    rest = buf[len(b"pv-params v1\x00"):]
    curve, _, rest = rest.partition(b"\x00")
    if curve.decode() != CURVE_NAME:
        raise GroupError(f"unsupported curve {curve!r}")
    tag_len = int.from_bytes(rest[:2], "big")
    tag = rest[2:2 + tag_len]
    rest = rest[2 + tag_len:]
    g = G1Element.from_bytes(rest[:33])
    h = G2Element.from_bytes(rest[33:98])
    Z = GTElement.from_bytes(rest[98:482])
    if len(rest) != 482:
        raise GroupError("trailing bytes in params blob")
    if GTElement(_core.pairing(g.raw, h.raw)) != Z:
        raise GroupError("params blob inconsistent: Z != e(g, h)")
    return GroupContext(tag, g, h, Z)
