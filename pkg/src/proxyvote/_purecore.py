"""Pure-Python BN254 (alt_bn128) pairing arithmetic.

Reference twin of the ``_fastcore`` C accelerator: the module-level
functions at the bottom implement the exact same byte-oriented API, and
the differential test suite asserts both backends agree bit for bit.
Used as the fallback when the accelerator is not compiled; an order of
magnitude slower but otherwise equivalent.

Tower and encodings:
    Fp2  = Fp[i]/(i^2 + 1),          elements (a, b) = a + b*i
    Fp6  = Fp2[tau]/(tau^3 - (9+i)), elements (c0, c1, c2)
    Fp12 = Fp6[w]/(w^2 - tau),       elements (d0, d1)
    G1   = E(Fp):  y^2 = x^3 + 3,  Jacobian triples of mpz
    G2   = E'(Fp2) sextic twist,   Jacobian triples of Fp2
Byte formats match _fastcore.c (see its header comment).

Not constant time.
"""

from gmpy2 import mpz, invert as _invert

P = mpz(21888242871839275222246405745257275088696311157297823662689037894645226208583)
Q = mpz(21888242871839275222246405745257275088548364400416034343698204186575808495617)
U = mpz(4965661367192848881)

# Frobenius constants: xi^((p^k - 1)/d) for the tower maps, (real, imag).
XI_TO_P_MINUS1_OVER6 = (
    mpz(8376118865763821496583973867626364092589906065868298776909617916018768340080),
    mpz(16469823323077808223889137241176536799009286646108169935659301613961712198316))
XI_TO_P_MINUS1_OVER3 = (
    mpz(21575463638280843010398324269430826099269044274347216827212613867836435027261),
    mpz(10307601595873709700152284273816112264069230130616436755625194854815875713954))
XI_TO_P_MINUS1_OVER2 = (
    mpz(2821565182194536844548159561693502659359617185244120367078079554186484126554),
    mpz(3505843767911556378687030309984248845540243509899259641013678093033130930403))
XI_TO_2P_MINUS2_OVER3 = (
    mpz(2581911344467009335267311115468803099551665605076196740867805258568234346338),
    mpz(19937756971775647987995932169929341994314640652964949448313374472400716661030))
XI_TO_P2_MINUS1_OVER3 = mpz(21888242871839275220042445260109153167277707414472061641714758635765020556616)
XI_TO_2P2_MINUS2_OVER3 = mpz(2203960485148121921418603742825762020974279258880205651966)
XI_TO_P2_MINUS1_OVER6 = mpz(21888242871839275220042445260109153167277707414472061641714758635765020556617)

TWIST_B = (
    mpz(19485874751759354771024239261021720505790618469301721065564631296452457478373),
    mpz(266929791119991161246907387137283842545076965332900288569378510910307636690))

# NAF digits of 6u+2, least significant first; drives the ate Miller loop.
ATE_LOOP_NAF = [0, 0, 0, 1, 0, 1, 0, -1, 0, 0, 1, -1, 0, 0, 1, 0,
                0, 1, 1, 0, -1, 0, 0, 1, 0, -1, 0, 0, 0, 0, 1, 1,
                1, 0, 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, -1, 0, 0, 1,
                1, 0, 0, -1, 0, 0, 0, 1, 1, 0, -1, 0, 0, 1, 0, 1, 1]
assert sum((d << i) if d >= 0 else -(1 << i)
           for i, d in enumerate(ATE_LOOP_NAF)) == 6 * U + 2

ZERO2 = (mpz(0), mpz(0))
ONE2 = (mpz(1), mpz(0))


# ---------------- Fp2 ----------------

def f2add(x, y):
    return ((x[0] + y[0]) % P, (x[1] + y[1]) % P)


def f2sub(x, y):
    return ((x[0] - y[0]) % P, (x[1] - y[1]) % P)


def f2neg(x):
    return (-x[0] % P, -x[1] % P)


def f2conj(x):
    return (x[0], -x[1] % P)


def f2dbl(x):
    return ((x[0] + x[0]) % P, (x[1] + x[1]) % P)


def f2mul(x, y):
    a, b = x
    c, d = y
    v0 = a * c
    v1 = b * d
    return ((v0 - v1) % P, ((a + b) * (c + d) - v0 - v1) % P)


def f2sq(x):
    a, b = x
    return ((a + b) * (a - b) % P, (a * b * 2) % P)


def f2muls(x, s):
    return (x[0] * s % P, x[1] * s % P)


def f2mulxi(x):
    a, b = x
    return ((9 * a - b) % P, (a + 9 * b) % P)


def f2inv(x):
    a, b = x
    t = _invert(a * a + b * b, P)
    return (a * t % P, -b * t % P)


def f2iszero(x):
    return x[0] == 0 and x[1] == 0


# ---------------- Fp6 ----------------

def f6add(x, y):
    return (f2add(x[0], y[0]), f2add(x[1], y[1]), f2add(x[2], y[2]))


def f6sub(x, y):
    return (f2sub(x[0], y[0]), f2sub(x[1], y[1]), f2sub(x[2], y[2]))


def f6neg(x):
    return (f2neg(x[0]), f2neg(x[1]), f2neg(x[2]))


def f6dbl(x):
    return (f2dbl(x[0]), f2dbl(x[1]), f2dbl(x[2]))


def f6mul(x, y):
    a0, a1, a2 = x
    b0, b1, b2 = y
    v0 = f2mul(a0, b0)
    v1 = f2mul(a1, b1)
    v2 = f2mul(a2, b2)
    c0 = f2add(f2mulxi(f2sub(f2sub(f2mul(f2add(a1, a2), f2add(b1, b2)), v1), v2)), v0)
    c1 = f2add(f2sub(f2sub(f2mul(f2add(a0, a1), f2add(b0, b1)), v0), v1), f2mulxi(v2))
    c2 = f2add(f2sub(f2sub(f2mul(f2add(a0, a2), f2add(b0, b2)), v0), v2), v1)
    return (c0, c1, c2)


def f6muls(x, s):
    return (f2mul(x[0], s), f2mul(x[1], s), f2mul(x[2], s))


def f6multau(x):
    return (f2mulxi(x[2]), x[0], x[1])


def f6inv(x):
    a0, a1, a2 = x
    A = f2sub(f2sq(a0), f2mulxi(f2mul(a1, a2)))
    B = f2sub(f2mulxi(f2sq(a2)), f2mul(a0, a1))
    C = f2sub(f2sq(a1), f2mul(a0, a2))
    F = f2inv(f2add(f2add(f2mul(a0, A), f2mulxi(f2mul(a2, B))), f2mulxi(f2mul(a1, C))))
    return (f2mul(A, F), f2mul(B, F), f2mul(C, F))


def f6frob(x):
    return (f2conj(x[0]),
            f2mul(f2conj(x[1]), XI_TO_P_MINUS1_OVER3),
            f2mul(f2conj(x[2]), XI_TO_2P_MINUS2_OVER3))


def f6frob2(x):
    return (x[0], f2muls(x[1], XI_TO_P2_MINUS1_OVER3), f2muls(x[2], XI_TO_2P2_MINUS2_OVER3))


F6ZERO = (ZERO2, ZERO2, ZERO2)
F6ONE = (ONE2, ZERO2, ZERO2)


# ---------------- Fp12 ----------------

F12ONE = (F6ONE, F6ZERO)


def f12mul(x, y):
    a0, a1 = x
    b0, b1 = y
    v0 = f6mul(a0, b0)
    v1 = f6mul(a1, b1)
    return (f6add(v0, f6multau(v1)),
            f6sub(f6sub(f6mul(f6add(a0, a1), f6add(b0, b1)), v0), v1))


def f12sq(x):
    a0, a1 = x
    v = f6mul(a0, a1)
    d0 = f6sub(f6sub(f6mul(f6add(a0, a1), f6add(a0, f6multau(a1))), v), f6multau(v))
    return (d0, f6dbl(v))


def f12conj(x):
    return (x[0], f6neg(x[1]))


def f12inv(x):
    a0, a1 = x
    t = f6inv(f6sub(f6mul(a0, a0), f6multau(f6mul(a1, a1))))
    return (f6mul(a0, t), f6neg(f6mul(a1, t)))


def f12frob(x):
    return (f6frob(x[0]), f6muls(f6frob(x[1]), XI_TO_P_MINUS1_OVER6))


def f12frob2(x):
    d1 = f6frob2(x[1])
    return (f6frob2(x[0]), (f2muls(d1[0], XI_TO_P2_MINUS1_OVER6),
                            f2muls(d1[1], XI_TO_P2_MINUS1_OVER6),
                            f2muls(d1[2], XI_TO_P2_MINUS1_OVER6)))


def f12exp(x, e):
    """Plain square-and-multiply; slow, works for any element. Test oracle."""
    out = F12ONE
    e = int(e)
    for i in range(e.bit_length() - 1, -1, -1):
        out = f12sq(out)
        if (e >> i) & 1:
            out = f12mul(out, x)
    return out


def cyclo_sq(x):
    """Granger-Scott squaring; valid in the cyclotomic subgroup only."""
    (x0, x1, x2), (x3, x4, x5) = x
    t0 = f2sq(x4)
    t1 = f2sq(x0)
    t6 = f2sub(f2sub(f2sq(f2add(x4, x0)), t0), t1)
    t2 = f2sq(x2)
    t3 = f2sq(x3)
    t7 = f2sub(f2sub(f2sq(f2add(x2, x3)), t2), t3)
    t4 = f2sq(x5)
    t5 = f2sq(x1)
    t8 = f2mulxi(f2sub(f2sub(f2sq(f2add(x5, x1)), t4), t5))
    t0 = f2add(f2mulxi(t0), t1)
    t2 = f2add(f2mulxi(t2), t3)
    t4 = f2add(f2mulxi(t4), t5)
    z0 = f2add(f2dbl(f2sub(t0, x0)), t0)
    z1 = f2add(f2dbl(f2sub(t2, x1)), t2)
    z2 = f2add(f2dbl(f2sub(t4, x2)), t4)
    z3 = f2add(f2dbl(f2add(t8, x3)), t8)
    z4 = f2add(f2dbl(f2add(t6, x4)), t6)
    z5 = f2add(f2dbl(f2add(t7, x5)), t7)
    return ((z0, z1, z2), (z3, z4, z5))


def cyclo_exp(x, e):
    """4-bit window exponentiation with cyclotomic squarings."""
    e = int(e)
    if e == 0:
        return F12ONE
    tbl = [F12ONE, x]
    for _ in range(14):
        tbl.append(f12mul(tbl[-1], x))
    out = None
    nwin = (e.bit_length() + 3) // 4
    for w in range(nwin - 1, -1, -1):
        if out is not None:
            out = cyclo_sq(cyclo_sq(cyclo_sq(cyclo_sq(out))))
        nib = (e >> (w * 4)) & 15
        if nib:
            out = tbl[nib] if out is None else f12mul(out, tbl[nib])
    return F12ONE if out is None else out


# ---------------- G1 ----------------

G1_GEN = (mpz(1), mpz(2), mpz(1))
G1_INF = (mpz(0), mpz(1), mpz(0))


def g1_double(pt):
    X, Y, Z = pt
    if Z == 0:
        return pt
    A = X * X % P
    B = Y * Y % P
    C = B * B % P
    D = 2 * ((X + B) * (X + B) - A - C) % P
    E = 3 * A % P
    X3 = (E * E - 2 * D) % P
    Y3 = (E * (D - X3) - 8 * C) % P
    Z3 = 2 * Y * Z % P
    return (X3, Y3, Z3)


def g1_point_add(p1, p2):
    X1, Y1, Z1 = p1
    X2, Y2, Z2 = p2
    if Z1 == 0:
        return p2
    if Z2 == 0:
        return p1
    Z1Z1 = Z1 * Z1 % P
    Z2Z2 = Z2 * Z2 % P
    U1 = X1 * Z2Z2 % P
    U2 = X2 * Z1Z1 % P
    S1 = Y1 * Z2 * Z2Z2 % P
    S2 = Y2 * Z1 * Z1Z1 % P
    H = (U2 - U1) % P
    r = (S2 - S1) % P
    if H == 0:
        if r == 0:
            return g1_double(p1)
        return G1_INF
    I = 4 * H * H % P
    J = H * I % P
    r = 2 * r % P
    V = U1 * I % P
    X3 = (r * r - J - 2 * V) % P
    Y3 = (r * (V - X3) - 2 * S1 * J) % P
    Z3 = ((Z1 + Z2) * (Z1 + Z2) - Z1Z1 - Z2Z2) * H % P
    return (X3, Y3, Z3)


def g1_scalar_mul(pt, k):
    k = int(k)
    if k == 0:
        return G1_INF
    out = G1_INF
    for i in range(k.bit_length() - 1, -1, -1):
        out = g1_double(out)
        if (k >> i) & 1:
            out = g1_point_add(out, pt)
    return out


def g1_to_affine(pt):
    X, Y, Z = pt
    if Z == 0:
        return None
    zi = _invert(Z, P)
    zi2 = zi * zi % P
    return (X * zi2 % P, Y * zi2 * zi % P)


# ---------------- G2 ----------------

G2_GEN = (
    (mpz(10857046999023057135944570762232829481370756359578518086990519993285655852781),
     mpz(11559732032986387107991004021392285783925812861821192530917403151452391805634)),
    (mpz(8495653923123431417604973247489272438418190587263600148770280649306958101930),
     mpz(4082367875863433681332203403145435568316851327593401208105741076214120093531)),
    ONE2)
G2_INF = (ONE2, ONE2, ZERO2)


def g2_double(pt):
    X, Y, Z = pt
    if f2iszero(Z):
        return pt
    A = f2sq(X)
    B = f2sq(Y)
    C = f2sq(B)
    D = f2dbl(f2sub(f2sub(f2sq(f2add(X, B)), A), C))
    E = f2add(f2dbl(A), A)
    X3 = f2sub(f2sq(E), f2dbl(D))
    c8 = f2dbl(f2dbl(f2dbl(C)))
    Y3 = f2sub(f2mul(E, f2sub(D, X3)), c8)
    Z3 = f2dbl(f2mul(Y, Z))
    return (X3, Y3, Z3)


def g2_point_add(p1, p2):
    X1, Y1, Z1 = p1
    X2, Y2, Z2 = p2
    if f2iszero(Z1):
        return p2
    if f2iszero(Z2):
        return p1
    Z1Z1 = f2sq(Z1)
    Z2Z2 = f2sq(Z2)
    U1 = f2mul(X1, Z2Z2)
    U2 = f2mul(X2, Z1Z1)
    S1 = f2mul(f2mul(Y1, Z2), Z2Z2)
    S2 = f2mul(f2mul(Y2, Z1), Z1Z1)
    H = f2sub(U2, U1)
    r = f2sub(S2, S1)
    if f2iszero(H):
        if f2iszero(r):
            return g2_double(p1)
        return G2_INF
    I = f2sq(f2dbl(H))
    J = f2mul(H, I)
    r = f2dbl(r)
    V = f2mul(U1, I)
    X3 = f2sub(f2sub(f2sq(r), J), f2dbl(V))
    Y3 = f2sub(f2mul(r, f2sub(V, X3)), f2dbl(f2mul(S1, J)))
    Z3 = f2mul(f2sub(f2sub(f2sq(f2add(Z1, Z2)), Z1Z1), Z2Z2), H)
    return (X3, Y3, Z3)


def g2_scalar_mul(pt, k):
    k = int(k)
    if k == 0:
        return G2_INF
    out = G2_INF
    for i in range(k.bit_length() - 1, -1, -1):
        out = g2_double(out)
        if (k >> i) & 1:
            out = g2_point_add(out, pt)
    return out


def g2_to_affine(pt):
    X, Y, Z = pt
    if f2iszero(Z):
        return None
    zi = f2inv(Z)
    zi2 = f2sq(zi)
    return (f2mul(X, zi2), f2mul(f2mul(Y, zi2), zi))


# ---------------- optimal ate pairing ----------------

def _line_double(r, px, py):
    X, Y, Z, T = r
    A = f2sq(X)
    B = f2sq(Y)
    C = f2sq(B)
    D = f2dbl(f2sub(f2sub(f2sq(f2add(X, B)), A), C))
    E = f2add(f2dbl(A), A)
    F = f2sq(E)
    X3 = f2sub(F, f2dbl(D))
    c8 = f2dbl(f2dbl(f2dbl(C)))
    Y3 = f2sub(f2mul(E, f2sub(D, X3)), c8)
    Z3 = f2sub(f2sub(f2sq(f2add(Y, Z)), B), T)
    T3 = f2sq(Z3)
    b4 = f2dbl(f2dbl(B))
    a = f2sub(f2sq(f2add(X, E)), f2add(A, f2add(F, b4)))
    b = f2muls(f2neg(f2dbl(f2mul(E, T))), px)
    c = f2muls(f2dbl(f2mul(Z3, T)), py)
    return a, b, c, (X3, Y3, Z3, T3)


def _line_add(r, qx, qy, qy2, px, py):
    X, Y, Z, T = r
    B = f2mul(qx, T)
    D = f2mul(f2sub(f2sub(f2sq(f2add(qy, Z)), qy2), T), T)
    H = f2sub(B, X)
    I = f2sq(H)
    E = f2dbl(f2dbl(I))
    J = f2mul(H, E)
    L1 = f2sub(D, f2dbl(Y))
    V = f2mul(X, E)
    X3 = f2sub(f2sub(f2sq(L1), J), f2dbl(V))
    Z3 = f2sub(f2sub(f2sq(f2add(Z, H)), T), I)
    Y3 = f2sub(f2mul(L1, f2sub(V, X3)), f2dbl(f2mul(Y, J)))
    T3 = f2sq(Z3)
    t = f2sub(f2sub(f2sq(f2add(qy, Z3)), qy2), T3)
    a = f2sub(f2dbl(f2mul(L1, qx)), t)
    b = f2muls(f2neg(f2dbl(L1)), px)
    c = f2muls(f2dbl(Z3), py)
    return a, b, c, (X3, Y3, Z3, T3)


def _line_mul(f, a, b, c):
    # f *= c + (b + a*tau)*w
    d0, d1 = f
    A2 = f6mul(d1, (b, a, ZERO2))
    T3 = f6muls(d0, c)
    nd1 = f6sub(f6sub(f6mul(f6add(d0, d1), (f2add(b, c), a, ZERO2)), A2), T3)
    nd0 = f6add(f6multau(A2), T3)
    return (nd0, nd1)


def miller_loop(g1_aff, g2_aff):
    px, py = g1_aff
    qx, qy = g2_aff
    f = F12ONE
    r = (qx, qy, ONE2, ONE2)
    qy2 = f2sq(qy)
    nqy = f2neg(qy)
    first = True
    for i in range(len(ATE_LOOP_NAF) - 1, 0, -1):
        a, b, c, r = _line_double(r, px, py)
        if not first:
            f = f12sq(f)
        first = False
        f = _line_mul(f, a, b, c)
        s = ATE_LOOP_NAF[i - 1]
        if s == 1:
            a, b, c, r = _line_add(r, qx, qy, qy2, px, py)
            f = _line_mul(f, a, b, c)
        elif s == -1:
            a, b, c, r = _line_add(r, qx, nqy, qy2, px, py)
            f = _line_mul(f, a, b, c)
    q1x = f2mul(f2conj(qx), XI_TO_P_MINUS1_OVER3)
    q1y = f2mul(f2conj(qy), XI_TO_P_MINUS1_OVER2)
    mq2x = f2muls(qx, XI_TO_P2_MINUS1_OVER3)
    a, b, c, r = _line_add(r, q1x, q1y, f2sq(q1y), px, py)
    f = _line_mul(f, a, b, c)
    a, b, c, r = _line_add(r, mq2x, qy, qy2, px, py)
    f = _line_mul(f, a, b, c)
    return f


def final_exp(f):
    t1 = f12mul(f12conj(f), f12inv(f))
    t1 = f12mul(f12frob2(t1), t1)
    fp = f12frob(t1)
    fp2 = f12frob2(t1)
    fp3 = f12frob(fp2)
    fu = cyclo_exp(t1, U)
    fu2 = cyclo_exp(fu, U)
    fu3 = cyclo_exp(fu2, U)
    y3 = f12conj(f12frob(fu))
    fu2p = f12frob(fu2)
    fu3p = f12frob(fu3)
    y2 = f12frob2(fu2)
    y0 = f12mul(f12mul(fp, fp2), fp3)
    y1 = f12conj(t1)
    y5 = f12conj(fu2)
    y4 = f12conj(f12mul(fu, fu2p))
    y6 = f12conj(f12mul(fu3, fu3p))
    t0 = f12mul(f12mul(cyclo_sq(y6), y4), y5)
    t1b = f12mul(f12mul(y3, y5), t0)
    t0 = f12mul(t0, y2)
    t1b = f12mul(cyclo_sq(t1b), t0)
    t1b = cyclo_sq(t1b)
    t0 = f12mul(t1b, y1)
    t1b = f12mul(t1b, y0)
    t0 = cyclo_sq(t0)
    return f12mul(t0, t1b)


# ---------------- byte-level API (mirror of _fastcore) ----------------

def _fp_out(x):
    return int(x).to_bytes(32, "big")


def _g1_parse(buf):
    if len(buf) != 64:
        raise ValueError("g1 point must be 64 bytes")
    if buf == b"\x00" * 64:
        return G1_INF
    x = mpz(int.from_bytes(buf[:32], "big"))
    y = mpz(int.from_bytes(buf[32:], "big"))
    if x >= P or y >= P:
        raise ValueError("coordinate out of range")
    return (x, y, mpz(1))


def _g1_out(pt):
    aff = g1_to_affine(pt)
    if aff is None:
        return b"\x00" * 64
    return _fp_out(aff[0]) + _fp_out(aff[1])


def _g2_parse(buf):
    if len(buf) != 128:
        raise ValueError("g2 point must be 128 bytes")
    if buf == b"\x00" * 128:
        return G2_INF
    vals = [mpz(int.from_bytes(buf[i:i + 32], "big")) for i in range(0, 128, 32)]
    if any(v >= P for v in vals):
        raise ValueError("coordinate out of range")
    return ((vals[0], vals[1]), (vals[2], vals[3]), ONE2)


def _g2_out(pt):
    aff = g2_to_affine(pt)
    if aff is None:
        return b"\x00" * 128
    (xr, xi), (yr, yi) = aff
    return b"".join(_fp_out(v) for v in (xr, xi, yr, yi))


def _f12_parse(buf):
    if len(buf) != 384:
        raise ValueError("fp12 must be 384 bytes")
    vals = [mpz(int.from_bytes(buf[i:i + 32], "big")) for i in range(0, 384, 32)]
    return (((vals[0], vals[1]), (vals[2], vals[3]), (vals[4], vals[5])),
            ((vals[6], vals[7]), (vals[8], vals[9]), (vals[10], vals[11])))


def _f12_out(f):
    d0, d1 = f
    out = bytearray()
    for six in (d0, d1):
        for c in six:
            out += _fp_out(c[0]) + _fp_out(c[1])
    return bytes(out)


def _scalar_parse(buf):
    return int.from_bytes(buf, "big")


def g1_mul(point, k):
    return _g1_out(g1_scalar_mul(_g1_parse(point), _scalar_parse(k)))


def g1_add(a, b):
    return _g1_out(g1_point_add(_g1_parse(a), _g1_parse(b)))


def g1_neg(point):
    x, y, z = _g1_parse(point)
    if z == 0:
        return b"\x00" * 64
    return _g1_out((x, -y % P, z))


def g1_is_on_curve(point):
    try:
        pt = _g1_parse(point)
    except ValueError:
        return False
    x, y, z = pt
    if z == 0:
        return True
    return (y * y - x * x * x - 3) % P == 0


def g2_mul(point, k):
    return _g2_out(g2_scalar_mul(_g2_parse(point), _scalar_parse(k)))


def g2_add(a, b):
    return _g2_out(g2_point_add(_g2_parse(a), _g2_parse(b)))


def g2_neg(point):
    x, y, z = _g2_parse(point)
    if f2iszero(z):
        return b"\x00" * 128
    return _g2_out((x, f2neg(y), z))


def g2_is_on_curve(point):
    try:
        pt = _g2_parse(point)
    except ValueError:
        return False
    x, y, z = pt
    if f2iszero(z):
        return True
    return f2sub(f2sq(y), f2add(f2mul(f2sq(x), x), TWIST_B)) == ZERO2


def pairing(p1, p2):
    a = g1_to_affine(_g1_parse(p1))
    b = g2_to_affine(_g2_parse(p2))
    if a is None or b is None:
        return _f12_out(F12ONE)
    return _f12_out(final_exp(miller_loop(a, b)))


def fp12_mul(a, b):
    return _f12_out(f12mul(_f12_parse(a), _f12_parse(b)))


def fp12_inv(a):
    return _f12_out(f12inv(_f12_parse(a)))


def fp12_exp_gt(a, k):
    return _f12_out(cyclo_exp(_f12_parse(a), _scalar_parse(k)))

