/* GMP-backed arithmetic for the BN254 (alt_bn128) pairing groups.
 *
 * Exposes a small byte-oriented API; the Python layer owns all element
 * semantics.  Encodings (big-endian throughout):
 *   Fp     32 bytes
 *   G1     64 bytes, affine x||y, all-zero = point at infinity
 *   G2    128 bytes, affine x.a||x.b||y.a||y.b (Fp2 = a + b*i), all-zero = inf
 *   Fp12  384 bytes, coefficients d0.c0.a .. d1.c2.b, low tower first
 *
 * The tower is Fp2 = Fp[i]/(i^2+1), Fp6 = Fp2[tau]/(tau^3 - (9+i)),
 * Fp12 = Fp6[w]/(w^2 - tau); the Miller loop runs the optimal ate pairing
 * over the NAF form of 6u+2.  Same structure as the widely used go-ethereum
 * bn256 implementation; cross-checked against the pure-Python twin in
 * _purecore.py by the differential test suite.
 *
 * Not constant time.  All entry points hold the GIL, so the static
 * scratch temporaries are safe.
 */
#define PY_SSIZE_T_CLEAN
#include <Python.h>
#include <gmp.h>
#include <string.h>

static mpz_t P, Q, U;

typedef struct { mpz_t a, b; } fp2;
typedef struct { fp2 c0, c1, c2; } fp6;
typedef struct { fp6 d0, d1; } fp12;
typedef struct { mpz_t X, Y, Z; } g1pt;
typedef struct { fp2 X, Y, Z; } g2pt;

static fp2 FROB_XI_P_16, FROB_XI_P_13, FROB_XI_P_12, FROB_XI_2P_23;
static mpz_t FROB_XI_P2_13, FROB_XI_2P2_23, FROB_XI_P2_16;
static fp2 TWIST_B2;

/* NAF digits of 6u+2, least significant first. */
static const int ATE_NAF[65] = {
    0, 0, 0, 1, 0, 1, 0, -1, 0, 0, 1, -1, 0, 0, 1, 0,
    0, 1, 1, 0, -1, 0, 0, 1, 0, -1, 0, 0, 0, 0, 1, 1,
    1, 0, 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, -1, 0, 0, 1,
    1, 0, 0, -1, 0, 0, 0, 1, 1, 0, -1, 0, 0, 1, 0, 1, 1};

/* ---------------- Fp2 ---------------- */
static void fp2_init(fp2 *x) { mpz_init(x->a); mpz_init(x->b); }
static void fp2_set(fp2 *r, const fp2 *x) { mpz_set(r->a, x->a); mpz_set(r->b, x->b); }
static void fp2_zero(fp2 *r) { mpz_set_ui(r->a, 0); mpz_set_ui(r->b, 0); }
static void fp2_one(fp2 *r) { mpz_set_ui(r->a, 1); mpz_set_ui(r->b, 0); }
static int fp2_is_zero(const fp2 *x) { return mpz_sgn(x->a) == 0 && mpz_sgn(x->b) == 0; }
static int fp2_eq(const fp2 *x, const fp2 *y) { return mpz_cmp(x->a, y->a) == 0 && mpz_cmp(x->b, y->b) == 0; }

static void fp2_add(fp2 *r, const fp2 *x, const fp2 *y) {
    mpz_add(r->a, x->a, y->a); if (mpz_cmp(r->a, P) >= 0) mpz_sub(r->a, r->a, P);
    mpz_add(r->b, x->b, y->b); if (mpz_cmp(r->b, P) >= 0) mpz_sub(r->b, r->b, P);
}
static void fp2_sub(fp2 *r, const fp2 *x, const fp2 *y) {
    mpz_sub(r->a, x->a, y->a); if (mpz_sgn(r->a) < 0) mpz_add(r->a, r->a, P);
    mpz_sub(r->b, x->b, y->b); if (mpz_sgn(r->b) < 0) mpz_add(r->b, r->b, P);
}
static void fp2_neg(fp2 *r, const fp2 *x) {
    if (mpz_sgn(x->a)) mpz_sub(r->a, P, x->a); else mpz_set_ui(r->a, 0);
    if (mpz_sgn(x->b)) mpz_sub(r->b, P, x->b); else mpz_set_ui(r->b, 0);
}
static void fp2_dbl(fp2 *r, const fp2 *x) { fp2_add(r, x, x); }
static void fp2_conj(fp2 *r, const fp2 *x) {
    mpz_set(r->a, x->a);
    if (mpz_sgn(x->b)) mpz_sub(r->b, P, x->b); else mpz_set_ui(r->b, 0);
}

static mpz_t m_t0, m_t1, m_t2, m_t3;
static void fp2_mul(fp2 *r, const fp2 *x, const fp2 *y) {
    mpz_mul(m_t0, x->a, y->a);
    mpz_mul(m_t1, x->b, y->b);
    mpz_add(m_t2, x->a, x->b);
    mpz_add(m_t3, y->a, y->b);
    mpz_mul(m_t2, m_t2, m_t3);
    mpz_sub(m_t2, m_t2, m_t0);
    mpz_sub(m_t2, m_t2, m_t1);
    mpz_mod(r->b, m_t2, P);
    mpz_sub(m_t0, m_t0, m_t1);
    mpz_mod(r->a, m_t0, P);
}
static void fp2_sq(fp2 *r, const fp2 *x) {
    mpz_add(m_t0, x->a, x->b);
    mpz_sub(m_t1, x->a, x->b);
    mpz_mul(m_t0, m_t0, m_t1);
    mpz_mul(m_t1, x->a, x->b);
    mpz_mod(r->a, m_t0, P);
    mpz_mul_2exp(m_t1, m_t1, 1);
    mpz_mod(r->b, m_t1, P);
}
static void fp2_muls(fp2 *r, const fp2 *x, const mpz_t s) {
    mpz_mul(m_t0, x->a, s); mpz_mod(r->a, m_t0, P);
    mpz_mul(m_t1, x->b, s); mpz_mod(r->b, m_t1, P);
}
static void fp2_mulxi(fp2 *r, const fp2 *x) { /* xi = 9 + i */
    mpz_mul_ui(m_t0, x->a, 9); mpz_sub(m_t0, m_t0, x->b); mpz_mod(m_t0, m_t0, P);
    mpz_mul_ui(m_t1, x->b, 9); mpz_add(m_t1, m_t1, x->a); mpz_mod(r->b, m_t1, P);
    mpz_set(r->a, m_t0);
}
static void fp2_inv(fp2 *r, const fp2 *x) {
    mpz_mul(m_t0, x->a, x->a);
    mpz_addmul(m_t0, x->b, x->b);
    mpz_mod(m_t0, m_t0, P);
    mpz_invert(m_t0, m_t0, P);
    mpz_mul(m_t1, x->a, m_t0); mpz_mod(r->a, m_t1, P);
    mpz_mul(m_t1, x->b, m_t0); mpz_neg(m_t1, m_t1); mpz_mod(r->b, m_t1, P);
}

/* ---------------- Fp6 ---------------- */
static void fp6_init(fp6 *x) { fp2_init(&x->c0); fp2_init(&x->c1); fp2_init(&x->c2); }
static void fp6_set(fp6 *r, const fp6 *x) { fp2_set(&r->c0, &x->c0); fp2_set(&r->c1, &x->c1); fp2_set(&r->c2, &x->c2); }
static void fp6_zero(fp6 *r) { fp2_zero(&r->c0); fp2_zero(&r->c1); fp2_zero(&r->c2); }
static void fp6_one(fp6 *r) { fp2_one(&r->c0); fp2_zero(&r->c1); fp2_zero(&r->c2); }
static void fp6_add(fp6 *r, const fp6 *x, const fp6 *y) {
    fp2_add(&r->c0, &x->c0, &y->c0); fp2_add(&r->c1, &x->c1, &y->c1); fp2_add(&r->c2, &x->c2, &y->c2);
}
static void fp6_sub(fp6 *r, const fp6 *x, const fp6 *y) {
    fp2_sub(&r->c0, &x->c0, &y->c0); fp2_sub(&r->c1, &x->c1, &y->c1); fp2_sub(&r->c2, &x->c2, &y->c2);
}
static void fp6_neg(fp6 *r, const fp6 *x) { fp2_neg(&r->c0, &x->c0); fp2_neg(&r->c1, &x->c1); fp2_neg(&r->c2, &x->c2); }
static void fp6_dbl(fp6 *r, const fp6 *x) { fp6_add(r, x, x); }

static fp2 s6_v0, s6_v1, s6_v2, s6_t0, s6_t1, s6_t2, s6_r0, s6_r1, s6_r2;
static void fp6_mul(fp6 *r, const fp6 *x, const fp6 *y) {
    fp2_mul(&s6_v0, &x->c0, &y->c0);
    fp2_mul(&s6_v1, &x->c1, &y->c1);
    fp2_mul(&s6_v2, &x->c2, &y->c2);
    fp2_add(&s6_t0, &x->c1, &x->c2);
    fp2_add(&s6_t1, &y->c1, &y->c2);
    fp2_mul(&s6_t2, &s6_t0, &s6_t1);
    fp2_sub(&s6_t2, &s6_t2, &s6_v1);
    fp2_sub(&s6_t2, &s6_t2, &s6_v2);
    fp2_mulxi(&s6_t2, &s6_t2);
    fp2_add(&s6_r0, &s6_t2, &s6_v0);
    fp2_add(&s6_t0, &x->c0, &x->c1);
    fp2_add(&s6_t1, &y->c0, &y->c1);
    fp2_mul(&s6_t2, &s6_t0, &s6_t1);
    fp2_sub(&s6_t2, &s6_t2, &s6_v0);
    fp2_sub(&s6_t2, &s6_t2, &s6_v1);
    fp2_mulxi(&s6_t0, &s6_v2);
    fp2_add(&s6_r1, &s6_t2, &s6_t0);
    fp2_add(&s6_t0, &x->c0, &x->c2);
    fp2_add(&s6_t1, &y->c0, &y->c2);
    fp2_mul(&s6_t2, &s6_t0, &s6_t1);
    fp2_sub(&s6_t2, &s6_t2, &s6_v0);
    fp2_sub(&s6_t2, &s6_t2, &s6_v2);
    fp2_add(&s6_r2, &s6_t2, &s6_v1);
    fp2_set(&r->c0, &s6_r0); fp2_set(&r->c1, &s6_r1); fp2_set(&r->c2, &s6_r2);
}
static void fp6_sq(fp6 *r, const fp6 *x) { fp6_mul(r, x, x); }
static void fp6_muls(fp6 *r, const fp6 *x, const fp2 *s) {
    fp2_mul(&r->c0, &x->c0, s); fp2_mul(&r->c1, &x->c1, s); fp2_mul(&r->c2, &x->c2, s);
}
static fp2 s6tau;
static void fp6_multau(fp6 *r, const fp6 *x) { /* multiply by tau */
    fp2_mulxi(&s6tau, &x->c2);
    fp2_set(&r->c2, &x->c1);
    fp2_set(&r->c1, &x->c0);
    fp2_set(&r->c0, &s6tau);
}
static fp2 i6_A, i6_B, i6_C, i6_F, i6_t;
static void fp6_inv(fp6 *r, const fp6 *x) {
    fp2_sq(&i6_A, &x->c0); fp2_mul(&i6_t, &x->c1, &x->c2); fp2_mulxi(&i6_t, &i6_t); fp2_sub(&i6_A, &i6_A, &i6_t);
    fp2_sq(&i6_B, &x->c2); fp2_mulxi(&i6_B, &i6_B); fp2_mul(&i6_t, &x->c0, &x->c1); fp2_sub(&i6_B, &i6_B, &i6_t);
    fp2_sq(&i6_C, &x->c1); fp2_mul(&i6_t, &x->c0, &x->c2); fp2_sub(&i6_C, &i6_C, &i6_t);
    fp2_mul(&i6_F, &x->c0, &i6_A);
    fp2_mul(&i6_t, &x->c2, &i6_B); fp2_mulxi(&i6_t, &i6_t); fp2_add(&i6_F, &i6_F, &i6_t);
    fp2_mul(&i6_t, &x->c1, &i6_C); fp2_mulxi(&i6_t, &i6_t); fp2_add(&i6_F, &i6_F, &i6_t);
    fp2_inv(&i6_F, &i6_F);
    fp2_mul(&r->c0, &i6_A, &i6_F);
    fp2_mul(&r->c1, &i6_B, &i6_F);
    fp2_mul(&r->c2, &i6_C, &i6_F);
}
static void fp6_frob(fp6 *r, const fp6 *x) {
    fp2_conj(&r->c0, &x->c0);
    fp2_conj(&s6_t0, &x->c1); fp2_mul(&r->c1, &s6_t0, &FROB_XI_P_13);
    fp2_conj(&s6_t0, &x->c2); fp2_mul(&r->c2, &s6_t0, &FROB_XI_2P_23);
}
static void fp6_frob2(fp6 *r, const fp6 *x) {
    fp2_set(&r->c0, &x->c0);
    fp2_muls(&r->c1, &x->c1, FROB_XI_P2_13);
    fp2_muls(&r->c2, &x->c2, FROB_XI_2P2_23);
}

/* ---------------- Fp12 ---------------- */
static void fp12_init(fp12 *x) { fp6_init(&x->d0); fp6_init(&x->d1); }
static void fp12_set(fp12 *r, const fp12 *x) { fp6_set(&r->d0, &x->d0); fp6_set(&r->d1, &x->d1); }
static void fp12_one(fp12 *r) { fp6_one(&r->d0); fp6_zero(&r->d1); }
static fp6 s12_v0, s12_v1, s12_t0, s12_t1;
static void fp12_mul(fp12 *r, const fp12 *x, const fp12 *y) {
    fp6_mul(&s12_v0, &x->d0, &y->d0);
    fp6_mul(&s12_v1, &x->d1, &y->d1);
    fp6_add(&s12_t0, &x->d0, &x->d1);
    fp6_add(&s12_t1, &y->d0, &y->d1);
    fp6_mul(&s12_t0, &s12_t0, &s12_t1);
    fp6_sub(&s12_t0, &s12_t0, &s12_v0);
    fp6_sub(&s12_t0, &s12_t0, &s12_v1);
    fp6_set(&r->d1, &s12_t0);
    fp6_multau(&s12_t1, &s12_v1);
    fp6_add(&r->d0, &s12_v0, &s12_t1);
}
static void fp12_sq(fp12 *r, const fp12 *x) {
    fp6_mul(&s12_v0, &x->d0, &x->d1);
    fp6_multau(&s12_t0, &x->d1);
    fp6_add(&s12_t0, &x->d0, &s12_t0);
    fp6_add(&s12_t1, &x->d0, &x->d1);
    fp6_mul(&s12_t0, &s12_t1, &s12_t0);
    fp6_sub(&s12_t0, &s12_t0, &s12_v0);
    fp6_multau(&s12_t1, &s12_v0);
    fp6_sub(&r->d0, &s12_t0, &s12_t1);
    fp6_dbl(&r->d1, &s12_v0);
}
static void fp12_conj(fp12 *r, const fp12 *x) { fp6_set(&r->d0, &x->d0); fp6_neg(&r->d1, &x->d1); }
static fp6 i12_t0, i12_t1;
static void fp12_inv(fp12 *r, const fp12 *x) {
    fp6_sq(&i12_t0, &x->d0);
    fp6_sq(&i12_t1, &x->d1);
    fp6_multau(&i12_t1, &i12_t1);
    fp6_sub(&i12_t0, &i12_t0, &i12_t1);
    fp6_inv(&i12_t0, &i12_t0);
    fp6_mul(&r->d0, &x->d0, &i12_t0);
    fp6_neg(&i12_t0, &i12_t0);
    fp6_mul(&r->d1, &x->d1, &i12_t0);
}
static fp6 f12f_t;
static void fp12_frob(fp12 *r, const fp12 *x) {
    fp6_frob(&r->d0, &x->d0);
    fp6_frob(&f12f_t, &x->d1);
    fp6_muls(&r->d1, &f12f_t, &FROB_XI_P_16);
}
static void fp12_frob2(fp12 *r, const fp12 *x) {
    fp6_frob2(&r->d0, &x->d0);
    fp6_frob2(&f12f_t, &x->d1);
    fp2_muls(&r->d1.c0, &f12f_t.c0, FROB_XI_P2_16);
    fp2_muls(&r->d1.c1, &f12f_t.c1, FROB_XI_P2_16);
    fp2_muls(&r->d1.c2, &f12f_t.c2, FROB_XI_P2_16);
}

/* Granger-Scott squaring; valid for elements of the cyclotomic subgroup,
 * which covers everything the target group GT contains. */
static fp2 cs_t0, cs_t1, cs_t2, cs_t3, cs_t4, cs_t5, cs_t6, cs_t7, cs_t8, cs_u;
static void fp12_cyclosq(fp12 *r, const fp12 *x) {
    const fp2 *x0 = &x->d0.c0, *x1 = &x->d0.c1, *x2 = &x->d0.c2;
    const fp2 *x3 = &x->d1.c0, *x4 = &x->d1.c1, *x5 = &x->d1.c2;
    fp2_sq(&cs_t0, x4); fp2_sq(&cs_t1, x0);
    fp2_add(&cs_u, x4, x0); fp2_sq(&cs_u, &cs_u); fp2_sub(&cs_u, &cs_u, &cs_t0); fp2_sub(&cs_t6, &cs_u, &cs_t1);
    fp2_sq(&cs_t2, x2); fp2_sq(&cs_t3, x3);
    fp2_add(&cs_u, x2, x3); fp2_sq(&cs_u, &cs_u); fp2_sub(&cs_u, &cs_u, &cs_t2); fp2_sub(&cs_t7, &cs_u, &cs_t3);
    fp2_sq(&cs_t4, x5); fp2_sq(&cs_t5, x1);
    fp2_add(&cs_u, x5, x1); fp2_sq(&cs_u, &cs_u); fp2_sub(&cs_u, &cs_u, &cs_t4); fp2_sub(&cs_u, &cs_u, &cs_t5);
    fp2_mulxi(&cs_t8, &cs_u);
    fp2_mulxi(&cs_t0, &cs_t0); fp2_add(&cs_t0, &cs_t0, &cs_t1);
    fp2_mulxi(&cs_t2, &cs_t2); fp2_add(&cs_t2, &cs_t2, &cs_t3);
    fp2_mulxi(&cs_t4, &cs_t4); fp2_add(&cs_t4, &cs_t4, &cs_t5);
    fp2_sub(&cs_u, &cs_t0, x0); fp2_dbl(&cs_u, &cs_u); fp2_add(&r->d0.c0, &cs_u, &cs_t0);
    fp2_sub(&cs_u, &cs_t2, x1); fp2_dbl(&cs_u, &cs_u); fp2_add(&r->d0.c1, &cs_u, &cs_t2);
    fp2_sub(&cs_u, &cs_t4, x2); fp2_dbl(&cs_u, &cs_u); fp2_add(&r->d0.c2, &cs_u, &cs_t4);
    fp2_add(&cs_u, &cs_t8, x3); fp2_dbl(&cs_u, &cs_u); fp2_add(&r->d1.c0, &cs_u, &cs_t8);
    fp2_add(&cs_u, &cs_t6, x4); fp2_dbl(&cs_u, &cs_u); fp2_add(&r->d1.c1, &cs_u, &cs_t6);
    fp2_add(&cs_u, &cs_t7, x5); fp2_dbl(&cs_u, &cs_u); fp2_add(&r->d1.c2, &cs_u, &cs_t7);
}

/* Window exponentiation using cyclotomic squarings; window width adapts to
 * the exponent size so the short loop-parameter exponents in the final
 * exponentiation skip the large table build. */
static fp12 ce_tbl[16], ce_acc;
static void fp12_exp_cyclo(fp12 *r, const fp12 *x, const mpz_t e) {
    if (mpz_sgn(e) == 0) { fp12_one(r); return; }
    size_t nbits = mpz_sizeinbase(e, 2);
    int width = nbits > 96 ? 4 : 2;
    int top = (1 << width) - 1;
    fp12_set(&ce_tbl[1], x);
    for (int i = 2; i <= top; i++) fp12_mul(&ce_tbl[i], &ce_tbl[i - 1], x);
    size_t nwin = (nbits + width - 1) / width;
    int started = 0;
    for (ssize_t w = (ssize_t)nwin - 1; w >= 0; w--) {
        if (started)
            for (int s = 0; s < width; s++) fp12_cyclosq(&ce_acc, &ce_acc);
        unsigned int nib = 0;
        for (int b = width - 1; b >= 0; b--)
            nib = (nib << 1) | mpz_tstbit(e, (mp_bitcnt_t)(w * width + b));
        if (nib) {
            if (started) fp12_mul(&ce_acc, &ce_acc, &ce_tbl[nib]);
            else { fp12_set(&ce_acc, &ce_tbl[nib]); started = 1; }
        }
    }
    fp12_set(r, &ce_acc);
}

/* Fixed-base comb exponentiation, cached on the base.  The shared system
 * element Z = e(g, h) is exponentiated constantly (key generation, blinding
 * terms, timestamp markers), so one table amortizes across a whole run. */
static void fp12_from_bytes(fp12 *r, const unsigned char *buf);
#define COMB_WINDOWS 64
static fp12 comb_tbl[COMB_WINDOWS][16];
static unsigned char comb_base[384];
static int comb_valid = 0;
static void fp12_exp_fixed(fp12 *r, const unsigned char *base_bytes, const mpz_t e) {
    if (!comb_valid || memcmp(comb_base, base_bytes, 384) != 0) {
        fp12_from_bytes(&ce_acc, base_bytes);
        for (int i = 0; i < COMB_WINDOWS; i++) {
            fp12_set(&comb_tbl[i][1], &ce_acc);
            for (int j = 2; j < 16; j++)
                fp12_mul(&comb_tbl[i][j], &comb_tbl[i][j - 1], &ce_acc);
            if (i + 1 < COMB_WINDOWS) {
                fp12_cyclosq(&ce_acc, &comb_tbl[i][8]);  /* base^(8*2) */
            }
        }
        memcpy(comb_base, base_bytes, 384);
        comb_valid = 1;
    }
    fp12_one(&ce_acc);
    size_t nwin = (mpz_sizeinbase(e, 2) + 3) / 4;
    if (nwin > COMB_WINDOWS) nwin = COMB_WINDOWS;  /* exponents are < 2^256 */
    for (size_t w = 0; w < nwin; w++) {
        unsigned int nib = 0;
        for (int b = 3; b >= 0; b--)
            nib = (nib << 1) | mpz_tstbit(e, (mp_bitcnt_t)(w * 4 + b));
        if (nib) fp12_mul(&ce_acc, &ce_acc, &comb_tbl[w][nib]);
    }
    fp12_set(r, &ce_acc);
}

/* ---------------- G1 (y^2 = x^3 + 3 over Fp, Jacobian) ---------------- */
static mpz_t g1_A, g1_B, g1_C, g1_D, g1_E, g1_t, g1_t2, g1_Z1Z1, g1_Z2Z2,
    g1_U1, g1_U2, g1_S1, g1_S2, g1_H, g1_r, g1_I, g1_J, g1_V;
static void g1_init_pt(g1pt *p) { mpz_init(p->X); mpz_init(p->Y); mpz_init(p->Z); }
static void g1_set_inf(g1pt *p) { mpz_set_ui(p->X, 0); mpz_set_ui(p->Y, 1); mpz_set_ui(p->Z, 0); }
static int g1_is_inf(const g1pt *p) { return mpz_sgn(p->Z) == 0; }
static void g1_set(g1pt *r, const g1pt *p) { mpz_set(r->X, p->X); mpz_set(r->Y, p->Y); mpz_set(r->Z, p->Z); }
static void g1_dbl(g1pt *r, const g1pt *p) {
    if (g1_is_inf(p)) { g1_set(r, p); return; }
    mpz_mul(g1_A, p->X, p->X); mpz_mod(g1_A, g1_A, P);
    mpz_mul(g1_B, p->Y, p->Y); mpz_mod(g1_B, g1_B, P);
    mpz_mul(g1_C, g1_B, g1_B); mpz_mod(g1_C, g1_C, P);
    mpz_add(g1_t, p->X, g1_B); mpz_mul(g1_t, g1_t, g1_t);
    mpz_sub(g1_t, g1_t, g1_A); mpz_sub(g1_t, g1_t, g1_C);
    mpz_mul_2exp(g1_D, g1_t, 1); mpz_mod(g1_D, g1_D, P);
    mpz_mul_ui(g1_E, g1_A, 3); mpz_mod(g1_E, g1_E, P);
    mpz_mul(g1_t, g1_E, g1_E);
    mpz_submul_ui(g1_t, g1_D, 2);
    mpz_mod(g1_t2, g1_t, P);
    mpz_sub(g1_t, g1_D, g1_t2); mpz_mul(g1_t, g1_t, g1_E);
    mpz_submul_ui(g1_t, g1_C, 8);
    mpz_mul(g1_r, p->Y, p->Z); mpz_mul_2exp(g1_r, g1_r, 1); mpz_mod(r->Z, g1_r, P);
    mpz_set(r->X, g1_t2);
    mpz_mod(r->Y, g1_t, P);
}
static void g1_add(g1pt *rr, const g1pt *p1, const g1pt *p2) {
    if (g1_is_inf(p1)) { g1_set(rr, p2); return; }
    if (g1_is_inf(p2)) { g1_set(rr, p1); return; }
    mpz_mul(g1_Z1Z1, p1->Z, p1->Z); mpz_mod(g1_Z1Z1, g1_Z1Z1, P);
    mpz_mul(g1_Z2Z2, p2->Z, p2->Z); mpz_mod(g1_Z2Z2, g1_Z2Z2, P);
    mpz_mul(g1_U1, p1->X, g1_Z2Z2); mpz_mod(g1_U1, g1_U1, P);
    mpz_mul(g1_U2, p2->X, g1_Z1Z1); mpz_mod(g1_U2, g1_U2, P);
    mpz_mul(g1_S1, p1->Y, p2->Z); mpz_mul(g1_S1, g1_S1, g1_Z2Z2); mpz_mod(g1_S1, g1_S1, P);
    mpz_mul(g1_S2, p2->Y, p1->Z); mpz_mul(g1_S2, g1_S2, g1_Z1Z1); mpz_mod(g1_S2, g1_S2, P);
    mpz_sub(g1_H, g1_U2, g1_U1); mpz_mod(g1_H, g1_H, P);
    mpz_sub(g1_r, g1_S2, g1_S1); mpz_mod(g1_r, g1_r, P);
    if (mpz_sgn(g1_H) == 0) {
        if (mpz_sgn(g1_r) == 0) { g1_dbl(rr, p1); return; }
        g1_set_inf(rr); return;
    }
    mpz_mul(g1_I, g1_H, g1_H); mpz_mul_2exp(g1_I, g1_I, 2); mpz_mod(g1_I, g1_I, P);
    mpz_mul(g1_J, g1_H, g1_I); mpz_mod(g1_J, g1_J, P);
    mpz_mul_2exp(g1_r, g1_r, 1);
    mpz_mul(g1_V, g1_U1, g1_I); mpz_mod(g1_V, g1_V, P);
    mpz_mul(g1_t, g1_r, g1_r);
    mpz_sub(g1_t, g1_t, g1_J);
    mpz_submul_ui(g1_t, g1_V, 2);
    mpz_mod(g1_t2, g1_t, P);
    mpz_sub(g1_t, g1_V, g1_t2); mpz_mul(g1_t, g1_t, g1_r);
    mpz_mul(g1_A, g1_S1, g1_J); mpz_mul_2exp(g1_A, g1_A, 1);
    mpz_sub(g1_t, g1_t, g1_A);
    mpz_add(g1_B, p1->Z, p2->Z); mpz_mul(g1_B, g1_B, g1_B);
    mpz_sub(g1_B, g1_B, g1_Z1Z1); mpz_sub(g1_B, g1_B, g1_Z2Z2);
    mpz_mul(g1_B, g1_B, g1_H);
    mpz_mod(rr->Z, g1_B, P);
    mpz_set(rr->X, g1_t2);
    mpz_mod(rr->Y, g1_t, P);
}
static g1pt gm_acc, gm_base;
static void g1_mul(g1pt *r, const g1pt *p, const mpz_t k) {
    g1_set_inf(&gm_acc);
    if (mpz_sgn(k) == 0) { g1_set(r, &gm_acc); return; }
    g1_set(&gm_base, p);
    for (ssize_t i = (ssize_t)mpz_sizeinbase(k, 2) - 1; i >= 0; i--) {
        g1_dbl(&gm_acc, &gm_acc);
        if (mpz_tstbit(k, (mp_bitcnt_t)i)) g1_add(&gm_acc, &gm_acc, &gm_base);
    }
    g1_set(r, &gm_acc);
}
static mpz_t aff_zi, aff_zi2;
static void g1_affine(g1pt *r, const g1pt *p) {
    if (g1_is_inf(p)) { g1_set_inf(r); return; }
    mpz_invert(aff_zi, p->Z, P);
    mpz_mul(aff_zi2, aff_zi, aff_zi); mpz_mod(aff_zi2, aff_zi2, P);
    mpz_mul(g1_t, p->X, aff_zi2); mpz_mod(r->X, g1_t, P);
    mpz_mul(g1_t, p->Y, aff_zi2); mpz_mul(g1_t, g1_t, aff_zi); mpz_mod(r->Y, g1_t, P);
    mpz_set_ui(r->Z, 1);
}

/* ---------------- G2 (twist y^2 = x^3 + b/xi over Fp2, Jacobian) ------- */
static fp2 q2_A, q2_B, q2_C, q2_D, q2_E, q2_t, q2_t2, q2_Z1Z1, q2_Z2Z2,
    q2_U1, q2_U2, q2_S1, q2_S2, q2_H, q2_r, q2_I, q2_J, q2_V, q2_zi, q2_zi2;
static void g2_init_pt(g2pt *p) { fp2_init(&p->X); fp2_init(&p->Y); fp2_init(&p->Z); }
static void g2_set_inf(g2pt *p) { fp2_one(&p->X); fp2_one(&p->Y); fp2_zero(&p->Z); }
static int g2_is_inf(const g2pt *p) { return fp2_is_zero(&p->Z); }
static void g2_set(g2pt *r, const g2pt *p) { fp2_set(&r->X, &p->X); fp2_set(&r->Y, &p->Y); fp2_set(&r->Z, &p->Z); }
static void g2_dbl(g2pt *r, const g2pt *p) {
    if (g2_is_inf(p)) { g2_set(r, p); return; }
    fp2_sq(&q2_A, &p->X);
    fp2_sq(&q2_B, &p->Y);
    fp2_sq(&q2_C, &q2_B);
    fp2_add(&q2_t, &p->X, &q2_B); fp2_sq(&q2_t, &q2_t);
    fp2_sub(&q2_t, &q2_t, &q2_A); fp2_sub(&q2_t, &q2_t, &q2_C);
    fp2_dbl(&q2_D, &q2_t);
    fp2_dbl(&q2_E, &q2_A); fp2_add(&q2_E, &q2_E, &q2_A);
    fp2_sq(&q2_t, &q2_E);
    fp2_dbl(&q2_t2, &q2_D); fp2_sub(&q2_t, &q2_t, &q2_t2);
    fp2_mul(&q2_r, &p->Y, &p->Z); fp2_dbl(&r->Z, &q2_r);
    fp2_sub(&q2_t2, &q2_D, &q2_t); fp2_mul(&q2_t2, &q2_t2, &q2_E);
    fp2_dbl(&q2_C, &q2_C); fp2_dbl(&q2_C, &q2_C); fp2_dbl(&q2_C, &q2_C);
    fp2_sub(&r->Y, &q2_t2, &q2_C);
    fp2_set(&r->X, &q2_t);
}
static void g2_add(g2pt *rr, const g2pt *p1, const g2pt *p2) {
    if (g2_is_inf(p1)) { g2_set(rr, p2); return; }
    if (g2_is_inf(p2)) { g2_set(rr, p1); return; }
    fp2_sq(&q2_Z1Z1, &p1->Z);
    fp2_sq(&q2_Z2Z2, &p2->Z);
    fp2_mul(&q2_U1, &p1->X, &q2_Z2Z2);
    fp2_mul(&q2_U2, &p2->X, &q2_Z1Z1);
    fp2_mul(&q2_S1, &p1->Y, &p2->Z); fp2_mul(&q2_S1, &q2_S1, &q2_Z2Z2);
    fp2_mul(&q2_S2, &p2->Y, &p1->Z); fp2_mul(&q2_S2, &q2_S2, &q2_Z1Z1);
    fp2_sub(&q2_H, &q2_U2, &q2_U1);
    fp2_sub(&q2_r, &q2_S2, &q2_S1);
    if (fp2_is_zero(&q2_H)) {
        if (fp2_is_zero(&q2_r)) { g2_dbl(rr, p1); return; }
        g2_set_inf(rr); return;
    }
    fp2_dbl(&q2_t, &q2_H); fp2_sq(&q2_I, &q2_t);
    fp2_mul(&q2_J, &q2_H, &q2_I);
    fp2_dbl(&q2_r, &q2_r);
    fp2_mul(&q2_V, &q2_U1, &q2_I);
    fp2_sq(&q2_t, &q2_r);
    fp2_sub(&q2_t, &q2_t, &q2_J);
    fp2_dbl(&q2_t2, &q2_V);
    fp2_sub(&q2_t, &q2_t, &q2_t2);
    fp2_sub(&q2_t2, &q2_V, &q2_t); fp2_mul(&q2_t2, &q2_t2, &q2_r);
    fp2_mul(&q2_A, &q2_S1, &q2_J); fp2_dbl(&q2_A, &q2_A);
    fp2_sub(&q2_t2, &q2_t2, &q2_A);
    fp2_add(&q2_B, &p1->Z, &p2->Z); fp2_sq(&q2_B, &q2_B);
    fp2_sub(&q2_B, &q2_B, &q2_Z1Z1); fp2_sub(&q2_B, &q2_B, &q2_Z2Z2);
    fp2_mul(&rr->Z, &q2_B, &q2_H);
    fp2_set(&rr->X, &q2_t);
    fp2_set(&rr->Y, &q2_t2);
}
static g2pt qm_acc, qm_base;
static void g2_mul(g2pt *r, const g2pt *p, const mpz_t k) {
    g2_set_inf(&qm_acc);
    if (mpz_sgn(k) == 0) { g2_set(r, &qm_acc); return; }
    g2_set(&qm_base, p);
    for (ssize_t i = (ssize_t)mpz_sizeinbase(k, 2) - 1; i >= 0; i--) {
        g2_dbl(&qm_acc, &qm_acc);
        if (mpz_tstbit(k, (mp_bitcnt_t)i)) g2_add(&qm_acc, &qm_acc, &qm_base);
    }
    g2_set(r, &qm_acc);
}
static void g2_affine(g2pt *r, const g2pt *p) {
    if (g2_is_inf(p)) { g2_set_inf(r); return; }
    fp2_inv(&q2_zi, &p->Z);
    fp2_sq(&q2_zi2, &q2_zi);
    fp2_mul(&r->X, &p->X, &q2_zi2);
    fp2_mul(&q2_t, &p->Y, &q2_zi2); fp2_mul(&r->Y, &q2_t, &q2_zi);
    fp2_one(&r->Z);
}

/* ---------------- optimal ate pairing ---------------- */
typedef struct { fp2 X, Y, Z, T; } g2jt; /* T = Z^2 */
static fp2 ld_A, ld_B, ld_C, ld_D, ld_E, ld_F, ld_t, ld_t2, ld_a, ld_b, ld_c;
static void line_double(fp2 *la, fp2 *lb, fp2 *lc, g2jt *rp, const mpz_t px, const mpz_t py) {
    fp2_sq(&ld_A, &rp->X);
    fp2_sq(&ld_B, &rp->Y);
    fp2_sq(&ld_C, &ld_B);
    fp2_add(&ld_t, &rp->X, &ld_B); fp2_sq(&ld_t, &ld_t);
    fp2_sub(&ld_t, &ld_t, &ld_A); fp2_sub(&ld_t, &ld_t, &ld_C);
    fp2_dbl(&ld_D, &ld_t);
    fp2_dbl(&ld_E, &ld_A); fp2_add(&ld_E, &ld_E, &ld_A);
    fp2_sq(&ld_F, &ld_E);
    fp2_dbl(&ld_t, &ld_D); fp2_sub(&ld_t2, &ld_F, &ld_t); /* X3 */
    fp2_add(&ld_a, &rp->X, &ld_E); fp2_sq(&ld_a, &ld_a);
    fp2_sub(&ld_a, &ld_a, &ld_A); fp2_sub(&ld_a, &ld_a, &ld_F);
    fp2_dbl(&ld_t, &ld_B); fp2_dbl(&ld_t, &ld_t);
    fp2_sub(&ld_a, &ld_a, &ld_t);
    fp2_mul(&ld_b, &ld_E, &rp->T); fp2_dbl(&ld_b, &ld_b); fp2_neg(&ld_b, &ld_b);
    fp2_muls(&ld_b, &ld_b, px);
    fp2_sub(&ld_t, &ld_D, &ld_t2); fp2_mul(&ld_t, &ld_t, &ld_E);
    fp2_dbl(&ld_C, &ld_C); fp2_dbl(&ld_C, &ld_C); fp2_dbl(&ld_C, &ld_C);
    fp2_sub(&ld_t, &ld_t, &ld_C); /* Y3 */
    fp2_add(&ld_c, &rp->Y, &rp->Z); fp2_sq(&ld_c, &ld_c);
    fp2_sub(&ld_c, &ld_c, &ld_B); fp2_sub(&ld_c, &ld_c, &rp->T); /* Z3 */
    fp2_set(&rp->X, &ld_t2);
    fp2_set(&rp->Y, &ld_t);
    fp2_set(&rp->Z, &ld_c);
    fp2_mul(&ld_c, &rp->Z, &rp->T); fp2_dbl(&ld_c, &ld_c); /* uses old T */
    fp2_muls(&ld_c, &ld_c, py);
    fp2_sq(&rp->T, &rp->Z);
    fp2_set(la, &ld_a); fp2_set(lb, &ld_b); fp2_set(lc, &ld_c);
}
static fp2 la_B, la_D, la_H, la_I, la_E, la_J, la_L1, la_V, la_t, la_t2,
    la_X3, la_Y3, la_Z3, la_T3, la_a, la_b, la_c;
static void line_add(fp2 *la, fp2 *lb, fp2 *lc, g2jt *rp, const fp2 *qx, const fp2 *qy,
                     const fp2 *qy2, const mpz_t px, const mpz_t py) {
    fp2_mul(&la_B, qx, &rp->T);
    fp2_add(&la_D, qy, &rp->Z); fp2_sq(&la_D, &la_D);
    fp2_sub(&la_D, &la_D, qy2); fp2_sub(&la_D, &la_D, &rp->T);
    fp2_mul(&la_D, &la_D, &rp->T);
    fp2_sub(&la_H, &la_B, &rp->X);
    fp2_sq(&la_I, &la_H);
    fp2_dbl(&la_E, &la_I); fp2_dbl(&la_E, &la_E);
    fp2_mul(&la_J, &la_H, &la_E);
    fp2_sub(&la_L1, &la_D, &rp->Y); fp2_sub(&la_L1, &la_L1, &rp->Y);
    fp2_mul(&la_V, &rp->X, &la_E);
    fp2_sq(&la_X3, &la_L1); fp2_sub(&la_X3, &la_X3, &la_J);
    fp2_dbl(&la_t, &la_V); fp2_sub(&la_X3, &la_X3, &la_t);
    fp2_add(&la_Z3, &rp->Z, &la_H); fp2_sq(&la_Z3, &la_Z3);
    fp2_sub(&la_Z3, &la_Z3, &rp->T); fp2_sub(&la_Z3, &la_Z3, &la_I);
    fp2_sub(&la_t, &la_V, &la_X3); fp2_mul(&la_t, &la_t, &la_L1);
    fp2_mul(&la_t2, &rp->Y, &la_J); fp2_dbl(&la_t2, &la_t2);
    fp2_sub(&la_Y3, &la_t, &la_t2);
    fp2_sq(&la_T3, &la_Z3);
    fp2_add(&la_t, qy, &la_Z3); fp2_sq(&la_t, &la_t);
    fp2_sub(&la_t, &la_t, qy2); fp2_sub(&la_t, &la_t, &la_T3);
    fp2_mul(&la_a, &la_L1, qx); fp2_dbl(&la_a, &la_a);
    fp2_sub(&la_a, &la_a, &la_t);
    fp2_neg(&la_b, &la_L1); fp2_muls(&la_b, &la_b, px); fp2_dbl(&la_b, &la_b);
    fp2_muls(&la_c, &la_Z3, py); fp2_dbl(&la_c, &la_c);
    fp2_set(&rp->X, &la_X3); fp2_set(&rp->Y, &la_Y3);
    fp2_set(&rp->Z, &la_Z3); fp2_set(&rp->T, &la_T3);
    fp2_set(la, &la_a); fp2_set(lb, &la_b); fp2_set(lc, &la_c);
}
static fp6 lm_A2, lm_T3, lm_t6a, lm_t6b;
static void line_mul(fp12 *f, const fp2 *a, const fp2 *b, const fp2 *c) {
    /* f *= c + (b + a*tau)*w  (sparse multiplication) */
    fp2_set(&lm_t6a.c0, b); fp2_set(&lm_t6a.c1, a); fp2_zero(&lm_t6a.c2);
    fp6_mul(&lm_A2, &f->d1, &lm_t6a);
    fp6_muls(&lm_T3, &f->d0, c);
    fp2_add(&lm_t6a.c0, b, c);
    fp6_add(&lm_t6b, &f->d0, &f->d1);
    fp6_mul(&lm_t6b, &lm_t6b, &lm_t6a);
    fp6_sub(&lm_t6b, &lm_t6b, &lm_A2);
    fp6_sub(&f->d1, &lm_t6b, &lm_T3);
    fp6_multau(&lm_t6a, &lm_A2);
    fp6_add(&f->d0, &lm_t6a, &lm_T3);
}
static fp2 ml_qy2, ml_nqy, ml_la, ml_lb, ml_lc, ml_q1x, ml_q1y, ml_q1y2, ml_mq2x;
static g2jt ml_r;
static void miller(fp12 *f, const mpz_t px, const mpz_t py, const fp2 *qx, const fp2 *qy) {
    fp12_one(f);
    fp2_set(&ml_r.X, qx); fp2_set(&ml_r.Y, qy); fp2_one(&ml_r.Z); fp2_one(&ml_r.T);
    fp2_sq(&ml_qy2, qy);
    fp2_neg(&ml_nqy, qy);
    for (int i = 64; i >= 1; i--) {
        line_double(&ml_la, &ml_lb, &ml_lc, &ml_r, px, py);
        if (i != 64) fp12_sq(f, f);
        line_mul(f, &ml_la, &ml_lb, &ml_lc);
        int s = ATE_NAF[i - 1];
        if (s == 1) {
            line_add(&ml_la, &ml_lb, &ml_lc, &ml_r, qx, qy, &ml_qy2, px, py);
            line_mul(f, &ml_la, &ml_lb, &ml_lc);
        } else if (s == -1) {
            line_add(&ml_la, &ml_lb, &ml_lc, &ml_r, qx, &ml_nqy, &ml_qy2, px, py);
            line_mul(f, &ml_la, &ml_lb, &ml_lc);
        }
    }
    /* frobenius correction steps */
    fp2_conj(&ml_q1x, qx); fp2_mul(&ml_q1x, &ml_q1x, &FROB_XI_P_13);
    fp2_conj(&ml_q1y, qy); fp2_mul(&ml_q1y, &ml_q1y, &FROB_XI_P_12);
    fp2_sq(&ml_q1y2, &ml_q1y);
    fp2_muls(&ml_mq2x, qx, FROB_XI_P2_13);
    line_add(&ml_la, &ml_lb, &ml_lc, &ml_r, &ml_q1x, &ml_q1y, &ml_q1y2, px, py);
    line_mul(f, &ml_la, &ml_lb, &ml_lc);
    line_add(&ml_la, &ml_lb, &ml_lc, &ml_r, &ml_mq2x, qy, &ml_qy2, px, py);
    line_mul(f, &ml_la, &ml_lb, &ml_lc);
}
static fp12 fe_t1, fe_inv, fe_fp, fe_fp2, fe_fp3, fe_fu, fe_fu2, fe_fu3,
    fe_y0, fe_y1, fe_y2, fe_y3, fe_y4, fe_y5, fe_y6, fe_t0;
static void final_exp(fp12 *r, const fp12 *f) {
    fp12_conj(&fe_t1, f);
    fp12_inv(&fe_inv, f);
    fp12_mul(&fe_t1, &fe_t1, &fe_inv);
    fp12_frob2(&fe_inv, &fe_t1);
    fp12_mul(&fe_t1, &fe_inv, &fe_t1);
    fp12_frob(&fe_fp, &fe_t1);
    fp12_frob2(&fe_fp2, &fe_t1);
    fp12_frob(&fe_fp3, &fe_fp2);
    fp12_exp_cyclo(&fe_fu, &fe_t1, U);
    fp12_exp_cyclo(&fe_fu2, &fe_fu, U);
    fp12_exp_cyclo(&fe_fu3, &fe_fu2, U);
    fp12_frob(&fe_y3, &fe_fu); fp12_conj(&fe_y3, &fe_y3);
    fp12_frob(&fe_y4, &fe_fu2);
    fp12_frob(&fe_y6, &fe_fu3);
    fp12_frob2(&fe_y2, &fe_fu2);
    fp12_mul(&fe_y0, &fe_fp, &fe_fp2); fp12_mul(&fe_y0, &fe_y0, &fe_fp3);
    fp12_conj(&fe_y1, &fe_t1);
    fp12_conj(&fe_y5, &fe_fu2);
    fp12_mul(&fe_y4, &fe_fu, &fe_y4); fp12_conj(&fe_y4, &fe_y4);
    fp12_mul(&fe_y6, &fe_fu3, &fe_y6); fp12_conj(&fe_y6, &fe_y6);
    fp12_cyclosq(&fe_t0, &fe_y6);
    fp12_mul(&fe_t0, &fe_t0, &fe_y4);
    fp12_mul(&fe_t0, &fe_t0, &fe_y5);
    fp12_mul(&fe_t1, &fe_y3, &fe_y5);
    fp12_mul(&fe_t1, &fe_t1, &fe_t0);
    fp12_mul(&fe_t0, &fe_t0, &fe_y2);
    fp12_cyclosq(&fe_t1, &fe_t1);
    fp12_mul(&fe_t1, &fe_t1, &fe_t0);
    fp12_cyclosq(&fe_t1, &fe_t1);
    fp12_mul(&fe_t0, &fe_t1, &fe_y1);
    fp12_mul(&fe_t1, &fe_t1, &fe_y0);
    fp12_cyclosq(&fe_t0, &fe_t0);
    fp12_mul(r, &fe_t0, &fe_t1);
}

/* ---------------- byte conversions ---------------- */
static void fp_from_bytes(mpz_t r, const unsigned char *buf) { mpz_import(r, 32, 1, 1, 1, 0, buf); }
static void fp_to_bytes(unsigned char *buf, const mpz_t x) {
    size_t count;
    memset(buf, 0, 32);
    if (mpz_sgn(x) == 0) return;
    size_t nbytes = (mpz_sizeinbase(x, 2) + 7) / 8;
    mpz_export(buf + (32 - nbytes), &count, 1, 1, 1, 0, x);
}
static void fp2_from_bytes(fp2 *r, const unsigned char *buf) { fp_from_bytes(r->a, buf); fp_from_bytes(r->b, buf + 32); }
static void fp2_to_bytes(unsigned char *buf, const fp2 *x) { fp_to_bytes(buf, x->a); fp_to_bytes(buf + 32, x->b); }
static void fp12_from_bytes(fp12 *r, const unsigned char *buf) {
    fp2_from_bytes(&r->d0.c0, buf); fp2_from_bytes(&r->d0.c1, buf + 64); fp2_from_bytes(&r->d0.c2, buf + 128);
    fp2_from_bytes(&r->d1.c0, buf + 192); fp2_from_bytes(&r->d1.c1, buf + 256); fp2_from_bytes(&r->d1.c2, buf + 320);
}
static void fp12_to_bytes(unsigned char *buf, const fp12 *x) {
    fp2_to_bytes(buf, &x->d0.c0); fp2_to_bytes(buf + 64, &x->d0.c1); fp2_to_bytes(buf + 128, &x->d0.c2);
    fp2_to_bytes(buf + 192, &x->d1.c0); fp2_to_bytes(buf + 256, &x->d1.c1); fp2_to_bytes(buf + 320, &x->d1.c2);
}
static int all_zero(const unsigned char *buf, Py_ssize_t n) {
    for (Py_ssize_t i = 0; i < n; i++) if (buf[i]) return 0;
    return 1;
}
static int g1_from_bytes(g1pt *r, const unsigned char *buf) {
    if (all_zero(buf, 64)) { g1_set_inf(r); return 1; }
    fp_from_bytes(r->X, buf);
    fp_from_bytes(r->Y, buf + 32);
    mpz_set_ui(r->Z, 1);
    return mpz_cmp(r->X, P) < 0 && mpz_cmp(r->Y, P) < 0;
}
static void g1_to_bytes(unsigned char *buf, const g1pt *p_aff) {
    if (g1_is_inf(p_aff)) { memset(buf, 0, 64); return; }
    fp_to_bytes(buf, p_aff->X);
    fp_to_bytes(buf + 32, p_aff->Y);
}
static int g2_from_bytes(g2pt *r, const unsigned char *buf) {
    if (all_zero(buf, 128)) { g2_set_inf(r); return 1; }
    fp2_from_bytes(&r->X, buf);
    fp2_from_bytes(&r->Y, buf + 64);
    fp2_one(&r->Z);
    return mpz_cmp(r->X.a, P) < 0 && mpz_cmp(r->X.b, P) < 0 &&
           mpz_cmp(r->Y.a, P) < 0 && mpz_cmp(r->Y.b, P) < 0;
}
static void g2_to_bytes(unsigned char *buf, const g2pt *p_aff) {
    if (g2_is_inf(p_aff)) { memset(buf, 0, 128); return; }
    fp2_to_bytes(buf, &p_aff->X);
    fp2_to_bytes(buf + 64, &p_aff->Y);
}

/* ---------------- Python entry points ---------------- */
static g1pt w_g1a, w_g1b, w_g1r;
static g2pt w_g2a, w_g2b, w_g2r;
static fp12 w_fa, w_fb, w_fr;
static mpz_t w_k;

static int parse_g1(Py_buffer *pb, g1pt *out, const char *what) {
    if (pb->len != 64) { PyErr_Format(PyExc_ValueError, "%s must be 64 bytes", what); return 0; }
    if (!g1_from_bytes(out, pb->buf)) { PyErr_SetString(PyExc_ValueError, "coordinate out of range"); return 0; }
    return 1;
}
static int parse_g2(Py_buffer *pb, g2pt *out, const char *what) {
    if (pb->len != 128) { PyErr_Format(PyExc_ValueError, "%s must be 128 bytes", what); return 0; }
    if (!g2_from_bytes(out, pb->buf)) { PyErr_SetString(PyExc_ValueError, "coordinate out of range"); return 0; }
    return 1;
}
static int parse_fp12(Py_buffer *pb, fp12 *out, const char *what) {
    if (pb->len != 384) { PyErr_Format(PyExc_ValueError, "%s must be 384 bytes", what); return 0; }
    fp12_from_bytes(out, pb->buf);
    return 1;
}

static PyObject *py_g1_mul(PyObject *self, PyObject *args) {
    Py_buffer pb, kb;
    if (!PyArg_ParseTuple(args, "y*y*", &pb, &kb)) return NULL;
    int ok = parse_g1(&pb, &w_g1a, "g1 point");
    if (ok) mpz_import(w_k, (size_t)kb.len, 1, 1, 1, 0, kb.buf);
    PyBuffer_Release(&pb); PyBuffer_Release(&kb);
    if (!ok) return NULL;
    g1_mul(&w_g1r, &w_g1a, w_k);
    g1_affine(&w_g1r, &w_g1r);
    unsigned char out[64];
    g1_to_bytes(out, &w_g1r);
    return PyBytes_FromStringAndSize((char *)out, 64);
}
static PyObject *py_g1_add(PyObject *self, PyObject *args) {
    Py_buffer pb, qb;
    if (!PyArg_ParseTuple(args, "y*y*", &pb, &qb)) return NULL;
    int ok = parse_g1(&pb, &w_g1a, "g1 point") && parse_g1(&qb, &w_g1b, "g1 point");
    PyBuffer_Release(&pb); PyBuffer_Release(&qb);
    if (!ok) return NULL;
    g1_add(&w_g1r, &w_g1a, &w_g1b);
    g1_affine(&w_g1r, &w_g1r);
    unsigned char out[64];
    g1_to_bytes(out, &w_g1r);
    return PyBytes_FromStringAndSize((char *)out, 64);
}
static PyObject *py_g1_neg(PyObject *self, PyObject *args) {
    Py_buffer pb;
    if (!PyArg_ParseTuple(args, "y*", &pb)) return NULL;
    int ok = parse_g1(&pb, &w_g1a, "g1 point");
    PyBuffer_Release(&pb);
    if (!ok) return NULL;
    if (!g1_is_inf(&w_g1a)) mpz_sub(w_g1a.Y, P, w_g1a.Y);
    unsigned char out[64];
    g1_to_bytes(out, &w_g1a);
    return PyBytes_FromStringAndSize((char *)out, 64);
}
static PyObject *py_g1_is_on_curve(PyObject *self, PyObject *args) {
    Py_buffer pb;
    if (!PyArg_ParseTuple(args, "y*", &pb)) return NULL;
    if (pb.len != 64) { PyBuffer_Release(&pb); PyErr_SetString(PyExc_ValueError, "g1 point must be 64 bytes"); return NULL; }
    int ok = g1_from_bytes(&w_g1a, pb.buf);
    PyBuffer_Release(&pb);
    if (!ok) Py_RETURN_FALSE;
    if (g1_is_inf(&w_g1a)) Py_RETURN_TRUE;
    mpz_mul(g1_t, w_g1a.Y, w_g1a.Y); mpz_mod(g1_t, g1_t, P);
    mpz_mul(g1_t2, w_g1a.X, w_g1a.X); mpz_mul(g1_t2, g1_t2, w_g1a.X);
    mpz_add_ui(g1_t2, g1_t2, 3); mpz_mod(g1_t2, g1_t2, P);
    if (mpz_cmp(g1_t, g1_t2) == 0) Py_RETURN_TRUE;
    Py_RETURN_FALSE;
}
static PyObject *py_g2_mul(PyObject *self, PyObject *args) {
    Py_buffer pb, kb;
    if (!PyArg_ParseTuple(args, "y*y*", &pb, &kb)) return NULL;
    int ok = parse_g2(&pb, &w_g2a, "g2 point");
    if (ok) mpz_import(w_k, (size_t)kb.len, 1, 1, 1, 0, kb.buf);
    PyBuffer_Release(&pb); PyBuffer_Release(&kb);
    if (!ok) return NULL;
    g2_mul(&w_g2r, &w_g2a, w_k);
    g2_affine(&w_g2r, &w_g2r);
    unsigned char out[128];
    g2_to_bytes(out, &w_g2r);
    return PyBytes_FromStringAndSize((char *)out, 128);
}
static PyObject *py_g2_add(PyObject *self, PyObject *args) {
    Py_buffer pb, qb;
    if (!PyArg_ParseTuple(args, "y*y*", &pb, &qb)) return NULL;
    int ok = parse_g2(&pb, &w_g2a, "g2 point") && parse_g2(&qb, &w_g2b, "g2 point");
    PyBuffer_Release(&pb); PyBuffer_Release(&qb);
    if (!ok) return NULL;
    g2_add(&w_g2r, &w_g2a, &w_g2b);
    g2_affine(&w_g2r, &w_g2r);
    unsigned char out[128];
    g2_to_bytes(out, &w_g2r);
    return PyBytes_FromStringAndSize((char *)out, 128);
}
static PyObject *py_g2_neg(PyObject *self, PyObject *args) {
    Py_buffer pb;
    if (!PyArg_ParseTuple(args, "y*", &pb)) return NULL;
    int ok = parse_g2(&pb, &w_g2a, "g2 point");
    PyBuffer_Release(&pb);
    if (!ok) return NULL;
    if (!g2_is_inf(&w_g2a)) fp2_neg(&w_g2a.Y, &w_g2a.Y);
    unsigned char out[128];
    g2_to_bytes(out, &w_g2a);
    return PyBytes_FromStringAndSize((char *)out, 128);
}
static PyObject *py_g2_is_on_curve(PyObject *self, PyObject *args) {
    Py_buffer pb;
    if (!PyArg_ParseTuple(args, "y*", &pb)) return NULL;
    if (pb.len != 128) { PyBuffer_Release(&pb); PyErr_SetString(PyExc_ValueError, "g2 point must be 128 bytes"); return NULL; }
    int ok = g2_from_bytes(&w_g2a, pb.buf);
    PyBuffer_Release(&pb);
    if (!ok) Py_RETURN_FALSE;
    if (g2_is_inf(&w_g2a)) Py_RETURN_TRUE;
    fp2_sq(&q2_t, &w_g2a.Y);
    fp2_sq(&q2_t2, &w_g2a.X); fp2_mul(&q2_t2, &q2_t2, &w_g2a.X);
    fp2_add(&q2_t2, &q2_t2, &TWIST_B2);
    if (fp2_eq(&q2_t, &q2_t2)) Py_RETURN_TRUE;
    Py_RETURN_FALSE;
}
static PyObject *py_pairing(PyObject *self, PyObject *args) {
    Py_buffer pb, qb;
    if (!PyArg_ParseTuple(args, "y*y*", &pb, &qb)) return NULL;
    int ok = parse_g1(&pb, &w_g1a, "g1 point") && parse_g2(&qb, &w_g2a, "g2 point");
    PyBuffer_Release(&pb); PyBuffer_Release(&qb);
    if (!ok) return NULL;
    if (g1_is_inf(&w_g1a) || g2_is_inf(&w_g2a)) {
        fp12_one(&w_fr);
    } else {
        miller(&w_fa, w_g1a.X, w_g1a.Y, &w_g2a.X, &w_g2a.Y);
        final_exp(&w_fr, &w_fa);
    }
    unsigned char out[384];
    fp12_to_bytes(out, &w_fr);
    return PyBytes_FromStringAndSize((char *)out, 384);
}
static PyObject *py_fp12_mul(PyObject *self, PyObject *args) {
    Py_buffer ab, bb;
    if (!PyArg_ParseTuple(args, "y*y*", &ab, &bb)) return NULL;
    int ok = parse_fp12(&ab, &w_fa, "fp12") && parse_fp12(&bb, &w_fb, "fp12");
    PyBuffer_Release(&ab); PyBuffer_Release(&bb);
    if (!ok) return NULL;
    fp12_mul(&w_fr, &w_fa, &w_fb);
    unsigned char out[384];
    fp12_to_bytes(out, &w_fr);
    return PyBytes_FromStringAndSize((char *)out, 384);
}
static PyObject *py_fp12_inv(PyObject *self, PyObject *args) {
    Py_buffer ab;
    if (!PyArg_ParseTuple(args, "y*", &ab)) return NULL;
    int ok = parse_fp12(&ab, &w_fa, "fp12");
    PyBuffer_Release(&ab);
    if (!ok) return NULL;
    fp12_inv(&w_fr, &w_fa);
    unsigned char out[384];
    fp12_to_bytes(out, &w_fr);
    return PyBytes_FromStringAndSize((char *)out, 384);
}
static PyObject *py_fp12_exp_gt_fixed(PyObject *self, PyObject *args) {
    /* comb exponentiation for a repeatedly used unitary base */
    Py_buffer ab, kb;
    if (!PyArg_ParseTuple(args, "y*y*", &ab, &kb)) return NULL;
    if (ab.len != 384) { PyBuffer_Release(&ab); PyBuffer_Release(&kb); PyErr_SetString(PyExc_ValueError, "fp12 must be 384 bytes"); return NULL; }
    unsigned char base[384];
    memcpy(base, ab.buf, 384);
    mpz_import(w_k, (size_t)kb.len, 1, 1, 1, 0, kb.buf);
    PyBuffer_Release(&ab); PyBuffer_Release(&kb);
    fp12_exp_fixed(&w_fr, base, w_k);
    unsigned char out[384];
    fp12_to_bytes(out, &w_fr);
    return PyBytes_FromStringAndSize((char *)out, 384);
}
static PyObject *py_fp12_exp_gt(PyObject *self, PyObject *args) {
    /* fast path for unitary (pairing-derived) bases; exponent unsigned */
    Py_buffer ab, kb;
    if (!PyArg_ParseTuple(args, "y*y*", &ab, &kb)) return NULL;
    int ok = parse_fp12(&ab, &w_fa, "fp12");
    if (ok) mpz_import(w_k, (size_t)kb.len, 1, 1, 1, 0, kb.buf);
    PyBuffer_Release(&ab); PyBuffer_Release(&kb);
    if (!ok) return NULL;
    fp12_exp_cyclo(&w_fr, &w_fa, w_k);
    unsigned char out[384];
    fp12_to_bytes(out, &w_fr);
    return PyBytes_FromStringAndSize((char *)out, 384);
}

static PyMethodDef Methods[] = {
    {"g1_mul", py_g1_mul, METH_VARARGS, "g1_mul(point64, scalar_bytes) -> point64"},
    {"g1_add", py_g1_add, METH_VARARGS, "g1_add(point64, point64) -> point64"},
    {"g1_neg", py_g1_neg, METH_VARARGS, "g1_neg(point64) -> point64"},
    {"g1_is_on_curve", py_g1_is_on_curve, METH_VARARGS, "on-curve check (64-byte point)"},
    {"g2_mul", py_g2_mul, METH_VARARGS, "g2_mul(point128, scalar_bytes) -> point128"},
    {"g2_add", py_g2_add, METH_VARARGS, "g2_add(point128, point128) -> point128"},
    {"g2_neg", py_g2_neg, METH_VARARGS, "g2_neg(point128) -> point128"},
    {"g2_is_on_curve", py_g2_is_on_curve, METH_VARARGS, "on-twist check (128-byte point)"},
    {"pairing", py_pairing, METH_VARARGS, "pairing(g1_64, g2_128) -> fp12_384"},
    {"fp12_mul", py_fp12_mul, METH_VARARGS, "fp12_mul(a384, b384) -> 384"},
    {"fp12_inv", py_fp12_inv, METH_VARARGS, "fp12_inv(a384) -> 384"},
    {"fp12_exp_gt", py_fp12_exp_gt, METH_VARARGS, "fp12_exp_gt(a384, scalar_bytes) -> 384 (unitary base)"},
    {"fp12_exp_gt_fixed", py_fp12_exp_gt_fixed, METH_VARARGS, "comb exponentiation with base caching"},
    {NULL, NULL, 0, NULL}};

static struct PyModuleDef moduledef = {
    PyModuleDef_HEAD_INIT, "_fastcore", "BN254 pairing accelerator (GMP)", -1, Methods};

PyMODINIT_FUNC PyInit__fastcore(void) {
    mpz_init_set_str(P, "21888242871839275222246405745257275088696311157297823662689037894645226208583", 10);
    mpz_init_set_str(Q, "21888242871839275222246405745257275088548364400416034343698204186575808495617", 10);
    mpz_init_set_str(U, "4965661367192848881", 10);
    mpz_init(m_t0); mpz_init(m_t1); mpz_init(m_t2); mpz_init(m_t3);
    fp2_init(&s6_v0); fp2_init(&s6_v1); fp2_init(&s6_v2); fp2_init(&s6_t0); fp2_init(&s6_t1); fp2_init(&s6_t2);
    fp2_init(&s6_r0); fp2_init(&s6_r1); fp2_init(&s6_r2); fp2_init(&s6tau);
    fp2_init(&i6_A); fp2_init(&i6_B); fp2_init(&i6_C); fp2_init(&i6_F); fp2_init(&i6_t);
    fp6_init(&s12_v0); fp6_init(&s12_v1); fp6_init(&s12_t0); fp6_init(&s12_t1);
    fp6_init(&i12_t0); fp6_init(&i12_t1); fp6_init(&f12f_t);
    fp2_init(&cs_t0); fp2_init(&cs_t1); fp2_init(&cs_t2); fp2_init(&cs_t3); fp2_init(&cs_t4);
    fp2_init(&cs_t5); fp2_init(&cs_t6); fp2_init(&cs_t7); fp2_init(&cs_t8); fp2_init(&cs_u);
    for (int i = 0; i < 16; i++) fp12_init(&ce_tbl[i]);
    fp12_init(&ce_acc);
    fp12_one(&ce_tbl[0]);
    for (int i = 0; i < COMB_WINDOWS; i++)
        for (int j = 0; j < 16; j++) fp12_init(&comb_tbl[i][j]);
    mpz_init(g1_A); mpz_init(g1_B); mpz_init(g1_C); mpz_init(g1_D); mpz_init(g1_E);
    mpz_init(g1_t); mpz_init(g1_t2); mpz_init(g1_Z1Z1); mpz_init(g1_Z2Z2);
    mpz_init(g1_U1); mpz_init(g1_U2); mpz_init(g1_S1); mpz_init(g1_S2);
    mpz_init(g1_H); mpz_init(g1_r); mpz_init(g1_I); mpz_init(g1_J); mpz_init(g1_V);
    fp2_init(&q2_A); fp2_init(&q2_B); fp2_init(&q2_C); fp2_init(&q2_D); fp2_init(&q2_E);
    fp2_init(&q2_t); fp2_init(&q2_t2); fp2_init(&q2_Z1Z1); fp2_init(&q2_Z2Z2);
    fp2_init(&q2_U1); fp2_init(&q2_U2); fp2_init(&q2_S1); fp2_init(&q2_S2);
    fp2_init(&q2_H); fp2_init(&q2_r); fp2_init(&q2_I); fp2_init(&q2_J); fp2_init(&q2_V);
    fp2_init(&q2_zi); fp2_init(&q2_zi2);
    g1_init_pt(&gm_acc); g1_init_pt(&gm_base);
    g2_init_pt(&qm_acc); g2_init_pt(&qm_base);
    mpz_init(aff_zi); mpz_init(aff_zi2);
    fp2_init(&ld_A); fp2_init(&ld_B); fp2_init(&ld_C); fp2_init(&ld_D); fp2_init(&ld_E); fp2_init(&ld_F);
    fp2_init(&ld_t); fp2_init(&ld_t2); fp2_init(&ld_a); fp2_init(&ld_b); fp2_init(&ld_c);
    fp2_init(&la_B); fp2_init(&la_D); fp2_init(&la_H); fp2_init(&la_I); fp2_init(&la_E); fp2_init(&la_J);
    fp2_init(&la_L1); fp2_init(&la_V); fp2_init(&la_t); fp2_init(&la_t2);
    fp2_init(&la_X3); fp2_init(&la_Y3); fp2_init(&la_Z3); fp2_init(&la_T3);
    fp2_init(&la_a); fp2_init(&la_b); fp2_init(&la_c);
    fp6_init(&lm_A2); fp6_init(&lm_T3); fp6_init(&lm_t6a); fp6_init(&lm_t6b);
    fp2_init(&ml_qy2); fp2_init(&ml_nqy); fp2_init(&ml_la); fp2_init(&ml_lb); fp2_init(&ml_lc);
    fp2_init(&ml_q1x); fp2_init(&ml_q1y); fp2_init(&ml_q1y2); fp2_init(&ml_mq2x);
    fp2_init(&ml_r.X); fp2_init(&ml_r.Y); fp2_init(&ml_r.Z); fp2_init(&ml_r.T);
    fp12_init(&fe_t1); fp12_init(&fe_inv); fp12_init(&fe_fp); fp12_init(&fe_fp2); fp12_init(&fe_fp3);
    fp12_init(&fe_fu); fp12_init(&fe_fu2); fp12_init(&fe_fu3);
    fp12_init(&fe_y0); fp12_init(&fe_y1); fp12_init(&fe_y2); fp12_init(&fe_y3);
    fp12_init(&fe_y4); fp12_init(&fe_y5); fp12_init(&fe_y6); fp12_init(&fe_t0);
    fp12_init(&w_fa); fp12_init(&w_fb); fp12_init(&w_fr);
    g1_init_pt(&w_g1a); g1_init_pt(&w_g1b); g1_init_pt(&w_g1r);
    g2_init_pt(&w_g2a); g2_init_pt(&w_g2b); g2_init_pt(&w_g2r);
    mpz_init(w_k);

    fp2_init(&FROB_XI_P_16);
    mpz_set_str(FROB_XI_P_16.a, "8376118865763821496583973867626364092589906065868298776909617916018768340080", 10);
    mpz_set_str(FROB_XI_P_16.b, "16469823323077808223889137241176536799009286646108169935659301613961712198316", 10);
    fp2_init(&FROB_XI_P_13);
    mpz_set_str(FROB_XI_P_13.a, "21575463638280843010398324269430826099269044274347216827212613867836435027261", 10);
    mpz_set_str(FROB_XI_P_13.b, "10307601595873709700152284273816112264069230130616436755625194854815875713954", 10);
    fp2_init(&FROB_XI_P_12);
    mpz_set_str(FROB_XI_P_12.a, "2821565182194536844548159561693502659359617185244120367078079554186484126554", 10);
    mpz_set_str(FROB_XI_P_12.b, "3505843767911556378687030309984248845540243509899259641013678093033130930403", 10);
    fp2_init(&FROB_XI_2P_23);
    mpz_set_str(FROB_XI_2P_23.a, "2581911344467009335267311115468803099551665605076196740867805258568234346338", 10);
    mpz_set_str(FROB_XI_2P_23.b, "19937756971775647987995932169929341994314640652964949448313374472400716661030", 10);
    mpz_init_set_str(FROB_XI_P2_13, "21888242871839275220042445260109153167277707414472061641714758635765020556616", 10);
    mpz_init_set_str(FROB_XI_2P2_23, "2203960485148121921418603742825762020974279258880205651966", 10);
    mpz_init_set_str(FROB_XI_P2_16, "21888242871839275220042445260109153167277707414472061641714758635765020556617", 10);
    fp2_init(&TWIST_B2);
    mpz_set_str(TWIST_B2.a, "19485874751759354771024239261021720505790618469301721065564631296452457478373", 10);
    mpz_set_str(TWIST_B2.b, "266929791119991161246907387137283842545076965332900288569378510910307636690", 10);

    return PyModule_Create(&moduledef);
}
