/* GF(2^64) arithmetic modulo x^64 + x^4 + x^3 + x + 1.
 *
 * Two multiplication paths: PCLMULQDQ (selected at runtime when the CPU
 * supports it) and a portable 4-bit windowed carryless multiply. Both must
 * produce identical bits; the test suite checks this.
 */
#ifndef KCYCLE_GF64_H
#define KCYCLE_GF64_H

#include <stdint.h>
#include <stddef.h>

#if defined(__x86_64__) || defined(__i386__)
#define GF64_X86 1
#include <immintrin.h>
#endif

/* Fold a 128-bit carryless product (hi:lo) modulo the field polynomial. */
static inline uint64_t gf64_reduce(uint64_t hi, uint64_t lo)
{
    uint64_t t = hi ^ (hi >> 63) ^ (hi >> 61) ^ (hi >> 60);
    return lo ^ t ^ (t << 1) ^ (t << 3) ^ (t << 4);
}

/* Table of a * n for n in 0..15, as 67-bit values split into hi/lo. */
static inline void gf64_table(uint64_t a, uint64_t th[16], uint64_t tl[16])
{
    th[0] = 0; tl[0] = 0;
    th[1] = 0; tl[1] = a;
    for (int i = 2; i < 16; i += 2) {
        tl[i] = tl[i >> 1] << 1;
        th[i] = (th[i >> 1] << 1) | (tl[i >> 1] >> 63);
        tl[i + 1] = tl[i] ^ a;
        th[i + 1] = th[i];
    }
}

static inline uint64_t gf64_mul_table(const uint64_t th[16], const uint64_t tl[16], uint64_t b)
{
    uint64_t hi = 0, lo = 0;
    for (int s = 60; s >= 0; s -= 4) {
        unsigned nib = (unsigned)((b >> s) & 15u);
        hi = (hi << 4) | (lo >> 60);
        lo <<= 4;
        hi ^= th[nib];
        lo ^= tl[nib];
    }
    return gf64_reduce(hi, lo);
}

static inline uint64_t gf64_mul_portable(uint64_t a, uint64_t b)
{
    uint64_t th[16], tl[16];
    gf64_table(a, th, tl);
    return gf64_mul_table(th, tl, b);
}

static void gf64_axpy_portable(uint64_t *dst, const uint64_t *src, uint64_t f, ptrdiff_t n)
{
    uint64_t th[16], tl[16];
    gf64_table(f, th, tl);
    for (ptrdiff_t j = 0; j < n; j++) {
        if (src[j])
            dst[j] ^= gf64_mul_table(th, tl, src[j]);
    }
}

#ifdef GF64_X86
__attribute__((target("pclmul,sse2")))
static inline uint64_t gf64_mul_clmul(uint64_t a, uint64_t b)
{
    __m128i p = _mm_clmulepi64_si128(_mm_cvtsi64_si128((long long)a),
                                     _mm_cvtsi64_si128((long long)b), 0x00);
    uint64_t lo = (uint64_t)_mm_cvtsi128_si64(p);
    uint64_t hi = (uint64_t)_mm_cvtsi128_si64(_mm_srli_si128(p, 8));
    return gf64_reduce(hi, lo);
}

__attribute__((target("pclmul,sse2")))
static void gf64_axpy_clmul(uint64_t *dst, const uint64_t *src, uint64_t f, ptrdiff_t n)
{
    __m128i fv = _mm_cvtsi64_si128((long long)f);
    for (ptrdiff_t j = 0; j < n; j++) {
        uint64_t s = src[j];
        if (s) {
            __m128i p = _mm_clmulepi64_si128(fv, _mm_cvtsi64_si128((long long)s), 0x00);
            uint64_t lo = (uint64_t)_mm_cvtsi128_si64(p);
            uint64_t hi = (uint64_t)_mm_cvtsi128_si64(_mm_srli_si128(p, 8));
            dst[j] ^= gf64_reduce(hi, lo);
        }
    }
}
#endif

/* -1 = not yet probed, 0 = portable, 1 = pclmul */
static int gf64_mode = -1;

static inline int gf64_have_clmul(void)
{
#ifdef GF64_X86
    __builtin_cpu_init();
    return __builtin_cpu_supports("pclmul") ? 1 : 0;
#else
    return 0;
#endif
}

static inline int gf64_use_clmul(void)
{
    if (gf64_mode < 0)
        gf64_mode = gf64_have_clmul();
    return gf64_mode;
}

/* Returns 0 if hardware was requested but is unavailable. */
static inline int gf64_set_clmul(int on)
{
    if (on && !gf64_have_clmul())
        return 0;
    gf64_mode = on ? 1 : 0;
    return 1;
}

static inline uint64_t gf64_mul(uint64_t a, uint64_t b)
{
#ifdef GF64_X86
    if (gf64_use_clmul())
        return gf64_mul_clmul(a, b);
#endif
    return gf64_mul_portable(a, b);
}

static inline void gf64_axpy(uint64_t *dst, const uint64_t *src, uint64_t f, ptrdiff_t n)
{
    if (f == 0 || n <= 0)
        return;
#ifdef GF64_X86
    if (gf64_use_clmul()) {
        gf64_axpy_clmul(dst, src, f, n);
        return;
    }
#endif
    gf64_axpy_portable(dst, src, f, n);
}

/* a^(2^64 - 2); caller guarantees a != 0. */
static inline uint64_t gf64_inv(uint64_t a)
{
    uint64_t result = 1, base = a;
    /* exponent 0xFFFF...FE: bits 1..63 set */
    base = gf64_mul(base, base);
    for (int i = 1; i < 64; i++) {
        result = gf64_mul(result, base);
        base = gf64_mul(base, base);
    }
    return result;
}

#endif
