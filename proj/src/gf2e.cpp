#include "otm/gf2e.hpp"

#include <stdexcept>

#if defined(__PCLMUL__)
#include <immintrin.h>
#include <wmmintrin.h>
#endif

namespace otm::gf {

namespace {

// Minimal-weight irreducible polynomials; the 32- and 64-bit entries are
// part of the serialization contract and must not change.
constexpr uint64_t kPoly8 = 0x1b;   // x^8 + x^4 + x^3 + x + 1
constexpr uint64_t kPoly16 = 0x2b;  // x^16 + x^5 + x^3 + x + 1
constexpr uint64_t kPoly32 = 0x8d;  // x^32 + x^7 + x^3 + x^2 + 1
constexpr uint64_t kPoly64 = 0x1b;  // x^64 + x^4 + x^3 + x + 1

#if defined(__PCLMUL__)
inline void clmul64(uint64_t a, uint64_t b, uint64_t& lo, uint64_t& hi) {
    __m128i p = _mm_clmulepi64_si128(_mm_set_epi64x(0, (long long)a),
                                     _mm_set_epi64x(0, (long long)b), 0);
    lo = uint64_t(_mm_cvtsi128_si64(p));
    hi = uint64_t(_mm_cvtsi128_si64(_mm_srli_si128(p, 8)));
}
#else
inline void clmul64(uint64_t a, uint64_t b, uint64_t& lo, uint64_t& hi) {
    lo = 0;
    hi = 0;
    for (int k = 0; k < 64; ++k) {
        if ((b >> k) & 1) {
            lo ^= a << k;
            if (k > 0) hi ^= a >> (64 - k);
        }
    }
}
#endif

inline uint64_t reduce_narrow(uint64_t v, int width, uint64_t poly_low,
                              uint64_t mask) {
    // v has degree < 2*width <= 64; fold the high part down until it fits.
    while (uint64_t high = v >> width) {
        v &= mask;
        for (uint64_t p = poly_low; p; p &= p - 1) {
            int k = __builtin_ctzll(p);
            v ^= high << k;
        }
    }
    return v;
}

inline uint64_t reduce128_w64(uint64_t lo, uint64_t hi, uint64_t poly_low) {
    // x^64 == poly_low (mod f); two folds suffice since deg(poly_low) <= 4.
    uint64_t l1, h1;
    clmul64(hi, poly_low, l1, h1);
    lo ^= l1;
    uint64_t l2, h2;
    clmul64(h1, poly_low, l2, h2);
    (void)h2;  // deg(h1) <= 4 so the second fold has an empty high part
    return lo ^ l2;
}

}  // namespace

Field Field::with_width(int w) {
    switch (w) {
        case 8: return Field{8, kPoly8, 0xffu};
        case 16: return Field{16, kPoly16, 0xffffu};
        case 32: return Field{32, kPoly32, 0xffffffffu};
        case 64: return Field{64, kPoly64, ~0ULL};
        default: throw std::invalid_argument("unsupported field width");
    }
}

uint64_t Field::mul(uint64_t a, uint64_t b) const {
    a &= mask;
    b &= mask;
    uint64_t lo, hi;
    clmul64(a, b, lo, hi);
    if (width == 64) return reduce128_w64(lo, hi, poly_low);
    return reduce_narrow(lo, width, poly_low, mask);
}

uint64_t Field::pow(uint64_t a, uint64_t e) const {
    uint64_t r = 1, base = a & mask;
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

uint64_t Field::inv(uint64_t a) const {
    if ((a & mask) == 0) throw std::domain_error("inverse of zero");
    // a^(2^w - 2): square-and-multiply over the fixed exponent.
    uint64_t r = 1, sq = a & mask;
    for (int i = 1; i < width; ++i) {
        sq = mul(sq, sq);
        r = mul(r, sq);
    }
    return r;
}

uint64_t poly_eval(const Field& f, const std::vector<uint64_t>& coeffs,
                   uint64_t x) {
    uint64_t acc = 0;
    for (size_t k = coeffs.size(); k-- > 0;) acc = f.mul(acc, x) ^ coeffs[k];
    return acc;
}

uint64_t interpolate_at_zero(const Field& f, const std::vector<uint64_t>& xs,
                             const std::vector<uint64_t>& ys) {
    size_t n = xs.size();
    if (n == 0 || ys.size() != n) throw std::invalid_argument("bad point set");

    // L_j(0) = (prod_{k != j} x_k) / (prod_{k != j} (x_k ^ x_j)).
    std::vector<uint64_t> num(n), den(n);
    std::vector<uint64_t> prefix(n + 1), suffix(n + 1);
    prefix[0] = 1;
    for (size_t j = 0; j < n; ++j) {
        if (xs[j] == 0) throw std::domain_error("evaluation point zero");
        prefix[j + 1] = f.mul(prefix[j], xs[j]);
    }
    suffix[n] = 1;
    for (size_t j = n; j-- > 0;) suffix[j] = f.mul(suffix[j + 1], xs[j]);
    for (size_t j = 0; j < n; ++j) {
        num[j] = f.mul(prefix[j], suffix[j + 1]);
        uint64_t d = 1;
        for (size_t k = 0; k < n; ++k) {
            if (k == j) continue;
            uint64_t diff = xs[k] ^ xs[j];
            if (diff == 0) throw std::domain_error("repeated evaluation point");
            d = f.mul(d, diff);
        }
        den[j] = d;
    }

    // Batch inversion of all denominators with one field inversion.
    std::vector<uint64_t> acc(n);
    uint64_t run = 1;
    for (size_t j = 0; j < n; ++j) {
        acc[j] = run;
        run = f.mul(run, den[j]);
    }
    uint64_t run_inv = f.inv(run);
    std::vector<uint64_t> den_inv(n);
    for (size_t j = n; j-- > 0;) {
        den_inv[j] = f.mul(run_inv, acc[j]);
        run_inv = f.mul(run_inv, den[j]);
    }

    uint64_t out = 0;
    for (size_t j = 0; j < n; ++j)
        out ^= f.mul(ys[j], f.mul(num[j], den_inv[j]));
    return out;
}

namespace {

// Polynomial arithmetic over GF(2)[x] with degree <= 64 operands held in
// (hi, lo) 128-bit form; only what the Rabin check needs.
struct Poly128 {
    uint64_t hi = 0, lo = 0;
    bool is_zero() const { return hi == 0 && lo == 0; }
    int degree() const {
        if (hi) return 127 - __builtin_clzll(hi);
        if (lo) return 63 - __builtin_clzll(lo);
        return -1;
    }
    void shift_left(int k) {
        if (k == 0) return;
        if (k >= 64) {
            hi = lo << (k - 64);
            lo = 0;
        } else {
            hi = hi << k | lo >> (64 - k);
            lo <<= k;
        }
    }
    void xor_with(const Poly128& o) {
        hi ^= o.hi;
        lo ^= o.lo;
    }
};

Poly128 poly_mod(Poly128 a, const Poly128& m) {
    int dm = m.degree();
    while (a.degree() >= dm) {
        Poly128 t = m;
        t.shift_left(a.degree() - dm);
        a.xor_with(t);
    }
    return a;
}

Poly128 poly_gcd(Poly128 a, Poly128 b) {
    while (!b.is_zero()) {
        Poly128 r = poly_mod(a, b);
        a = b;
        b = r;
    }
    return a;
}

}  // namespace

bool modulus_is_irreducible(const Field& f) {
    // f(x) of degree w is irreducible iff x^(2^w) == x (mod f) and
    // gcd(x^(2^(w/2)) + x, f) = 1; the only prime divisor of w here is 2.
    uint64_t s = 2;  // the element x
    for (int i = 0; i < f.width / 2; ++i) s = f.mul(s, s);
    uint64_t half = s ^ 2;
    for (int i = 0; i < f.width / 2; ++i) s = f.mul(s, s);
    if (s != 2) return false;

    if (half == 0) return false;
    Poly128 modulus;
    modulus.lo = f.poly_low;
    Poly128 top;
    top.lo = 1;
    top.shift_left(f.width);
    modulus.xor_with(top);
    Poly128 g;
    g.lo = half;
    Poly128 d = poly_gcd(modulus, g);
    return d.degree() == 0;
}

}  // namespace otm::gf
