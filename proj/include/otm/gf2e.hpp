#pragma once

#include <cstdint>
#include <vector>

namespace otm::gf {

/// Binary extension field GF(2^w) for w in {8, 16, 32, 64}, each with a
/// fixed low-weight irreducible reduction polynomial.  Elements are the
/// low w bits of a uint64_t.
struct Field {
    int width;
    uint64_t poly_low;  // reduction polynomial with the x^w term dropped
    uint64_t mask;      // (1 << w) - 1, all ones for w = 64

    static Field with_width(int w);

    uint64_t add(uint64_t a, uint64_t b) const { return a ^ b; }
    uint64_t mul(uint64_t a, uint64_t b) const;
    uint64_t pow(uint64_t a, uint64_t e) const;
    uint64_t inv(uint64_t a) const;  // a != 0
};

/// Horner evaluation of sum coeffs[k] x^k.
uint64_t poly_eval(const Field& f, const std::vector<uint64_t>& coeffs,
                   uint64_t x);

/// Value at zero of the unique degree < n interpolating polynomial through
/// (xs[j], ys[j]).  Points must be distinct and nonzero.
uint64_t interpolate_at_zero(const Field& f, const std::vector<uint64_t>& xs,
                             const std::vector<uint64_t>& ys);

/// Rabin irreducibility check of the field's reduction polynomial; test
/// support for validating the hard-coded moduli.
bool modulus_is_irreducible(const Field& f);

}  // namespace otm::gf
