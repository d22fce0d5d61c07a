#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace otm {

enum class PatternEntry : uint8_t { FixedZero = 0, FixedOne = 1, Wildcard = 2 };

/// Conjunction pattern over bit strings: each position is pinned to 0, to 1,
/// or left free.  At least one position must be pinned; the all-wildcard
/// pattern accepts everything and is rejected as an obfuscation target.
struct Pattern {
    std::vector<PatternEntry> entries;

    size_t length() const { return entries.size(); }
    size_t fixed_count() const;
    void validate() const;
};

/// Obfuscated conjunction.  One share pair per bit position: the share on
/// the pinned side of a fixed position (and both shares of a wildcard) lie
/// on a secret polynomial p; the off shares are uniform noise.  An input
/// selects one share per position; only selections consistent with the
/// pattern interpolate back to p(0), which gates the wrapped key.
struct Obfuscation {
    int field_width = 0;                // w, bits per share
    uint32_t length = 0;                // N, bit positions
    int lambda = 0;                     // tag / key length in bits
    std::vector<uint64_t> share_table;  // 2N entries, row-major (sigma_{j,0}, sigma_{j,1})
    std::vector<uint8_t> tag;           // lambda/8 bytes
    std::vector<uint8_t> wrapped_key;   // lambda/8 bytes

    size_t serialized_size() const;
    std::vector<uint8_t> serialize() const;
    static Obfuscation deserialize(const std::vector<uint8_t>& bytes);
    void validate() const;
};

/// Smallest supported field width satisfying w >= ceil(log2(2N)) + 16, the
/// slack keeping the 2N+1 evaluation points comfortably inside the field.
int min_field_width(size_t pattern_length);

/// Obfuscate: sample p uniformly with degree < N over GF(2^w), place real
/// shares p(2j), p(2j+1) per the pattern (points 1-based so index 0 stays
/// reserved for the secret p(0)), bind tag and key wrap to p(0).
/// field_width = 0 picks min_field_width automatically.
Obfuscation obf_conj(const Pattern& pattern, const std::vector<uint8_t>& key,
                     uint64_t rng_seed, int field_width = 0);

/// Evaluate on an N-bit input (one byte per bit, each 0 or 1).  Returns the
/// key when the selected shares interpolate to a secret matching the tag,
/// std::nullopt otherwise.
std::optional<std::vector<uint8_t>> eval_conj(const Obfuscation& obf,
                                              const std::vector<uint8_t>& input_bits);

}  // namespace otm
