#include "otm/pattern_obf.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

#include "otm/bits.hpp"
#include "otm/gf2e.hpp"
#include "otm/hash.hpp"
#include "otm/rng.hpp"

namespace otm {

namespace {

constexpr int kMinLambda = 16;

std::vector<uint8_t> le_bytes(uint64_t v, int nbytes) {
    std::vector<uint8_t> out(static_cast<size_t>(nbytes));
    for (int k = 0; k < nbytes; ++k) out[size_t(k)] = uint8_t(v >> (8 * k));
    return out;
}

uint64_t le_value(const uint8_t* p, int nbytes) {
    uint64_t v = 0;
    for (int k = 0; k < nbytes; ++k) v |= uint64_t(p[k]) << (8 * k);
    return v;
}

std::vector<uint8_t> secret_tag(uint64_t p0, int field_width, int lambda) {
    return labeled_hash("obf-tag", le_bytes(p0, field_width / 8), size_t(lambda) / 8);
}

std::vector<uint8_t> secret_kdf(uint64_t p0, int field_width, int lambda) {
    return labeled_hash("obf-kdf", le_bytes(p0, field_width / 8), size_t(lambda) / 8);
}

}  // namespace

size_t Pattern::fixed_count() const {
    size_t c = 0;
    for (PatternEntry e : entries)
        if (e != PatternEntry::Wildcard) ++c;
    return c;
}

void Pattern::validate() const {
    if (entries.empty()) throw std::invalid_argument("pattern: empty");
    for (PatternEntry e : entries) {
        if (e != PatternEntry::FixedZero && e != PatternEntry::FixedOne &&
            e != PatternEntry::Wildcard)
            throw std::invalid_argument("pattern: bad entry");
    }
    if (fixed_count() == 0)
        throw std::invalid_argument("pattern: all-wildcard conjunction rejected");
}

int min_field_width(size_t pattern_length) {
    if (pattern_length == 0) throw std::invalid_argument("min_field_width: N = 0");
    // ceil(log2(2N)) + 16; bit_width(2N - 1) equals ceil(log2(2N)) for N >= 1.
    int required = std::bit_width(uint64_t(2 * pattern_length - 1)) + 16;
    for (int w : {8, 16, 32, 64})
        if (w >= required) return w;
    throw std::invalid_argument("min_field_width: pattern too long for supported fields");
}

size_t Obfuscation::serialized_size() const {
    return 1 + 4 + 2 + size_t(2) * length * size_t(field_width / 8) +
           2 * (size_t(lambda) / 8);
}

void Obfuscation::validate() const {
    gf::Field f = gf::Field::with_width(field_width);  // throws on bad width
    if (length == 0) throw std::invalid_argument("obfuscation: N = 0");
    if (field_width < min_field_width(length))
        throw std::invalid_argument("obfuscation: field width below 2N-point requirement");
    if (lambda < kMinLambda || lambda % 8 != 0)
        throw std::invalid_argument("obfuscation: lambda must be a multiple of 8, >= 16");
    if (share_table.size() != size_t(2) * length)
        throw std::invalid_argument("obfuscation: share table size mismatch");
    for (uint64_t s : share_table)
        if ((s & ~f.mask) != 0)
            throw std::invalid_argument("obfuscation: share exceeds field mask");
    if (tag.size() != size_t(lambda) / 8 || wrapped_key.size() != size_t(lambda) / 8)
        throw std::invalid_argument("obfuscation: tag/wrapped_key length mismatch");
}

std::vector<uint8_t> Obfuscation::serialize() const {
    validate();
    std::vector<uint8_t> out;
    out.reserve(serialized_size());
    out.push_back(uint8_t(field_width));
    for (int k = 0; k < 4; ++k) out.push_back(uint8_t(length >> (8 * k)));
    for (int k = 0; k < 2; ++k) out.push_back(uint8_t(uint32_t(lambda) >> (8 * k)));
    int sb = field_width / 8;
    for (uint64_t s : share_table)
        for (int k = 0; k < sb; ++k) out.push_back(uint8_t(s >> (8 * k)));
    out.insert(out.end(), tag.begin(), tag.end());
    out.insert(out.end(), wrapped_key.begin(), wrapped_key.end());
    return out;
}

Obfuscation Obfuscation::deserialize(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 7) throw std::invalid_argument("deserialize: truncated header");
    Obfuscation o;
    o.field_width = bytes[0];
    o.length = uint32_t(le_value(&bytes[1], 4));
    o.lambda = int(le_value(&bytes[5], 2));
    if (o.field_width != 8 && o.field_width != 16 && o.field_width != 32 &&
        o.field_width != 64)
        throw std::invalid_argument("deserialize: unsupported field width");
    if (o.length == 0) throw std::invalid_argument("deserialize: N = 0");
    if (bytes.size() != o.serialized_size())
        throw std::invalid_argument("deserialize: size mismatch");
    int sb = o.field_width / 8;
    size_t pos = 7;
    o.share_table.resize(size_t(2) * o.length);
    for (uint64_t& s : o.share_table) {
        s = le_value(&bytes[pos], sb);
        pos += size_t(sb);
    }
    o.tag.assign(bytes.begin() + long(pos), bytes.begin() + long(pos + size_t(o.lambda) / 8));
    pos += size_t(o.lambda) / 8;
    o.wrapped_key.assign(bytes.begin() + long(pos), bytes.end());
    o.validate();
    return o;
}

Obfuscation obf_conj(const Pattern& pattern, const std::vector<uint8_t>& key,
                     uint64_t rng_seed, int field_width) {
    pattern.validate();
    int lambda = int(key.size()) * 8;
    if (lambda < kMinLambda)
        throw std::invalid_argument("obf_conj: key shorter than 16 bits");
    size_t n = pattern.length();
    int w = field_width == 0 ? min_field_width(n) : field_width;
    if (w < min_field_width(n))
        throw std::invalid_argument("obf_conj: requested field width too small");
    gf::Field f = gf::Field::with_width(w);

    auto rng = make_rng(rng_seed, 0x0bf5);
    auto field_elem = [&] { return rng() & f.mask; };

    // Uniform secret polynomial of degree < N; p(0) is the gate secret.
    std::vector<uint64_t> coeffs(n);
    for (uint64_t& c : coeffs) c = field_elem();

    Obfuscation o;
    o.field_width = w;
    o.length = uint32_t(n);
    o.lambda = lambda;
    o.share_table.resize(2 * n);
    for (size_t j = 0; j < n; ++j) {
        // 1-based position index keeps evaluation points off 0, where the
        // secret itself lives.
        uint64_t e0 = 2 * (uint64_t(j) + 1);
        uint64_t p0 = gf::poly_eval(f, coeffs, e0);
        uint64_t p1 = gf::poly_eval(f, coeffs, e0 + 1);
        switch (pattern.entries[j]) {
            case PatternEntry::FixedZero:
                o.share_table[2 * j] = p0;
                o.share_table[2 * j + 1] = field_elem();
                break;
            case PatternEntry::FixedOne:
                o.share_table[2 * j] = field_elem();
                o.share_table[2 * j + 1] = p1;
                break;
            case PatternEntry::Wildcard:
                o.share_table[2 * j] = p0;
                o.share_table[2 * j + 1] = p1;
                break;
        }
    }
    o.tag = secret_tag(coeffs[0], w, lambda);
    o.wrapped_key = xor_bytes(key, secret_kdf(coeffs[0], w, lambda));
    return o;
}

std::optional<std::vector<uint8_t>> eval_conj(const Obfuscation& obf,
                                              const std::vector<uint8_t>& input_bits) {
    obf.validate();
    if (input_bits.size() != obf.length)
        throw std::invalid_argument("eval_conj: input length mismatch");
    gf::Field f = gf::Field::with_width(obf.field_width);
    std::vector<uint64_t> xs(obf.length), ys(obf.length);
    for (size_t j = 0; j < obf.length; ++j) {
        uint8_t b = input_bits[j];
        if (b > 1) throw std::invalid_argument("eval_conj: input entries must be 0/1");
        xs[j] = 2 * (uint64_t(j) + 1) + b;
        ys[j] = obf.share_table[2 * j + b];
    }
    uint64_t p0 = gf::interpolate_at_zero(f, xs, ys);
    if (secret_tag(p0, obf.field_width, obf.lambda) != obf.tag) return std::nullopt;
    return xor_bytes(obf.wrapped_key, secret_kdf(p0, obf.field_width, obf.lambda));
}

}  // namespace otm
