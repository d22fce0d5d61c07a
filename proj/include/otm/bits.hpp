#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace otm {

/// Bit string with MSB-first addressing: bit 0 is the most significant bit
/// of byte 0.  Trailing bits of the last byte are kept zero.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(size_t nbits) : bytes_((nbits + 7) / 8, 0), size_(nbits) {}

    static BitVec from_bytes(std::vector<uint8_t> bytes) {
        BitVec b;
        b.size_ = bytes.size() * 8;
        b.bytes_ = std::move(bytes);
        return b;
    }

    size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool get(size_t i) const {
        return (bytes_[i >> 3] >> (7 - (i & 7))) & 1;
    }

    void set(size_t i, bool v) {
        uint8_t mask = uint8_t(1u << (7 - (i & 7)));
        if (v) bytes_[i >> 3] |= mask;
        else bytes_[i >> 3] &= uint8_t(~mask);
    }

    void flip(size_t i) { set(i, !get(i)); }

    /// Appends the low `nbits` of `v`, most significant first.
    void append_value(uint64_t v, int nbits) {
        for (int k = nbits - 1; k >= 0; --k) append((v >> k) & 1);
    }

    void append(bool v) {
        if (size_ % 8 == 0) bytes_.push_back(0);
        ++size_;
        set(size_ - 1, v);
    }

    void append_bytes(const std::vector<uint8_t>& bs) {
        for (uint8_t b : bs) append_value(b, 8);
    }

    const std::vector<uint8_t>& bytes() const { return bytes_; }

private:
    std::vector<uint8_t> bytes_;
    size_t size_ = 0;
};

std::string to_hex(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> from_hex(const std::string& hex);

std::string base64_encode(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> base64_decode(const std::string& text);

/// Byte-wise XOR; sizes must match.
std::vector<uint8_t> xor_bytes(const std::vector<uint8_t>& a,
                               const std::vector<uint8_t>& b);

/// Value `v` (below 2^nbits) as a big-endian string of ceil(nbits/8) bytes,
/// i.e. the bit string left-padded with zeros to a whole number of bytes.
std::vector<uint8_t> value_to_padded_bytes(uint32_t v, int nbits);

}  // namespace otm
