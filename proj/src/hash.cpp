#include "otm/hash.hpp"

#include <openssl/sha.h>

#include <cstring>

namespace otm {

std::array<uint8_t, 32> sha256(const uint8_t* data, size_t len) {
    std::array<uint8_t, 32> out;
    SHA256(data, len, out.data());
    return out;
}

std::array<uint8_t, 32> sha256(const std::vector<uint8_t>& data) {
    return sha256(data.data(), data.size());
}

std::vector<uint8_t> labeled_hash(std::string_view label,
                                  const std::vector<uint8_t>& data,
                                  size_t out_bytes) {
    std::vector<uint8_t> msg;
    msg.reserve(label.size() + data.size() + 4);
    msg.insert(msg.end(), label.begin(), label.end());
    msg.insert(msg.end(), data.begin(), data.end());

    std::vector<uint8_t> out;
    out.reserve(out_bytes);
    if (out_bytes <= 32) {
        auto h = sha256(msg);
        out.assign(h.begin(), h.begin() + out_bytes);
        return out;
    }
    msg.resize(msg.size() + 4);
    for (uint32_t ctr = 0; out.size() < out_bytes; ++ctr) {
        for (int i = 0; i < 4; ++i)
            msg[msg.size() - 4 + i] = uint8_t((ctr >> (8 * i)) & 0xff);
        auto h = sha256(msg);
        size_t take = std::min<size_t>(32, out_bytes - out.size());
        out.insert(out.end(), h.begin(), h.begin() + take);
    }
    return out;
}

}  // namespace otm
