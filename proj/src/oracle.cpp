#include "otm/oracle.hpp"

#include <stdexcept>

#include "otm/bits.hpp"
#include "otm/hash.hpp"
#include "otm/rng.hpp"

namespace otm {

OracleInstance::OracleInstance(OracleMode mode, int n, int m, int m_prime)
    : mode_(mode), n_(n), m_(m), m_prime_(m_prime) {
    if (n < 1) throw std::invalid_argument("oracle: n < 1");
    if (m < 1 || m > 32) throw std::invalid_argument("oracle: m outside [1, 32]");
    if (m_prime < 8 || m_prime % 8 != 0 || m_prime > 256)
        throw std::invalid_argument("oracle: m' must be a multiple of 8 in [8, 256]");
}

OracleInstance OracleInstance::lazy(int n, int m, int m_prime, uint64_t seed) {
    OracleInstance o(OracleMode::Lazy, n, m, m_prime);
    o.rng_ = make_rng(seed, 0x04ac1eULL);
    return o;
}

OracleInstance OracleInstance::concrete(int n, int m, int m_prime,
                                        const std::vector<uint8_t>& salt16) {
    if (salt16.size() != 16) throw std::invalid_argument("oracle: salt must be 16 bytes");
    OracleInstance o(OracleMode::Concrete, n, m, m_prime);
    o.salt_ = salt16;
    return o;
}

const std::vector<uint8_t>& OracleInstance::salt() const {
    if (mode_ != OracleMode::Concrete)
        throw std::logic_error("oracle: salt only exists in concrete mode");
    return salt_;
}

std::vector<uint8_t> OracleInstance::query(uint32_t i, uint32_t s) {
    if (i < 1 || i > uint32_t(n_))
        throw std::invalid_argument("oracle: position out of range");
    if (m_ < 32 && s >= (uint32_t(1) << m_))
        throw std::invalid_argument("oracle: s wider than m bits");

    std::vector<uint8_t> answer;
    if (mode_ == OracleMode::Lazy) {
        uint64_t key = (uint64_t(i) << 32) | uint64_t(s);
        auto it = cache_.find(key);
        if (it == cache_.end())
            it = cache_.emplace(key, random_bytes(rng_, size_t(m_prime_) / 8)).first;
        answer = it->second;
    } else {
        std::vector<uint8_t> msg = salt_;
        for (int k = 0; k < 4; ++k) msg.push_back(uint8_t(i >> (8 * k)));
        auto padded = value_to_padded_bytes(s, m_);
        msg.insert(msg.end(), padded.begin(), padded.end());
        auto digest = sha256(msg);
        answer.assign(digest.begin(), digest.begin() + m_prime_ / 8);
    }
    transcript_.push_back({uint64_t(transcript_.size()), i, s, answer});
    return answer;
}

std::set<uint32_t> transcript_positions_covered(
    const OracleTranscript& t, const std::set<uint32_t>& theta,
    const std::map<uint32_t, uint32_t>& expected) {
    std::set<uint32_t> covered;
    for (const auto& q : t) {
        if (!theta.count(q.i)) continue;
        auto it = expected.find(q.i);
        if (it != expected.end() && it->second == q.s) covered.insert(q.i);
    }
    return covered;
}

}  // namespace otm
