#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <unordered_map>
#include <vector>

namespace otm {

enum class OracleMode { Lazy, Concrete };

/// One logged oracle call.  Positions are 1-based; s is the m-bit query
/// value; the answer is the full m'/8-byte oracle output.
struct OracleQuery {
    uint64_t seq;
    uint32_t i;
    uint32_t s;
    std::vector<uint8_t> answer;
};

using OracleTranscript = std::vector<OracleQuery>;

/// The shared oracle H : [n] x {0,1}^m -> {0,1}^m'.  Lazy mode samples fresh
/// uniform answers on first use and caches them (answers then depend on the
/// seed and on first-query order; use one instance per trial).  Concrete
/// mode hashes salt || i || s, giving a serializable deterministic oracle.
/// Every call is appended to an append-only transcript.
class OracleInstance {
public:
    static OracleInstance lazy(int n, int m, int m_prime, uint64_t seed);
    static OracleInstance concrete(int n, int m, int m_prime,
                                   const std::vector<uint8_t>& salt16);

    std::vector<uint8_t> query(uint32_t i, uint32_t s);

    const OracleTranscript& transcript() const { return transcript_; }
    OracleMode mode() const { return mode_; }
    int n() const { return n_; }
    int m() const { return m_; }
    int m_prime() const { return m_prime_; }
    const std::vector<uint8_t>& salt() const;

private:
    OracleInstance(OracleMode mode, int n, int m, int m_prime);

    OracleMode mode_;
    int n_, m_, m_prime_;
    std::vector<uint8_t> salt_;
    std::mt19937_64 rng_;
    std::unordered_map<uint64_t, std::vector<uint8_t>> cache_;
    OracleTranscript transcript_;
};

/// Subset of `theta` whose exact (i, expected[i]) pair was queried somewhere
/// in the transcript: the extraction predicate deciding which positions of a
/// basis set the querier demonstrably knows.
std::set<uint32_t> transcript_positions_covered(
    const OracleTranscript& t, const std::set<uint32_t>& theta,
    const std::map<uint32_t, uint32_t>& expected);

}  // namespace otm
