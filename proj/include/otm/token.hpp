#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "otm/oracle.hpp"
#include "otm/pattern_obf.hpp"
#include "otm/qsim.hpp"

namespace otm {

/// Desk-scale scheme parameters; the defaults keep per-block guessing
/// visible (2^-6) while both-message success stays unobservably rare.
struct Params {
    int lambda = 128;
    int n = 8;
    int m = 6;
    int m_prime = 64;

    void validate() const;
};

/// Everything the preparer knows.  Returned for test instrumentation only;
/// the security game must not hand this to an adversary.
struct TokenSecret {
    std::vector<uint32_t> secrets;      // s_i, m bits each, block order
    std::vector<Basis> bases;           // theta_i
    std::set<uint32_t> theta_x;         // 1-based positions measured in X
    std::set<uint32_t> theta_z;
    std::vector<uint8_t> key_x, key_z;  // lambda/8 bytes
    std::vector<std::vector<uint8_t>> hashes;  // h_i = H(i, s_i)
    Pattern pattern_x, pattern_z;       // what each obfuscation committed to
};

/// The object handed out: simulated block states plus the classical part.
/// Measuring a block collapses it in place; there is no copy-free way to
/// evaluate twice, mirroring the one-time property.
struct Token {
    Params params;
    std::vector<PureState> blocks;
    Obfuscation obf_x, obf_z;
    std::vector<uint8_t> c_x, c_z;      // c_alpha = k_alpha XOR m_alpha
    std::vector<uint8_t> oracle_salt;   // 16 bytes in concrete mode, else empty
};

/// Scheme preparation: sample bases (resampled until both basis sets are
/// nonempty) and secrets, encode blocks, hash every (i, s_i), wrap fresh
/// keys under per-basis conjunction obfuscations, mask both messages.
std::pair<Token, TokenSecret> otm_prep(const Params& params,
                                       const std::vector<uint8_t>& msg_x,
                                       const std::vector<uint8_t>& msg_z,
                                       OracleInstance& oracle, uint64_t rng_seed);

/// Honest evaluation in basis alpha: measure every block (collapsing it),
/// query the oracle on each outcome, run the obfuscation on the assembled
/// hash string, unmask on success.  Nullopt when the obfuscation rejects.
std::optional<std::vector<uint8_t>> otm_eval(Token& token, Basis alpha,
                                             OracleInstance& oracle,
                                             uint64_t rng_seed);

/// Classical part as JSON (quantum blocks are simulation handles and are
/// never serialized).
std::string token_to_json(const Token& token);

/// Rebuilds the classical part; `blocks` is left empty.
Token token_classical_from_json(const std::string& text);

/// Pattern over n * m_prime bits committing basis alpha's positions to
/// their hashes; exposed so the adversary module and tests can reason about
/// the bit layout (block index ascending, hash bits most-significant-first).
Pattern assemble_pattern(const Params& params, const std::set<uint32_t>& theta,
                         const std::vector<std::vector<uint8_t>>& hashes);

/// Bit layout shared by pattern assembly and evaluation input.
std::vector<uint8_t> assemble_input_bits(const Params& params,
                                         const std::vector<std::vector<uint8_t>>& answers);

namespace testing {
/// Escape hatch for counterfactual experiments only: copies the simulated
/// states, violating the no-cloning discipline the scheme relies on.
std::vector<PureState> clone_blocks(const Token& token);
}  // namespace testing

}  // namespace otm
