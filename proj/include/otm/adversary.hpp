#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "otm/bound.hpp"
#include "otm/oracle.hpp"
#include "otm/token.hpp"

namespace otm {

/// Blockwise classical-query attack behaviors.  ConstantZero (no
/// measurement, no queries, no output) exists as the exact floor case for
/// the distinguishing experiment.
enum class StrategyKind {
    HonestX,
    HonestZ,
    RandomGuess,
    BreidbartAll,
    PerBlockOptimal,
    ConstantZero,
};

/// A strategy targets one basis (HonestZ and PerBlockOptimal target Z, the
/// rest X by convention); coverage and per-block tallies are reported for
/// the target set and its conjugate.  PerBlockOptimal measures each block
/// with a precomputed POVM whose outcome doubles as the computational-basis
/// candidate, and decodes the conjugate candidate through the attack's
/// guessing function (inverted when injective, argmax decoding otherwise).
struct Strategy {
    StrategyKind kind = StrategyKind::HonestX;
    std::string name;
    AttackResult attack;             // PerBlockOptimal only
    std::vector<int> decoder;        // PerBlockOptimal only: outcome -> string
    double conj_hit_prediction = 0;  // PerBlockOptimal only

    Basis target_basis() const;

    static Strategy honest_x();
    static Strategy honest_z();
    static Strategy random_guess();
    static Strategy breidbart_all();
    static Strategy per_block_optimal(AttackResult result);
    static Strategy constant_zero();
};

/// One security-game trial from the adversary's side.
struct GameRecord {
    std::optional<std::vector<uint8_t>> recovered_x, recovered_z;
    bool got_x = false, got_z = false, both_success = false;
    OracleTranscript transcript;  // adversary's own queries, prep excluded
    size_t covered_alpha = 0, covered_conjugate = 0;
    int conj_blocks = 0, conj_hits = 0;
    // An obfuscation accepted without full transcript coverage of its basis
    // set; the classical-query extraction argument says this never happens
    // short of a hash collision.
    bool extraction_violation = false;
};

struct AttackStats {
    std::string strategy;
    int n = 0, m = 0;
    int trials = 0;
    double p_mx = 0, p_mz = 0, p_both = 0;
    double mean_cov_conj = 0;
    long long conj_hits = 0, conj_blocks = 0;
    int extraction_violations = 0;
    uint64_t seed = 0;
};

/// The token, message pair, and oracle must come from the same preparation;
/// prep_queries marks where the adversary's transcript slice begins.
GameRecord play_with_view(const Strategy& strategy, Token& token,
                          const TokenSecret& secret,
                          const std::vector<uint8_t>& m_x,
                          const std::vector<uint8_t>& m_z,
                          OracleInstance& oracle, size_t prep_queries,
                          uint64_t seed);

/// Full game: fresh lazy oracle and token per trial, then the strategy.
AttackStats run_attack(const Strategy& strategy, const Params& params,
                       const std::vector<uint8_t>& m_x,
                       const std::vector<uint8_t>& m_z, int trials,
                       uint64_t seed);

/// The one-classical-query message oracle g of the simulation definition.
struct MessageOracle {
    std::vector<uint8_t> m_x, m_z;
    int query_count = 0;

    const std::vector<uint8_t>& query(Basis b);
};

struct SimulatedView {
    Token token;
    TokenSecret secret;
};

/// Four-step simulator: one g query for m_alpha, token prepared exactly as
/// the real path (same RNG stream), then c for the conjugate basis replaced
/// by fresh uniform bytes.
SimulatedView run_simulator(const Params& params, MessageOracle& msg_oracle,
                            Basis alpha, OracleInstance& oracle,
                            uint64_t rng_seed);

struct TvEstimate {
    double tv = 0;
    double ci_lo = 0, ci_hi = 0;  // bootstrap 95%
    int trials = 0;
};

/// Empirical total-variation distance between real and simulated views of
/// the fixed per-trial statistic (got_x, got_z, covered_alpha,
/// covered_conjugate), with per-trial seeds matched across the two arms.
TvEstimate distinguishing_experiment(const Strategy& strategy,
                                     const Params& params, int trials,
                                     uint64_t seed);

std::string attack_csv_header();
std::string attack_csv_row(const AttackStats& stats, double tv_estimate);

}  // namespace otm
