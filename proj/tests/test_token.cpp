#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <optional>
#include <vector>

#include "otm/bits.hpp"
#include "otm/rng.hpp"
#include "otm/token.hpp"

using namespace otm;

namespace {

Params small_params() {
    Params p;
    p.lambda = 32;
    p.n = 4;
    p.m = 3;
    p.m_prime = 16;
    return p;
}

std::vector<uint8_t> salt_of(uint8_t fill) { return std::vector<uint8_t>(16, fill); }

}  // namespace

TEST_CASE("params validation") {
    CHECK_NOTHROW(Params{}.validate());
    Params p;
    p.n = 1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = Params{}; p.m = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = Params{}; p.m = kMaxQubits + 1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = Params{}; p.lambda = 12;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = Params{}; p.m_prime = 20;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("honest evaluation recovers each message exactly, 10^3 trials per basis") {
    Params p = small_params();
    auto rng = make_rng(31, 0);
    int failures = 0;
    for (int t = 0; t < 1000; ++t) {
        auto m_x = random_bytes(rng, size_t(p.lambda) / 8);
        auto m_z = random_bytes(rng, size_t(p.lambda) / 8);
        for (Basis alpha : {Basis::X, Basis::Z}) {
            auto oracle = OracleInstance::lazy(p.n, p.m, p.m_prime, rng());
            auto [tok, sec] = otm_prep(p, m_x, m_z, oracle, rng());
            auto got = otm_eval(tok, alpha, oracle, rng());
            const auto& want = alpha == Basis::X ? m_x : m_z;
            if (!got.has_value() || *got != want) ++failures;
        }
    }
    CHECK(failures == 0);
}

TEST_CASE("honest evaluation at desk defaults") {
    Params p;  // desk defaults n=8 m=6 m'=64 lambda=128
    auto rng = make_rng(32, 0);
    int failures = 0;
    for (int t = 0; t < 150; ++t) {
        auto m_x = random_bytes(rng, size_t(p.lambda) / 8);
        auto m_z = random_bytes(rng, size_t(p.lambda) / 8);
        for (Basis alpha : {Basis::X, Basis::Z}) {
            auto oracle = OracleInstance::lazy(p.n, p.m, p.m_prime, rng());
            auto [tok, sec] = otm_prep(p, m_x, m_z, oracle, rng());
            auto got = otm_eval(tok, alpha, oracle, rng());
            if (!got.has_value() || *got != (alpha == Basis::X ? m_x : m_z)) ++failures;
        }
    }
    CHECK(failures == 0);
}

TEST_CASE("key masking: c_alpha = k_alpha XOR m_alpha, identity on zero messages") {
    Params p = small_params();
    auto rng = make_rng(33, 0);
    auto m_x = random_bytes(rng, 4);
    auto m_z = random_bytes(rng, 4);
    auto oracle = OracleInstance::lazy(p.n, p.m, p.m_prime, 5);
    auto [tok, sec] = otm_prep(p, m_x, m_z, oracle, 6);
    CHECK(xor_bytes(sec.key_x, tok.c_x) == m_x);
    CHECK(xor_bytes(sec.key_z, tok.c_z) == m_z);

    std::vector<uint8_t> zeros(4, 0);
    auto oracle2 = OracleInstance::lazy(p.n, p.m, p.m_prime, 7);
    auto [tok2, sec2] = otm_prep(p, zeros, zeros, oracle2, 8);
    CHECK(tok2.c_x == sec2.key_x);
    CHECK(tok2.c_z == sec2.key_z);
}

TEST_CASE("obfuscation patterns cover n*m' bits with |Theta_alpha|*m' fixed") {
    Params p;  // desk defaults
    auto rng = make_rng(34, 0);
    auto msg = random_bytes(rng, 16);
    auto oracle = OracleInstance::lazy(p.n, p.m, p.m_prime, 11);
    auto [tok, sec] = otm_prep(p, msg, msg, oracle, 12);

    size_t total = size_t(p.n) * size_t(p.m_prime);
    CHECK(tok.obf_x.length == total);
    CHECK(tok.obf_z.length == total);
    CHECK(sec.pattern_x.length() == total);
    CHECK(sec.pattern_z.length() == total);
    CHECK(sec.pattern_x.fixed_count() == sec.theta_x.size() * size_t(p.m_prime));
    CHECK(sec.pattern_z.fixed_count() == sec.theta_z.size() * size_t(p.m_prime));
    CHECK(sec.theta_x.size() + sec.theta_z.size() == size_t(p.n));

    // Fixed entries must spell out h_i bit-exactly, MSB first, block order.
    for (int i = 1; i <= p.n; ++i) {
        bool in_x = sec.theta_x.count(uint32_t(i)) > 0;
        const Pattern& pat = in_x ? sec.pattern_x : sec.pattern_z;
        const Pattern& other = in_x ? sec.pattern_z : sec.pattern_x;
        BitVec h = BitVec::from_bytes(sec.hashes[size_t(i - 1)]);
        for (int b = 0; b < p.m_prime; ++b) {
            size_t idx = size_t(i - 1) * size_t(p.m_prime) + size_t(b);
            CHECK(pat.entries[idx] ==
                  (h.get(size_t(b)) ? PatternEntry::FixedOne : PatternEntry::FixedZero));
            CHECK(other.entries[idx] == PatternEntry::Wildcard);
        }
    }
}

TEST_CASE("fixed seed gives a bit-identical token") {
    Params p = small_params();
    std::vector<uint8_t> m_x(4, 0x11), m_z(4, 0x22);
    auto o1 = OracleInstance::concrete(p.n, p.m, p.m_prime, salt_of(9));
    auto o2 = OracleInstance::concrete(p.n, p.m, p.m_prime, salt_of(9));
    auto [t1, s1] = otm_prep(p, m_x, m_z, o1, 4242);
    auto [t2, s2] = otm_prep(p, m_x, m_z, o2, 4242);
    CHECK(token_to_json(t1) == token_to_json(t2));
    CHECK(s1.secrets == s2.secrets);
    CHECK(s1.bases == s2.bases);
    for (int i = 0; i < p.n; ++i)
        CHECK(t1.blocks[size_t(i)].vec() == t2.blocks[size_t(i)].vec());

    auto o3 = OracleInstance::concrete(p.n, p.m, p.m_prime, salt_of(9));
    auto [t3, s3] = otm_prep(p, m_x, m_z, o3, 4243);
    CHECK(token_to_json(t1) != token_to_json(t3));
}

TEST_CASE("re-evaluating in the same basis is deterministic and still succeeds") {
    Params p = small_params();
    auto rng = make_rng(35, 0);
    for (int t = 0; t < 50; ++t) {
        auto m_x = random_bytes(rng, 4);
        auto m_z = random_bytes(rng, 4);
        auto oracle = OracleInstance::lazy(p.n, p.m, p.m_prime, rng());
        auto [tok, sec] = otm_prep(p, m_x, m_z, oracle, rng());
        Basis alpha = (t & 1) ? Basis::X : Basis::Z;
        auto first = otm_eval(tok, alpha, oracle, rng());
        auto second = otm_eval(tok, alpha, oracle, rng());
        const auto& want = alpha == Basis::X ? m_x : m_z;
        REQUIRE(first.has_value());
        REQUIRE(second.has_value());
        CHECK(*first == want);
        CHECK(*second == want);
    }
}

TEST_CASE("state reuse in the conjugate basis almost always fails") {
    // Counterfactual single-use probe: evaluate the same simulated state in
    // alpha then in its conjugate.  The second run sees collapsed blocks, so
    // each conjugate-set block hits its secret with probability 2^-m; the
    // success rate is dominated by tokens whose conjugate set is tiny.
    Params p;
    p.m_prime = 16;  // smaller obfuscations keep 10^4 trials quick
    p.lambda = 32;
    auto rng = make_rng(36, 0);
    constexpr int kTrials = 10000;
    int second_success = 0;
    for (int t = 0; t < kTrials; ++t) {
        auto m_x = random_bytes(rng, 4);
        auto m_z = random_bytes(rng, 4);
        auto oracle = OracleInstance::lazy(p.n, p.m, p.m_prime, rng());
        auto [tok, sec] = otm_prep(p, m_x, m_z, oracle, rng());
        Basis alpha = (t & 1) ? Basis::X : Basis::Z;
        auto first = otm_eval(tok, alpha, oracle, rng());
        REQUIRE(first.has_value());
        auto second = otm_eval(tok, conjugate(alpha), oracle, rng());
        if (second.has_value()) ++second_success;
    }
    double rate = double(second_success) / kTrials;
    MESSAGE("conjugate-basis second evaluation success rate: ", rate);
    CHECK(rate <= 0.01);  // expected ~5e-4, driven by |Theta_conj| = 1 tokens
}

TEST_CASE("cloned blocks (test escape hatch) evaluate both bases") {
    Params p = small_params();
    std::vector<uint8_t> m_x{1, 2, 3, 4}, m_z{5, 6, 7, 8};
    auto oracle = OracleInstance::lazy(p.n, p.m, p.m_prime, 21);
    auto [tok, sec] = otm_prep(p, m_x, m_z, oracle, 22);
    auto saved = testing::clone_blocks(tok);

    CHECK(otm_eval(tok, Basis::X, oracle, 23).value() == m_x);

    Token tok2 = tok;        // classical part
    tok2.blocks = saved;     // pristine quantum part
    CHECK(otm_eval(tok2, Basis::Z, oracle, 24).value() == m_z);
}

TEST_CASE("bases are resampled until both sets are nonempty") {
    Params p = small_params();
    p.n = 2;  // 1/2 chance per draw that one side is empty
    auto rng = make_rng(37, 0);
    std::vector<uint8_t> msg(4, 0);
    for (int t = 0; t < 300; ++t) {
        auto oracle = OracleInstance::lazy(p.n, p.m, p.m_prime, rng());
        auto [tok, sec] = otm_prep(p, msg, msg, oracle, rng());
        CHECK(sec.theta_x.size() >= 1);
        CHECK(sec.theta_z.size() >= 1);
        CHECK(sec.theta_x.size() + sec.theta_z.size() == 2);
    }
}

TEST_CASE("classical JSON round trip") {
    Params p = small_params();
    std::vector<uint8_t> m_x(4, 0xaa), m_z(4, 0xbb);
    auto oracle = OracleInstance::concrete(p.n, p.m, p.m_prime, salt_of(3));
    auto [tok, sec] = otm_prep(p, m_x, m_z, oracle, 77);

    Token back = token_classical_from_json(token_to_json(tok));
    CHECK(back.params.lambda == p.lambda);
    CHECK(back.params.n == p.n);
    CHECK(back.params.m == p.m);
    CHECK(back.params.m_prime == p.m_prime);
    CHECK(back.obf_x.serialize() == tok.obf_x.serialize());
    CHECK(back.obf_z.serialize() == tok.obf_z.serialize());
    CHECK(back.c_x == tok.c_x);
    CHECK(back.c_z == tok.c_z);
    CHECK(back.oracle_salt == tok.oracle_salt);
    CHECK(back.blocks.empty());

    // The deserialized obfuscation still gates on the same hashes.
    auto input = assemble_input_bits(p, sec.hashes);
    auto key = eval_conj(back.obf_x, input);
    REQUIRE(key.has_value());
    CHECK(xor_bytes(*key, back.c_x) == m_x);
}

TEST_CASE("argument guards") {
    Params p = small_params();
    std::vector<uint8_t> msg(4, 0), short_msg(3, 0);
    auto oracle = OracleInstance::lazy(p.n, p.m, p.m_prime, 1);
    CHECK_THROWS_AS(otm_prep(p, short_msg, msg, oracle, 1), std::invalid_argument);
    CHECK_THROWS_AS(otm_prep(p, msg, short_msg, oracle, 1), std::invalid_argument);

    auto wrong_oracle = OracleInstance::lazy(p.n + 1, p.m, p.m_prime, 1);
    CHECK_THROWS_AS(otm_prep(p, msg, msg, wrong_oracle, 1), std::invalid_argument);

    auto [tok, sec] = otm_prep(p, msg, msg, oracle, 2);
    CHECK_THROWS_AS(otm_eval(tok, Basis::X, wrong_oracle, 3), std::invalid_argument);
    Token hollow = tok;
    hollow.blocks.clear();
    CHECK_THROWS_AS(otm_eval(hollow, Basis::X, oracle, 3), std::invalid_argument);
}
