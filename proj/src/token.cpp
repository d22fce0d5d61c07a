#include "otm/token.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>

#include "otm/bits.hpp"
#include "otm/rng.hpp"

namespace otm {

void Params::validate() const {
    if (n < 2) throw std::invalid_argument("params: n must be at least 2");
    if (m < 1 || m > kMaxQubits)
        throw std::invalid_argument("params: m outside simulator range");
    if (lambda < 16 || lambda % 8 != 0)
        throw std::invalid_argument("params: lambda must be a multiple of 8, >= 16");
    if (m_prime < 8 || m_prime % 8 != 0 || m_prime > 256)
        throw std::invalid_argument("params: m' must be a multiple of 8 in [8, 256]");
}

namespace {

void check_oracle(const Params& p, const OracleInstance& oracle) {
    if (oracle.n() != p.n || oracle.m() != p.m || oracle.m_prime() != p.m_prime)
        throw std::invalid_argument("oracle shape does not match params");
}

}  // namespace

Pattern assemble_pattern(const Params& params, const std::set<uint32_t>& theta,
                         const std::vector<std::vector<uint8_t>>& hashes) {
    if (hashes.size() != size_t(params.n))
        throw std::invalid_argument("assemble_pattern: need one hash per block");
    Pattern pat;
    pat.entries.reserve(size_t(params.n) * size_t(params.m_prime));
    for (int i = 1; i <= params.n; ++i) {
        if (theta.count(uint32_t(i))) {
            BitVec h = BitVec::from_bytes(hashes[size_t(i - 1)]);
            for (int b = 0; b < params.m_prime; ++b)
                pat.entries.push_back(h.get(size_t(b)) ? PatternEntry::FixedOne
                                                       : PatternEntry::FixedZero);
        } else {
            pat.entries.insert(pat.entries.end(), size_t(params.m_prime),
                               PatternEntry::Wildcard);
        }
    }
    return pat;
}

std::vector<uint8_t> assemble_input_bits(
    const Params& params, const std::vector<std::vector<uint8_t>>& answers) {
    if (answers.size() != size_t(params.n))
        throw std::invalid_argument("assemble_input_bits: need one answer per block");
    std::vector<uint8_t> bits;
    bits.reserve(size_t(params.n) * size_t(params.m_prime));
    for (const auto& y : answers) {
        BitVec v = BitVec::from_bytes(y);
        for (int b = 0; b < params.m_prime; ++b) bits.push_back(uint8_t(v.get(size_t(b))));
    }
    return bits;
}

std::pair<Token, TokenSecret> otm_prep(const Params& params,
                                       const std::vector<uint8_t>& msg_x,
                                       const std::vector<uint8_t>& msg_z,
                                       OracleInstance& oracle, uint64_t rng_seed) {
    params.validate();
    check_oracle(params, oracle);
    size_t lam_bytes = size_t(params.lambda) / 8;
    if (msg_x.size() != lam_bytes || msg_z.size() != lam_bytes)
        throw std::invalid_argument("otm_prep: messages must be lambda bits");

    auto rng = make_rng(rng_seed, 0x707ULL);

    TokenSecret sec;
    sec.bases.resize(size_t(params.n));
    // The scheme leaves |Theta_alpha| = 0 possible; an empty basis set gives
    // an all-wildcard conjunction, so bases are resampled until both sets
    // are inhabited (a documented deviation).
    for (int attempt = 0;; ++attempt) {
        if (attempt > 1000) throw std::logic_error("otm_prep: basis resampling runaway");
        sec.theta_x.clear();
        sec.theta_z.clear();
        for (int i = 1; i <= params.n; ++i) {
            Basis b = (rng() & 1) ? Basis::X : Basis::Z;
            sec.bases[size_t(i - 1)] = b;
            (b == Basis::X ? sec.theta_x : sec.theta_z).insert(uint32_t(i));
        }
        if (!sec.theta_x.empty() && !sec.theta_z.empty()) break;
    }

    Token tok;
    tok.params = params;
    sec.secrets.resize(size_t(params.n));
    tok.blocks.reserve(size_t(params.n));
    for (int i = 0; i < params.n; ++i) {
        sec.secrets[size_t(i)] = random_bits32(rng, params.m);
        tok.blocks.push_back(
            wiesner_encode(sec.secrets[size_t(i)], params.m, sec.bases[size_t(i)]));
    }

    sec.hashes.resize(size_t(params.n));
    for (int i = 1; i <= params.n; ++i)
        sec.hashes[size_t(i - 1)] = oracle.query(uint32_t(i), sec.secrets[size_t(i - 1)]);

    sec.key_x = random_bytes(rng, lam_bytes);
    sec.key_z = random_bytes(rng, lam_bytes);
    tok.c_x = xor_bytes(sec.key_x, msg_x);
    tok.c_z = xor_bytes(sec.key_z, msg_z);

    sec.pattern_x = assemble_pattern(params, sec.theta_x, sec.hashes);
    sec.pattern_z = assemble_pattern(params, sec.theta_z, sec.hashes);
    tok.obf_x = obf_conj(sec.pattern_x, sec.key_x, rng());
    tok.obf_z = obf_conj(sec.pattern_z, sec.key_z, rng());

    if (oracle.mode() == OracleMode::Concrete) tok.oracle_salt = oracle.salt();
    return {std::move(tok), std::move(sec)};
}

std::optional<std::vector<uint8_t>> otm_eval(Token& token, Basis alpha,
                                             OracleInstance& oracle,
                                             uint64_t rng_seed) {
    token.params.validate();
    check_oracle(token.params, oracle);
    if (token.blocks.size() != size_t(token.params.n))
        throw std::invalid_argument("otm_eval: token carries no usable blocks");

    auto rng = make_rng(rng_seed, 0xe7a1ULL);
    std::vector<std::vector<uint8_t>> answers(size_t(token.params.n));
    for (int i = 1; i <= token.params.n; ++i) {
        uint32_t outcome = measure_in_basis(token.blocks[size_t(i - 1)], alpha, rng);
        answers[size_t(i - 1)] = oracle.query(uint32_t(i), outcome);
    }
    const Obfuscation& obf = alpha == Basis::X ? token.obf_x : token.obf_z;
    const std::vector<uint8_t>& c = alpha == Basis::X ? token.c_x : token.c_z;
    auto key = eval_conj(obf, assemble_input_bits(token.params, answers));
    if (!key) return std::nullopt;
    return xor_bytes(*key, c);
}

std::string token_to_json(const Token& token) {
    nlohmann::json j;
    j["params"] = {{"lambda", token.params.lambda},
                   {"n", token.params.n},
                   {"m", token.params.m},
                   {"m_prime", token.params.m_prime}};
    j["obf_x"] = base64_encode(token.obf_x.serialize());
    j["obf_z"] = base64_encode(token.obf_z.serialize());
    j["c_x"] = to_hex(token.c_x);
    j["c_z"] = to_hex(token.c_z);
    j["oracle_salt"] = to_hex(token.oracle_salt);
    return j.dump(2);
}

Token token_classical_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Token tok;
    tok.params.lambda = j.at("params").at("lambda").get<int>();
    tok.params.n = j.at("params").at("n").get<int>();
    tok.params.m = j.at("params").at("m").get<int>();
    tok.params.m_prime = j.at("params").at("m_prime").get<int>();
    tok.params.validate();
    tok.obf_x = Obfuscation::deserialize(base64_decode(j.at("obf_x").get<std::string>()));
    tok.obf_z = Obfuscation::deserialize(base64_decode(j.at("obf_z").get<std::string>()));
    tok.c_x = from_hex(j.at("c_x").get<std::string>());
    tok.c_z = from_hex(j.at("c_z").get<std::string>());
    tok.oracle_salt = from_hex(j.at("oracle_salt").get<std::string>());
    return tok;
}

namespace testing {
std::vector<PureState> clone_blocks(const Token& token) { return token.blocks; }
}  // namespace testing

}  // namespace otm
