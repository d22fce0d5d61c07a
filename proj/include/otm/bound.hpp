#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "otm/qsim.hpp"

namespace otm {

// Outcome split at diagonal threshold 1 - sqrt(eps).
struct GoodBadPartition {
    std::vector<int> good;
    std::vector<int> bad;
    double epsilon = 0.0;

    double threshold() const;
    double bad_fraction(int dim) const;
};

// Guessing table oriented string -> outcome: table[x] is the outcome index
// the adversary bets on when the hidden string is x. The dual reading
// (outcome -> string) is provided separately by outcome_decoder.
struct GuessingFunction {
    std::vector<int> table;

    void validate(int dim) const;
};

struct AttackResult {
    int m = 0;
    double epsilon = 0.0;
    Povm povm;
    GuessingFunction guess;
    double z_success = 0.0;
    double x_guess = 0.0;
    double bound = 0.0;
    bool converged = false;
    // x_guess exceeded the theorem bound; treated as an artifact bug.
    bool falsification = false;
    // Premise-gated proof-chain inequalities that failed on visited iterates.
    int chain_violations = 0;
    uint64_t seed = 0;

    void validate() const;
};

// Every intermediate quantity of the bound's proof, evaluated numerically
// for one (POVM, f) pair. Inequality checks only apply when the POVM meets
// the success premise; without it the underlying claims are simply false
// (take any POVM far from the computational basis).
struct ProofChainReport {
    double epsilon = 0.0;
    int dim = 0;
    double z_success = 0.0;
    bool premise_holds = false;
    GoodBadPartition partition;
    double max_good_trace_dist = 0.0;
    double fvdg_cap = 0.0;      // 2 eps^(1/4)
    double max_good_term = 0.0; // largest per-term prob with f(x) good
    double term_cap = 0.0;      // 1/D + 2 eps^(1/4)
    double good_aggregate = 0.0;
    double bad_aggregate = 0.0;
    double bad_mass = 0.0; // (1/D) sum over bad i of Tr M_i
    double bad_cap = 0.0;  // 2 sqrt(eps)
    double x_guess = 0.0;
    double bound = 0.0;
    bool chain_ok = false;
};

double z_success_probability(const Povm& p);

// Throws std::logic_error if the Markov consequence |B|/D <= sqrt(eps)
// fails while the POVM satisfies the success premise.
GoodBadPartition partition_good_bad(const Povm& p, double epsilon);

// q[o][x] = <psi_x| M_o |psi_x> with psi_x the Hadamard codeword.
std::vector<std::vector<double>> conjugate_prob_table(const Povm& p);

double x_guessing_probability(const Povm& p, const GuessingFunction& f);

// Exact inner maximization; ties break to the smallest outcome index.
GuessingFunction best_guess_for_povm(const Povm& p);

double theorem_bound(double epsilon, int m);

// Physical decoding direction: decoder[o] = argmax_x q[o][x], ties to the
// smallest x. x_success_physical is the success rate of that decoder.
std::vector<int> outcome_decoder(const Povm& p);
double x_success_physical(const Povm& p);

ProofChainReport check_proof_chain(const Povm& p, double epsilon,
                                   const GuessingFunction& f);

AttackResult optimize_attack(int m, double epsilon, int iterations,
                             int restarts, uint64_t seed, int jobs = 1);

AttackResult brute_force_attack_m1(double epsilon, int grid_points);

// Best product-of-rotated-bases attack derived from the m=1 closed form
// 1/2 + sqrt(eps(1-eps)); used as the independent oracle for the optimizer.
double product_measurement_optimum(int m, double epsilon);

// Random POVM engineered to land z_success inside [1-eps, 1-0.9*eps];
// perturbed computational projectors, renormalized.
Povm random_premise_povm(int qubits, double epsilon, std::mt19937_64& rng);

} // namespace otm
