#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace otm {

enum class Basis : uint8_t { Z = 0, X = 1 };

inline Basis conjugate(Basis b) { return b == Basis::Z ? Basis::X : Basis::Z; }
inline char basis_char(Basis b) { return b == Basis::Z ? 'Z' : 'X'; }

constexpr int kMaxQubits = 10;

/// Normalized state vector over 1..10 qubits.  Index i is the
/// computational string with qubit 0 as its most significant bit.
class PureState {
public:
    explicit PureState(int qubits);
    static PureState computational(uint32_t index, int qubits);

    int qubits() const { return qubits_; }
    int dim() const { return int(v_.size()); }
    Eigen::VectorXcd& vec() { return v_; }
    const Eigen::VectorXcd& vec() const { return v_; }

    double norm() const { return v_.norm(); }
    bool is_normalized(double tol = 1e-10) const;

private:
    Eigen::VectorXcd v_;
    int qubits_;
};

class DensityOperator {
public:
    DensityOperator(Eigen::MatrixXcd m, int qubits);
    static DensityOperator from_pure(const PureState& s);
    static DensityOperator maximally_mixed(int qubits);

    int qubits() const { return qubits_; }
    int dim() const { return int(m_.rows()); }
    const Eigen::MatrixXcd& mat() const { return m_; }

    /// Hermitian within 1e-10, unit trace within 1e-10, eigenvalues
    /// above -1e-9; throws otherwise.
    void validate() const;

private:
    Eigen::MatrixXcd m_;
    int qubits_;
};

/// Finite POVM over the block Hilbert space.
struct Povm {
    std::vector<Eigen::MatrixXcd> elements;
    int qubits = 0;

    int dim() const { return 1 << qubits; }
    size_t size() const { return elements.size(); }

    /// Hermitian elements within 1e-10, eigenvalues above -1e-9,
    /// completeness within 1e-9 entrywise; throws otherwise.
    void validate() const;
};

/// Conjugate coding: |s> in the Z basis, H^{(x) m}|s> in the X basis.
PureState wiesner_encode(uint32_t secret, int qubits, Basis basis);

void hadamard_all_inplace(PureState& s);
PureState hadamard_all(const PureState& s);

/// Per-qubit rotation by the real unitary [[c, s], [-s, c]] applied to
/// every qubit; angle pi/8 turns computational sampling into the
/// intermediate-basis measurement.
void rotate_all_inplace(PureState& s, double angle);

std::vector<double> povm_outcome_probs(const Povm& p, const DensityOperator& rho);
std::vector<double> povm_outcome_probs(const Povm& p, const PureState& psi);

int sample_outcome(const Povm& p, const PureState& psi, std::mt19937_64& rng);
int sample_from_probs(const std::vector<double>& probs, std::mt19937_64& rng);

/// Measures every qubit in the given basis and collapses the state to the
/// corresponding post-measurement encoding.  Returns the outcome string.
uint32_t measure_in_basis(PureState& s, Basis basis, std::mt19937_64& rng);

/// Trace norm of a Hermitian matrix (validated within 1e-10).
double trace_norm(const Eigen::MatrixXcd& m);

/// sqrt of the i-th diagonal entry, the fidelity between a PSD matrix and
/// the rank-1 projector |i><i|.
double fidelity_rank1(const Eigen::MatrixXcd& m, int i);

/// Haar-flavored random POVM: Ginibre factors G_k G_k^dag conjugated by
/// the inverse square root of their sum.
Povm random_povm(int qubits, int outcomes, std::mt19937_64& rng);

Povm computational_povm(int qubits);

/// S^{-1/2} for PSD S via eigendecomposition; tiny eigenvalues are
/// floored to keep the renormalization finite.
Eigen::MatrixXcd matrix_sqrt_inv(const Eigen::MatrixXcd& s);

}  // namespace otm
