#include "otm/qsim.hpp"

#include <cmath>
#include <stdexcept>

namespace otm {

namespace {

void check_qubits(int qubits) {
    if (qubits < 1 || qubits > kMaxQubits)
        throw std::invalid_argument("qubit count out of range");
}

void check_hermitian(const Eigen::MatrixXcd& m, double tol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("not square");
    double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol) throw std::invalid_argument("matrix not Hermitian");
}

}  // namespace

PureState::PureState(int qubits) : qubits_(qubits) {
    check_qubits(qubits);
    v_ = Eigen::VectorXcd::Zero(1 << qubits);
    v_(0) = 1.0;
}

PureState PureState::computational(uint32_t index, int qubits) {
    PureState s(qubits);
    if (index >= uint32_t(1) << qubits)
        throw std::invalid_argument("basis index out of range");
    s.v_.setZero();
    s.v_(index) = 1.0;
    return s;
}

bool PureState::is_normalized(double tol) const {
    return std::abs(norm() - 1.0) <= tol;
}

DensityOperator::DensityOperator(Eigen::MatrixXcd m, int qubits)
    : m_(std::move(m)), qubits_(qubits) {
    check_qubits(qubits);
    if (m_.rows() != (1 << qubits) || m_.cols() != (1 << qubits))
        throw std::invalid_argument("dimension mismatch");
}

DensityOperator DensityOperator::from_pure(const PureState& s) {
    return DensityOperator(s.vec() * s.vec().adjoint(), s.qubits());
}

DensityOperator DensityOperator::maximally_mixed(int qubits) {
    check_qubits(qubits);
    int d = 1 << qubits;
    return DensityOperator(Eigen::MatrixXcd::Identity(d, d) / double(d), qubits);
}

void DensityOperator::validate() const {
    check_hermitian(m_, 1e-10);
    if (std::abs(m_.trace().real() - 1.0) > 1e-10 ||
        std::abs(m_.trace().imag()) > 1e-10)
        throw std::invalid_argument("density trace not one");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_,
                                                       Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw std::invalid_argument("density not PSD");
}

void Povm::validate() const {
    if (elements.empty()) throw std::invalid_argument("empty POVM");
    int d = dim();
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& m : elements) {
        if (m.rows() != d || m.cols() != d)
            throw std::invalid_argument("POVM element dimension mismatch");
        check_hermitian(m, 1e-10);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            m, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-9)
            throw std::invalid_argument("POVM element not PSD");
        sum += m;
    }
    double dev =
        (sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
    if (dev > 1e-9) throw std::invalid_argument("POVM not complete");
}

PureState wiesner_encode(uint32_t secret, int qubits, Basis basis) {
    PureState s = PureState::computational(secret, qubits);
    if (basis == Basis::X) hadamard_all_inplace(s);
    return s;
}

void hadamard_all_inplace(PureState& s) {
    auto& v = s.vec();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    int d = s.dim();
    for (int step = 1; step < d; step <<= 1) {
        for (int i = 0; i < d; i += step << 1) {
            for (int j = i; j < i + step; ++j) {
                auto a = v(j), b = v(j + step);
                v(j) = (a + b) * inv_sqrt2;
                v(j + step) = (a - b) * inv_sqrt2;
            }
        }
    }
}

PureState hadamard_all(const PureState& s) {
    PureState out = s;
    hadamard_all_inplace(out);
    return out;
}

void rotate_all_inplace(PureState& s, double angle) {
    auto& v = s.vec();
    const double c = std::cos(angle), sn = std::sin(angle);
    int d = s.dim();
    for (int step = 1; step < d; step <<= 1) {
        for (int i = 0; i < d; i += step << 1) {
            for (int j = i; j < i + step; ++j) {
                auto a = v(j), b = v(j + step);
                v(j) = c * a + sn * b;
                v(j + step) = -sn * a + c * b;
            }
        }
    }
}

std::vector<double> povm_outcome_probs(const Povm& p,
                                       const DensityOperator& rho) {
    if (p.dim() != rho.dim()) throw std::invalid_argument("dim mismatch");
    std::vector<double> probs(p.size());
    for (size_t k = 0; k < p.size(); ++k)
        probs[k] = (p.elements[k] * rho.mat()).trace().real();
    return probs;
}

std::vector<double> povm_outcome_probs(const Povm& p, const PureState& psi) {
    if (p.dim() != psi.dim()) throw std::invalid_argument("dim mismatch");
    std::vector<double> probs(p.size());
    for (size_t k = 0; k < p.size(); ++k)
        probs[k] = (psi.vec().adjoint() * p.elements[k] * psi.vec())(0).real();
    return probs;
}

int sample_from_probs(const std::vector<double>& probs, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(rng), acc = 0.0;
    for (size_t k = 0; k < probs.size(); ++k) {
        acc += std::max(0.0, probs[k]);
        if (u <= acc) return int(k);
    }
    return int(probs.size()) - 1;
}

int sample_outcome(const Povm& p, const PureState& psi, std::mt19937_64& rng) {
    return sample_from_probs(povm_outcome_probs(p, psi), rng);
}

uint32_t measure_in_basis(PureState& s, Basis basis, std::mt19937_64& rng) {
    if (basis == Basis::X) hadamard_all_inplace(s);
    std::vector<double> probs(s.dim());
    for (int i = 0; i < s.dim(); ++i) probs[i] = std::norm(s.vec()(i));
    uint32_t outcome = uint32_t(sample_from_probs(probs, rng));
    s.vec().setZero();
    s.vec()(outcome) = 1.0;
    if (basis == Basis::X) hadamard_all_inplace(s);  // post-state H|z>
    return outcome;
}

double trace_norm(const Eigen::MatrixXcd& m) {
    check_hermitian(m, 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m,
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

double fidelity_rank1(const Eigen::MatrixXcd& m, int i) {
    if (i < 0 || i >= m.rows()) throw std::invalid_argument("index range");
    double d = m(i, i).real();
    if (d < -1e-9) throw std::invalid_argument("negative diagonal");
    return std::sqrt(std::max(0.0, d));
}

Povm random_povm(int qubits, int outcomes, std::mt19937_64& rng) {
    check_qubits(qubits);
    if (outcomes < 1) throw std::invalid_argument("need an outcome");
    int d = 1 << qubits;
    std::normal_distribution<double> gauss(0.0, 1.0);
    Povm p;
    p.qubits = qubits;
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 0; k < outcomes; ++k) {
        Eigen::MatrixXcd g(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                g(r, c) = std::complex<double>(gauss(rng), gauss(rng));
        Eigen::MatrixXcd a = g * g.adjoint();
        p.elements.push_back(a);
        sum += a;
    }
    Eigen::MatrixXcd w = matrix_sqrt_inv(sum);
    for (auto& m : p.elements) {
        m = w * m * w;
        m = ((m + m.adjoint()) / 2.0).eval();
    }
    return p;
}

Povm computational_povm(int qubits) {
    check_qubits(qubits);
    int d = 1 << qubits;
    Povm p;
    p.qubits = qubits;
    for (int i = 0; i < d; ++i) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
        m(i, i) = 1.0;
        p.elements.push_back(std::move(m));
    }
    return p;
}

Eigen::MatrixXcd matrix_sqrt_inv(const Eigen::MatrixXcd& s) {
    check_hermitian(s, 1e-8);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
    Eigen::VectorXd ev = es.eigenvalues();
    double floor = std::max(ev.maxCoeff(), 1.0) * 1e-14;
    Eigen::VectorXd inv_sqrt(ev.size());
    for (int i = 0; i < ev.size(); ++i)
        inv_sqrt(i) = 1.0 / std::sqrt(std::max(ev(i), floor));
    return es.eigenvectors() * inv_sqrt.asDiagonal() *
           es.eigenvectors().adjoint();
}

}  // namespace otm
