#include "otm/bound.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "otm/parallel.hpp"
#include "otm/rng.hpp"

namespace otm {

namespace {

int parity(uint32_t v) { return __builtin_popcount(v) & 1; }

// Columns are the Hadamard codewords: hm(i, x) = (-1)^(i.x) / sqrt(D).
Eigen::MatrixXd hadamard_matrix(int dim) {
    Eigen::MatrixXd hm(dim, dim);
    const double scale = 1.0 / std::sqrt(double(dim));
    for (int i = 0; i < dim; ++i)
        for (int x = 0; x < dim; ++x)
            hm(i, x) = parity(uint32_t(i) & uint32_t(x)) ? -scale : scale;
    return hm;
}

int qubits_of(const Povm& p) {
    p.validate();
    return p.qubits;
}

} // namespace

double GoodBadPartition::threshold() const { return 1.0 - std::sqrt(epsilon); }

double GoodBadPartition::bad_fraction(int dim) const {
    return double(bad.size()) / double(dim);
}

void GuessingFunction::validate(int dim) const {
    if (int(table.size()) != dim)
        throw std::invalid_argument("guessing table has wrong size");
    for (int o : table)
        if (o < 0 || o >= dim)
            throw std::invalid_argument("guessing table entry out of range");
}

double z_success_probability(const Povm& p) {
    const int dim = p.dim();
    double acc = 0.0;
    for (int z = 0; z < dim; ++z) acc += p.elements[z](z, z).real();
    return acc / dim;
}

GoodBadPartition partition_good_bad(const Povm& p, double epsilon) {
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("epsilon outside [0,1]");
    const int dim = p.dim();
    GoodBadPartition part;
    part.epsilon = epsilon;
    const double thr = 1.0 - std::sqrt(epsilon);
    for (int i = 0; i < dim; ++i) {
        if (p.elements[i](i, i).real() >= thr - 1e-10)
            part.good.push_back(i);
        else
            part.bad.push_back(i);
    }
    // Markov consequence of the success premise; failure here means the
    // arithmetic above is broken, not that the POVM is adversarial.
    if (z_success_probability(p) >= 1.0 - epsilon - 1e-12 &&
        part.bad_fraction(dim) > std::sqrt(epsilon) + 1e-9)
        throw std::logic_error("Markov bound violated under satisfied premise");
    return part;
}

std::vector<std::vector<double>> conjugate_prob_table(const Povm& p) {
    const int dim = p.dim();
    const Eigen::MatrixXd hm = hadamard_matrix(dim);
    std::vector<std::vector<double>> q(dim, std::vector<double>(dim, 0.0));
    for (int o = 0; o < dim; ++o) {
        const Eigen::MatrixXd re = p.elements[o].real();
        for (int x = 0; x < dim; ++x) {
            const auto col = hm.col(x);
            q[o][x] = col.dot(re * col);
        }
    }
    return q;
}

double x_guessing_probability(const Povm& p, const GuessingFunction& f) {
    const int dim = p.dim();
    f.validate(dim);
    const auto q = conjugate_prob_table(p);
    double acc = 0.0;
    for (int x = 0; x < dim; ++x) acc += q[f.table[x]][x];
    return acc / dim;
}

GuessingFunction best_guess_for_povm(const Povm& p) {
    const int dim = p.dim();
    const auto q = conjugate_prob_table(p);
    GuessingFunction f;
    f.table.resize(dim, 0);
    for (int x = 0; x < dim; ++x) {
        int best = 0;
        for (int o = 1; o < dim; ++o)
            if (q[o][x] > q[best][x]) best = o;
        f.table[x] = best;
    }
    return f;
}

double theorem_bound(double epsilon, int m) {
    return std::pow(2.0, -m) + 4.0 * std::pow(epsilon, 0.25);
}

std::vector<int> outcome_decoder(const Povm& p) {
    const int dim = p.dim();
    const auto q = conjugate_prob_table(p);
    std::vector<int> dec(dim, 0);
    for (int o = 0; o < dim; ++o) {
        int best = 0;
        for (int x = 1; x < dim; ++x)
            if (q[o][x] > q[o][best]) best = x;
        dec[o] = best;
    }
    return dec;
}

double x_success_physical(const Povm& p) {
    const int dim = p.dim();
    const auto q = conjugate_prob_table(p);
    const auto dec = outcome_decoder(p);
    double acc = 0.0;
    for (int o = 0; o < dim; ++o) acc += q[o][dec[o]];
    return acc / dim;
}

void AttackResult::validate() const {
    const int dim = 1 << m;
    povm.validate();
    guess.validate(dim);
    if (z_success < -1e-9 || z_success > 1.0 + 1e-9 || x_guess < -1e-9 ||
        x_guess > 1.0 + 1e-9)
        throw std::logic_error("attack probabilities outside [0,1]");
    if (z_success < 1.0 - epsilon - 1e-6)
        throw std::logic_error("attack result infeasible for its epsilon");
    if (falsification != (x_guess > bound + 1e-6))
        throw std::logic_error("falsification flag inconsistent");
}

ProofChainReport check_proof_chain(const Povm& p, double epsilon,
                                   const GuessingFunction& f) {
    const int qubits = qubits_of(p);
    const int dim = p.dim();
    f.validate(dim);

    ProofChainReport r;
    r.epsilon = epsilon;
    r.dim = dim;
    r.z_success = z_success_probability(p);
    r.premise_holds = r.z_success >= 1.0 - epsilon - 1e-12;
    r.partition = partition_good_bad(p, epsilon);
    r.fvdg_cap = 2.0 * std::pow(epsilon, 0.25);
    r.term_cap = 1.0 / dim + r.fvdg_cap;
    r.bad_cap = 2.0 * std::sqrt(epsilon);
    r.bound = theorem_bound(epsilon, qubits);

    std::vector<char> is_good(dim, 0);
    for (int i : r.partition.good) is_good[i] = 1;

    for (int i : r.partition.good) {
        Eigen::MatrixXcd diff = p.elements[i];
        diff(i, i) -= 1.0;
        r.max_good_trace_dist = std::max(r.max_good_trace_dist, trace_norm(diff));
    }
    for (int i : r.partition.bad) r.bad_mass += p.elements[i].trace().real();
    r.bad_mass /= dim;

    const auto q = conjugate_prob_table(p);
    for (int x = 0; x < dim; ++x) {
        const int o = f.table[x];
        const double t = q[o][x];
        if (is_good[o]) {
            r.good_aggregate += t;
            r.max_good_term = std::max(r.max_good_term, t);
        } else {
            r.bad_aggregate += t;
        }
    }
    r.good_aggregate /= dim;
    r.bad_aggregate /= dim;
    r.x_guess = r.good_aggregate + r.bad_aggregate;

    // The split is an exact identity; the remaining inequalities only hold
    // once the premise does.
    bool ok = std::abs(r.x_guess - x_guessing_probability(p, f)) <= 1e-9 &&
              r.bad_aggregate <= r.bad_mass + 1e-9;
    if (r.premise_holds)
        ok = ok && r.max_good_trace_dist <= r.fvdg_cap + 1e-7 &&
             r.max_good_term <= r.term_cap + 1e-7 &&
             r.good_aggregate <= r.term_cap + 1e-7 &&
             r.bad_mass <= r.bad_cap + 1e-7 && r.x_guess <= r.bound + 1e-6;
    r.chain_ok = ok;
    return r;
}

namespace {

// Square-root parametrization: theta packs D complex D x D matrices A_o,
// outcome-major, row-major, (re, im) interleaved. The measured POVM is the
// renormalized W (A_o^dag A_o) W with W = S^(-1/2), so completeness is exact
// by construction and the parameters stay unconstrained.
int param_count(int dim) { return 2 * dim * dim * dim; }

void unpack_theta(const std::vector<double>& theta, int dim,
                  std::vector<Eigen::MatrixXcd>& a) {
    a.resize(dim);
    size_t k = 0;
    for (int o = 0; o < dim; ++o) {
        a[o].resize(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) {
                a[o](r, c) = std::complex<double>(theta[k], theta[k + 1]);
                k += 2;
            }
    }
}

void pack_theta(const std::vector<Eigen::MatrixXcd>& a,
                std::vector<double>& theta) {
    const int dim = int(a.size());
    theta.resize(param_count(dim));
    size_t k = 0;
    for (int o = 0; o < dim; ++o)
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) {
                theta[k] = a[o](r, c).real();
                theta[k + 1] = a[o](r, c).imag();
                k += 2;
            }
}

// Penalized objective of one parameter vector under a fixed guessing table:
// guessing success rate minus lambda * hinge^2 on the success constraint.
// Returns a large negative sentinel when the normalization degenerates.
double merit_eval(const std::vector<double>& theta, int dim,
                  const Eigen::MatrixXd& hm, const std::vector<int>& f,
                  double epsilon, double lambda) {
    thread_local std::vector<Eigen::MatrixXcd> a, m;
    thread_local Eigen::MatrixXcd s, w;
    unpack_theta(theta, dim, a);
    m.resize(dim);
    s.resize(dim, dim);
    s.setZero();
    for (int o = 0; o < dim; ++o) {
        m[o] = a[o].adjoint() * a[o];
        s += m[o];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
    if (es.info() != Eigen::Success) return -1e100;
    const auto& ev = es.eigenvalues();
    const double lmax = ev.maxCoeff();
    if (!(lmax > 0.0) || ev.minCoeff() < lmax * 1e-12) return -1e100;
    w = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
        es.eigenvectors().adjoint();

    double z = 0.0;
    for (int o = 0; o < dim; ++o) {
        const Eigen::VectorXcd col = w.col(o);
        z += col.dot(m[o] * col).real();
    }
    z /= dim;

    double xg = 0.0;
    for (int x = 0; x < dim; ++x) {
        const Eigen::VectorXcd u = w * hm.col(x);
        xg += u.dot(m[f[x]] * u).real();
    }
    xg /= dim;

    const double slack = (1.0 - epsilon) - z;
    const double hinge = slack > 0.0 ? slack : 0.0;
    return xg - lambda * hinge * hinge;
}

struct FullEval {
    bool ok = false;
    Povm povm;
    GuessingFunction f;
    double z = 0.0;
    double xg = 0.0;
};

FullEval full_eval(const std::vector<double>& theta, int qubits) {
    const int dim = 1 << qubits;
    std::vector<Eigen::MatrixXcd> a, m(dim);
    unpack_theta(theta, dim, a);
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(dim, dim);
    for (int o = 0; o < dim; ++o) {
        m[o] = a[o].adjoint() * a[o];
        s += m[o];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
    FullEval fe;
    if (es.info() != Eigen::Success) return fe;
    const auto& ev = es.eigenvalues();
    const double lmax = ev.maxCoeff();
    if (!(lmax > 0.0) || ev.minCoeff() < lmax * 1e-12) return fe;
    const Eigen::MatrixXcd w = es.eigenvectors() *
                               ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                               es.eigenvectors().adjoint();
    for (int o = 0; o < dim; ++o) {
        const Eigen::MatrixXcd t = w * m[o] * w;
        m[o] = 0.5 * (t + t.adjoint());
    }
    fe.povm.elements = std::move(m);
    fe.povm.qubits = qubits;
    fe.povm.validate();
    fe.z = z_success_probability(fe.povm);
    fe.f = best_guess_for_povm(fe.povm);
    fe.xg = x_guessing_probability(fe.povm, fe.f);
    fe.ok = true;
    return fe;
}

void renormalize_theta(std::vector<double>& theta, int dim) {
    std::vector<Eigen::MatrixXcd> a;
    unpack_theta(theta, dim, a);
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& ao : a) s += ao.adjoint() * ao;
    const Eigen::MatrixXcd w = matrix_sqrt_inv(s);
    for (auto& ao : a) ao = ao * w;
    pack_theta(a, theta);
}

// Product of per-qubit rotated projectors at angle gamma; its z_success is
// cos(gamma)^(2m), so gamma <= acos((1-eps)^(1/2m)) keeps it feasible.
std::vector<Eigen::MatrixXcd> rotated_product_sqrts(int qubits, double gamma) {
    const int dim = 1 << qubits;
    const double c = std::cos(gamma), s = std::sin(gamma);
    const double b[2][2] = {{c, s}, {-s, c}};
    std::vector<Eigen::MatrixXcd> a(dim);
    for (int o = 0; o < dim; ++o) {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) {
            double amp = 1.0;
            for (int k = 0; k < qubits; ++k) {
                const int ob = (o >> (qubits - 1 - k)) & 1;
                const int ib = (i >> (qubits - 1 - k)) & 1;
                amp *= b[ob][ib];
            }
            v(i) = amp;
        }
        a[o] = (v * v.transpose()).cast<std::complex<double>>();
    }
    return a;
}

AttackResult exact_zero_epsilon_result(int m, uint64_t seed) {
    const int dim = 1 << m;
    AttackResult res;
    res.m = m;
    res.epsilon = 0.0;
    res.povm = computational_povm(m);
    res.guess.table.assign(dim, 0);
    res.z_success = 1.0;
    res.x_guess = 1.0 / dim;
    res.bound = theorem_bound(0.0, m);
    res.converged = true;
    res.seed = seed;
    return res;
}

struct RestartOutcome {
    bool found = false;
    Povm povm;
    GuessingFunction f;
    double z = 0.0;
    double xg = -1.0;
    bool converged = false;
    int chain_violations = 0;
};

RestartOutcome run_restart(int qubits, double epsilon, int iterations,
                           uint64_t restart_seed, int restart_index, int jobs) {
    const int dim = 1 << qubits;
    const int nparam = param_count(dim);
    const Eigen::MatrixXd hm = hadamard_matrix(dim);
    auto rng = make_rng(restart_seed, 0x6f7074);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const double gamma_max =
        std::acos(std::pow(std::max(0.0, 1.0 - epsilon), 1.0 / (2.0 * qubits)));
    double gamma = gamma_max, eta = 0.0;
    switch (restart_index % 4) {
        case 0: break;
        case 1: gamma = 0.55 * gamma_max; eta = 0.01; break;
        case 2: eta = 0.03; break;
        case 3: gamma = 0.0; eta = 0.05; break;
    }
    if (restart_index >= 4) {
        gamma = gamma_max * (0.3 + 0.7 * unif(rng));
        eta = std::pow(10.0, -2.3 + 1.4 * unif(rng));
    }

    std::vector<double> theta;
    FullEval fe;
    for (int attempt = 0; attempt < 8; ++attempt) {
        // Pull the boundary init slightly inside the feasible region; at
        // tiny epsilon the exact-boundary margin drowns in rounding noise.
        auto a = rotated_product_sqrts(qubits, gamma * (1.0 - 1e-6));
        if (eta > 0.0)
            for (auto& ao : a)
                for (int r = 0; r < dim; ++r)
                    for (int c = 0; c < dim; ++c)
                        ao(r, c) +=
                            eta * std::complex<double>(gauss(rng), gauss(rng));
        pack_theta(a, theta);
        renormalize_theta(theta, dim);
        fe = full_eval(theta, qubits);
        if (fe.ok && fe.z >= 1.0 - epsilon) break;
        eta *= 0.5;
        if (attempt == 6) eta = 0.0;
    }

    RestartOutcome out;
    auto track = [&](const FullEval& e) {
        if (!e.ok) return;
        const auto rep = check_proof_chain(e.povm, epsilon, e.f);
        if (!rep.chain_ok) ++out.chain_violations;
        if (e.z >= 1.0 - epsilon && e.xg > out.xg) {
            out.found = true;
            out.povm = e.povm;
            out.f = e.f;
            out.z = e.z;
            out.xg = e.xg;
        }
    };
    track(fe);

    std::vector<int> f = fe.ok ? fe.f.table : std::vector<int>(dim, 0);
    const double fd_step = 3e-5;
    double step_scale = 0.25;
    int stalls = 0, last_improve = 0;
    std::vector<double> grad(nparam, 0.0);
    int it = 0;
    for (; it < iterations; ++it) {
        const double frac = iterations > 1 ? double(it) / (iterations - 1) : 1.0;
        const double lambda = 10.0 * std::pow(1e3, frac);
        const double cur = merit_eval(theta, dim, hm, f, epsilon, lambda);

        for_each_index(size_t(nparam), jobs, [&](size_t k) {
            std::vector<double> t = theta;
            t[k] += fd_step;
            const double up = merit_eval(t, dim, hm, f, epsilon, lambda);
            t[k] -= 2.0 * fd_step;
            const double dn = merit_eval(t, dim, hm, f, epsilon, lambda);
            grad[k] = (up - dn) / (2.0 * fd_step);
        });

        bool accepted = false;
        double trial = step_scale;
        std::vector<double> cand(nparam);
        for (int bt = 0; bt < 8 && !accepted; ++bt, trial *= 0.5) {
            for (int k = 0; k < nparam; ++k) cand[k] = theta[k] + trial * grad[k];
            if (merit_eval(cand, dim, hm, f, epsilon, lambda) > cur + 1e-12) {
                theta = cand;
                renormalize_theta(theta, dim);
                step_scale = std::min(4.0, trial * 1.7);
                accepted = true;
            }
        }
        if (!accepted) {
            if (++stalls >= 12) break;
            continue;
        }
        stalls = 0;
        const double prev_best = out.xg;
        fe = full_eval(theta, qubits);
        track(fe);
        if (fe.ok) f = fe.f.table;
        if (out.xg > prev_best + 1e-12) last_improve = it;
    }
    out.converged =
        stalls >= 12 || (it - last_improve) >= std::max(30, iterations / 4);
    return out;
}

} // namespace

AttackResult optimize_attack(int m, double epsilon, int iterations,
                             int restarts, uint64_t seed, int jobs) {
    if (m < 1 || m > 4)
        throw std::invalid_argument("optimizer handles 1 <= m <= 4");
    if (epsilon < 0.0 || epsilon >= 1.0)
        throw std::invalid_argument("epsilon outside [0,1)");
    if (iterations < 1 || restarts < 1)
        throw std::invalid_argument("need positive iteration/restart budget");
    if (epsilon == 0.0) return exact_zero_epsilon_result(m, seed);

    AttackResult res;
    res.m = m;
    res.epsilon = epsilon;
    res.bound = theorem_bound(epsilon, m);
    res.seed = seed;
    res.x_guess = -1.0;

    bool any_converged = false;
    for (int r = 0; r < restarts; ++r) {
        const auto out =
            run_restart(m, epsilon, iterations, derive_seed(seed, r + 1), r, jobs);
        res.chain_violations += out.chain_violations;
        if (out.found && out.xg > res.x_guess) {
            res.povm = out.povm;
            res.guess = out.f;
            res.z_success = out.z;
            res.x_guess = out.xg;
            any_converged = out.converged;
        }
    }
    if (res.x_guess < 0.0)
        throw std::logic_error("no feasible iterate found from feasible inits");
    res.converged = any_converged;
    res.falsification = res.x_guess > res.bound + 1e-6;
    return res;
}

namespace {

struct M1Point {
    double z = 0.0;
    double xg = -1.0;
    GuessingFunction f;
    double theta = 0.0;
    double phi = 0.0;
};

M1Point m1_point(double th, double ph) {
    using cd = std::complex<double>;
    Eigen::Vector2cd b0;
    b0 << cd(std::cos(th / 2), 0.0),
        cd(std::sin(th / 2), 0.0) * std::exp(cd(0.0, ph));
    Eigen::Matrix2cd m0 = b0 * b0.adjoint();
    Eigen::Matrix2cd m1 = Eigen::Matrix2cd::Identity() - m0;
    M1Point pt;
    pt.theta = th;
    pt.phi = ph;
    pt.z = 0.5 * (m0(0, 0).real() + m1(1, 1).real());
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Vector2cd psi[2];
    psi[0] << cd(r, 0), cd(r, 0);
    psi[1] << cd(r, 0), cd(-r, 0);
    double q[2][2];
    for (int x = 0; x < 2; ++x) {
        q[0][x] = (psi[x].adjoint() * m0 * psi[x])(0).real();
        q[1][x] = (psi[x].adjoint() * m1 * psi[x])(0).real();
    }
    pt.f.table.resize(2);
    double xg = 0.0;
    for (int x = 0; x < 2; ++x) {
        const int o = q[1][x] > q[0][x] ? 1 : 0;
        pt.f.table[x] = o;
        xg += q[o][x];
    }
    pt.xg = xg / 2.0;
    return pt;
}

} // namespace

AttackResult brute_force_attack_m1(double epsilon, int grid_points) {
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("epsilon outside [0,1]");
    if (grid_points < 1000)
        throw std::invalid_argument("grid too coarse to act as an oracle");

    const int nphi = 64;
    M1Point best;
    auto consider = [&](double th, double ph) {
        const M1Point pt = m1_point(th, ph);
        if (pt.z >= 1.0 - epsilon && pt.xg > best.xg) best = pt;
    };
    for (int t = 0; t < grid_points; ++t) {
        const double th = M_PI * double(t) / (grid_points - 1);
        for (int u = 0; u < nphi; ++u)
            consider(th, 2.0 * M_PI * double(u) / nphi);
    }
    if (best.xg < 0.0) throw std::logic_error("no feasible grid point");

    // Local refinement keeps the oracle's own error well below 1e-4.
    double span_th = M_PI / (grid_points - 1), span_ph = 2.0 * M_PI / nphi;
    for (int round = 0; round < 4; ++round) {
        const M1Point centre = best;
        for (int dt = -20; dt <= 20; ++dt)
            for (int dp = -20; dp <= 20; ++dp)
                consider(centre.theta + span_th * dt / 20.0,
                         centre.phi + span_ph * dp / 20.0);
        span_th *= 0.05;
        span_ph *= 0.05;
    }

    const M1Point pt = m1_point(best.theta, best.phi);
    AttackResult res;
    res.m = 1;
    res.epsilon = epsilon;
    using cd = std::complex<double>;
    Eigen::Vector2cd b0;
    b0 << cd(std::cos(pt.theta / 2), 0.0),
        cd(std::sin(pt.theta / 2), 0.0) * std::exp(cd(0.0, pt.phi));
    res.povm.qubits = 1;
    res.povm.elements.resize(2);
    res.povm.elements[0] = b0 * b0.adjoint();
    res.povm.elements[1] = Eigen::Matrix2cd::Identity() - res.povm.elements[0];
    res.guess = pt.f;
    res.z_success = pt.z;
    res.x_guess = pt.xg;
    res.bound = theorem_bound(epsilon, 1);
    res.converged = true;
    res.falsification = res.x_guess > res.bound + 1e-6;
    return res;
}

namespace {

// Best single-qubit value at error budget e: the frontier circle
// (2z - 1)^2 + (2x - 1)^2 = 1 gives 1/2 + sqrt(e(1 - e)) up to e = 1/2,
// after which measuring straight in the Hadamard basis already wins.
double per_qubit_optimum(double e) {
    if (e <= 0.0) return 0.5;
    if (e >= 0.5) return 1.0;
    return 0.5 + std::sqrt(e * (1.0 - e));
}

} // namespace

double product_measurement_optimum(int m, double epsilon) {
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("epsilon outside [0,1]");
    if (m == 1) return per_qubit_optimum(epsilon);
    if (m != 2)
        throw std::invalid_argument("product oracle covers m in {1,2}");

    // Split the budget as (1-e1)(1-e2) = 1-eps with the constraint tight;
    // slack never helps because the per-qubit frontier is increasing.
    auto value_at = [&](double e1) {
        if (e1 < 0.0 || e1 > epsilon) return -1.0;
        const double e2 =
            e1 >= 1.0 ? 1.0 : 1.0 - (1.0 - epsilon) / (1.0 - e1);
        return per_qubit_optimum(e1) * per_qubit_optimum(e2);
    };
    double best = -1.0, best_e1 = 0.0, span = epsilon;
    const int coarse = 20000;
    for (int i = 0; i <= coarse; ++i) {
        const double e1 = epsilon * double(i) / coarse;
        const double v = value_at(e1);
        if (v > best) {
            best = v;
            best_e1 = e1;
        }
    }
    span = epsilon / coarse;
    for (int round = 0; round < 4; ++round) {
        const double centre = best_e1;
        for (int i = -100; i <= 100; ++i) {
            const double e1 = centre + span * double(i) / 100.0;
            const double v = value_at(e1);
            if (v > best) {
                best = v;
                best_e1 = e1;
            }
        }
        span *= 0.02;
    }
    return best;
}

Povm random_premise_povm(int qubits, double epsilon, std::mt19937_64& rng) {
    if (qubits < 1 || qubits > kMaxQubits)
        throw std::invalid_argument("qubit count out of range");
    if (epsilon < 0.0 || epsilon > 0.25)
        throw std::invalid_argument("generator tuned for epsilon <= 0.25");
    if (epsilon == 0.0) return computational_povm(qubits);

    const int dim = 1 << qubits;
    std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(double(dim)));
    const double lo_target = 1.0 - epsilon, hi_target = 1.0 - 0.9 * epsilon;
    const double mid = 1.0 - 0.95 * epsilon;

    // Rejection sampling over the Gaussian seed: a rare draw keeps its
    // normalized large-t limit above the window, in which case no scale
    // works and only a fresh seed helps.
    for (int attempt = 0; attempt < 50; ++attempt) {
        std::vector<Eigen::MatrixXcd> g(dim);
        for (auto& go : g) {
            go.resize(dim, dim);
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < dim; ++c)
                    go(r, c) = std::complex<double>(gauss(rng), gauss(rng));
        }

        auto build = [&](double t) {
            std::vector<Eigen::MatrixXcd> a(dim);
            for (int o = 0; o < dim; ++o) {
                a[o] = t * g[o];
                a[o](o, o) += 1.0;
            }
            std::vector<double> theta;
            pack_theta(a, theta);
            return full_eval(theta, qubits);
        };

        double t_lo = 0.0, t_hi = 0.05;
        FullEval fe = build(t_hi);
        int guard = 0;
        while ((!fe.ok || fe.z >= lo_target) && ++guard < 40) {
            t_hi *= 2.0;
            fe = build(t_hi);
        }
        if (guard >= 40) continue;
        for (int it = 0; it < 80; ++it) {
            const double t = 0.5 * (t_lo + t_hi);
            fe = build(t);
            if (fe.ok && fe.z >= lo_target && fe.z <= hi_target) return fe.povm;
            if (!fe.ok || fe.z < mid)
                t_hi = t;
            else
                t_lo = t;
        }
    }
    throw std::logic_error("premise generator failed");
}

} // namespace otm
