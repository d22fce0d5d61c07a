// Compares the serial reference kernel against the OpenMP path on the
// optimizer's finite-difference gradient, the only hot loop in the repo.
// Results must be bitwise identical: each gradient slot is written by
// exactly one iteration, so thread count cannot change the arithmetic.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>

#include "otm/bound.hpp"
#include "otm/parallel.hpp"

using namespace otm;

namespace {

double time_run(int jobs, AttackResult& out) {
    auto t0 = std::chrono::steady_clock::now();
    out = optimize_attack(2, 0.1, 400, 2, 2024, jobs);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const int par_jobs = argc > 1 ? std::atoi(argv[1]) : 4;
    std::printf("optimize_attack(m=2, eps=0.1, 400 iters, 2 restarts)\n");

    AttackResult serial, parallel;
    const double ts = time_run(1, serial);
    const double tp = time_run(par_jobs, parallel);

    std::printf("  jobs=1  %7.3f s   x_guess=%.17g\n", ts, serial.x_guess);
    std::printf("  jobs=%-2d %7.3f s   x_guess=%.17g\n", par_jobs, tp,
                parallel.x_guess);
    std::printf("  speedup %.2fx on %d hardware threads\n", ts / tp,
                resolve_jobs(0));

    const bool same = serial.x_guess == parallel.x_guess &&
                      serial.z_success == parallel.z_success &&
                      serial.converged == parallel.converged;
    std::printf("  bitwise identical: %s\n", same ? "yes" : "NO");
    return same ? 0 : 1;
}
