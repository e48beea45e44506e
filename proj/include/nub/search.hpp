#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nub/basis.hpp"
#include "nub/common.hpp"

namespace nub {

struct SeesawOptions {
    int max_iters = 300;
    double tol = 1e-10;       // stop when the ASP gain per iteration drops below this
    int inner_iters = 40;     // per-basis fixed-point iterations in the measurement step
};

struct SeesawResult {
    BasisSet bases;
    double asp = 0.0;
    std::vector<double> trajectory;  // exact ASP after each full iteration
    int iterations = 0;
    std::uint64_t seed = 0;
};

/// Alternating maximization of the QRAC ASP: exact optimal-encoder
/// update (top eigenvector per input tuple) against a polar-factor
/// fixed-point measurement update with step rejection, so the
/// trajectory never decreases.
SeesawResult seesaw_optimize(int n, int d, std::uint64_t seed, const SeesawOptions& opts = {});

struct DescentOptions {
    int max_iters = 400;
    double fd_step = 1e-5;          // central-difference step on matrix entries
    double initial_step = 0.05;     // manifold step size, adapted by backtracking
    double target_residual = 1e-12; // early stop once reached
};

struct DescentRun {
    BasisSet bases;
    double residual = 0.0;
    int iterations = 0;  // accepted manifold steps
};

/// Gradient descent of the nUB residual on the unitary manifold,
/// keeping the first basis fixed (a lossless gauge choice). Accepted
/// steps never increase the residual; every step re-orthonormalizes.
DescentRun descend_nub_residual(const BasisSet& start, const DescentOptions& opts = {});

struct SearchResult {
    BasisSet best;
    double residual = 0.0;
    std::uint64_t seed = 0;
    int restarts = 0;
    std::vector<double> restart_residuals;
};

/// Random-restart descent: first basis computational, the others Haar
/// with per-restart derived seeds. Reports the best candidate found;
/// a nonzero floor is evidence, never a nonexistence certificate.
SearchResult nub_descent_search(int n, int d, std::uint64_t seed, int restarts,
                                int max_iters = 400);

struct MonteCarloEstimate {
    double mean = 0.0;       // sample mean of the real part
    double stderr_ = 0.0;    // sample std of the real part / sqrt(samples)
    double imag_mean = 0.0;  // imaginary part tracked separately
    double imag_stderr = 0.0;
    long samples = 0;
    double target = 0.0;
    std::uint64_t seed = 0;
};

/// Monte Carlo mean of the n-cycle sum for one fixed index tuple over
/// independent Haar unitaries (the first basis stays computational).
/// The expectation equals the nUB target (n-1)!/d^(n-1).
MonteCarloEstimate haar_expectation_test(int n, int d, long samples, std::uint64_t seed);

/// Monte Carlo mean of <x_i|U|x_0><x_0|U dagger|x_j> over Haar U;
/// expectation delta_ij / d.
MonteCarloEstimate single_factor_expectation(int d, int i, int j, long samples,
                                             std::uint64_t seed);

struct ScanEntry {
    std::string label;
    double residual = 0.0;
    bool kub_ok = false;
    double kub_deviation = 0.0;
};

struct ScanReport {
    int n = 0;
    int d = 0;
    int k = 0;
    std::vector<ScanEntry> entries;
    int best_index = -1;
    double min_residual = 0.0;
};

/// Batch verdicts over externally supplied candidate sets: per-set nUB
/// residual and kUB(k) verdict, plus the argmin.
ScanReport scan_candidates(const std::vector<std::pair<std::string, BasisSet>>& sets, int k);

}  // namespace nub
