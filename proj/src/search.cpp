#include "nub/search.hpp"

#include <cmath>
#include <numeric>

#include "nub/qrac.hpp"
#include "nub/unbiased.hpp"

namespace nub {

namespace {

Matrix polar_factor(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

double measurement_objective(const Matrix& basis, const std::vector<Matrix>& accumulators) {
    double total = 0.0;
    for (int b = 0; b < basis.cols(); ++b) {
        total += (basis.col(b).adjoint() * accumulators[static_cast<std::size_t>(b)] *
                  basis.col(b))(0, 0).real();
    }
    return total;
}

}  // namespace

SeesawResult seesaw_optimize(int n, int d, std::uint64_t seed, const SeesawOptions& opts) {
    if (n < 1 || d < 1) throw std::invalid_argument("seesaw_optimize: need n, d >= 1");
    check_enumeration_budget(d, n, "seesaw_optimize");
    const long tuples = static_cast<long>(tuple_count(d, n));

    const BasisSet initial = random_basis_set(n, d, seed);
    std::vector<Matrix> mats;
    mats.reserve(static_cast<std::size_t>(n));
    for (const Basis& b : initial.bases()) mats.push_back(b.matrix());

    std::vector<Vector> encoders(static_cast<std::size_t>(tuples), Vector(d));
    std::vector<Matrix> accumulators(static_cast<std::size_t>(d), Matrix(d, d));
    Eigen::SelfAdjointEigenSolver<Matrix> solver;

    SeesawResult result{BasisSet(std::vector<Basis>{make_computational(d)}), 0.0, {}, 0, seed};
    double previous_asp = -1.0;

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        // encoder half-step: exact argmax per tuple
        PairwiseAccumulator lambda_sum;
        std::vector<int> x(static_cast<std::size_t>(n), 0);
        long flat = 0;
        do {
            Matrix m = Matrix::Zero(d, d);
            for (int y = 0; y < n; ++y) {
                const auto col = mats[static_cast<std::size_t>(y)].col(x[static_cast<std::size_t>(y)]);
                m += col * col.adjoint();
            }
            solver.compute(m);
            lambda_sum.add(solver.eigenvalues()(d - 1));
            encoders[static_cast<std::size_t>(flat)] = solver.eigenvectors().col(d - 1);
            ++flat;
        } while (advance_tuple(x, d));
        const double asp = lambda_sum.sum() / (static_cast<double>(n) * static_cast<double>(tuples));
        result.trajectory.push_back(asp);
        result.iterations = iter + 1;
        if (previous_asp >= 0.0 && asp - previous_asp < opts.tol) break;
        previous_asp = asp;

        // measurement half-step: per basis, polar fixed point on the
        // fixed-encoder objective, rejecting any decreasing update
        for (int y = 0; y < n; ++y) {
            for (int b = 0; b < d; ++b) accumulators[static_cast<std::size_t>(b)].setZero();
            std::vector<int> xt(static_cast<std::size_t>(n), 0);
            long ft = 0;
            do {
                const Vector& psi = encoders[static_cast<std::size_t>(ft)];
                accumulators[static_cast<std::size_t>(xt[static_cast<std::size_t>(y)])] +=
                    psi * psi.adjoint();
                ++ft;
            } while (advance_tuple(xt, d));

            Matrix basis = mats[static_cast<std::size_t>(y)];
            double objective = measurement_objective(basis, accumulators);
            for (int inner = 0; inner < opts.inner_iters; ++inner) {
                Matrix target(d, d);
                for (int b = 0; b < d; ++b) {
                    target.col(b) = accumulators[static_cast<std::size_t>(b)] * basis.col(b);
                }
                bool accepted = false;
                double alpha = 1.0;
                for (int half = 0; half < 20; ++half) {
                    const Matrix candidate =
                        polar_factor(alpha * target + (1.0 - alpha) * basis);
                    const double cand_objective = measurement_objective(candidate, accumulators);
                    if (cand_objective >= objective - 1e-15) {
                        const double gain = cand_objective - objective;
                        basis = candidate;
                        objective = cand_objective;
                        accepted = gain > 1e-14;
                        break;
                    }
                    alpha *= 0.5;
                }
                if (!accepted) break;
            }
            mats[static_cast<std::size_t>(y)] = basis;
        }
    }

    std::vector<Basis> final_bases;
    final_bases.reserve(static_cast<std::size_t>(n));
    for (Matrix& m : mats) final_bases.push_back(Basis::from_matrix(polar_factor(m), 1e-8));
    result.bases = BasisSet(std::move(final_bases));
    result.asp = result.trajectory.empty() ? 0.0 : result.trajectory.back();
    return result;
}

namespace {

/// nUB residual on raw matrices (no orthonormality gate), so finite
/// difference probes stay cheap and legal.
double raw_nub_residual(const std::vector<Matrix>& mats, int d,
                        const std::vector<std::vector<int>>& cycles) {
    const int n = static_cast<int>(mats.size());
    std::vector<Matrix> tables(static_cast<std::size_t>(n) * n);
    for (int y = 0; y < n; ++y) {
        for (int z = 0; z < n; ++z) {
            tables[static_cast<std::size_t>(y * n + z)] =
                mats[static_cast<std::size_t>(y)].adjoint() * mats[static_cast<std::size_t>(z)];
        }
    }
    double target = 1.0;
    for (int i = 2; i < n; ++i) target *= i;
    target /= std::pow(static_cast<double>(d), n - 1);

    PairwiseAccumulator acc;
    std::vector<int> x(static_cast<std::size_t>(n), 0);
    do {
        Complex value(0.0, 0.0);
        for (const auto& successor : cycles) {
            Complex product(1.0, 0.0);
            for (int pos = 0; pos < n; ++pos) {
                const int next = successor[static_cast<std::size_t>(pos)];
                product *= tables[static_cast<std::size_t>(pos * n + next)](
                    x[static_cast<std::size_t>(pos)], x[static_cast<std::size_t>(next)]);
            }
            value += product;
        }
        acc.add(std::norm(value - Complex(target, 0.0)));
    } while (advance_tuple(x, d));
    return acc.sum();
}

}  // namespace

DescentRun descend_nub_residual(const BasisSet& start, const DescentOptions& opts) {
    const int n = start.n();
    const int d = start.dim();
    if (n < 2) throw std::invalid_argument("descend_nub_residual: needs n >= 2");
    check_enumeration_budget(d, n, "descend_nub_residual");
    const auto cycles = k_cycles(n);

    std::vector<Matrix> mats;
    mats.reserve(static_cast<std::size_t>(n));
    for (const Basis& b : start.bases()) mats.push_back(b.matrix());

    double residual = raw_nub_residual(mats, d, cycles);
    double step = opts.initial_step;
    const double h = opts.fd_step;
    int accepted_steps = 0;

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        if (residual <= opts.target_residual) break;

        // central-difference Euclidean gradient per free unitary
        std::vector<Matrix> gradients(static_cast<std::size_t>(n));
        double gradient_norm2 = 0.0;
        for (int y = 1; y < n; ++y) {
            Matrix g(d, d);
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                    const Complex original = mats[static_cast<std::size_t>(y)](i, j);
                    auto probe = [&](Complex delta) {
                        mats[static_cast<std::size_t>(y)](i, j) = original + delta;
                        const double value = raw_nub_residual(mats, d, cycles);
                        mats[static_cast<std::size_t>(y)](i, j) = original;
                        return value;
                    };
                    const double d_re = (probe(Complex(h, 0)) - probe(Complex(-h, 0))) / (2 * h);
                    const double d_im = (probe(Complex(0, h)) - probe(Complex(0, -h))) / (2 * h);
                    g(i, j) = Complex(d_re, d_im);
                }
            }
            gradients[static_cast<std::size_t>(y)] = std::move(g);
        }

        // anti-Hermitian projection generating the manifold direction
        std::vector<Matrix> directions(static_cast<std::size_t>(n));
        for (int y = 1; y < n; ++y) {
            const Matrix& u = mats[static_cast<std::size_t>(y)];
            const Matrix& g = gradients[static_cast<std::size_t>(y)];
            Matrix a = g * u.adjoint() - u * g.adjoint();
            gradient_norm2 += a.squaredNorm();
            directions[static_cast<std::size_t>(y)] = std::move(a);
        }
        if (gradient_norm2 < 1e-24) break;

        bool moved = false;
        for (int attempt = 0; attempt < 40; ++attempt) {
            std::vector<Matrix> candidate = mats;
            for (int y = 1; y < n; ++y) {
                // exp(-step * A) U via the eigensystem of the Hermitian iA
                const Matrix herm = Complex(0, 1) * directions[static_cast<std::size_t>(y)];
                Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
                Vector phases(d);
                for (int i = 0; i < d; ++i) {
                    const double angle = step * es.eigenvalues()(i);
                    phases(i) = Complex(std::cos(angle), std::sin(angle));
                }
                const Matrix rotation = es.eigenvectors() * phases.asDiagonal() *
                                        es.eigenvectors().adjoint();
                candidate[static_cast<std::size_t>(y)] =
                    polar_factor(rotation * mats[static_cast<std::size_t>(y)]);
            }
            const double cand_residual = raw_nub_residual(candidate, d, cycles);
            if (cand_residual < residual) {
                mats = std::move(candidate);
                residual = cand_residual;
                step = std::min(step * 1.5, 1.0);
                moved = true;
                ++accepted_steps;
                break;
            }
            step *= 0.5;
            if (step < 1e-14) break;
        }
        if (!moved) break;
    }

    std::vector<Basis> bases;
    bases.reserve(static_cast<std::size_t>(n));
    for (const Matrix& m : mats) bases.push_back(Basis::from_matrix(m, 1e-8));
    return DescentRun{BasisSet(std::move(bases)), residual, accepted_steps};
}

SearchResult nub_descent_search(int n, int d, std::uint64_t seed, int restarts, int max_iters) {
    if (restarts < 1) throw std::invalid_argument("nub_descent_search: need at least one restart");
    check_enumeration_budget(d, n, "nub_descent_search");

    DescentOptions opts;
    opts.max_iters = max_iters;

    SearchResult result{BasisSet(std::vector<Basis>{make_computational(d)}), 0.0, seed, restarts, {}};
    bool have_best = false;
    for (int r = 0; r < restarts; ++r) {
        std::vector<Basis> init;
        init.reserve(static_cast<std::size_t>(n));
        init.push_back(make_computational(d));
        for (int y = 1; y < n; ++y) {
            init.push_back(random_haar_basis(
                d, derive_seed(seed, static_cast<std::uint64_t>(r) * 1000 + static_cast<std::uint64_t>(y))));
        }
        DescentRun run = descend_nub_residual(BasisSet(std::move(init)), opts);
        result.restart_residuals.push_back(run.residual);
        if (!have_best || run.residual < result.residual) {
            result.best = run.bases;
            result.residual = run.residual;
            have_best = true;
        }
        if (result.residual <= opts.target_residual) break;
    }
    result.restarts = static_cast<int>(result.restart_residuals.size());
    return result;
}

namespace {

struct RunningMoments {
    PairwiseAccumulator values;
    PairwiseAccumulator squares;

    void add(double v) {
        values.add(v);
        squares.add(v * v);
    }
    double mean() const { return values.sum() / static_cast<double>(values.count()); }
    double stderr_of_mean() const {
        const auto count = static_cast<double>(values.count());
        const double m = mean();
        const double var = std::max(0.0, (squares.sum() - count * m * m) / (count - 1.0));
        return std::sqrt(var / count);
    }
};

}  // namespace

MonteCarloEstimate haar_expectation_test(int n, int d, long samples, std::uint64_t seed) {
    if (n < 2 || d < 1) throw std::invalid_argument("haar_expectation_test: need n >= 2, d >= 1");
    if (samples < 2) throw std::invalid_argument("haar_expectation_test: need samples >= 2");
    const auto cycles = k_cycles(n);

    RunningMoments re;
    RunningMoments im;
    Matrix gram(n, n);
    for (long s = 0; s < samples; ++s) {
        const std::uint64_t sample_seed = derive_seed(seed, static_cast<std::uint64_t>(s));
        // v_0 stays the computational state; the rest are Haar columns
        std::vector<Vector> states(static_cast<std::size_t>(n));
        states[0] = Vector::Zero(d);
        states[0](0) = Complex(1.0, 0.0);
        for (int y = 1; y < n; ++y) {
            states[static_cast<std::size_t>(y)] =
                random_haar_basis(d, derive_seed(sample_seed, static_cast<std::uint64_t>(y)))
                    .matrix()
                    .col(0);
        }
        for (int y = 0; y < n; ++y) {
            for (int z = 0; z < n; ++z) {
                gram(y, z) = states[static_cast<std::size_t>(y)].dot(states[static_cast<std::size_t>(z)]);
            }
        }
        Complex value(0.0, 0.0);
        for (const auto& successor : cycles) {
            Complex product(1.0, 0.0);
            for (int pos = 0; pos < n; ++pos) {
                product *= gram(pos, successor[static_cast<std::size_t>(pos)]);
            }
            value += product;
        }
        re.add(value.real());
        im.add(value.imag());
    }

    MonteCarloEstimate estimate;
    estimate.mean = re.mean();
    estimate.stderr_ = re.stderr_of_mean();
    estimate.imag_mean = im.mean();
    estimate.imag_stderr = im.stderr_of_mean();
    estimate.samples = samples;
    double target = 1.0;
    for (int i = 2; i < n; ++i) target *= i;
    estimate.target = target / std::pow(static_cast<double>(d), n - 1);
    estimate.seed = seed;
    return estimate;
}

MonteCarloEstimate single_factor_expectation(int d, int i, int j, long samples,
                                             std::uint64_t seed) {
    if (i < 0 || i >= d || j < 0 || j >= d) {
        throw std::out_of_range("single_factor_expectation: index out of range");
    }
    if (samples < 2) throw std::invalid_argument("single_factor_expectation: need samples >= 2");
    RunningMoments re;
    RunningMoments im;
    for (long s = 0; s < samples; ++s) {
        const Matrix u =
            random_haar_basis(d, derive_seed(seed, static_cast<std::uint64_t>(s))).matrix();
        const Complex value = u(i, 0) * std::conj(u(j, 0));
        re.add(value.real());
        im.add(value.imag());
    }
    MonteCarloEstimate estimate;
    estimate.mean = re.mean();
    estimate.stderr_ = re.stderr_of_mean();
    estimate.imag_mean = im.mean();
    estimate.imag_stderr = im.stderr_of_mean();
    estimate.samples = samples;
    estimate.target = (i == j) ? 1.0 / d : 0.0;
    estimate.seed = seed;
    return estimate;
}

ScanReport scan_candidates(const std::vector<std::pair<std::string, BasisSet>>& sets, int k) {
    if (sets.empty()) throw std::invalid_argument("scan_candidates: empty input");
    const int n = sets.front().second.n();
    const int d = sets.front().second.dim();
    if (k < 2 || k > n) throw std::invalid_argument("scan_candidates: k must satisfy 2 <= k <= n");
    for (const auto& [label, set] : sets) {
        if (set.n() != n || set.dim() != d) {
            throw std::invalid_argument("scan_candidates: heterogeneous stream (set '" + label +
                                        "' has different n or d)");
        }
    }
    ScanReport report;
    report.n = n;
    report.d = d;
    report.k = k;
    for (const auto& [label, set] : sets) {
        ScanEntry entry;
        entry.label = label;
        entry.residual = nub_residual(set);
        const KubReport kub = kub_check(set, k, 1e-10);
        entry.kub_ok = kub.ok;
        entry.kub_deviation = kub.worst.deviation;
        report.entries.push_back(std::move(entry));
    }
    report.best_index = 0;
    for (std::size_t i = 1; i < report.entries.size(); ++i) {
        if (report.entries[i].residual < report.entries[static_cast<std::size_t>(report.best_index)].residual) {
            report.best_index = static_cast<int>(i);
        }
    }
    report.min_residual = report.entries[static_cast<std::size_t>(report.best_index)].residual;
    return report;
}

}  // namespace nub
