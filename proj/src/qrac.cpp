#include "nub/qrac.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nub/unbiased.hpp"

namespace nub {

Rational::Rational(long long num, long long den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    num_ = (g != 0) ? num / g : num;
    den_ = (g != 0) ? den / g : den;
}

std::string Rational::str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
}

EffectiveOperator effective_operator(const BasisSet& s, std::span<const int> x) {
    const int n = s.n();
    if (static_cast<int>(x.size()) != n) {
        throw std::invalid_argument("effective_operator: one index per basis required");
    }
    for (const int xi : x) {
        if (xi < 0 || xi >= s.dim()) {
            throw std::out_of_range("effective_operator: index out of range");
        }
    }
    EffectiveOperator op;
    op.x.assign(x.begin(), x.end());
    op.gram.resize(n, n);
    for (int y = 0; y < n; ++y) {
        for (int z = 0; z < n; ++z) {
            op.gram(y, z) = s.basis(y).column(x[static_cast<std::size_t>(y)]).dot(
                s.basis(z).column(x[static_cast<std::size_t>(z)]));
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op.gram);
    op.lambda_max = solver.eigenvalues().maxCoeff();
    return op;
}

Matrix effective_operator_matrix(const BasisSet& s, std::span<const int> x) {
    if (static_cast<int>(x.size()) != s.n()) {
        throw std::invalid_argument("effective_operator_matrix: one index per basis required");
    }
    Matrix m = Matrix::Zero(s.dim(), s.dim());
    for (int y = 0; y < s.n(); ++y) {
        const int xi = x[static_cast<std::size_t>(y)];
        if (xi < 0 || xi >= s.dim()) {
            throw std::out_of_range("effective_operator_matrix: index out of range");
        }
        const auto col = s.basis(y).column(xi);
        m += col * col.adjoint();
    }
    return m;
}

Vector optimal_encoding(const BasisSet& s, std::span<const int> x) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(effective_operator_matrix(s, x));
    return solver.eigenvectors().col(s.dim() - 1);  // eigenvalues ascend
}

double asp_quantum(const BasisSet& s) {
    const int n = s.n();
    const int d = s.dim();
    check_enumeration_budget(d, n, "asp_quantum");
    const OverlapCache cache(s);
    Matrix gram(n, n);
    Eigen::SelfAdjointEigenSolver<Matrix> solver;
    PairwiseAccumulator acc;
    std::vector<int> x(static_cast<std::size_t>(n), 0);
    do {
        for (int y = 0; y < n; ++y) {
            for (int z = 0; z < n; ++z) {
                gram(y, z) = cache.overlap(y, x[static_cast<std::size_t>(y)], z,
                                           x[static_cast<std::size_t>(z)]);
            }
        }
        solver.compute(gram, Eigen::EigenvaluesOnly);
        acc.add(solver.eigenvalues().maxCoeff());
    } while (advance_tuple(x, d));
    return acc.sum() / (static_cast<double>(n) * tuple_count(d, n));
}

namespace {

long long factorial_ll(int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

/// Enumerates count vectors (c_1..c_d), sum n, accumulating
/// multinomial(n; c) * max(c). Recursion over positions keeps the
/// enumeration at C(n+d-1, d-1) nodes instead of d^n. The partial
/// divisions are exact: n!/(c_1!...c_j!) equals a multinomial times
/// the factorial of the remainder.
void accumulate_plurality(int remaining, int slots_left, long long multinomial_partial,
                          int current_max, __int128& total) {
    if (slots_left == 1) {
        const long long weight = multinomial_partial / factorial_ll(remaining);
        total += static_cast<__int128>(weight) * std::max(current_max, remaining);
        return;
    }
    for (int c = 0; c <= remaining; ++c) {
        accumulate_plurality(remaining - c, slots_left - 1,
                             multinomial_partial / factorial_ll(c), std::max(current_max, c),
                             total);
    }
}

}  // namespace

Rational asp_classical(int n, int d) {
    if (n < 1 || d < 1) throw std::invalid_argument("asp_classical: need n, d >= 1");
    if (n > 20) throw std::invalid_argument("asp_classical: n too large for exact counting");
    __int128 total = 0;
    accumulate_plurality(n, d, factorial_ll(n), 0, total);

    const double denom_check = static_cast<double>(n) * tuple_count(d, n);
    if (denom_check > 9e18) throw std::invalid_argument("asp_classical: n*d^n overflows");
    long long denom = n;
    for (int i = 0; i < n; ++i) denom *= d;
    if (total > static_cast<__int128>(9e18)) {
        throw std::runtime_error("asp_classical: count overflows 64 bits");
    }
    return Rational(static_cast<long long>(total), denom);
}

Rational classical_brute_force(int n, int d) {
    if (n * d > 9) {
        throw std::invalid_argument("classical_brute_force: n*d > 9 is out of oracle range");
    }
    long long num_inputs = 1;
    for (int i = 0; i < n; ++i) num_inputs *= d;

    // all input tuples, flattened
    std::vector<std::vector<int>> inputs;
    {
        std::vector<int> x(static_cast<std::size_t>(n), 0);
        do {
            inputs.push_back(x);
        } while (advance_tuple(x, d));
    }

    // enumerate every encoding [d]^n -> [d]; for each, the optimal
    // decoder is the per-(message, y) plurality, so no decoder loop
    long long best = -1;
    std::vector<int> encoding(static_cast<std::size_t>(num_inputs), 0);
    std::vector<long long> votes(static_cast<std::size_t>(d * n * d), 0);
    do {
        std::fill(votes.begin(), votes.end(), 0);
        for (long long i = 0; i < num_inputs; ++i) {
            const int message = encoding[static_cast<std::size_t>(i)];
            for (int y = 0; y < n; ++y) {
                const int bit = inputs[static_cast<std::size_t>(i)][static_cast<std::size_t>(y)];
                ++votes[static_cast<std::size_t>((message * n + y) * d + bit)];
            }
        }
        long long score = 0;
        for (int m = 0; m < d; ++m) {
            for (int y = 0; y < n; ++y) {
                long long top = 0;
                for (int b = 0; b < d; ++b) {
                    top = std::max(top, votes[static_cast<std::size_t>((m * n + y) * d + b)]);
                }
                score += top;
            }
        }
        best = std::max(best, score);
    } while (advance_tuple(encoding, d));

    return Rational(best, num_inputs * n);
}

double BoundPolynomial::eval(double lambda) const {
    // extended-precision Horner: plain double cancellation near the
    // root leaves ~1e-11 noise at n=8, too coarse for the 1e-12
    // residual certificate
    long double value = 0.0L;
    for (const double a : coeffs) value = value * lambda + a;
    return static_cast<double>(value);
}

double BoundPolynomial::deriv(double lambda) const {
    double value = 0.0;
    const int degree = static_cast<int>(coeffs.size()) - 1;
    for (int k = 0; k < degree; ++k) {
        value = value * lambda + coeffs[static_cast<std::size_t>(k)] * (degree - k);
    }
    return value;
}

namespace {

std::vector<double> uniform_coeffs(int n, int d) {
    std::vector<double> coeffs(static_cast<std::size_t>(n) + 1);
    coeffs[0] = 1.0;
    double binom = 1.0;          // C(n,k)
    double falling_over_dk = 1.0;  // d(d-1)...(d-k+1)/d^k
    for (int k = 1; k <= n; ++k) {
        binom = binom * (n - k + 1) / k;
        falling_over_dk *= static_cast<double>(d - k + 1) / d;
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        coeffs[static_cast<std::size_t>(k)] = sign * binom * falling_over_dk;
    }
    return coeffs;
}

double polish_greatest_root(const BoundPolynomial& poly, int n) {
    // Newton from lambda = n. The polynomial is positive on (root, n]
    // and negative just below a simple greatest root, so iterates that
    // land below the root hand over a valid bracket immediately.
    double lambda = static_cast<double>(n);
    double above = static_cast<double>(n);  // last iterate with P >= 0
    double below = -1.0;                    // any iterate with P < 0
    for (int iter = 0; iter < 200; ++iter) {
        const double p = poly.eval(lambda);
        if (p < 0.0) {
            below = lambda;
            break;
        }
        above = lambda;
        const double dp = poly.deriv(lambda);
        if (dp <= 0.0) break;
        const double next = lambda - p / dp;
        if (!(next < lambda)) break;
        if (std::abs(next - lambda) < 1e-15 * std::max(1.0, std::abs(lambda))) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    // bracketing bisection polish to 1e-12
    double hi = above;
    double lo = below;
    if (lo < 0.0) {
        double width = 1e-9;
        lo = lambda - width;
        while (poly.eval(lo) > 0.0 && lo > 0.0) {
            width *= 2.0;
            lo = lambda - width;
        }
        lo = std::max(lo, 0.0);
    }
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (poly.eval(mid) > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // keep whichever candidate evaluates closest to zero
    double best = lambda;
    for (const double c : {0.5 * (lo + hi), lo, hi}) {
        if (std::abs(poly.eval(c)) < std::abs(poly.eval(best))) best = c;
    }
    return best;
}

}  // namespace

BoundPolynomial uniform_char_poly(int n, int d) {
    if (n < 2) throw std::invalid_argument("uniform_char_poly: need n >= 2");
    if (d < 1) throw std::invalid_argument("uniform_char_poly: need d >= 1");
    BoundPolynomial poly;
    poly.n = n;
    poly.d = d;
    poly.coeffs = uniform_coeffs(n, d);
    poly.greatest_root = polish_greatest_root(poly, n);
    poly.root_residual = std::abs(poly.eval(poly.greatest_root));
    return poly;
}

double greatest_root_companion(int n, int d) {
    const std::vector<double> coeffs = uniform_coeffs(n, d);
    Matrix companion = Matrix::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int k = 0; k < n; ++k) {
        companion(k, n - 1) = -coeffs[static_cast<std::size_t>(n - k)];
    }
    const Eigen::VectorXcd roots = companion.eigenvalues();
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < roots.size(); ++i) {
        if (std::abs(roots(i).imag()) < 1e-8) best = std::max(best, roots(i).real());
    }
    return best;
}

QracBound nub_bound_info(int n, int d) {
    const BoundPolynomial poly = uniform_char_poly(n, d);
    QracBound bound;
    bound.value = poly.greatest_root / n;
    bound.d_below_n = d < n;
    bound.poly_residual = poly.root_residual;
    return bound;
}

double nub_bound(int n, int d) { return nub_bound_info(n, d).value; }

double nub_bound3_closed_form(int d) {
    const double dd = static_cast<double>(d);
    const Complex radicand(std::pow(dd, 8) - std::pow(dd, 9), 0.0);
    const Complex w = std::pow(dd, 4) + std::sqrt(radicand);
    const Complex t = std::pow(w, 1.0 / 3.0);
    const Complex value = (1.0 + dd / t + t / (dd * dd)) / 3.0;
    return value.real();
}

double maassen_uffink_bound(const Basis& a, const Basis& b, LogBase base) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("maassen_uffink_bound: dimension mismatch");
    }
    const Matrix overlaps = overlap_matrix(a, b);
    const double c = overlaps.cwiseAbs().maxCoeff();
    const double log_c2 = 2.0 * std::log(c);
    const double bound = (base == LogBase::Two) ? -log_c2 / std::log(2.0) : -log_c2;
    return bound + 0.0;  // normalize -0.0
}

bool majorizes(std::span<const double> u, std::span<const double> v, double sum_tol) {
    if (u.size() != v.size()) throw std::invalid_argument("majorizes: unequal lengths");
    std::vector<double> us(u.begin(), u.end());
    std::vector<double> vs(v.begin(), v.end());
    const double su = pairwise_sum(us);
    const double sv = pairwise_sum(vs);
    if (std::abs(su - sv) > sum_tol) {
        throw std::invalid_argument("majorizes: sums differ by " + std::to_string(su - sv));
    }
    std::sort(us.begin(), us.end(), std::greater<>());
    std::sort(vs.begin(), vs.end(), std::greater<>());
    double pu = 0.0;
    double pv = 0.0;
    for (std::size_t i = 0; i < us.size(); ++i) {
        pu += us[i];
        pv += vs[i];
        if (pu < pv - 1e-12) return false;
    }
    return true;
}

AspReport make_asp_report(int n, int d, std::optional<double> quantum, std::string provenance) {
    AspReport report;
    report.n = n;
    report.d = d;
    report.classical = asp_classical(n, d);
    report.quantum = quantum;
    const QracBound bound = nub_bound_info(n, d);
    report.nub_bound = bound.value;
    report.d_below_n = bound.d_below_n;
    report.provenance = std::move(provenance);
    return report;
}

namespace {

bool is_prime_dim(int p) {
    if (p < 2) return false;
    for (int q = 2; q * q <= p; ++q) {
        if (p % q == 0) return false;
    }
    return true;
}

}  // namespace

std::optional<BasisSet> builtin_mub_family(int d) {
    if (d == 2) return qubit_mub_triplet();
    if (d == 4) return two_qubit_mub_set();
    if (is_prime_dim(d)) return make_wh_mub_set(d);
    return std::nullopt;
}

std::optional<double> best_builtin_mub_asp(int n, int d) {
    const std::optional<BasisSet> family = builtin_mub_family(d);
    if (!family || family->n() < n) return std::nullopt;
    double best = -1.0;
    for (const auto& subset : subsets_of_size(family->n(), n)) {
        std::vector<Basis> picked;
        picked.reserve(static_cast<std::size_t>(n));
        for (const int y : subset) picked.push_back(family->basis(y));
        best = std::max(best, asp_quantum(BasisSet(std::move(picked))));
    }
    return best;
}

std::vector<AspTableRow> asp_summary_table() {
    std::vector<AspTableRow> rows;
    for (auto [d, n] : {std::pair{3, 3}, {4, 3}, {4, 4}, {5, 3}, {5, 4}}) {
        AspTableRow row;
        row.d = d;
        row.n = n;
        row.classical = asp_classical(n, d);
        row.mub_asp = best_builtin_mub_asp(n, d);
        // the d=3 triplet class is unique; for d >= 4 inequivalent
        // families can perform differently and only the built-in
        // representative is reported
        row.mub_flagged = d >= 4;
        row.nub_bound = nub_bound(n, d);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace nub
