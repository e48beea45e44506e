#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nub/basis.hpp"
#include "nub/common.hpp"

namespace nub {

/// Exact fraction with reduced representation. Covers desk-scale QRAC
/// counting (denominators up to n * d^n).
class Rational {
public:
    Rational() = default;
    Rational(long long num, long long den);

    long long num() const { return num_; }
    long long den() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const;  // "p/q"

    friend bool operator==(const Rational&, const Rational&) = default;

private:
    long long num_ = 0;
    long long den_ = 1;
};

/// Gram matrix and top eigenvalue of the effective operator for one
/// input tuple. The d x d operator sum_y |y_{x_y}><y_{x_y}| shares its
/// nonzero spectrum with the n x n Gram matrix, so the small matrix is
/// what gets solved.
struct EffectiveOperator {
    std::vector<int> x;
    Matrix gram;
    double lambda_max = 0.0;
};

EffectiveOperator effective_operator(const BasisSet& s, std::span<const int> x);

/// The d x d operator route: sum of projectors onto the selected
/// columns. Used for encoder states and as the independent spectrum
/// route in tests.
Matrix effective_operator_matrix(const BasisSet& s, std::span<const int> x);

/// Optimal encoding state for input x: top eigenvector of the d x d
/// effective operator.
Vector optimal_encoding(const BasisSet& s, std::span<const int> x);

/// Average success probability of the optimal-encoding strategy for
/// the given measurement bases: mean of lambda_max over all tuples / n.
double asp_quantum(const BasisSet& s);

/// Classical optimum for uniform inputs (plurality strategy): the
/// expected plurality fraction E[max_b #{y : x_y = b}] / n, exact.
Rational asp_classical(int n, int d);

/// Brute force over all deterministic encodings with the induced
/// optimal decoder. Oracle for asp_classical; practical for n*d <= 9.
Rational classical_brute_force(int n, int d);

/// Monic polynomial whose coefficients are the x-uniform values of the
/// characteristic-polynomial coefficients:
///   a_k = (-1)^k C(n,k) d(d-1)...(d-k+1) / d^k.
struct BoundPolynomial {
    int n = 0;
    int d = 0;
    std::vector<double> coeffs;  // coeffs[k] = a_k with a_0 = 1
    double greatest_root = 0.0;
    double root_residual = 0.0;  // |P(greatest_root)|

    double eval(double lambda) const;
    double deriv(double lambda) const;
};

BoundPolynomial uniform_char_poly(int n, int d);

/// Greatest real root via companion-matrix eigenvalues. Independent of
/// the Newton/bisection route inside uniform_char_poly; used as a
/// cross-check.
double greatest_root_companion(int n, int d);

struct QracBound {
    double value = 0.0;
    bool d_below_n = false;  // optimality of the bound is only claimed for d >= n
    double poly_residual = 0.0;
};

/// Upper bound on the n^d -> 1 QRAC ASP: greatest root of the uniform
/// characteristic polynomial, divided by n.
QracBound nub_bound_info(int n, int d);
double nub_bound(int n, int d);

/// n=3 bound in closed form, evaluated with complex intermediates
/// (the cube-root argument is negative under the radical for d > 1).
double nub_bound3_closed_form(int d);

enum class LogBase { Two, Natural };

/// Entropic uncertainty bound -log c with c = max |<a_i|b_j>|^2.
double maassen_uffink_bound(const Basis& a, const Basis& b, LogBase base = LogBase::Two);

/// Sorted-descending prefix-sum dominance. Requires equal sums within
/// sum_tol.
bool majorizes(std::span<const double> u, std::span<const double> v, double sum_tol = 1e-9);

/// Summary row combining the classical value, an optional quantum ASP,
/// and the nUB bound for one (n, d).
struct AspReport {
    int n = 0;
    int d = 0;
    Rational classical;
    std::optional<double> quantum;
    double nub_bound = 0.0;
    bool d_below_n = false;
    double tol = kOrthoTol;
    std::optional<std::uint64_t> seed;
    std::string provenance;
};

AspReport make_asp_report(int n, int d, std::optional<double> quantum = std::nullopt,
                          std::string provenance = {});

/// Built-in MUB family for dimension d, when one exists: the qubit
/// triplet (d=2), Weyl-Heisenberg sets (prime d), or the two-qubit set
/// (d=4). Returns nothing for other dimensions; those arrive as files.
std::optional<BasisSet> builtin_mub_family(int d);

/// Best quantum ASP over all size-n subsets of the built-in MUB family.
/// For d >= 4 the value depends on the chosen equivalence class, so
/// callers should flag it.
std::optional<double> best_builtin_mub_asp(int n, int d);

struct AspTableRow {
    int d = 0;
    int n = 0;
    Rational classical;
    std::optional<double> mub_asp;
    bool mub_flagged = false;  // representative-dependent value
    double nub_bound = 0.0;
};

/// The five summary rows (d,n) = (3,3),(4,3),(4,4),(5,3),(5,4).
std::vector<AspTableRow> asp_summary_table();

}  // namespace nub
