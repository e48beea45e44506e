#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nub {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Default tolerance for orthonormality checks. Double-precision
/// constructions land around 1e-15, so this leaves headroom.
inline constexpr double kOrthoTol = 1e-10;

/// Thrown when an operation would iterate more index tuples than the
/// enumeration budget allows.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Current limit on d^n enumeration loops (default 1e7).
double enumeration_limit();

/// Override the enumeration limit. The CLI wires this to the
/// NUB_ENUM_BUDGET environment variable.
void set_enumeration_limit(double limit);

/// Number of tuples in [d]^n as a double (exact for desk-scale inputs).
double tuple_count(int d, int n);

/// Throws BudgetExceeded if d^n exceeds the enumeration limit.
void check_enumeration_budget(int d, int n, const std::string& operation);

/// Streaming pairwise (binary-counter) summation. Deterministic
/// reduction order independent of chunking, O(log N) state.
class PairwiseAccumulator {
public:
    void add(double value);
    double sum() const;
    long count() const { return count_; }

private:
    std::vector<double> partials_;
    long count_ = 0;
};

double pairwise_sum(std::span<const double> values);

/// Deterministic per-stream seed derivation (splitmix64 on master ^ index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Odometer increment over [d]^n with x[0] the most significant digit.
/// Returns false once the tuple wraps back to all zeros.
bool advance_tuple(std::vector<int>& x, int d);

/// Flat index of a tuple under the advance_tuple ordering.
long flatten_tuple(std::span<const int> x, int d);

/// All size-k subsets of {0,...,n-1} in lexicographic order.
std::vector<std::vector<int>> subsets_of_size(int n, int k);

}  // namespace nub
