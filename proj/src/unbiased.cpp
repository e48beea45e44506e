#include "nub/unbiased.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nub {

std::vector<std::vector<int>> k_cycles(int k) {
    if (k < 2) throw std::invalid_argument("k_cycles: cycles need k >= 2");
    std::vector<int> rest(static_cast<std::size_t>(k) - 1);
    std::iota(rest.begin(), rest.end(), 1);
    std::vector<std::vector<int>> cycles;
    do {
        std::vector<int> successor(static_cast<std::size_t>(k));
        int prev = 0;
        for (const int r : rest) {
            successor[static_cast<std::size_t>(prev)] = r;
            prev = r;
        }
        successor[static_cast<std::size_t>(prev)] = 0;
        cycles.push_back(std::move(successor));
    } while (std::next_permutation(rest.begin(), rest.end()));
    return cycles;
}

OverlapCache::OverlapCache(const BasisSet& s) : n_(s.n()), d_(s.dim()) {
    tables_.reserve(static_cast<std::size_t>(n_) * n_);
    for (int y = 0; y < n_; ++y) {
        for (int z = 0; z < n_; ++z) {
            tables_.push_back(overlap_matrix(s.basis(y), s.basis(z)));
        }
    }
}

namespace {

Complex cycle_sum_impl(const OverlapCache& cache, std::span<const int> subset,
                       std::span<const int> assignment,
                       const std::vector<std::vector<int>>& cycles) {
    const int k = static_cast<int>(subset.size());
    Complex total(0.0, 0.0);
    for (const auto& successor : cycles) {
        Complex product(1.0, 0.0);
        for (int pos = 0; pos < k; ++pos) {
            const int next = successor[static_cast<std::size_t>(pos)];
            product *= cache.overlap(subset[static_cast<std::size_t>(pos)],
                                     assignment[static_cast<std::size_t>(pos)],
                                     subset[static_cast<std::size_t>(next)],
                                     assignment[static_cast<std::size_t>(next)]);
        }
        total += product;
    }
    return total;
}

void validate_subset(const OverlapCache& cache, std::span<const int> subset,
                     std::span<const int> assignment) {
    if (subset.size() < 2) {
        throw std::invalid_argument("cycle_sum: subset must contain at least 2 bases");
    }
    if (assignment.size() != subset.size()) {
        throw std::invalid_argument("cycle_sum: one index per subset member required");
    }
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (subset[i] < 0 || subset[i] >= cache.n()) {
            throw std::out_of_range("cycle_sum: basis index out of range");
        }
        if (assignment[i] < 0 || assignment[i] >= cache.dim()) {
            throw std::out_of_range("cycle_sum: vector index out of range");
        }
    }
}

double target_uniform_value(int k, int d) {
    double value = 1.0;
    for (int i = 2; i < k; ++i) value *= i;  // (k-1)!
    return value / std::pow(static_cast<double>(d), k - 1);
}

}  // namespace

Complex cycle_sum(const OverlapCache& cache, std::span<const int> subset,
                  std::span<const int> assignment) {
    validate_subset(cache, subset, assignment);
    return cycle_sum_impl(cache, subset, assignment, k_cycles(static_cast<int>(subset.size())));
}

Complex cycle_sum(const BasisSet& s, std::span<const int> subset,
                  std::span<const int> assignment) {
    return cycle_sum(OverlapCache(s), subset, assignment);
}

MubReport mub_check(const Basis& a, const Basis& b, double tol) {
    if (a.dim() != b.dim()) throw std::invalid_argument("mub_check: dimension mismatch");
    const Matrix overlaps = overlap_matrix(a, b);
    const double target = 1.0 / std::sqrt(static_cast<double>(a.dim()));
    MubReport report;
    for (int i = 0; i < a.dim(); ++i) {
        for (int j = 0; j < b.dim(); ++j) {
            const double dev = std::abs(std::abs(overlaps(i, j)) - target);
            if (dev > report.max_deviation) {
                report.max_deviation = dev;
                report.worst_row = i;
                report.worst_col = j;
            }
        }
    }
    report.ok = report.max_deviation <= tol;
    return report;
}

KubReport kub_check(const BasisSet& s, int k, double tol) {
    if (k < 2 || k > s.n()) {
        throw std::invalid_argument("kub_check: k must satisfy 2 <= k <= n");
    }
    check_enumeration_budget(s.dim(), k, "kub_check");
    const OverlapCache cache(s);
    const auto cycles = k_cycles(k);
    KubReport report;
    report.k = k;
    report.tol = tol;
    report.target = target_uniform_value(k, s.dim());
    report.subsets = subsets_of_size(s.n(), k);
    report.per_subset_max.assign(report.subsets.size(), 0.0);

    const double mub_target = 1.0 / std::sqrt(static_cast<double>(s.dim()));
    bool first = true;
    for (std::size_t si = 0; si < report.subsets.size(); ++si) {
        const auto& subset = report.subsets[si];
        std::vector<int> assignment(static_cast<std::size_t>(k), 0);
        do {
            const Complex value = cycle_sum_impl(cache, subset, assignment, cycles);
            const double dev = std::abs(value - Complex(report.target, 0.0));
            if (dev > report.per_subset_max[si]) report.per_subset_max[si] = dev;
            if (first || dev > report.worst.deviation) {
                first = false;
                report.worst.deviation = dev;
                report.worst.subset = subset;
                report.worst.assignment = assignment;
                if (k == 2) {
                    const Complex g = cache.overlap(subset[0], assignment[0], subset[1],
                                                    assignment[1]);
                    report.worst_mub_style = std::abs(std::abs(g) - mub_target);
                }
            }
        } while (advance_tuple(assignment, s.dim()));
    }
    report.ok = report.worst.deviation <= tol;
    return report;
}

std::vector<double> CoeffTable::column_sums() const {
    std::vector<PairwiseAccumulator> acc(static_cast<std::size_t>(n));
    for (const auto& row : coeffs) {
        for (int k = 0; k < n; ++k) acc[static_cast<std::size_t>(k)].add(row[static_cast<std::size_t>(k)]);
    }
    std::vector<double> sums(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) sums[static_cast<std::size_t>(k)] = acc[static_cast<std::size_t>(k)].sum();
    return sums;
}

CoeffTable char_poly_coeffs(const BasisSet& s) {
    const int n = s.n();
    const int d = s.dim();
    check_enumeration_budget(d, n, "char_poly_coeffs");
    const OverlapCache cache(s);

    std::vector<std::vector<std::vector<int>>> subsets_by_k(static_cast<std::size_t>(n) + 1);
    for (int k = 1; k <= n; ++k) subsets_by_k[static_cast<std::size_t>(k)] = subsets_of_size(n, k);

    CoeffTable table;
    table.n = n;
    table.d = d;
    table.coeffs.reserve(static_cast<std::size_t>(tuple_count(d, n)));

    Matrix gram(n, n);
    std::vector<int> x(static_cast<std::size_t>(n), 0);
    do {
        for (int y = 0; y < n; ++y) {
            for (int z = 0; z < n; ++z) {
                gram(y, z) = cache.overlap(y, x[static_cast<std::size_t>(y)], z,
                                           x[static_cast<std::size_t>(z)]);
            }
        }
        const double herm_res = (gram - gram.adjoint()).cwiseAbs().maxCoeff();
        if (herm_res > 1e-10) {
            throw std::runtime_error("char_poly_coeffs: Gram matrix not Hermitian, residual " +
                                     std::to_string(herm_res));
        }
        std::vector<double> row(static_cast<std::size_t>(n), 0.0);
        for (int k = 1; k <= n; ++k) {
            PairwiseAccumulator minor_sum;
            for (const auto& subset : subsets_by_k[static_cast<std::size_t>(k)]) {
                Matrix sub(k, k);
                for (int a = 0; a < k; ++a) {
                    for (int b = 0; b < k; ++b) {
                        sub(a, b) = gram(subset[static_cast<std::size_t>(a)],
                                         subset[static_cast<std::size_t>(b)]);
                    }
                }
                const Complex det = sub.determinant();
                if (std::abs(det.imag()) > 1e-10) {
                    throw std::runtime_error(
                        "char_poly_coeffs: principal minor has imaginary part " +
                        std::to_string(det.imag()));
                }
                minor_sum.add(det.real());
            }
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            row[static_cast<std::size_t>(k - 1)] = sign * minor_sum.sum();
        }
        table.coeffs.push_back(std::move(row));
    } while (advance_tuple(x, d));
    return table;
}

ReductionReport reduction_identity_check(const BasisSet& s, int omitted, double tol) {
    const int n = s.n();
    if (n < 3) throw std::invalid_argument("reduction_identity_check: needs n >= 3");
    if (omitted < 0 || omitted >= n) {
        throw std::out_of_range("reduction_identity_check: omitted index out of range");
    }
    check_enumeration_budget(s.dim(), n, "reduction_identity_check");
    const OverlapCache cache(s);
    const auto full_cycles = k_cycles(n);
    const auto reduced_cycles = k_cycles(n - 1);

    std::vector<int> full_subset(static_cast<std::size_t>(n));
    std::iota(full_subset.begin(), full_subset.end(), 0);
    std::vector<int> rest_subset;
    for (int y = 0; y < n; ++y) {
        if (y != omitted) rest_subset.push_back(y);
    }

    ReductionReport report;
    std::vector<int> rest_assignment(static_cast<std::size_t>(n) - 1, 0);
    std::vector<int> full_assignment(static_cast<std::size_t>(n), 0);
    do {
        for (std::size_t i = 0; i < rest_subset.size(); ++i) {
            full_assignment[static_cast<std::size_t>(rest_subset[i])] = rest_assignment[i];
        }
        Complex lhs(0.0, 0.0);
        for (int xo = 0; xo < s.dim(); ++xo) {
            full_assignment[static_cast<std::size_t>(omitted)] = xo;
            lhs += cycle_sum_impl(cache, full_subset, full_assignment, full_cycles);
        }
        const Complex rhs = static_cast<double>(n - 1) *
                            cycle_sum_impl(cache, rest_subset, rest_assignment, reduced_cycles);
        report.max_residual = std::max(report.max_residual, std::abs(lhs - rhs));
    } while (advance_tuple(rest_assignment, s.dim()));
    report.ok = report.max_residual <= tol;
    return report;
}

double nub_residual(const BasisSet& s) {
    const int n = s.n();
    const int d = s.dim();
    if (n < 2) throw std::invalid_argument("nub_residual: needs n >= 2");
    check_enumeration_budget(d, n, "nub_residual");
    const OverlapCache cache(s);
    const auto cycles = k_cycles(n);
    std::vector<int> subset(static_cast<std::size_t>(n));
    std::iota(subset.begin(), subset.end(), 0);
    const Complex target(target_uniform_value(n, d), 0.0);

    PairwiseAccumulator acc;
    std::vector<int> x(static_cast<std::size_t>(n), 0);
    do {
        const Complex value = cycle_sum_impl(cache, subset, x, cycles);
        acc.add(std::norm(value - target));
    } while (advance_tuple(x, d));
    return acc.sum();
}

double gram_det_check(const std::vector<Vector>& vectors) {
    if (vectors.empty()) throw std::invalid_argument("gram_det_check: needs at least one vector");
    const auto m = static_cast<int>(vectors.size());
    const auto dim = vectors.front().size();
    for (const Vector& v : vectors) {
        if (v.size() != dim) throw std::invalid_argument("gram_det_check: unequal vector dimensions");
    }
    Matrix gram(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            gram(i, j) = vectors[static_cast<std::size_t>(i)].dot(vectors[static_cast<std::size_t>(j)]);
        }
    }
    return gram.determinant().real();
}

}  // namespace nub
