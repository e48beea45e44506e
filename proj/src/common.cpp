#include "nub/common.hpp"

#include <atomic>
#include <cmath>

namespace nub {

namespace {
std::atomic<double> g_enum_limit{1e7};
}

double enumeration_limit() { return g_enum_limit.load(); }

void set_enumeration_limit(double limit) {
    if (!(limit > 0)) {
        throw std::invalid_argument("enumeration limit must be positive");
    }
    g_enum_limit.store(limit);
}

double tuple_count(int d, int n) { return std::pow(static_cast<double>(d), n); }

void check_enumeration_budget(int d, int n, const std::string& operation) {
    const double total = tuple_count(d, n);
    if (total > enumeration_limit()) {
        throw BudgetExceeded(operation + ": d^n = " + std::to_string(total) +
                             " exceeds enumeration budget " +
                             std::to_string(enumeration_limit()) +
                             " (raise via NUB_ENUM_BUDGET)");
    }
}

void PairwiseAccumulator::add(double value) {
    // Binary-counter merge: level i holds a finished block of 2^i addends.
    ++count_;
    for (auto& slot : partials_) {
        if (slot == 0.0 && !std::signbit(slot)) {
            // empty slot sentinel is +0.0; a genuine +0.0 addend merges
            // harmlessly since adding zero is exact
            slot = value;
            return;
        }
        value += slot;
        slot = 0.0;
    }
    partials_.push_back(value);
}

double PairwiseAccumulator::sum() const {
    double total = 0.0;
    for (const double p : partials_) total += p;
    return total;
}

double pairwise_sum(std::span<const double> values) {
    PairwiseAccumulator acc;
    for (const double v : values) acc.add(v);
    return acc.sum();
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 finalizer on a Weyl-stepped state
    std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

bool advance_tuple(std::vector<int>& x, int d) {
    for (int i = static_cast<int>(x.size()) - 1; i >= 0; --i) {
        if (++x[i] < d) return true;
        x[i] = 0;
    }
    return false;
}

long flatten_tuple(std::span<const int> x, int d) {
    long idx = 0;
    for (const int xi : x) idx = idx * d + xi;
    return idx;
}

std::vector<std::vector<int>> subsets_of_size(int n, int k) {
    if (k < 0 || k > n) return {};
    std::vector<std::vector<int>> out;
    std::vector<int> current(k);
    for (int i = 0; i < k; ++i) current[i] = i;
    while (true) {
        out.push_back(current);
        int i = k - 1;
        while (i >= 0 && current[i] == n - k + i) --i;
        if (i < 0) break;
        ++current[i];
        for (int j = i + 1; j < k; ++j) current[j] = current[j - 1] + 1;
    }
    return out;
}

}  // namespace nub
