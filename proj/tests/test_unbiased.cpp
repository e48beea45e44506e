#include <doctest.h>

#include <numeric>
#include <random>

#include "nub/basis.hpp"
#include "nub/qrac.hpp"
#include "nub/unbiased.hpp"

using namespace nub;

namespace {

long factorial(int k) {
    long f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

BasisSet canonical_d3_triplet() {
    const BasisSet wh = make_wh_mub_set(3);
    return BasisSet({wh.basis(0), wh.basis(1), wh.basis(2)});
}

}  // namespace

TEST_SUITE_BEGIN("unbiased");

TEST_CASE("cycle enumeration counts (k-1)! canonical cycles") {
    for (int k = 2; k <= 8; ++k) {
        const auto cycles = k_cycles(k);
        CHECK(static_cast<long>(cycles.size()) == factorial(k - 1));
        // each successor map is a single k-cycle through every position
        for (const auto& successor : cycles) {
            std::vector<bool> visited(static_cast<std::size_t>(k), false);
            int pos = 0;
            for (int step = 0; step < k; ++step) {
                CHECK_FALSE(visited[static_cast<std::size_t>(pos)]);
                visited[static_cast<std::size_t>(pos)] = true;
                pos = successor[static_cast<std::size_t>(pos)];
            }
            CHECK(pos == 0);
        }
    }
    CHECK_THROWS_AS(k_cycles(1), std::invalid_argument);
}

TEST_CASE("cycle_sum on known configurations") {
    SUBCASE("MUB pair gives 1/d for every assignment") {
        for (int d : {2, 3, 5}) {
            const BasisSet pair({make_computational(d), make_fourier(d)});
            const std::vector<int> subset{0, 1};
            std::vector<int> x{0, 0};
            do {
                const Complex v = cycle_sum(pair, subset, x);
                CHECK(std::abs(v - Complex(1.0 / d, 0.0)) <= 1e-12);
            } while (advance_tuple(x, d));
        }
    }

    SUBCASE("qubit triplet gives 1/2 on all 8 tuples") {
        const BasisSet t = qubit_mub_triplet();
        const std::vector<int> subset{0, 1, 2};
        std::vector<int> x{0, 0, 0};
        do {
            const Complex v = cycle_sum(t, subset, x);
            CHECK(std::abs(v - Complex(0.5, 0.0)) <= 1e-12);
        } while (advance_tuple(x, 2));
    }

    SUBCASE("summing over all assignments yields (k-1)! * d") {
        // resolution-of-identity consequence, valid for arbitrary bases
        const BasisSet s = random_basis_set(3, 3, 1234);
        const std::vector<int> subset{0, 1, 2};
        Complex total(0, 0);
        std::vector<int> x{0, 0, 0};
        do {
            total += cycle_sum(s, subset, x);
        } while (advance_tuple(x, 3));
        CHECK(std::abs(total - Complex(2.0 * 3.0, 0.0)) <= 1e-9);
    }

    SUBCASE("argument validation") {
        const BasisSet t = qubit_mub_triplet();
        CHECK_THROWS_AS(cycle_sum(t, std::vector<int>{0}, std::vector<int>{0}),
                        std::invalid_argument);
        CHECK_THROWS_AS(cycle_sum(t, std::vector<int>{0, 5}, std::vector<int>{0, 0}),
                        std::out_of_range);
        CHECK_THROWS_AS(cycle_sum(t, std::vector<int>{0, 1}, std::vector<int>{0, 3}),
                        std::out_of_range);
    }
}

TEST_CASE("cycle-sum totals over all assignments for every subset size") {
    // Sum over x of any fixed-J cycle sum equals (k-1)! * d
    const BasisSet s = random_basis_set(4, 3, 777);
    for (int k = 2; k <= 4; ++k) {
        for (const auto& subset : subsets_of_size(4, k)) {
            Complex total(0, 0);
            std::vector<int> x(static_cast<std::size_t>(k), 0);
            do {
                total += cycle_sum(s, subset, x);
            } while (advance_tuple(x, 3));
            CHECK(std::abs(total - Complex(factorial(k - 1) * 3.0, 0.0)) <= 1e-8);
        }
    }
}

TEST_CASE("mub_check verdicts") {
    CHECK(mub_check(make_computational(5), make_fourier(5)).ok);
    for (int d : {2, 3, 4}) {
        const auto self = mub_check(make_computational(d), make_computational(d));
        CHECK_FALSE(self.ok);
        // self-overlaps are 0 and 1, deviating by 1/sqrt(d) and 1 - 1/sqrt(d)
        const double t = 1.0 / std::sqrt(double(d));
        CHECK(self.max_deviation == doctest::Approx(std::max(t, 1.0 - t)));
    }
    const BasisSet t = qubit_mub_triplet();
    CHECK(mub_check(t.basis(1), t.basis(2)).ok);
    CHECK_THROWS_AS(mub_check(make_computational(2), make_computational(3)),
                    std::invalid_argument);
}

TEST_CASE("kub_check verdicts and reports") {
    SUBCASE("qubit triplet is a 3UB") {
        const KubReport report = kub_check(qubit_mub_triplet(), 3);
        CHECK(report.ok);
        CHECK(report.target == doctest::Approx(0.5));
        CHECK(report.worst.deviation <= 1e-12);
    }

    SUBCASE("canonical d=3 triplet is not a 3UB") {
        const KubReport report = kub_check(canonical_d3_triplet(), 3);
        CHECK_FALSE(report.ok);
        CHECK(report.worst.deviation > 1e-3);
        CHECK(report.target == doctest::Approx(2.0 / 9.0));
        REQUIRE(report.worst.subset.size() == 3);
        REQUIRE(report.worst.assignment.size() == 3);
    }

    SUBCASE("k=2 verdict tracks pairwise mub_check") {
        const BasisSet t = qubit_mub_triplet();
        const KubReport pass = kub_check(t, 2, 1e-10);
        CHECK(pass.ok);
        bool mub_all = true;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) mub_all &= mub_check(t.basis(a), t.basis(b)).ok;
        CHECK(pass.ok == mub_all);

        // perturb one basis: both views must fail, and near the MUB
        // point the two deviation measures differ locally by the factor
        // d(|g|^2 - 1/d) / d(|g| - 1/sqrt(d)) = 2/sqrt(d)
        Matrix bent = make_fourier(3).matrix();
        Vector mix = 0.995 * bent.col(0) + 0.1 * make_computational(3).matrix().col(0);
        bent.col(0) = mix / std::sqrt(mix.dot(mix).real());
        // re-orthonormalize the remaining columns against the bent one
        for (int j = 1; j < 3; ++j) {
            Vector col = bent.col(j);
            for (int prev = 0; prev < j; ++prev) {
                col -= bent.col(prev).dot(col) * bent.col(prev);
            }
            bent.col(j) = col / std::sqrt(col.dot(col).real());
        }
        const BasisSet bent_pair({make_computational(3), Basis::from_matrix(bent)});
        const KubReport fail2 = kub_check(bent_pair, 2, 1e-3);
        const MubReport fail_mub = mub_check(bent_pair.basis(0), bent_pair.basis(1), 1e-3);
        CHECK_FALSE(fail2.ok);
        CHECK_FALSE(fail_mub.ok);
        // the worst pair under one measure is at most the worst under the other
        CHECK(fail2.worst_mub_style > 1e-3);
        CHECK(fail2.worst_mub_style <= fail_mub.max_deviation + 1e-12);
        // on the same pair the measures relate exactly by |g| + 1/sqrt(d)
        const double ratio = fail2.worst.deviation / fail2.worst_mub_style;
        CHECK(ratio == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(0.2));
    }

    SUBCASE("per-subset statistics cover every size-k subset") {
        const BasisSet s = random_basis_set(4, 2, 5);
        const KubReport report = kub_check(s, 3, 1e-10);
        CHECK(report.subsets.size() == 4);  // C(4,3)
        CHECK(report.per_subset_max.size() == 4);
        double overall = 0.0;
        for (const double dev : report.per_subset_max) overall = std::max(overall, dev);
        CHECK(overall == doctest::Approx(report.worst.deviation));
    }

    SUBCASE("k out of range") {
        CHECK_THROWS_AS(kub_check(qubit_mub_triplet(), 1), std::invalid_argument);
        CHECK_THROWS_AS(kub_check(qubit_mub_triplet(), 4), std::invalid_argument);
    }
}

TEST_CASE("3UB at n implies kUB for smaller k on the qubit triplet") {
    const BasisSet t = qubit_mub_triplet();
    REQUIRE(kub_check(t, 3).ok);
    CHECK(kub_check(t, 2).ok);
}

TEST_CASE("char_poly_coeffs") {
    SUBCASE("orthonormal selections give binomial coefficients") {
        // n identical computational bases, x = (0,1,...,n-1): G = I
        for (int n : {2, 3}) {
            const int d = 4;
            std::vector<Basis> bases(static_cast<std::size_t>(n), make_computational(d));
            const CoeffTable table = char_poly_coeffs(BasisSet(bases));
            std::vector<int> x(static_cast<std::size_t>(n));
            std::iota(x.begin(), x.end(), 0);
            const long flat = flatten_tuple(x, d);
            double binom = 1.0;
            for (int k = 1; k <= n; ++k) {
                binom = binom * (n - k + 1) / k;
                const double sign = (k % 2 == 0) ? 1.0 : -1.0;
                CHECK(table.coeff(flat, k) == doctest::Approx(sign * binom).epsilon(1e-12));
            }
        }
    }

    SUBCASE("MUB pair rows") {
        for (int d : {2, 3, 5}) {
            const BasisSet pair({make_computational(d), make_fourier(d)});
            const CoeffTable table = char_poly_coeffs(pair);
            for (const auto& row : table.coeffs) {
                CHECK(row[0] == doctest::Approx(-2.0).epsilon(1e-12));
                CHECK(row[1] == doctest::Approx(1.0 - 1.0 / d).epsilon(1e-12));
            }
        }
    }

    SUBCASE("column sums depend only on (n, d, k)") {
        for (auto [d, n] : {std::pair{3, 3}, {4, 3}, {2, 4}}) {
            const BasisSet s = random_basis_set(n, d, derive_seed(909, d * 10 + n));
            const auto sums = char_poly_coeffs(s).column_sums();
            double binom = 1.0;
            for (int k = 1; k <= n; ++k) {
                binom = binom * (n - k + 1) / k;
                double falling = 1.0;
                for (int i = 0; i < k; ++i) falling *= (d - i);
                const double sign = (k % 2 == 0) ? 1.0 : -1.0;
                const double expected = sign * binom * std::pow(double(d), n - k) * falling;
                CHECK(sums[static_cast<std::size_t>(k - 1)] ==
                      doctest::Approx(expected).epsilon(1e-8));
            }
        }
    }

    SUBCASE("random d=3 triple: sum of c_2 is +54") {
        const BasisSet s = random_basis_set(3, 3, 424242);
        const auto sums = char_poly_coeffs(s).column_sums();
        CHECK(std::abs(sums[1] - 54.0) <= 1e-8);
    }

    SUBCASE("sign pattern of minors") {
        for (auto [d, n] : {std::pair{3, 3}, {2, 4}}) {
            const CoeffTable table = char_poly_coeffs(random_basis_set(n, d, 31));
            for (const auto& row : table.coeffs) {
                for (int k = 1; k <= n; ++k) {
                    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
                    CHECK(sign * row[static_cast<std::size_t>(k - 1)] >= -1e-10);
                }
            }
        }
    }
}

TEST_CASE("reduction identity") {
    SUBCASE("qubit triplet, omit each basis: both sides equal 1") {
        const BasisSet t = qubit_mub_triplet();
        const OverlapCache cache(t);
        const ReductionReport report = reduction_identity_check(t, 2, 1e-12);
        CHECK(report.ok);
        CHECK(report.max_residual <= 1e-12);
        // spot-check the common value: (n-1) * (n-1)!/d^(n-2) with n=3, d=2
        const std::vector<int> rest{0, 1};
        std::vector<int> x{0, 0};
        do {
            Complex lhs(0, 0);
            for (int xo = 0; xo < 2; ++xo) {
                lhs += cycle_sum(t, std::vector<int>{0, 1, 2},
                                 std::vector<int>{x[0], x[1], xo});
            }
            CHECK(std::abs(lhs - Complex(1.0, 0.0)) <= 1e-12);
        } while (advance_tuple(x, 2));
    }

    SUBCASE("random bases, all omitted indices") {
        const BasisSet s = random_basis_set(3, 3, 97);
        for (int omit = 0; omit < 3; ++omit) {
            CHECK(reduction_identity_check(s, omit, 1e-10).ok);
        }
        const BasisSet s2 = random_basis_set(4, 2, 55);
        CHECK(reduction_identity_check(s2, 0, 1e-10).ok);
    }

    SUBCASE("n < 3 rejected") {
        const BasisSet pair({make_computational(2), make_fourier(2)});
        CHECK_THROWS_AS(reduction_identity_check(pair, 0, 1e-10), std::invalid_argument);
    }
}

TEST_CASE("nub_residual") {
    CHECK(nub_residual(qubit_mub_triplet()) <= 1e-20);
    CHECK(nub_residual(canonical_d3_triplet()) > 1e-3);

    SUBCASE("invariant under equivalence transforms") {
        const BasisSet s = random_basis_set(3, 3, 2718);
        const double base = nub_residual(s);
        CHECK(std::abs(nub_residual(apply_equivalence(s, Conjugate{})) - base) <= 1e-12);
        CHECK(std::abs(nub_residual(apply_equivalence(
                  s, OverallUnitary{random_haar_basis(3, 3).matrix()})) - base) <= 1e-12);
        CHECK(std::abs(nub_residual(apply_equivalence(s, SwapBases{0, 2})) - base) <= 1e-12);
        CHECK(std::abs(nub_residual(apply_equivalence(
                  s, ColumnPermutations{{{2, 0, 1}, {0, 1, 2}, {1, 0, 2}}})) - base) <= 1e-12);
    }
}

TEST_CASE("gram_det_check") {
    SUBCASE("d+1 unit vectors in dimension d are linearly dependent") {
        std::mt19937_64 eng(13);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int d : {2, 3, 4}) {
            std::vector<Vector> vectors;
            for (int i = 0; i < d + 1; ++i) {
                Vector v(d);
                for (int j = 0; j < d; ++j) v(j) = Complex(gauss(eng), gauss(eng));
                vectors.push_back(v / std::sqrt(v.dot(v).real()));
            }
            CHECK(std::abs(gram_det_check(vectors)) <= 1e-10);
        }
    }

    SUBCASE("orthonormal vectors give det 1") {
        std::vector<Vector> vectors;
        const Matrix id = Matrix::Identity(4, 4);
        for (int j = 0; j < 3; ++j) vectors.push_back(id.col(j));
        CHECK(gram_det_check(vectors) == doctest::Approx(1.0));
    }

    SUBCASE("two vectors with overlap 1/sqrt(d)") {
        for (int d : {2, 3, 5}) {
            std::vector<Vector> vectors{make_computational(d).matrix().col(0),
                                        make_fourier(d).matrix().col(0)};
            CHECK(gram_det_check(vectors) == doctest::Approx(1.0 - 1.0 / d).epsilon(1e-12));
        }
    }

    CHECK_THROWS_AS(gram_det_check({}), std::invalid_argument);
}

TEST_CASE("enumeration budget guards the tuple scans") {
    set_enumeration_limit(100.0);
    const BasisSet s = random_basis_set(3, 5, 2);  // 125 tuples > 100
    CHECK_THROWS_AS(nub_residual(s), BudgetExceeded);
    CHECK_THROWS_AS(char_poly_coeffs(s), BudgetExceeded);
    CHECK_THROWS_AS(kub_check(s, 3), BudgetExceeded);
    set_enumeration_limit(1e7);
    CHECK(nub_residual(s) >= 0.0);
}

TEST_SUITE_END();
