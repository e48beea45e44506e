#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nub/common.hpp"

namespace nub {

struct ColumnPairResidual {
    int basis = -1;
    int col_a = 0;
    int col_b = 0;
    double residual = 0.0;
};

/// Outcome of validating raw matrix data against the basis invariants.
struct ValidationReport {
    bool ok = false;
    double max_residual = 0.0;
    std::optional<ColumnPairResidual> worst;
    std::string message;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(ValidationReport report)
        : std::runtime_error(report.message), report_(std::move(report)) {}
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

/// An orthonormal basis of C^d. Column j of the matrix is basis vector j.
/// Immutable after construction; construction validates orthonormality.
class Basis {
public:
    static Basis from_matrix(Matrix m, double tol = kOrthoTol);

    int dim() const { return static_cast<int>(mat_.cols()); }
    const Matrix& matrix() const { return mat_; }
    auto column(int j) const { return mat_.col(j); }

    /// max |B^dagger B - I| at construction time.
    double ortho_residual() const { return residual_; }

private:
    Basis(Matrix m, double residual) : mat_(std::move(m)), residual_(residual) {}
    Matrix mat_;
    double residual_;
};

/// An ordered list of n bases sharing one dimension; the measurement
/// side of a QRAC strategy.
class BasisSet {
public:
    explicit BasisSet(std::vector<Basis> bases);
    static BasisSet from_matrices(const std::vector<Matrix>& mats, double tol = kOrthoTol);

    int n() const { return static_cast<int>(bases_.size()); }
    int dim() const { return bases_.front().dim(); }
    const Basis& basis(int y) const { return bases_.at(static_cast<std::size_t>(y)); }
    const std::vector<Basis>& bases() const { return bases_; }

private:
    std::vector<Basis> bases_;
};

/// Validates raw matrices without throwing; the report names the first
/// offending basis and column pair with its Gram residual.
ValidationReport validate_basis_set(const std::vector<Matrix>& mats, double tol = kOrthoTol);

/// Matrix of inner products (a_i | b_j) between two bases.
Matrix overlap_matrix(const Basis& a, const Basis& b);

Basis make_computational(int d);

/// Discrete Fourier basis, entry (j,k) = exp(2*pi*i*j*k/d)/sqrt(d).
Basis make_fourier(int d);

/// The p+1 Weyl-Heisenberg mutually unbiased bases for prime p:
/// the computational basis plus one quadratic-phase basis per a in [p].
BasisSet make_wh_mub_set(int p);

/// The d=2 representative triplet {I, Hadamard, circular}; also a 3UB.
BasisSet qubit_mub_triplet();

/// The five d=4 mutually unbiased bases, built as joint eigenbases of
/// the commuting two-qubit Pauli pairs. No field arithmetic involved.
BasisSet two_qubit_mub_set();

/// Haar-distributed random unitary, deterministic given the seed.
/// Ginibre draw + QR with the R-diagonal phase correction (plain QR
/// without the correction is not Haar).
Basis random_haar_basis(int d, std::uint64_t seed);

/// n independent Haar bases with per-basis seeds derived from `seed`.
BasisSet random_basis_set(int n, int d, std::uint64_t seed);

// --- Equivalence transformations -------------------------------------
// The five basis-set symmetries that preserve every (un)biasedness
// quantity: |overlaps|, kUB verdicts, and the quantum ASP.

struct OverallUnitary {
    Matrix u;
};
struct DiagonalPhases {
    std::vector<Vector> phases;  // phases[i] holds the diagonal of D_i
};
struct ColumnPermutations {
    // perms[i][j] = source column of basis i placed at position j
    std::vector<std::vector<int>> perms;
};
struct SwapBases {
    int a = 0;
    int b = 0;
};
struct Conjugate {};

using EquivalenceTransform =
    std::variant<OverallUnitary, DiagonalPhases, ColumnPermutations, SwapBases, Conjugate>;

BasisSet apply_equivalence(const BasisSet& s, const EquivalenceTransform& t);

}  // namespace nub
