#include "nub/basis.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace nub {

namespace {

bool is_prime(int p) {
    if (p < 2) return false;
    for (int q = 2; q * q <= p; ++q) {
        if (p % q == 0) return false;
    }
    return true;
}

Complex unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

ValidationReport check_one(const Matrix& m, int basis_index, double tol) {
    ValidationReport report;
    if (m.rows() != m.cols() || m.rows() == 0) {
        std::ostringstream oss;
        oss << "basis " << basis_index << ": matrix is " << m.rows() << "x" << m.cols()
            << ", expected square and non-empty";
        report.message = oss.str();
        return report;
    }
    if (!m.allFinite()) {
        std::ostringstream oss;
        oss << "basis " << basis_index << ": non-finite entry";
        report.message = oss.str();
        return report;
    }
    const Matrix gram = m.adjoint() * m;
    const int d = static_cast<int>(m.cols());
    ColumnPairResidual worst;
    worst.basis = basis_index;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const double target = (i == j) ? 1.0 : 0.0;
            const double res = std::abs(gram(i, j) - Complex(target, 0.0));
            if (res > worst.residual) {
                worst.residual = res;
                worst.col_a = i;
                worst.col_b = j;
            }
        }
    }
    report.max_residual = worst.residual;
    report.worst = worst;
    if (worst.residual > tol) {
        std::ostringstream oss;
        oss << "basis " << basis_index << ": columns (" << worst.col_a << "," << worst.col_b
            << ") violate orthonormality, residual " << worst.residual << " > tol " << tol;
        report.message = oss.str();
        return report;
    }
    report.ok = true;
    report.message = "ok";
    return report;
}

}  // namespace

Basis Basis::from_matrix(Matrix m, double tol) {
    ValidationReport report = check_one(m, 0, tol);
    if (!report.ok) throw ValidationError(std::move(report));
    return Basis(std::move(m), report.max_residual);
}

BasisSet::BasisSet(std::vector<Basis> bases) : bases_(std::move(bases)) {
    if (bases_.empty()) {
        throw std::invalid_argument("BasisSet: needs at least one basis");
    }
    const int d = bases_.front().dim();
    for (const Basis& b : bases_) {
        if (b.dim() != d) {
            throw std::invalid_argument("BasisSet: bases have unequal dimensions");
        }
    }
}

BasisSet BasisSet::from_matrices(const std::vector<Matrix>& mats, double tol) {
    ValidationReport report = validate_basis_set(mats, tol);
    if (!report.ok) throw ValidationError(std::move(report));
    std::vector<Basis> bases;
    bases.reserve(mats.size());
    for (const Matrix& m : mats) bases.push_back(Basis::from_matrix(m, tol));
    return BasisSet(std::move(bases));
}

ValidationReport validate_basis_set(const std::vector<Matrix>& mats, double tol) {
    ValidationReport report;
    if (mats.empty()) {
        report.message = "basis set is empty";
        return report;
    }
    const auto d = mats.front().rows();
    for (std::size_t y = 0; y < mats.size(); ++y) {
        if (mats[y].rows() != d || mats[y].cols() != d) {
            std::ostringstream oss;
            oss << "basis " << y << ": dimension " << mats[y].rows() << "x" << mats[y].cols()
                << " differs from basis 0 (" << d << "x" << d << ")";
            report.message = oss.str();
            return report;
        }
        ValidationReport one = check_one(mats[y], static_cast<int>(y), tol);
        if (one.worst) {
            one.worst->basis = static_cast<int>(y);
            if (one.max_residual > report.max_residual) {
                report.max_residual = one.max_residual;
                report.worst = one.worst;
            }
        }
        if (!one.ok) {
            report.message = one.message;
            return report;
        }
    }
    report.ok = true;
    report.message = "ok";
    return report;
}

Matrix overlap_matrix(const Basis& a, const Basis& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("overlap_matrix: dimension mismatch");
    }
    return a.matrix().adjoint() * b.matrix();
}

Basis make_computational(int d) {
    if (d < 1) throw std::invalid_argument("make_computational: dimension must be >= 1");
    return Basis::from_matrix(Matrix::Identity(d, d));
}

Basis make_fourier(int d) {
    if (d < 1) throw std::invalid_argument("make_fourier: dimension must be >= 1");
    Matrix m(d, d);
    const double step = 2.0 * std::numbers::pi / d;
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            m(j, k) = norm * unit_phase(step * ((static_cast<long>(j) * k) % d));
        }
    }
    return Basis::from_matrix(std::move(m));
}

BasisSet make_wh_mub_set(int p) {
    if (!is_prime(p)) {
        throw std::invalid_argument("make_wh_mub_set: dimension " + std::to_string(p) +
                                    " is not prime; supply such sets as files instead");
    }
    std::vector<Basis> bases;
    bases.reserve(static_cast<std::size_t>(p) + 1);
    bases.push_back(make_computational(p));
    const double norm = 1.0 / std::sqrt(static_cast<double>(p));
    for (int a = 0; a < p; ++a) {
        Matrix m(p, p);
        for (int b = 0; b < p; ++b) {
            for (int k = 0; k < p; ++k) {
                double angle;
                if (p == 2) {
                    // the quadratic phase needs a quarter turn at p=2,
                    // otherwise the a=1 basis is a column permutation of a=0
                    angle = std::numbers::pi * (0.5 * a * k * k + b * k);
                } else {
                    const long exponent =
                        (static_cast<long>(a) * k * k + static_cast<long>(b) * k) % p;
                    angle = 2.0 * std::numbers::pi * exponent / p;
                }
                m(k, b) = norm * unit_phase(angle);
            }
        }
        bases.push_back(Basis::from_matrix(std::move(m)));
    }
    return BasisSet(std::move(bases));
}

BasisSet qubit_mub_triplet() {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix hadamard(2, 2);
    hadamard << Complex(s, 0), Complex(s, 0), Complex(s, 0), Complex(-s, 0);
    Matrix circular(2, 2);
    circular << Complex(s, 0), Complex(s, 0), Complex(0, s), Complex(0, -s);
    std::vector<Basis> bases;
    bases.push_back(make_computational(2));
    bases.push_back(Basis::from_matrix(std::move(hadamard)));
    bases.push_back(Basis::from_matrix(std::move(circular)));
    return BasisSet(std::move(bases));
}

BasisSet two_qubit_mub_set() {
    Matrix id = Matrix::Identity(2, 2);
    Matrix sx(2, 2), sy(2, 2), sz(2, 2);
    sx << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
    sy << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    sz << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(-1, 0);
    auto kron = [](const Matrix& a, const Matrix& b) {
        Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j)
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    };
    // Generator pairs of the five maximal commuting Pauli classes; the
    // joint eigenbases of the classes are pairwise unbiased.
    const std::vector<std::pair<Matrix, Matrix>> classes = {
        {kron(sz, id), kron(id, sz)}, {kron(sx, id), kron(id, sx)},
        {kron(sy, id), kron(id, sy)}, {kron(sx, sz), kron(sz, sy)},
        {kron(sx, sy), kron(sy, sz)},
    };
    std::vector<Basis> bases;
    bases.reserve(classes.size());
    for (const auto& [p, q] : classes) {
        // P + 2Q has the four distinct eigenvalues {-3,-1,1,3}, so its
        // eigenbasis is the class's joint eigenbasis
        Matrix h = p + 2.0 * q;
        Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
        bases.push_back(Basis::from_matrix(solver.eigenvectors()));
    }
    return BasisSet(std::move(bases));
}

Basis random_haar_basis(int d, std::uint64_t seed) {
    if (d < 1) throw std::invalid_argument("random_haar_basis: dimension must be >= 1");
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix ginibre(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const double re = gauss(engine);
            const double im = gauss(engine);
            ginibre(i, j) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<Matrix> qr(ginibre);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // push the R diagonal phases into Q so R has positive diagonal;
    // without this the QR output is not Haar-distributed
    for (int j = 0; j < d; ++j) {
        const Complex rjj = r(j, j);
        const double mag = std::abs(rjj);
        const Complex phase = (mag > 0.0) ? rjj / mag : Complex(1.0, 0.0);
        q.col(j) *= phase;
    }
    return Basis::from_matrix(std::move(q));
}

BasisSet random_basis_set(int n, int d, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("random_basis_set: need n >= 1");
    std::vector<Basis> bases;
    bases.reserve(static_cast<std::size_t>(n));
    for (int y = 0; y < n; ++y) {
        bases.push_back(random_haar_basis(d, derive_seed(seed, static_cast<std::uint64_t>(y))));
    }
    return BasisSet(std::move(bases));
}

namespace {

void require_unitary(const Matrix& u, const char* what) {
    const double res = (u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
    if (res > kOrthoTol) {
        throw std::invalid_argument(std::string(what) + ": payload is not unitary (residual " +
                                    std::to_string(res) + ")");
    }
}

struct TransformVisitor {
    const BasisSet& s;

    BasisSet operator()(const OverallUnitary& t) const {
        if (t.u.rows() != s.dim() || t.u.cols() != s.dim()) {
            throw std::invalid_argument("apply_equivalence: unitary dimension mismatch");
        }
        require_unitary(t.u, "apply_equivalence");
        std::vector<Basis> out;
        out.reserve(static_cast<std::size_t>(s.n()));
        for (const Basis& b : s.bases()) out.push_back(Basis::from_matrix(t.u * b.matrix()));
        return BasisSet(std::move(out));
    }

    BasisSet operator()(const DiagonalPhases& t) const {
        if (static_cast<int>(t.phases.size()) != s.n()) {
            throw std::invalid_argument("apply_equivalence: need one phase vector per basis");
        }
        std::vector<Basis> out;
        out.reserve(static_cast<std::size_t>(s.n()));
        for (int y = 0; y < s.n(); ++y) {
            const Vector& ph = t.phases[static_cast<std::size_t>(y)];
            if (ph.size() != s.dim()) {
                throw std::invalid_argument("apply_equivalence: phase vector dimension mismatch");
            }
            for (int j = 0; j < ph.size(); ++j) {
                if (std::abs(std::abs(ph(j)) - 1.0) > kOrthoTol) {
                    throw std::invalid_argument(
                        "apply_equivalence: phase entries must have unit modulus");
                }
            }
            Matrix m = s.basis(y).matrix() * ph.asDiagonal();
            out.push_back(Basis::from_matrix(std::move(m)));
        }
        return BasisSet(std::move(out));
    }

    BasisSet operator()(const ColumnPermutations& t) const {
        if (static_cast<int>(t.perms.size()) != s.n()) {
            throw std::invalid_argument("apply_equivalence: need one permutation per basis");
        }
        std::vector<Basis> out;
        out.reserve(static_cast<std::size_t>(s.n()));
        for (int y = 0; y < s.n(); ++y) {
            const auto& perm = t.perms[static_cast<std::size_t>(y)];
            if (static_cast<int>(perm.size()) != s.dim()) {
                throw std::invalid_argument("apply_equivalence: permutation length mismatch");
            }
            std::vector<bool> seen(perm.size(), false);
            for (const int p : perm) {
                if (p < 0 || p >= s.dim() || seen[static_cast<std::size_t>(p)]) {
                    throw std::invalid_argument("apply_equivalence: not a permutation");
                }
                seen[static_cast<std::size_t>(p)] = true;
            }
            Matrix m(s.dim(), s.dim());
            for (int j = 0; j < s.dim(); ++j) m.col(j) = s.basis(y).matrix().col(perm[static_cast<std::size_t>(j)]);
            out.push_back(Basis::from_matrix(std::move(m)));
        }
        return BasisSet(std::move(out));
    }

    BasisSet operator()(const SwapBases& t) const {
        if (t.a < 0 || t.a >= s.n() || t.b < 0 || t.b >= s.n()) {
            throw std::invalid_argument("apply_equivalence: swap index out of range");
        }
        std::vector<Basis> out = s.bases();
        std::swap(out[static_cast<std::size_t>(t.a)], out[static_cast<std::size_t>(t.b)]);
        return BasisSet(std::move(out));
    }

    BasisSet operator()(const Conjugate&) const {
        std::vector<Basis> out;
        out.reserve(static_cast<std::size_t>(s.n()));
        for (const Basis& b : s.bases()) out.push_back(Basis::from_matrix(b.matrix().conjugate()));
        return BasisSet(std::move(out));
    }
};

}  // namespace

BasisSet apply_equivalence(const BasisSet& s, const EquivalenceTransform& t) {
    return std::visit(TransformVisitor{s}, t);
}

}  // namespace nub
