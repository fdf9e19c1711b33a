// Copyright 2026 The qsbc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense complex linear algebra: Kronecker products, Hermitian spectra, SVD,
// polar decomposition, and the distance measures between density operators.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "qsbc/error.hpp"
#include "qsbc/rng.hpp"

namespace qsbc::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Tolerance ladder shared by every module.
namespace tol {
inline constexpr double kInput = 1e-12;        // Hermiticity of inputs
inline constexpr double kResidual = 1e-9;      // decomposition residuals
inline constexpr double kReconstruct = 1e-8;   // reconstruction of inputs
inline constexpr double kEigenClamp = 1e-10;   // negative eigenvalues clamped to zero
inline constexpr double kTrace = 1e-10;        // unit trace / unit norm
}  // namespace tol

inline double max_abs(const ComplexMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix &m, double tolerance = tol::kInput) {
    return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tolerance;
}

inline void require_hermitian(const ComplexMatrix &m, const char *where) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorKind::NotHermitian, std::string(where) + ": matrix is not square");
    }
    const double asym = max_abs(m - m.adjoint());
    if (asym > tol::kInput) {
        throw Error(ErrorKind::NotHermitian, std::string(where) + ": conjugate asymmetry " + std::to_string(asym));
    }
}

/// Validating constructor for Hermitian matrices. The stored value is the
/// exact Hermitian part so later decompositions see a symmetric input.
inline ComplexMatrix hermitian(const ComplexMatrix &m) {
    require_hermitian(m, "hermitian");
    return 0.5 * (m + m.adjoint());
}

inline double unitarity_residual(const ComplexMatrix &u) {
    if (u.rows() != u.cols()) {
        return INFINITY;
    }
    return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
}

/// Kronecker product; entry (i*b.rows()+k, j*b.cols()+l) is a(i,j)*b(k,l).
inline ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline ComplexVector tensor(const ComplexVector &a, const ComplexVector &b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

inline ComplexMatrix tensor_power(const ComplexMatrix &a, std::size_t k) {
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (std::size_t i = 0; i < k; ++i) {
        out = tensor(out, a);
    }
    return out;
}

struct SpectralDecomposition {
    RealVector eigenvalues;     // descending
    ComplexMatrix eigenvectors; // columns

    ComplexMatrix reconstruct() const {
        return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
    }
};

inline SpectralDecomposition eigh(const ComplexMatrix &h) {
    require_hermitian(h, "eigh");
    const ComplexMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    const Eigen::Index d = sym.rows();
    SpectralDecomposition out{RealVector(d), ComplexMatrix(d, d)};
    for (Eigen::Index k = 0; k < d; ++k) {
        out.eigenvalues(k) = solver.eigenvalues()(d - 1 - k);
        out.eigenvectors.col(k) = solver.eigenvectors().col(d - 1 - k);
    }
    return out;
}

inline double trace_norm(const ComplexMatrix &a) {
    require_hermitian(a, "trace_norm");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
}

inline ComplexMatrix sqrt_psd(const ComplexMatrix &p) {
    const SpectralDecomposition spec = eigh(p);
    RealVector roots(spec.eigenvalues.size());
    for (Eigen::Index k = 0; k < roots.size(); ++k) {
        const double lambda = spec.eigenvalues(k);
        if (lambda < -tol::kEigenClamp) {
            throw Error(ErrorKind::NotPSD, "sqrt_psd: eigenvalue " + std::to_string(lambda));
        }
        roots(k) = std::sqrt(std::max(lambda, 0.0));
    }
    return spec.eigenvectors * roots.cast<Complex>().asDiagonal() * spec.eigenvectors.adjoint();
}

/// a = u * diag(d) * v with u, v unitary (v is the conjugate transpose of the
/// usual right singular vectors, so rows of v are the right vectors).
struct Svd {
    ComplexMatrix u;  // rows x rows
    RealVector d;     // min(rows, cols), descending
    ComplexMatrix v;  // cols x cols

    ComplexMatrix reconstruct() const {
        const Eigen::Index k = d.size();
        return u.leftCols(k) * d.cast<Complex>().asDiagonal() * v.topRows(k);
    }
};

inline Svd svd(const ComplexMatrix &a) {
    Svd out;
    if (std::min(a.rows(), a.cols()) <= 64) {
        Eigen::JacobiSVD<ComplexMatrix> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
        out.u = solver.matrixU();
        out.d = solver.singularValues();
        out.v = solver.matrixV().adjoint();
    } else {
        Eigen::BDCSVD<ComplexMatrix> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
        out.u = solver.matrixU();
        out.d = solver.singularValues();
        out.v = solver.matrixV().adjoint();
    }
    return out;
}

/// Orthonormal basis (columns) of the orthogonal complement of the span of
/// the orthonormal columns of `basis`.
inline ComplexMatrix orthonormal_complement(const ComplexMatrix &basis) {
    const Eigen::Index d = basis.rows();
    const Eigen::Index r = basis.cols();
    if (r == 0) {
        return ComplexMatrix::Identity(d, d);
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(basis);
    const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
    return q.rightCols(d - r);
}

/// Unitary U with U * from = to, for isometries `from` and `to` of equal
/// shape. On the complement, U maps from^perp onto to^perp by the unitary
/// closest to the identity, so U is the identity there whenever the two
/// complements coincide.
inline ComplexMatrix complete_unitary(const ComplexMatrix &from, const ComplexMatrix &to) {
    if (from.rows() != to.rows() || from.cols() != to.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "complete_unitary: shapes differ");
    }
    ComplexMatrix u = to * from.adjoint();
    if (from.cols() == from.rows()) {
        return u;
    }
    const ComplexMatrix from_perp = orthonormal_complement(from);
    const ComplexMatrix to_perp = orthonormal_complement(to);
    // maximize Re Tr(to_perp W from_perp^dagger) over unitary W
    Eigen::JacobiSVD<ComplexMatrix> overlap(from_perp.adjoint() * to_perp, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const ComplexMatrix w = overlap.matrixV() * overlap.matrixU().adjoint();
    u += to_perp * w * from_perp.adjoint();
    return u;
}

/// Left polar decomposition a = modulus * phase with modulus = sqrt(a a^dagger).
struct Polar {
    ComplexMatrix modulus;
    ComplexMatrix phase;
};

inline Polar polar_left(const ComplexMatrix &a) {
    if (a.rows() != a.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "polar_left: matrix is not square");
    }
    const Svd s = svd(a);
    const Eigen::Index d = a.rows();
    const double cutoff = 1e-10 * std::max(1.0, d > 0 ? s.d(0) : 0.0);
    Eigen::Index rank = 0;
    while (rank < d && s.d(rank) > cutoff) {
        ++rank;
    }
    Polar out;
    out.modulus = s.u * s.d.cast<Complex>().asDiagonal() * s.u.adjoint();
    const ComplexMatrix right = s.v.topRows(rank).adjoint();  // right singular vectors
    out.phase = complete_unitary(right, s.u.leftCols(rank));
    return out;
}

/// Hermitian, positive-semidefinite, unit-trace operator on 2^k dimensions.
class DensityOperator {
  public:
    DensityOperator() = default;

    explicit DensityOperator(const ComplexMatrix &m) : matrix_(validate(m)) {}

    static DensityOperator from_pure(const ComplexVector &psi) {
        return DensityOperator(psi * psi.adjoint());
    }

    Eigen::Index dim() const { return matrix_.rows(); }
    const ComplexMatrix &matrix() const { return matrix_; }

  private:
    static ComplexMatrix validate(const ComplexMatrix &m) {
        require_hermitian(m, "DensityOperator");
        const double tr = m.trace().real();
        if (std::abs(tr - 1.0) > tol::kTrace) {
            throw Error(ErrorKind::InvalidArgument, "DensityOperator: trace " + std::to_string(tr));
        }
        ComplexMatrix sym = 0.5 * (m + m.adjoint());
        // Cholesky of the shifted operator succeeds iff no eigenvalue is below -kEigenClamp.
        Eigen::LLT<ComplexMatrix> llt(sym + 2 * tol::kEigenClamp * ComplexMatrix::Identity(m.rows(), m.cols()));
        if (llt.info() != Eigen::Success) {
            throw Error(ErrorKind::NotPSD, "DensityOperator: negative eigenvalue");
        }
        return sym;
    }

    ComplexMatrix matrix_;
};

inline void require_same_dim(const DensityOperator &p, const DensityOperator &q, const char *where) {
    if (p.dim() != q.dim()) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(where) + ": " + std::to_string(p.dim()) + " vs " + std::to_string(q.dim()));
    }
}

inline double trace_distance(const DensityOperator &p, const DensityOperator &q) {
    require_same_dim(p, q, "trace_distance");
    return 0.5 * trace_norm(p.matrix() - q.matrix());
}

/// Tr|sqrt(p) sqrt(q)|.
inline double fidelity(const DensityOperator &p, const DensityOperator &q) {
    require_same_dim(p, q, "fidelity");
    const ComplexMatrix product = sqrt_psd(p.matrix()) * sqrt_psd(q.matrix());
    if (product.rows() <= 64) {
        return Eigen::JacobiSVD<ComplexMatrix>(product).singularValues().sum();
    }
    return Eigen::BDCSVD<ComplexMatrix>(product).singularValues().sum();
}

/// Reduced operator on the second factor of a bipartite pure state whose
/// amplitude index is i_A * dim_b + i_B.
inline ComplexMatrix partial_trace_first(const ComplexVector &psi, Eigen::Index dim_a, Eigen::Index dim_b) {
    if (psi.size() != dim_a * dim_b) {
        throw Error(ErrorKind::DimensionMismatch, "partial_trace_first: size mismatch");
    }
    // Theta(i, j) = psi[i * dim_b + j]; rho_B = Theta^T conj(Theta)
    const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> theta(
        psi.data(), dim_a, dim_b);
    return theta.transpose() * theta.conjugate();
}

// Random instances for property checks.

inline double gaussian(Rng &rng) {
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline ComplexMatrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng &rng) {
    ComplexMatrix g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            g(i, j) = Complex(gaussian(rng), gaussian(rng));
        }
    }
    return g;
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
inline ComplexMatrix random_unitary(Eigen::Index d, Rng &rng) {
    const ComplexMatrix g = random_ginibre(d, d, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < d; ++k) {
        const Complex diag = r(k, k);
        q.col(k) *= std::abs(diag) > 0 ? diag / std::abs(diag) : Complex(1.0);
    }
    return q;
}

inline ComplexMatrix random_hermitian(Eigen::Index d, Rng &rng) {
    const ComplexMatrix g = random_ginibre(d, d, rng);
    return 0.5 * (g + g.adjoint());
}

/// Random full-rank density operator (Hilbert-Schmidt ensemble).
inline DensityOperator random_density_operator(Eigen::Index d, Rng &rng) {
    const ComplexMatrix g = random_ginibre(d, d, rng);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityOperator(0.5 * (rho + rho.adjoint()));
}

}  // namespace qsbc::linalg
