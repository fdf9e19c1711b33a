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

#include "qsbc/linalg.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qsbc/attack.hpp"
#include "qsbc/concealing.hpp"

using namespace qsbc;
using namespace qsbc::linalg;

namespace {

ComplexMatrix pauli_z() {
    ComplexMatrix z(2, 2);
    z << 1, 0, 0, -1;
    return z;
}

ComplexMatrix diag(std::initializer_list<double> values) {
    RealVector d(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) {
        d(i++) = v;
    }
    return d.cast<Complex>().asDiagonal();
}

}  // namespace

TEST(Tensor, IdentityTimesIdentity) {
    EXPECT_EQ(tensor(ComplexMatrix(ComplexMatrix::Identity(2, 2)), ComplexMatrix(ComplexMatrix::Identity(2, 2))), ComplexMatrix::Identity(4, 4));
}

TEST(Tensor, AllOnes) {
    EXPECT_EQ(tensor(ComplexMatrix(ComplexMatrix::Ones(2, 2)), ComplexMatrix(ComplexMatrix::Ones(2, 2))), ComplexMatrix::Ones(4, 4));
}

TEST(Tensor, ProjectorPlacement) {
    const ComplexMatrix t = tensor(diag({1, 0}), diag({0, 1}));
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(1, 1) = 1.0;
    EXPECT_EQ(t, expected);
}

TEST(Tensor, EntryFormula) {
    Rng rng(3);
    const ComplexMatrix a = random_ginibre(2, 3, rng);
    const ComplexMatrix b = random_ginibre(3, 2, rng);
    const ComplexMatrix t = tensor(a, b);
    ASSERT_EQ(t.rows(), 6);
    ASSERT_EQ(t.cols(), 6);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
            for (Eigen::Index k = 0; k < 3; ++k)
                for (Eigen::Index l = 0; l < 2; ++l) EXPECT_EQ(t(i * 3 + k, j * 2 + l), a(i, j) * b(k, l));
}

TEST(Eigh, PauliZ) {
    const auto s = eigh(pauli_z());
    EXPECT_NEAR(s.eigenvalues(0), 1.0, 1e-12);
    EXPECT_NEAR(s.eigenvalues(1), -1.0, 1e-12);
}

TEST(Eigh, RejectsNonHermitian) {
    ComplexMatrix m(2, 2);
    m << 0, 1, 0, 0;
    try {
        eigh(m);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
    }
}

TEST(Eigh, ThetaRootsOfQuartic) {
    for (int c : {0, 1}) {
        const auto s = eigh(concealing::theta(c));
        for (Eigen::Index k = 0; k < 4; ++k) {
            const double l = s.eigenvalues(k);
            EXPECT_NEAR(l * l * l * l - 2 * l * l + 0.25, 0.0, 1e-8);
        }
    }
}

TEST(Eigh, MatchesJacobiOracle) {
    Rng rng(11);
    for (Eigen::Index d : {2, 5, 8, 16}) {
        const ComplexMatrix h = random_hermitian(d, rng);
        const auto s = eigh(h);
        const auto ref = oracle::hermitian_eigenvalues(h);
        for (Eigen::Index k = 0; k < d; ++k) {
            EXPECT_NEAR(s.eigenvalues(k), ref[static_cast<std::size_t>(k)], 1e-9);
        }
    }
}

TEST(Eigh, MatchesCharacteristicPolynomialRoots) {
    Rng rng(24);
    for (int trial = 0; trial < 5; ++trial) {
        const ComplexMatrix h = random_hermitian(6, rng);
        const auto roots = oracle::polynomial_roots(oracle::characteristic_polynomial(h));
        std::vector<double> ref;
        for (const auto &r : roots) {
            EXPECT_LE(std::abs(r.imag()), 1e-8);
            ref.push_back(r.real());
        }
        std::sort(ref.begin(), ref.end(), std::greater<>());
        const auto s = eigh(h);
        for (Eigen::Index k = 0; k < 6; ++k) {
            EXPECT_NEAR(s.eigenvalues(k), ref[static_cast<std::size_t>(k)], 1e-8);
        }
    }
}

TEST(Eigh, ReconstructsAndOrthonormal) {
    Rng rng(12);
    for (Eigen::Index d : {1, 3, 8, 16}) {
        const ComplexMatrix h = random_hermitian(d, rng);
        const auto s = eigh(h);
        EXPECT_LE(max_abs(s.reconstruct() - h), tol::kResidual);
        EXPECT_LE(max_abs(s.eigenvectors.adjoint() * s.eigenvectors - ComplexMatrix::Identity(d, d)), tol::kResidual);
        for (Eigen::Index k = 1; k < d; ++k) {
            EXPECT_GE(s.eigenvalues(k - 1), s.eigenvalues(k));
        }
    }
}

TEST(TraceNorm, Examples) {
    EXPECT_NEAR(trace_norm(pauli_z()), 2.0, 1e-12);
    EXPECT_NEAR(trace_norm(concealing::theta(0)), 2 * std::sqrt(3.0), 1e-9);
    EXPECT_NEAR(trace_norm(concealing::theta(1)), 2 * std::sqrt(3.0), 1e-9);
}

TEST(TraceNorm, MultiplicativeUnderTensor) {
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = random_hermitian(1 + rng.below(4), rng);
        const ComplexMatrix b = random_hermitian(1 + rng.below(4), rng);
        EXPECT_NEAR(trace_norm(tensor(a, b)), trace_norm(a) * trace_norm(b), 1e-9);
    }
}

TEST(TraceNorm, MatchesOracle) {
    Rng rng(14);
    for (int trial = 0; trial < 5; ++trial) {
        const ComplexMatrix h = random_hermitian(6, rng);
        EXPECT_NEAR(trace_norm(h), oracle::trace_norm(h), 1e-7);
    }
}

TEST(TraceDistance, Examples) {
    Rng rng(15);
    const auto rho = random_density_operator(4, rng);
    EXPECT_NEAR(trace_distance(rho, rho), 0.0, 1e-12);
    const DensityOperator zero(diag({1, 0}));
    const DensityOperator one(diag({0, 1}));
    EXPECT_NEAR(trace_distance(zero, one), 1.0, 1e-12);
    EXPECT_NEAR(trace_distance(concealing::rho_p1(1, M_PI / 4, 0), concealing::rho_p1(1, M_PI / 4, 1)),
                std::sin(M_PI / 4), 1e-12);
}

TEST(TraceDistance, RejectsDimensionMismatch) {
    try {
        trace_distance(DensityOperator(diag({1, 0})), DensityOperator(diag({1, 0, 0, 0})));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
}

TEST(TraceDistance, IsAMetric) {
    Rng rng(16);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.below(6));
        const auto a = random_density_operator(d, rng);
        const auto b = random_density_operator(d, rng);
        const auto c = random_density_operator(d, rng);
        EXPECT_NEAR(trace_distance(a, b), trace_distance(b, a), 1e-9);
        EXPECT_LE(trace_distance(a, c), trace_distance(a, b) + trace_distance(b, c) + 1e-9);
        EXPECT_NEAR(trace_distance(a, a), 0.0, 1e-9);
        EXPECT_GT(trace_distance(a, b), 1e-9);
    }
}

TEST(TraceDistance, ContractiveUnderE1AndE2) {
    Rng rng(17);
    for (std::size_t n : {1, 2, 3}) {
        const Eigen::Index d = Eigen::Index{1} << n;
        for (int trial = 0; trial < 5; ++trial) {
            const auto a = random_density_operator(d, rng);
            const auto b = random_density_operator(d, rng);
            const double before = trace_distance(a, b);
            EXPECT_LE(trace_distance(concealing::apply_e1(a, n), concealing::apply_e1(b, n)), before + 1e-9);
            EXPECT_LE(trace_distance(concealing::apply_e2(a, n), concealing::apply_e2(b, n)), before + 1e-9);
        }
    }
}

TEST(SqrtPsd, Examples) {
    EXPECT_LE(max_abs(sqrt_psd(0.5 * ComplexMatrix::Identity(2, 2)) - M_SQRT1_2 * ComplexMatrix::Identity(2, 2)), 1e-12);
    EXPECT_LE(max_abs(sqrt_psd(diag({4, 1})) - diag({2, 1})), 1e-12);
    EXPECT_LE(max_abs(sqrt_psd(0.25 * ComplexMatrix::Identity(4, 4)) - 0.5 * ComplexMatrix::Identity(4, 4)), 1e-12);
}

TEST(SqrtPsd, ClampsRoundingNoiseAndRejectsNegative) {
    EXPECT_NO_THROW(sqrt_psd(diag({1, -5e-11})));
    try {
        sqrt_psd(diag({1, -1e-3}));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotPSD);
    }
}

TEST(Svd, Examples) {
    const Svd id = svd(ComplexMatrix::Identity(3, 3));
    EXPECT_LE(max_abs(id.d.cast<Complex>() - ComplexVector::Ones(3)), 1e-12);
    const Svd s = svd(diag({0, 3}));
    EXPECT_NEAR(s.d(0), 3.0, 1e-12);
    EXPECT_NEAR(s.d(1), 0.0, 1e-12);
}

TEST(Svd, ReconstructsRectangular) {
    Rng rng(18);
    for (auto [r, c] : {std::pair{3, 5}, std::pair{8, 2}, std::pair{16, 16}, std::pair{70, 66}}) {
        const ComplexMatrix a = random_ginibre(r, c, rng);
        const Svd s = svd(a);
        EXPECT_LE(max_abs(s.reconstruct() - a), tol::kReconstruct);
        EXPECT_LE(unitarity_residual(s.u), tol::kReconstruct);
        EXPECT_LE(unitarity_residual(s.v), tol::kReconstruct);
    }
}

TEST(Svd, SchmidtCoefficientsMatchReducedSpectrum) {
    const auto p = attack::build_purification(ProtocolId::P1, 2, M_PI / 4, 0);
    const Svd s = svd(p.theta());
    // Eigenvalues of the reduced operator from the characteristic polynomial.
    const auto ref = oracle::hermitian_eigenvalues(linalg::partial_trace_first(p.joint.amplitudes(), 4, 4));
    for (Eigen::Index k = 0; k < 4; ++k) {
        EXPECT_NEAR(s.d(k) * s.d(k), ref[static_cast<std::size_t>(k)], 1e-9);
    }
}

TEST(Polar, Examples) {
    Rng rng(19);
    const ComplexMatrix u = random_unitary(4, rng);
    const Polar pu = polar_left(u);
    EXPECT_LE(max_abs(pu.modulus - ComplexMatrix::Identity(4, 4)), 1e-9);
    EXPECT_LE(max_abs(pu.phase - u), 1e-9);

    const ComplexMatrix p = random_density_operator(4, rng).matrix();
    const Polar pp = polar_left(p);
    EXPECT_LE(max_abs(pp.modulus - p), 1e-9);
    EXPECT_LE(max_abs(pp.phase - ComplexMatrix::Identity(4, 4)), 1e-8);
}

TEST(Polar, ReconstructsSingularInput) {
    Rng rng(20);
    const ComplexMatrix a = random_ginibre(5, 2, rng) * random_ginibre(2, 5, rng);
    const Polar p = polar_left(a);
    EXPECT_LE(max_abs(p.modulus * p.phase - a), tol::kReconstruct);
    EXPECT_LE(unitarity_residual(p.phase), tol::kReconstruct);
}

TEST(Polar, ModulusTraceIsFidelity) {
    const auto rho0 = concealing::rho_p1(2, M_PI / 4, 0);
    const auto rho1 = concealing::rho_p1(2, M_PI / 4, 1);
    const Polar p = polar_left(sqrt_psd(rho1.matrix()) * sqrt_psd(rho0.matrix()));
    const double ref = oracle::schatten_one(sqrt_psd(rho1.matrix()) * sqrt_psd(rho0.matrix()));
    EXPECT_NEAR(p.modulus.trace().real(), ref, 1e-9);
    EXPECT_NEAR(p.modulus.trace().real(), fidelity(rho0, rho1), 1e-9);
}

TEST(Fidelity, Examples) {
    Rng rng(21);
    const auto rho = random_density_operator(4, rng);
    EXPECT_NEAR(fidelity(rho, rho), 1.0, 1e-9);
    EXPECT_NEAR(fidelity(DensityOperator(diag({1, 0})), DensityOperator(diag({0, 1}))), 0.0, 1e-12);
}

TEST(Fidelity, P1AboveOneMinusDistance) {
    for (double alpha : {M_PI / 8, M_PI / 4}) {
        for (std::size_t n = 1; n <= 6; ++n) {
            const double f = fidelity(concealing::rho_p1(n, alpha, 0), concealing::rho_p1(n, alpha, 1));
            EXPECT_GE(f, 1.0 - std::pow(std::sin(alpha), static_cast<double>(n)) - 1e-9) << n;
        }
    }
}

TEST(Fidelity, Symmetric) {
    Rng rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_density_operator(5, rng);
        const auto b = random_density_operator(5, rng);
        EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-9);
    }
}

TEST(DensityOperator, Validation) {
    ComplexMatrix bad_trace = diag({1, 1});
    EXPECT_THROW(DensityOperator{bad_trace}, Error);
    try {
        DensityOperator(diag({1.5, -0.5}));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotPSD);
    }
    ComplexMatrix asym(2, 2);
    asym << 0.5, 0.1, 0.2, 0.5;
    try {
        DensityOperator{asym};
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
    }
}

TEST(CompleteUnitary, MapsAndStaysUnitary) {
    Rng rng(23);
    const ComplexMatrix u = random_unitary(6, rng);
    const ComplexMatrix v = random_unitary(6, rng);
    const ComplexMatrix from = u.leftCols(2);
    const ComplexMatrix to = v.leftCols(2);
    const ComplexMatrix w = complete_unitary(from, to);
    EXPECT_LE(max_abs(w * from - to), 1e-9);
    EXPECT_LE(unitarity_residual(w), 1e-9);
}
