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

// Evidence density operators of the commitment protocols, built by explicit
// summation over committed strings, and the closed-form trace distances they
// are checked against.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsbc/bits.hpp"
#include "qsbc/boolfn.hpp"
#include "qsbc/error.hpp"
#include "qsbc/linalg.hpp"
#include "qsbc/protocol_id.hpp"
#include "qsbc/rng.hpp"
#include "qsbc/states.hpp"

namespace qsbc::concealing {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::DensityOperator;

inline constexpr std::size_t kMaxQubitsP1 = 10;
inline constexpr std::size_t kMaxQubitsP2 = 8;
inline constexpr std::size_t kMaxStringP3 = 5;
inline constexpr std::size_t kMaxQubitsP6 = 6;
inline constexpr std::size_t kMaxMFoldQubits = 12;

namespace detail {

inline void check_size(std::size_t n, std::size_t max, const char *what) {
    if (n == 0) {
        throw Error(ErrorKind::InvalidArgument, std::string(what) + ": n must be at least 1");
    }
    if (n > max) {
        throw Error(ErrorKind::DimensionTooLarge,
                    std::string(what) + ": n=" + std::to_string(n) + " exceeds " + std::to_string(max));
    }
}

inline void check_fn(const boolfn::BooleanFn &f, std::size_t n, int b) {
    if (f.arity() != n) {
        throw Error(ErrorKind::ParamMismatch, "Boolean function arity differs from string length");
    }
    if (f.preimage(b).empty()) {
        throw Error(ErrorKind::EmptyPreimage, "Boolean function never takes the committed value");
    }
}

// Accumulates a weighted sum of pure-state projectors in the lower triangle.
class MixtureBuilder {
  public:
    explicit MixtureBuilder(Eigen::Index dim) : acc_(ComplexMatrix::Zero(dim, dim)) {}

    void add(const ComplexVector &v, double weight) {
        acc_.selfadjointView<Eigen::Lower>().rankUpdate(v, weight);
    }

    DensityOperator finish() {
        ComplexMatrix full = acc_.selfadjointView<Eigen::Lower>();
        return DensityOperator(full);
    }

  private:
    ComplexMatrix acc_;
};

}  // namespace detail

/// Uniform mixture of |psi_a> = |psi_{a_1}>...|psi_{a_n}> over f(a) = b.
inline DensityOperator rho_p1(std::size_t n, double alpha, int b, const boolfn::BooleanFn &f) {
    detail::check_size(n, kMaxQubitsP1, "rho_p1");
    detail::check_fn(f, n, b);
    const auto [psi0, psi1] = states::nonorthogonal_pair(alpha);
    const auto &pre = f.preimage(b);
    detail::MixtureBuilder mix(Eigen::Index{1} << n);
    for (auto index : pre) {
        const BitString a = BitString::from_index(index, n);
        ComplexVector v = ComplexVector::Ones(1);
        for (std::size_t i = 0; i < n; ++i) {
            v = linalg::tensor(v, (a[i] ? psi1 : psi0).amplitudes());
        }
        mix.add(v, 1.0 / static_cast<double>(pre.size()));
    }
    return mix.finish();
}

inline DensityOperator rho_p1(std::size_t n, double alpha, int b) {
    detail::check_size(n, kMaxQubitsP1, "rho_p1");
    return rho_p1(n, alpha, b, boolfn::BooleanFn::parity(n));
}

/// Mixture over all basis strings and all strings a with f(a) = b of |a>_basis.
inline DensityOperator sigma_p2(std::size_t n, int b, const boolfn::BooleanFn &f) {
    detail::check_size(n, kMaxQubitsP2, "sigma_p2");
    detail::check_fn(f, n, b);
    const auto &pre = f.preimage(b);
    const std::uint64_t bases = std::uint64_t{1} << n;
    const double weight = 1.0 / static_cast<double>(bases * pre.size());
    detail::MixtureBuilder mix(Eigen::Index{1} << n);
    for (std::uint64_t basis = 0; basis < bases; ++basis) {
        const BitString beta = BitString::from_index(basis, n);
        for (auto index : pre) {
            mix.add(states::bb84_string(BitString::from_index(index, n), beta).amplitudes(), weight);
        }
    }
    return mix.finish();
}

inline DensityOperator sigma_p2(std::size_t n, int b) {
    detail::check_size(n, kMaxQubitsP2, "sigma_p2");
    return sigma_p2(n, b, boolfn::BooleanFn::parity(n));
}

/// 2n-qubit mixture of |a>_basis (x) |c>_basis with the referential string c
/// published.
inline DensityOperator tau_p3(std::size_t n, const BitString &c, int b, const boolfn::BooleanFn &f) {
    detail::check_size(n, kMaxStringP3, "tau_p3");
    detail::check_fn(f, n, b);
    if (c.size() != n) {
        throw Error(ErrorKind::LengthMismatch, "tau_p3: referential string length differs from n");
    }
    const auto &pre = f.preimage(b);
    const std::uint64_t bases = std::uint64_t{1} << n;
    const double weight = 1.0 / static_cast<double>(bases * pre.size());
    detail::MixtureBuilder mix(Eigen::Index{1} << (2 * n));
    for (std::uint64_t basis = 0; basis < bases; ++basis) {
        const BitString beta = BitString::from_index(basis, n);
        const ComplexVector ref = states::bb84_string(c, beta).amplitudes();
        for (auto index : pre) {
            const ComplexVector value = states::bb84_string(BitString::from_index(index, n), beta).amplitudes();
            mix.add(linalg::tensor(value, ref), weight);
        }
    }
    return mix.finish();
}

inline DensityOperator tau_p3(std::size_t n, const BitString &c, int b) {
    detail::check_size(n, kMaxStringP3, "tau_p3");
    return tau_p3(n, c, b, boolfn::BooleanFn::parity(n));
}

/// Uniform mixture over ordered pairs (x, e != 0) of the normalized
/// relative-phase states, weight 1 / (2^n (2^n - 1)) each.
inline DensityOperator rho_p6(std::size_t n, int b) {
    detail::check_size(n, kMaxQubitsP6, "rho_p6");
    const std::uint64_t dim = std::uint64_t{1} << n;
    const double weight = 1.0 / static_cast<double>(dim * (dim - 1));
    detail::MixtureBuilder mix(static_cast<Eigen::Index>(dim));
    for (std::uint64_t x = 0; x < dim; ++x) {
        for (std::uint64_t e = 1; e < dim; ++e) {
            mix.add(states::phase_state(BitString::from_index(x, n), BitString::from_index(e, n), b).amplitudes(),
                    weight);
        }
    }
    return mix.finish();
}

/// The 4x4 single-position difference operator for a referential bit.
inline ComplexMatrix theta(int cbit) {
    ComplexMatrix m(4, 4);
    if (cbit == 0) {
        m << 1.0, 0.0, 0.5, 0.5,
             0.0, 0.0, 0.5, 0.5,
             0.5, 0.5, -1.0, 0.0,
             0.5, 0.5, 0.0, 0.0;
    } else {
        m << 0.0, 0.0, 0.5, -0.5,
             0.0, 1.0, -0.5, 0.5,
             0.5, -0.5, 0.0, 0.0,
             -0.5, 0.5, 0.0, -1.0;
    }
    return m;
}

/// Single-qubit difference operators whose n-fold tensor powers give the
/// P1 and P2 operator differences.
inline ComplexMatrix p1_difference_factor(double alpha) {
    const auto [psi0, psi1] = states::nonorthogonal_pair(alpha);
    return psi0.projector() - psi1.projector();
}

inline ComplexMatrix p2_difference_factor() {
    return states::bb84_state(0, 0).projector() - states::bb84_state(1, 0).projector() +
           states::bb84_state(0, 1).projector() - states::bb84_state(1, 1).projector();
}

/// Exact trace distance for P1, P2 and P3 from the product structure.
inline double closed_form_distance(ProtocolId protocol, std::size_t n, std::optional<double> alpha = std::nullopt) {
    const double dn = static_cast<double>(n);
    switch (protocol) {
        case ProtocolId::P1:
            if (!alpha) {
                throw Error(ErrorKind::MissingAlpha, "closed_form_distance: P1 needs alpha");
            }
            return std::pow(std::sin(*alpha), dn);
        case ProtocolId::P2:
            return std::pow(std::sin(M_PI / 4), dn);
        case ProtocolId::P3:
            return std::pow(std::sqrt(3.0) / 2.0, dn);
        default:
            throw Error(ErrorKind::InvalidArgument,
                        "closed_form_distance: no closed form for " + std::string(to_string(protocol)));
    }
}

/// Upper bound obtained for P2 by contractivity from P1 at alpha = pi/4.
inline double p2_contractive_bound(std::size_t n) { return std::pow(std::sin(M_PI / 4), static_cast<double>(n)); }

// Transport of the P1 operators at alpha = pi/4 onto the P2 operators.

/// Single-qubit unitary taking the P1 pair at alpha = pi/4 to (|+>, |1>).
inline ComplexMatrix e1_single_qubit() {
    const auto [psi0, psi1] = states::nonorthogonal_pair(M_PI / 4);
    ComplexMatrix source(2, 2);
    source.col(0) = psi0.amplitudes();
    source.col(1) = psi1.amplitudes();
    ComplexMatrix target(2, 2);
    target.col(0) = states::bb84_state(0, 1).amplitudes();
    target.col(1) = states::bb84_state(1, 0).amplitudes();
    return target * source.inverse();
}

inline DensityOperator apply_e1(const DensityOperator &rho, std::size_t n) {
    const ComplexMatrix u = linalg::tensor_power(e1_single_qubit(), n);
    return DensityOperator(u * rho.matrix() * u.adjoint());
}

/// Uniform mixture over Hadamard patterns, 2^-n sum_i H^i rho H^i, applied
/// one qubit at a time.
inline DensityOperator apply_e2(const DensityOperator &rho, std::size_t n) {
    ComplexMatrix hadamard(2, 2);
    hadamard << M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, -M_SQRT1_2;
    ComplexMatrix out = rho.matrix();
    for (std::size_t q = 0; q < n; ++q) {
        const ComplexMatrix left = linalg::tensor_power(ComplexMatrix::Identity(2, 2), q);
        const ComplexMatrix right = linalg::tensor_power(ComplexMatrix::Identity(2, 2), n - 1 - q);
        const ComplexMatrix h = linalg::tensor(linalg::tensor(left, hadamard), right);
        out = 0.5 * (out + h * out * h.adjoint());
    }
    return DensityOperator(out);
}

/// Evidence operators for bit 0 and bit 1 of a single commitment string.
inline std::pair<DensityOperator, DensityOperator> evidence_pair(ProtocolId protocol, std::size_t n,
                                                                 std::optional<double> alpha = std::nullopt,
                                                                 const std::optional<BitString> &c = std::nullopt) {
    switch (protocol) {
        case ProtocolId::P1:
            if (!alpha) {
                throw Error(ErrorKind::MissingAlpha, "evidence_pair: P1 needs alpha");
            }
            return {rho_p1(n, *alpha, 0), rho_p1(n, *alpha, 1)};
        case ProtocolId::P2:
            return {sigma_p2(n, 0), sigma_p2(n, 1)};
        case ProtocolId::P3: {
            const BitString ref = c.value_or(BitString(n));
            return {tau_p3(n, ref, 0), tau_p3(n, ref, 1)};
        }
        case ProtocolId::P6:
            return {rho_p6(n, 0), rho_p6(n, 1)};
        default:
            throw Error(ErrorKind::InvalidArgument,
                        "evidence_pair: no evidence operator for " + std::string(to_string(protocol)));
    }
}

inline std::size_t evidence_qubits(ProtocolId protocol, std::size_t n) {
    return protocol == ProtocolId::P3 ? 2 * n : n;
}

struct HelstromResult {
    double exact = 0.0;           // Pr[+|p] - Pr[+|q], equal to 1/2 Tr|p - q|
    double empirical = 0.0;       // 2 * success_rate - 1 over simulated trials
    double standard_error = 0.0;  // of the empirical advantage
    bool consistent = true;       // |empirical - exact| <= 4 standard errors
};

/// Distinguishing advantage of the measurement projecting onto the positive
/// eigenspace of p - q, exactly and by simulated sampling with a uniform prior.
inline HelstromResult helstrom_advantage(const DensityOperator &p, const DensityOperator &q, std::size_t trials,
                                         Rng &rng) {
    linalg::require_same_dim(p, q, "helstrom_advantage");
    const auto spec = linalg::eigh(p.matrix() - q.matrix());
    double p_plus = 0.0;  // Pr[+ | p]
    double q_plus = 0.0;  // Pr[+ | q]
    HelstromResult out;
    for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
        if (spec.eigenvalues(k) > 0.0) {
            const ComplexVector v = spec.eigenvectors.col(k);
            p_plus += v.dot(p.matrix() * v).real();
            q_plus += v.dot(q.matrix() * v).real();
        }
    }
    out.exact = std::clamp(p_plus - q_plus, 0.0, 1.0);
    if (trials == 0) {
        out.empirical = out.exact;
        return out;
    }
    std::size_t successes = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const bool is_p = rng.bit() == 0;
        const bool plus = rng.uniform() < (is_p ? p_plus : q_plus);
        successes += (plus == is_p);
    }
    const double rate = static_cast<double>(successes) / static_cast<double>(trials);
    const double s = 0.5 * (1.0 + out.exact);
    out.empirical = 2.0 * rate - 1.0;
    out.standard_error = 2.0 * std::sqrt(s * (1.0 - s) / static_cast<double>(trials));
    out.consistent = std::abs(out.empirical - out.exact) <= 4.0 * out.standard_error + 1e-12;
    return out;
}

/// |Tr(E (p - q))| for a two-outcome POVM {E, I - E}.
inline double povm_advantage(const ComplexMatrix &effect, const DensityOperator &p, const DensityOperator &q) {
    linalg::require_same_dim(p, q, "povm_advantage");
    return std::abs((effect * (p.matrix() - q.matrix())).trace().real());
}

/// Random POVM effect 0 <= E <= I.
inline ComplexMatrix random_effect(Eigen::Index dim, Rng &rng) {
    const ComplexMatrix u = linalg::random_unitary(dim, rng);
    linalg::RealVector weights(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        weights(k) = rng.uniform();
    }
    return u * weights.cast<Complex>().asDiagonal() * u.adjoint();
}

struct MFoldCheck {
    double exact = 0.0;   // trace distance of the m-fold tensor evidence
    double single = 0.0;  // single-copy trace distance
    double bound = 0.0;   // m * single
    bool holds = true;    // exact <= bound (with 1e-9 slack)
};

inline MFoldCheck m_fold_bound_check(ProtocolId protocol, std::size_t n, std::size_t m,
                                     std::optional<double> alpha = std::nullopt,
                                     const std::optional<BitString> &c = std::nullopt) {
    if (m == 0) {
        throw Error(ErrorKind::InvalidArgument, "m_fold_bound_check: m must be at least 1");
    }
    const std::size_t qubits = evidence_qubits(protocol, n) * m;
    if (qubits > kMaxMFoldQubits) {
        throw Error(ErrorKind::DimensionTooLarge,
                    "m_fold_bound_check: " + std::to_string(qubits) + " qubits exceed " + std::to_string(kMaxMFoldQubits));
    }
    const auto [rho0, rho1] = evidence_pair(protocol, n, alpha, c);
    MFoldCheck out;
    out.single = linalg::trace_distance(rho0, rho1);
    out.bound = static_cast<double>(m) * out.single;
    const ComplexMatrix diff = linalg::tensor_power(rho0.matrix(), m) - linalg::tensor_power(rho1.matrix(), m);
    out.exact = 0.5 * linalg::trace_norm(diff);
    out.holds = out.exact <= out.bound + 1e-9;
    return out;
}

}  // namespace qsbc::concealing
