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

// The entanglement attack on a commitment: Alice keeps a purification of the
// honest evidence mixture, sends its B register, and at opening time rotates
// her A register with the unitary that carries the bit-0 purification as
// close as possible to the bit-1 purification.
//
// Amplitude index of a joint state is i_A * dim_B + i_B; the coefficient
// matrix Theta has Theta(i_A, i_B) equal to that amplitude.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qsbc/bits.hpp"
#include "qsbc/boolfn.hpp"
#include "qsbc/concealing.hpp"
#include "qsbc/error.hpp"
#include "qsbc/linalg.hpp"
#include "qsbc/protocol_id.hpp"
#include "qsbc/rng.hpp"
#include "qsbc/states.hpp"
#include "qsbc/stats.hpp"

namespace qsbc::attack {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::DensityOperator;
using linalg::RealVector;

inline constexpr std::size_t kMaxAttackN = 5;
inline constexpr std::size_t kMaxAttackNPhase = 4;

struct Purification {
    ProtocolId protocol = ProtocolId::P1;
    std::size_t n = 0;
    double alpha = 0.0;
    int bit = 0;
    std::size_t a_qubits = 0;  // register_split: qubits [0, a_qubits) belong to Alice
    std::size_t b_qubits = 0;
    states::PureState joint;

    Eigen::Index dim_a() const { return Eigen::Index{1} << a_qubits; }
    Eigen::Index dim_b() const { return Eigen::Index{1} << b_qubits; }

    ComplexMatrix theta() const {
        ComplexMatrix t(dim_a(), dim_b());
        for (Eigen::Index i = 0; i < dim_a(); ++i) {
            for (Eigen::Index j = 0; j < dim_b(); ++j) {
                t(i, j) = joint.amplitudes()(i * dim_b() + j);
            }
        }
        return t;
    }

    DensityOperator reduced_b() const {
        return DensityOperator(linalg::partial_trace_first(joint.amplitudes(), dim_a(), dim_b()));
    }
};

namespace detail {

inline ComplexVector from_theta(const ComplexMatrix &theta) {
    ComplexVector v(theta.size());
    for (Eigen::Index i = 0; i < theta.rows(); ++i) {
        for (Eigen::Index j = 0; j < theta.cols(); ++j) {
            v(i * theta.cols() + j) = theta(i, j);
        }
    }
    return v;
}

inline void add_term(ComplexVector &joint, std::uint64_t a_index, const ComplexVector &b_state, double weight) {
    joint.segment(static_cast<Eigen::Index>(a_index) * b_state.size(), b_state.size()) += weight * b_state;
}

}  // namespace detail

/// Uniform purification of the honest evidence mixture for bit b.
///
/// P1: A holds the string a with F(a) = b.
/// P2: A holds (a, basis string), 2n qubits.
/// P6: A holds (x, e) with e != 0, 2n qubits.
inline Purification build_purification(ProtocolId protocol, std::size_t n, double alpha, int b,
                                       const boolfn::BooleanFn *fn = nullptr) {
    if (n == 0) {
        throw Error(ErrorKind::InvalidArgument, "build_purification: n must be positive");
    }
    const std::size_t limit = protocol == ProtocolId::P6 ? kMaxAttackNPhase : kMaxAttackN;
    if (n > limit) {
        throw Error(ErrorKind::DimensionTooLarge,
                    "build_purification: n = " + std::to_string(n) + " exceeds " + std::to_string(limit));
    }
    const boolfn::BooleanFn parity = boolfn::BooleanFn::parity(n);
    const boolfn::BooleanFn &f = fn ? *fn : parity;
    if (protocol != ProtocolId::P6) {
        concealing::detail::check_fn(f, n, b);
    }
    Purification p;
    p.protocol = protocol;
    p.n = n;
    p.alpha = alpha;
    p.bit = b;
    p.b_qubits = n;
    const std::uint64_t strings = std::uint64_t{1} << n;
    switch (protocol) {
        case ProtocolId::P1: {
            const auto [psi0, psi1] = states::nonorthogonal_pair(alpha);
            p.a_qubits = n;
            ComplexVector joint = ComplexVector::Zero(p.dim_a() * p.dim_b());
            const auto &pre = f.preimage(b);
            const double w = 1.0 / std::sqrt(static_cast<double>(pre.size()));
            for (auto a : pre) {
                const BitString bits = BitString::from_index(a, n);
                std::vector<states::PureState> factors;
                for (std::size_t j = 0; j < n; ++j) {
                    factors.push_back(bits[j] ? psi1 : psi0);
                }
                detail::add_term(joint, a, states::tensor_all(factors).amplitudes(), w);
            }
            p.joint = states::PureState::normalized(p.a_qubits + p.b_qubits, joint);
            break;
        }
        case ProtocolId::P2: {
            p.a_qubits = 2 * n;
            ComplexVector joint = ComplexVector::Zero(p.dim_a() * p.dim_b());
            const auto &pre = f.preimage(b);
            const double w = 1.0 / std::sqrt(static_cast<double>(pre.size() * strings));
            for (auto a : pre) {
                for (std::uint64_t beta = 0; beta < strings; ++beta) {
                    const auto state = states::bb84_string(BitString::from_index(a, n), BitString::from_index(beta, n));
                    detail::add_term(joint, a * strings + beta, state.amplitudes(), w);
                }
            }
            p.joint = states::PureState::normalized(p.a_qubits + p.b_qubits, joint);
            break;
        }
        case ProtocolId::P6: {
            p.a_qubits = 2 * n;
            ComplexVector joint = ComplexVector::Zero(p.dim_a() * p.dim_b());
            const double w = 1.0 / std::sqrt(static_cast<double>(strings * (strings - 1)));
            for (std::uint64_t x = 0; x < strings; ++x) {
                for (std::uint64_t e = 1; e < strings; ++e) {
                    const auto state = states::phase_state(BitString::from_index(x, n), BitString::from_index(e, n), b);
                    detail::add_term(joint, x * strings + e, state.amplitudes(), w);
                }
            }
            p.joint = states::PureState::normalized(p.a_qubits + p.b_qubits, joint);
            break;
        }
        default:
            throw Error(ErrorKind::InvalidArgument,
                        "build_purification: no purification for " + std::string(to_string(protocol)));
    }
    return p;
}

/// joint = sum_k coefficients(k) a_basis.col(k) (x) b_basis.col(k).
struct Schmidt {
    RealVector coefficients;  // descending, min(dim_a, dim_b) entries
    ComplexMatrix a_basis;    // dim_a x dim_a, first columns paired with coefficients
    ComplexMatrix b_basis;    // dim_b x dim_b

    ComplexVector reconstruct() const {
        const Eigen::Index k = coefficients.size();
        ComplexMatrix theta = a_basis.leftCols(k) * coefficients.cast<Complex>().asDiagonal() *
                              b_basis.leftCols(k).transpose();
        return detail::from_theta(theta);
    }
};

inline Schmidt schmidt_of(const ComplexMatrix &theta) {
    const linalg::Svd s = linalg::svd(theta);
    return {s.d, s.u, s.v.transpose()};
}

inline Schmidt schmidt(const Purification &p) { return schmidt_of(p.theta()); }

/// sqrt(rho1) sqrt(rho0) = modulus * transfer.
struct Transfer {
    ComplexMatrix transfer;
    ComplexMatrix modulus;
    double fidelity = 0.0;  // Tr(modulus)
};

inline Transfer compute_transfer(const DensityOperator &rho0, const DensityOperator &rho1) {
    linalg::require_same_dim(rho0, rho1, "compute_transfer");
    const ComplexMatrix product = linalg::sqrt_psd(rho1.matrix()) * linalg::sqrt_psd(rho0.matrix());
    const linalg::Polar polar = linalg::polar_left(product);
    return {polar.phase, polar.modulus, polar.modulus.trace().real()};
}

struct CheatUnitary {
    ComplexMatrix u_a;
    states::PureState nu;
    Transfer transfer;
    double fidelity_achieved = 0.0;  // |<1^|(U_A (x) I)|0^>|
    double unitarity_residual = 0.0;
};

/// Alice's local unitary carrying p0 to the purification of rho0_B that has
/// maximal overlap with p1.
///
/// With |Omega> = sum_l |x'_l>|y'_l> over p1's Schmidt bases,
/// nu = (I (x) sqrt(rho0) T^dagger)|Omega>. Expanding nu in p0's Schmidt
/// basis {y_j} gives nu = sum_j mu_j w_j (x) y_j with
/// w_j = sum_l <y_j|T^dagger|y'_l> x'_l, so U_A x_j = w_j.
inline CheatUnitary solve_cheat_unitary(const Purification &p0, const Purification &p1) {
    if (p0.a_qubits != p1.a_qubits || p0.b_qubits != p1.b_qubits) {
        throw Error(ErrorKind::DimensionMismatch, "solve_cheat_unitary: purifications use different registers");
    }
    const Eigen::Index da = p0.dim_a();
    const Eigen::Index db = p0.dim_b();
    if (da < db) {
        throw Error(ErrorKind::DimensionMismatch, "solve_cheat_unitary: Alice's register is smaller than Bob's");
    }
    const Schmidt s0 = schmidt(p0);
    const Schmidt s1 = schmidt(p1);
    const DensityOperator rho0 = p0.reduced_b();
    const DensityOperator rho1 = p1.reduced_b();

    CheatUnitary out;
    out.transfer = compute_transfer(rho0, rho1);
    const ComplexMatrix t_dag = out.transfer.transfer.adjoint();

    const ComplexMatrix x1 = s1.a_basis.leftCols(db);
    ComplexMatrix omega_theta = x1 * s1.b_basis.transpose();  // Theta of |Omega>
    const ComplexMatrix m = linalg::sqrt_psd(rho0.matrix()) * t_dag;
    // (I (x) M) acts on the coefficient matrix as Theta -> Theta M^T.
    out.nu = states::PureState::normalized(p0.a_qubits + p0.b_qubits,
                                           detail::from_theta(omega_theta * m.transpose()));

    const ComplexMatrix coeff = s0.b_basis.adjoint() * t_dag * s1.b_basis;  // (j, l) = <y_j|T^dag|y'_l>
    const ComplexMatrix w = x1 * coeff.transpose();
    out.u_a = linalg::complete_unitary(s0.a_basis.leftCols(db), w);
    out.unitarity_residual = linalg::unitarity_residual(out.u_a);

    const ComplexVector moved = detail::from_theta(out.u_a * p0.theta());
    out.fidelity_achieved = std::abs(p1.joint.amplitudes().dot(moved));
    return out;
}

/// Dense-pipeline cost of computing U_A at string length n.
struct ResourceEstimate {
    std::size_t n = 0;
    double time_log2 = 0.0;    // operations ~ 2^(3n)
    double memory_log2 = 0.0;  // matrix entries ~ 2^(2n)
    bool feasible = false;
    bool exceeds_atoms_on_earth = false;

    double time_ops() const { return std::exp2(time_log2); }
    double memory_entries() const { return std::exp2(memory_log2); }
};

inline constexpr double kFeasibleMemoryLog2 = 50.0;
inline constexpr double kEarthAtomsLog2 = 166.0;  // about 10^50

inline ResourceEstimate resource_estimate(std::size_t n) {
    ResourceEstimate r;
    r.n = n;
    r.time_log2 = 3.0 * static_cast<double>(n);
    r.memory_log2 = 2.0 * static_cast<double>(n);
    r.feasible = r.memory_log2 <= kFeasibleMemoryLog2;
    r.exceeds_atoms_on_earth = r.memory_log2 > kEarthAtomsLog2;
    return r;
}

struct CheatReport {
    ProtocolId protocol = ProtocolId::P1;
    std::size_t n = 0;
    double alpha = 0.0;
    double fidelity_achieved = 0.0;
    double fidelity = 0.0;        // F(rho0_B, rho1_B)
    double fidelity_bound = 0.0;  // 1 - D(rho0_B, rho1_B)
    double trace_distance = 0.0;
    double unitarity_residual = 0.0;
    double exact_accept_keep = 0.0;    // open the committed bit, no rotation
    double exact_accept_switch = 0.0;  // rotate with U_A and open the other bit
    RateEstimate empirical_keep;
    RateEstimate empirical_switch;
    ResourceEstimate resources;
};

namespace detail {

// Probability that Bob accepts the opening labelled by A-outcome `a` for
// declared bit `bit` when his register holds `post`.
inline double acceptance(const Purification &p, std::uint64_t a, int bit, const ComplexVector &post,
                         const boolfn::BooleanFn &f) {
    const std::size_t n = p.n;
    const std::uint64_t strings = std::uint64_t{1} << n;
    switch (p.protocol) {
        case ProtocolId::P1: {
            if (f.at(a) != bit) {
                return 0.0;
            }
            const auto [psi0, psi1] = states::nonorthogonal_pair(p.alpha);
            const BitString bits = BitString::from_index(a, n);
            std::vector<states::PureState> factors;
            for (std::size_t j = 0; j < n; ++j) {
                factors.push_back(bits[j] ? psi1 : psi0);
            }
            return std::norm(states::tensor_all(factors).amplitudes().dot(post));
        }
        case ProtocolId::P2: {
            const std::uint64_t value = a / strings;
            if (f.at(value) != bit) {
                return 0.0;
            }
            const auto expected =
                states::bb84_string(BitString::from_index(value, n), BitString::from_index(a % strings, n));
            return std::norm(expected.amplitudes().dot(post));
        }
        case ProtocolId::P6: {
            const BitString e = BitString::from_index(a % strings, n);
            if (e.is_zero()) {
                return 0.0;
            }
            const states::PureState state(n, post);
            double total = 0.0;
            std::size_t controls = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (!e[c]) {
                    continue;
                }
                states::PureState s = state;
                for (std::size_t t = 0; t < n; ++t) {
                    if (t != c && e[t]) {
                        s = states::apply_cnot(s, c, t);
                    }
                }
                const double minus = states::minus_probability(s, c);
                total += bit ? minus : 1.0 - minus;
                ++controls;
            }
            return total / static_cast<double>(controls);
        }
        default: return 0.0;
    }
}

struct OutcomeTable {
    std::vector<double> probability;
    std::vector<double> accept;

    double exact() const {
        double s = 0.0;
        for (std::size_t a = 0; a < probability.size(); ++a) {
            s += probability[a] * accept[a];
        }
        return s;
    }

    bool sample(Rng &rng) const {
        double u = rng.uniform();
        std::size_t a = 0;
        while (a + 1 < probability.size() && u >= probability[a]) {
            u -= probability[a];
            ++a;
        }
        return rng.bernoulli(accept[a]);
    }
};

// Alice measures A in the computational basis and opens the outcome as `bit`.
inline OutcomeTable outcome_table(const Purification &p, const ComplexMatrix &theta, int bit,
                                  const boolfn::BooleanFn &f) {
    OutcomeTable t;
    for (Eigen::Index a = 0; a < theta.rows(); ++a) {
        const ComplexVector row = theta.row(a).transpose();
        const double prob = row.squaredNorm();
        t.probability.push_back(prob);
        t.accept.push_back(prob > 1e-300 ? std::min(1.0, acceptance(p, static_cast<std::uint64_t>(a), bit, row / std::sqrt(prob), f)) : 0.0);
    }
    return t;
}

}  // namespace detail

/// Commits with the bit-0 purification, then estimates Bob's acceptance when
/// Alice opens 0 honestly and when she rotates with U_A and opens 1.
inline CheatReport run_cheat(ProtocolId protocol, std::size_t n, double alpha, std::size_t trials, Rng &rng) {
    const Purification p0 = build_purification(protocol, n, alpha, 0);
    const Purification p1 = build_purification(protocol, n, alpha, 1);
    const CheatUnitary cheat = solve_cheat_unitary(p0, p1);
    const boolfn::BooleanFn f = boolfn::BooleanFn::parity(n);

    CheatReport r;
    r.protocol = protocol;
    r.n = n;
    r.alpha = alpha;
    r.fidelity_achieved = cheat.fidelity_achieved;
    r.fidelity = cheat.transfer.fidelity;
    r.trace_distance = linalg::trace_distance(p0.reduced_b(), p1.reduced_b());
    r.fidelity_bound = 1.0 - r.trace_distance;
    r.unitarity_residual = cheat.unitarity_residual;
    r.resources = resource_estimate(n);

    const auto keep = detail::outcome_table(p0, p0.theta(), 0, f);
    const auto change = detail::outcome_table(p0, cheat.u_a * p0.theta(), 1, f);
    r.exact_accept_keep = keep.exact();
    r.exact_accept_switch = change.exact();
    for (std::size_t t = 0; t < trials; ++t) {
        r.empirical_keep.add(keep.sample(rng));
        r.empirical_switch.add(change.sample(rng));
    }
    return r;
}

}  // namespace qsbc::attack
