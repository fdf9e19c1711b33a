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

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qsbc/bits.hpp"
#include "qsbc/error.hpp"
#include "qsbc/linalg.hpp"
#include "qsbc/rng.hpp"

namespace qsbc::states {

using linalg::Complex;
using linalg::ComplexVector;

/// Unit-norm amplitude vector over the computational basis of k qubits.
/// Qubit 0 is the most significant bit of the basis index.
class PureState {
  public:
    PureState() = default;

    PureState(std::size_t qubit_count, ComplexVector amplitudes)
        : qubit_count_(qubit_count), amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() != (Eigen::Index{1} << qubit_count_)) {
            throw Error(ErrorKind::DimensionMismatch, "PureState: expected 2^" + std::to_string(qubit_count_) +
                                                          " amplitudes, got " + std::to_string(amplitudes_.size()));
        }
        const double norm = amplitudes_.norm();
        if (std::abs(norm - 1.0) > linalg::tol::kTrace) {
            throw Error(ErrorKind::InvalidArgument, "PureState: norm " + std::to_string(norm));
        }
    }

    /// Normalizes before validating; rejects the zero vector.
    static PureState normalized(std::size_t qubit_count, ComplexVector amplitudes) {
        const double norm = amplitudes.norm();
        if (norm == 0.0) {
            throw Error(ErrorKind::InvalidArgument, "PureState: zero vector");
        }
        return PureState(qubit_count, amplitudes / norm);
    }

    static PureState basis(const BitString &bits) {
        ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << bits.size());
        v(static_cast<Eigen::Index>(bits.to_index())) = 1.0;
        return PureState(bits.size(), std::move(v));
    }

    std::size_t qubit_count() const { return qubit_count_; }
    Eigen::Index dim() const { return amplitudes_.size(); }
    const ComplexVector &amplitudes() const { return amplitudes_; }

    Complex inner(const PureState &other) const {
        require_same_size(other, "inner");
        return amplitudes_.dot(other.amplitudes_);  // conjugates *this
    }

    PureState tensor(const PureState &other) const {
        return PureState(qubit_count_ + other.qubit_count_, linalg::tensor(amplitudes_, other.amplitudes_));
    }

    linalg::ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

    void require_same_size(const PureState &other, const char *where) const {
        if (other.qubit_count_ != qubit_count_) {
            throw Error(ErrorKind::DimensionMismatch, std::string(where) + ": " + std::to_string(qubit_count_) +
                                                          " vs " + std::to_string(other.qubit_count_) + " qubits");
        }
    }

    friend bool operator==(const PureState &a, const PureState &b) {
        return a.qubit_count_ == b.qubit_count_ && a.amplitudes_ == b.amplitudes_;
    }

  private:
    std::size_t qubit_count_ = 0;
    ComplexVector amplitudes_;
};

inline PureState tensor_all(const std::vector<PureState> &factors) {
    PureState out(0, ComplexVector::Ones(1));
    for (const auto &f : factors) {
        out = out.tensor(f);
    }
    return out;
}

inline PureState single_qubit(Complex a0, Complex a1) {
    ComplexVector v(2);
    v << a0, a1;
    return PureState(1, std::move(v));
}

/// |psi_b> = cos(alpha/2)|0> + (-1)^b sin(alpha/2)|1>, so <psi_0|psi_1> = cos(alpha).
inline std::pair<PureState, PureState> nonorthogonal_pair(double alpha) {
    if (!(alpha > 0.0 && alpha < M_PI)) {
        throw Error(ErrorKind::InvalidAngle, "nonorthogonal_pair: alpha must lie in (0, pi), got " + std::to_string(alpha));
    }
    const double c = std::cos(alpha / 2);
    const double s = std::sin(alpha / 2);
    return {single_qubit(c, s), single_qubit(c, -s)};
}

/// Conjugate-coding state |a>_basis: basis 0 is {|0>,|1>}, basis 1 is {|+>,|->}.
inline PureState bb84_state(int a, int basis) {
    if (basis == 0) {
        return a == 0 ? single_qubit(1.0, 0.0) : single_qubit(0.0, 1.0);
    }
    const double h = M_SQRT1_2;
    return a == 0 ? single_qubit(h, h) : single_qubit(h, -h);
}

/// Product of conjugate-coding states over a string and a basis string.
inline PureState bb84_string(const BitString &a, const BitString &bases) {
    if (a.size() != bases.size()) {
        throw Error(ErrorKind::LengthMismatch, "bb84_string: value and basis strings differ in length");
    }
    std::vector<PureState> factors;
    factors.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        factors.push_back(bb84_state(a[i], bases[i]));
    }
    return tensor_all(factors);
}

/// (|x> + (-1)^b |x xor e>) / sqrt(2) over n qubits.
inline PureState phase_state(const BitString &x, const BitString &e, int b) {
    if (x.size() != e.size()) {
        throw Error(ErrorKind::LengthMismatch, "phase_state: x and e differ in length");
    }
    if (e.is_zero()) {
        throw Error(ErrorKind::ZeroShift, "phase_state: e must be nonzero");
    }
    const std::size_t n = x.size();
    ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << n);
    v(static_cast<Eigen::Index>(x.to_index())) += M_SQRT1_2;
    v(static_cast<Eigen::Index>((x ^ e).to_index())) += (b ? -1.0 : 1.0) * M_SQRT1_2;
    return PureState(n, std::move(v));
}

struct MeasurementResult {
    bool hit;
    PureState post;
};

/// Two-outcome projective measurement {|onto><onto|, I - |onto><onto|}.
inline MeasurementResult measure_projective(const PureState &state, const PureState &onto, Rng &rng) {
    state.require_same_size(onto, "measure_projective");
    const Complex overlap = onto.inner(state);
    const double p_hit = std::min(1.0, std::norm(overlap));
    if (rng.uniform() < p_hit) {
        // keep the phase the projection gives
        return {true, PureState::normalized(state.qubit_count(), onto.amplitudes() * overlap)};
    }
    return {false, PureState::normalized(state.qubit_count(), state.amplitudes() - onto.amplitudes() * overlap)};
}

/// Per-qubit channel: loss (replacement by |0>) happens before the
/// computational-basis bit flip.
struct ChannelModel {
    double loss_prob = 0.0;
    double flip_prob = 0.0;

    void validate() const {
        if (!(loss_prob >= 0.0 && loss_prob <= 1.0 && flip_prob >= 0.0 && flip_prob <= 1.0)) {
            throw Error(ErrorKind::InvalidArgument, "ChannelModel: probabilities must lie in [0, 1]");
        }
    }

    bool noiseless() const { return loss_prob == 0.0 && flip_prob == 0.0; }

    /// Probability that a given qubit is disturbed at all.
    double disturbance_prob() const { return 1.0 - (1.0 - loss_prob) * (1.0 - flip_prob); }
};

struct ChannelOutput {
    PureState state;
    bool lost = false;  // any qubit of this state was replaced
};

namespace detail {

inline ComplexVector apply_bit_flip(const ComplexVector &v, std::size_t qubit, std::size_t qubit_count) {
    const Eigen::Index mask = Eigen::Index{1} << (qubit_count - 1 - qubit);
    ComplexVector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out(i ^ mask) = v(i);
    }
    return out;
}

// Loss of one qubit of a possibly entangled state, unravelled as a
// computational-basis measurement of that qubit followed by reset to |0>.
// Averaged over outcomes this is exactly rho -> Tr_q(rho) (x) |0><0|.
inline ComplexVector apply_loss(const ComplexVector &v, std::size_t qubit, std::size_t qubit_count, Rng &rng) {
    const Eigen::Index mask = Eigen::Index{1} << (qubit_count - 1 - qubit);
    double p_one = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i & mask) {
            p_one += std::norm(v(i));
        }
    }
    const bool one = rng.uniform() < p_one;
    ComplexVector out = ComplexVector::Zero(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (((i & mask) != 0) == one) {
            out(i & ~mask) = v(i);
        }
    }
    return out / out.norm();
}

}  // namespace detail

inline ChannelOutput transmit(const PureState &state, const ChannelModel &ch, Rng &rng) {
    ComplexVector v = state.amplitudes();
    bool lost = false;
    for (std::size_t q = 0; q < state.qubit_count(); ++q) {
        if (ch.loss_prob > 0.0 && rng.bernoulli(ch.loss_prob)) {
            v = detail::apply_loss(v, q, state.qubit_count(), rng);
            lost = true;
        }
        if (ch.flip_prob > 0.0 && rng.bernoulli(ch.flip_prob)) {
            v = detail::apply_bit_flip(v, q, state.qubit_count());
        }
    }
    return {PureState::normalized(state.qubit_count(), std::move(v)), lost};
}

inline std::vector<ChannelOutput> apply_channel(const std::vector<PureState> &qubits, const ChannelModel &ch, Rng &rng) {
    ch.validate();
    std::vector<ChannelOutput> out;
    out.reserve(qubits.size());
    for (const auto &q : qubits) {
        out.push_back(transmit(q, ch, rng));
    }
    return out;
}

/// CNOT on an n-qubit state.
inline PureState apply_cnot(const PureState &state, std::size_t control, std::size_t target) {
    const std::size_t n = state.qubit_count();
    const Eigen::Index cmask = Eigen::Index{1} << (n - 1 - control);
    const Eigen::Index tmask = Eigen::Index{1} << (n - 1 - target);
    const ComplexVector &v = state.amplitudes();
    ComplexVector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out((i & cmask) ? (i ^ tmask) : i) = v(i);
    }
    return PureState(n, std::move(out));
}

/// Probability that measuring `qubit` in {|+>,|->} yields |->.
inline double minus_probability(const PureState &state, std::size_t qubit) {
    const std::size_t n = state.qubit_count();
    const Eigen::Index mask = Eigen::Index{1} << (n - 1 - qubit);
    const ComplexVector &v = state.amplitudes();
    double p = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!(i & mask)) {
            p += 0.5 * std::norm(v(i) - v(i | mask));
        }
    }
    return std::min(1.0, p);
}

}  // namespace qsbc::states
