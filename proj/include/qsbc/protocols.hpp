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

// Commit / open / verify state machines for the qubit-string protocols.
//
// One session commits one bit with m strings. Evidence is stored at Bob's
// side after the channel: one single-qubit state per qubit for the
// conjugate-coding and non-orthogonal families, one n-qubit state per
// commitment for the relative-phase protocol.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qsbc/bits.hpp"
#include "qsbc/boolfn.hpp"
#include "qsbc/ecc.hpp"
#include "qsbc/error.hpp"
#include "qsbc/protocol_id.hpp"
#include "qsbc/rng.hpp"
#include "qsbc/states.hpp"
#include "qsbc/stats.hpp"

namespace qsbc::protocols {

using states::PureState;

inline constexpr std::size_t kMaxPhaseQubits = 12;

struct ProtocolParams {
    ProtocolId protocol = ProtocolId::P1;
    std::size_t n = 1;
    std::size_t m = 1;
    double alpha = M_PI / 4;  // P1 only
    std::shared_ptr<const boolfn::BooleanFn> commit_fn;  // parity of n bits when null
    states::ChannelModel channel;
    std::shared_ptr<const ecc::LinearCode> code;  // P8 only
    std::uint64_t seed = 0;
    /// Fraction of mismatching qubits Bob tolerates before the 3-sigma slack;
    /// defaults to the channel's per-qubit disturbance probability.
    std::optional<double> error_allowance;
    /// P5 only: send every value bit as 0.
    bool zero_values = false;

    const boolfn::BooleanFn &fn() const {
        if (!commit_fn) {
            throw Error(ErrorKind::ParamMismatch, "ProtocolParams: commit function not resolved");
        }
        return *commit_fn;
    }

    double allowance() const { return error_allowance.value_or(channel.disturbance_prob()); }

    /// Number of qubits in one commitment's evidence.
    std::size_t qubits_per_commitment() const {
        switch (protocol) {
            case ProtocolId::P3: return 2 * n;
            case ProtocolId::P8: return code ? n / code->dimension() * code->length() : 0;
            default: return n;
        }
    }

    /// Validates and fills in the default commit function.
    ProtocolParams resolved() const {
        ProtocolParams p = *this;
        if (p.n == 0 || p.m == 0) {
            throw Error(ErrorKind::ParamMismatch, "ProtocolParams: n and m must be positive");
        }
        if (p.protocol == ProtocolId::P1 && !(p.alpha > 0.0 && p.alpha < M_PI)) {
            throw Error(ErrorKind::InvalidAngle, "ProtocolParams: alpha must lie in (0, pi)");
        }
        p.channel.validate();
        if (p.error_allowance && !(*p.error_allowance >= 0.0 && *p.error_allowance <= 1.0)) {
            throw Error(ErrorKind::ParamMismatch, "ProtocolParams: error allowance must lie in [0, 1]");
        }
        if (p.protocol == ProtocolId::P6) {
            if (p.n > kMaxPhaseQubits) {
                throw Error(ErrorKind::DimensionTooLarge, "ProtocolParams: relative-phase states above " +
                                                              std::to_string(kMaxPhaseQubits) + " qubits");
            }
            return p;
        }
        if (!p.commit_fn) {
            p.commit_fn = std::make_shared<const boolfn::BooleanFn>(boolfn::BooleanFn::parity(p.n));
        }
        if (p.commit_fn->arity() != p.n) {
            throw Error(ErrorKind::ParamMismatch, "ProtocolParams: commit function arity " +
                                                      std::to_string(p.commit_fn->arity()) + " differs from n = " +
                                                      std::to_string(p.n));
        }
        if (p.protocol == ProtocolId::P8) {
            if (!p.code) {
                throw Error(ErrorKind::ParamMismatch, "ProtocolParams: P8 needs a code");
            }
            if (p.n % p.code->dimension() != 0) {
                throw Error(ErrorKind::ParamMismatch, "ProtocolParams: code dimension " +
                                                          std::to_string(p.code->dimension()) + " must divide n = " +
                                                          std::to_string(p.n));
            }
        } else if (p.code) {
            throw Error(ErrorKind::ParamMismatch, "ProtocolParams: a code is only used by P8");
        }
        return p;
    }
};

/// Alice's private choices, one entry per commitment string.
struct PrivateRecord {
    std::vector<BitString> values;      // a (P1, P2, P3, P5, P8)
    std::vector<BitString> bases;       // basis strings (P2, P3, P5), per-codeword-qubit bases (P8)
    std::vector<BitString> references;  // c (P3)
    std::vector<BitString> xs;          // x (P6)
    std::vector<BitString> shifts;      // e (P6)
    std::vector<BitString> codewords;   // concatenated block codewords (P8)

    friend bool operator==(const PrivateRecord &, const PrivateRecord &) = default;
};

/// Values announced during the commit phase.
struct PublicCommitData {
    std::vector<BitString> references;  // c (P3)
    std::vector<BitString> values;      // a (P5)

    friend bool operator==(const PublicCommitData &, const PublicCommitData &) = default;
};

struct Opening {
    int declared_bit = 0;
    std::vector<BitString> values;
    std::vector<BitString> bases;
    std::vector<BitString> shifts;
    std::vector<BitString> codewords;

    friend bool operator==(const Opening &, const Opening &) = default;
};

struct Verdict {
    bool accepted = false;
    std::string reason;
    std::size_t checked = 0;     // qubits (or commitments for P6) compared
    std::size_t mismatches = 0;
    double error_fraction = 0.0;
    double budget = 0.0;

    friend bool operator==(const Verdict &, const Verdict &) = default;
};

enum class Phase { Empty, Committed, Opened, Verified };

struct SessionTranscript {
    ProtocolParams params;
    Phase phase = Phase::Empty;
    int committed_bit = 0;
    PrivateRecord secret;
    PublicCommitData published;
    std::vector<PureState> evidence;
    std::optional<Opening> opening;
    std::optional<Verdict> verdict;
};

/// Largest tolerated mismatch fraction over `total` comparisons.
inline double error_budget(double allowance, std::size_t total) {
    if (allowance <= 0.0 || total == 0) {
        return 0.0;
    }
    return allowance + 3.0 * std::sqrt(allowance * (1.0 - allowance) / static_cast<double>(total));
}

namespace detail {

inline PureState p1_qubit(int bit, double alpha) {
    const auto [psi0, psi1] = states::nonorthogonal_pair(alpha);
    return bit ? psi1 : psi0;
}

inline void send(SessionTranscript &t, const PureState &state, Rng &rng) {
    t.evidence.push_back(states::transmit(state, t.params.channel, rng).state);
}

inline BitString random_nonzero(std::size_t n, Rng &rng) {
    const std::uint64_t count = (std::uint64_t{1} << n) - 1;
    return BitString::from_index(rng.below(count) + 1, n);
}

inline void require_phase(const SessionTranscript &t, const char *where) {
    if (t.phase == Phase::Empty) {
        throw Error(ErrorKind::NotCommitted, std::string(where) + ": no commitment has been made");
    }
}

// Measures `state` onto `expected`; true when the outcome matches.
inline bool check_qubit(const PureState &state, const PureState &expected, Rng &rng) {
    return states::measure_projective(state, expected, rng).hit;
}

inline Verdict reject(std::string reason) {
    Verdict v;
    v.reason = std::move(reason);
    return v;
}

inline bool lengths_ok(const std::vector<BitString> &strings, std::size_t count, std::size_t length) {
    if (strings.size() != count) {
        return false;
    }
    for (const auto &s : strings) {
        if (s.size() != length) {
            return false;
        }
    }
    return true;
}

}  // namespace detail

/// Commit phase: Alice's choices, evidence preparation and the channel.
inline SessionTranscript commit(const ProtocolParams &params, int b, Rng &rng) {
    if (b != 0 && b != 1) {
        throw Error(ErrorKind::ParamMismatch, "commit: bit must be 0 or 1");
    }
    SessionTranscript t;
    t.params = params.resolved();
    t.committed_bit = b;
    const auto &p = t.params;
    const std::size_t n = p.n;
    for (std::size_t i = 0; i < p.m; ++i) {
        switch (p.protocol) {
            case ProtocolId::P1: {
                const BitString a = boolfn::sample_preimage(p.fn(), b, rng);
                for (std::size_t j = 0; j < n; ++j) {
                    detail::send(t, detail::p1_qubit(a[j], p.alpha), rng);
                }
                t.secret.values.push_back(a);
                break;
            }
            case ProtocolId::P2: {
                const BitString a = boolfn::sample_preimage(p.fn(), b, rng);
                const BitString beta = BitString::random(n, rng);
                for (std::size_t j = 0; j < n; ++j) {
                    detail::send(t, states::bb84_state(a[j], beta[j]), rng);
                }
                t.secret.values.push_back(a);
                t.secret.bases.push_back(beta);
                break;
            }
            case ProtocolId::P3: {
                const BitString a = boolfn::sample_preimage(p.fn(), b, rng);
                const BitString beta = BitString::random(n, rng);
                const BitString c = BitString::random(n, rng);
                for (std::size_t j = 0; j < n; ++j) {
                    detail::send(t, states::bb84_state(a[j], beta[j]), rng);
                }
                for (std::size_t j = 0; j < n; ++j) {
                    detail::send(t, states::bb84_state(c[j], beta[j]), rng);
                }
                t.secret.values.push_back(a);
                t.secret.bases.push_back(beta);
                t.secret.references.push_back(c);
                t.published.references.push_back(c);
                break;
            }
            case ProtocolId::P5: {
                const BitString beta = boolfn::sample_preimage(p.fn(), b, rng);
                const BitString a = p.zero_values ? BitString(n) : BitString::random(n, rng);
                for (std::size_t j = 0; j < n; ++j) {
                    detail::send(t, states::bb84_state(a[j], beta[j]), rng);
                }
                t.secret.values.push_back(a);
                t.secret.bases.push_back(beta);
                t.published.values.push_back(a);
                break;
            }
            case ProtocolId::P6: {
                const BitString x = BitString::random(n, rng);
                const BitString e = detail::random_nonzero(n, rng);
                detail::send(t, states::phase_state(x, e, b), rng);
                t.secret.xs.push_back(x);
                t.secret.shifts.push_back(e);
                break;
            }
            case ProtocolId::P8: {
                const auto &code = *p.code;
                const BitString a = boolfn::sample_preimage(p.fn(), b, rng);
                BitString word(0);
                for (std::size_t off = 0; off < n; off += code.dimension()) {
                    word.append(code.encode(a.slice(off, code.dimension())));
                }
                const BitString beta = BitString::random(word.size(), rng);
                for (std::size_t j = 0; j < word.size(); ++j) {
                    detail::send(t, states::bb84_state(word[j], beta[j]), rng);
                }
                t.secret.values.push_back(a);
                t.secret.bases.push_back(beta);
                t.secret.codewords.push_back(word);
                break;
            }
        }
    }
    t.phase = Phase::Committed;
    return t;
}

/// Honest opening: the committed bit and the private values the protocol reveals.
inline Opening open(SessionTranscript &t) {
    detail::require_phase(t, "open");
    Opening o;
    o.declared_bit = t.committed_bit;
    switch (t.params.protocol) {
        case ProtocolId::P1: o.values = t.secret.values; break;
        case ProtocolId::P2:
        case ProtocolId::P3:
            o.values = t.secret.values;
            o.bases = t.secret.bases;
            break;
        case ProtocolId::P5: o.bases = t.secret.bases; break;
        case ProtocolId::P6: o.shifts = t.secret.shifts; break;
        case ProtocolId::P8:
            o.values = t.secret.values;
            o.bases = t.secret.bases;
            o.codewords = t.secret.codewords;
            break;
    }
    t.opening = o;
    t.phase = Phase::Opened;
    return o;
}

/// Cheating opening that declares 1 - b after changing one bit per string.
///
/// Value-carrying protocols flip the value bit; conjugate-coding protocols
/// also flip the declared basis there, which is Alice's best single-bit
/// change (keeping the basis would be detected with certainty). P5 flips the
/// basis bit. P6 simply declares the other bit and ignores `flips`.
inline Opening bitflip_cheat_open(SessionTranscript &t, const std::vector<std::size_t> &flips) {
    detail::require_phase(t, "bitflip_cheat_open");
    const auto &p = t.params;
    if (p.protocol == ProtocolId::P8) {
        throw Error(ErrorKind::InvalidFlipPattern, "P8 openings are altered through super_channel_cheat");
    }
    if (p.protocol != ProtocolId::P6 && flips.size() != p.m) {
        throw Error(ErrorKind::InvalidFlipPattern, "need exactly one flip per commitment string (" +
                                                       std::to_string(p.m) + "), got " + std::to_string(flips.size()));
    }
    for (auto f : flips) {
        if (p.protocol != ProtocolId::P6 && f >= p.n) {
            throw Error(ErrorKind::InvalidFlipPattern, "flip position " + std::to_string(f) + " outside the string");
        }
    }
    Opening o;
    o.declared_bit = 1 - t.committed_bit;
    switch (p.protocol) {
        case ProtocolId::P1:
        case ProtocolId::P2:
        case ProtocolId::P3: {
            o.values = t.secret.values;
            if (p.protocol != ProtocolId::P1) {
                o.bases = t.secret.bases;
            }
            for (std::size_t i = 0; i < p.m; ++i) {
                o.values[i].flip(flips[i]);
                if (p.protocol != ProtocolId::P1) {
                    o.bases[i].flip(flips[i]);
                }
                if (p.fn()(o.values[i]) != o.declared_bit) {
                    throw Error(ErrorKind::InvalidFlipPattern, "flip does not move string " + std::to_string(i) +
                                                                   " into the other preimage");
                }
            }
            break;
        }
        case ProtocolId::P5: {
            o.bases = t.secret.bases;
            for (std::size_t i = 0; i < p.m; ++i) {
                o.bases[i].flip(flips[i]);
                if (p.fn()(o.bases[i]) != o.declared_bit) {
                    throw Error(ErrorKind::InvalidFlipPattern, "flip does not move basis string " + std::to_string(i) +
                                                                   " into the other preimage");
                }
            }
            break;
        }
        case ProtocolId::P6: o.shifts = t.secret.shifts; break;
        case ProtocolId::P8: break;
    }
    t.opening = o;
    t.phase = Phase::Opened;
    return o;
}

/// Opening of a P8 session in which Alice changes the codeword bits at
/// `changed_positions` (flat indices into repetition 0's concatenated
/// codeword) and passes the change off as channel noise.
///
/// The altered word is decoded block by block; where decoding lands on a
/// different message Alice declares that message, its codeword, and the
/// opposite basis on every changed qubit. The declared bit is F of the new
/// string. Changes inside the correction radius decode back to the original
/// block and leave the opening honest.
inline Opening super_channel_cheat(SessionTranscript &t, const std::vector<std::size_t> &changed_positions) {
    detail::require_phase(t, "super_channel_cheat");
    const auto &p = t.params;
    if (p.protocol != ProtocolId::P8) {
        throw Error(ErrorKind::ParamMismatch, "super_channel_cheat needs a P8 session");
    }
    const auto &code = *p.code;
    Opening o;
    o.values = t.secret.values;
    o.bases = t.secret.bases;
    o.codewords = t.secret.codewords;
    BitString altered = t.secret.codewords[0];
    for (auto pos : changed_positions) {
        if (pos >= altered.size()) {
            throw Error(ErrorKind::InvalidFlipPattern, "changed position " + std::to_string(pos) + " outside the codeword");
        }
        altered.flip(pos);
    }
    const std::size_t k = code.dimension();
    const std::size_t len = code.length();
    BitString values(0);
    BitString word(0);
    for (std::size_t blk = 0; blk * k < p.n; ++blk) {
        const BitString original = t.secret.values[0].slice(blk * k, k);
        const auto decoded = code.decode(altered.slice(blk * len, len));
        const BitString message = decoded ? decoded->message : original;
        values.append(message);
        word.append(code.encode(message));
    }
    for (std::size_t j = 0; j < word.size(); ++j) {
        if (word[j] != t.secret.codewords[0][j]) {
            o.bases[0].flip(j);
        }
    }
    o.values[0] = values;
    o.codewords[0] = word;
    o.declared_bit = p.fn()(values);
    t.opening = o;
    t.phase = Phase::Opened;
    return o;
}

/// Bob's checks. Records the opening and the verdict in the transcript.
inline Verdict verify(SessionTranscript &t, const Opening &o, Rng &rng) {
    detail::require_phase(t, "verify");
    t.opening = o;
    const auto &p = t.params;
    const std::size_t n = p.n;
    const std::size_t m = p.m;
    auto finish = [&](Verdict v) {
        t.verdict = v;
        t.phase = Phase::Verified;
        return v;
    };
    if (o.declared_bit != 0 && o.declared_bit != 1) {
        return finish(detail::reject("declared bit is not 0 or 1"));
    }

    Verdict v;
    // Tallies mismatches against the budget, then the F-consistency check.
    auto conclude = [&](const std::vector<BitString> &fn_inputs) {
        v.error_fraction = v.checked ? static_cast<double>(v.mismatches) / static_cast<double>(v.checked) : 0.0;
        v.budget = error_budget(p.allowance(), v.checked);
        if (v.error_fraction > v.budget) {
            v.reason = "mismatch fraction exceeds the error budget";
            return finish(v);
        }
        for (std::size_t i = 0; i < fn_inputs.size(); ++i) {
            if (p.fn()(fn_inputs[i]) != o.declared_bit) {
                v.reason = "string " + std::to_string(i) + " is inconsistent with the declared bit";
                return finish(v);
            }
        }
        v.accepted = true;
        v.reason = "accepted";
        return finish(v);
    };

    switch (p.protocol) {
        case ProtocolId::P1: {
            if (!detail::lengths_ok(o.values, m, n)) {
                return finish(detail::reject("opening has the wrong shape"));
            }
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    v.checked++;
                    if (!detail::check_qubit(t.evidence[i * n + j], detail::p1_qubit(o.values[i][j], p.alpha), rng)) {
                        v.mismatches++;
                    }
                }
            }
            return conclude(o.values);
        }
        case ProtocolId::P2:
        case ProtocolId::P3: {
            if (!detail::lengths_ok(o.values, m, n) || !detail::lengths_ok(o.bases, m, n)) {
                return finish(detail::reject("opening has the wrong shape"));
            }
            const std::size_t stride = p.qubits_per_commitment();
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    v.checked++;
                    if (!detail::check_qubit(t.evidence[i * stride + j], states::bb84_state(o.values[i][j], o.bases[i][j]),
                                             rng)) {
                        v.mismatches++;
                    }
                }
                if (p.protocol == ProtocolId::P3) {
                    for (std::size_t j = 0; j < n; ++j) {
                        v.checked++;
                        const PureState expected = states::bb84_state(t.published.references[i][j], o.bases[i][j]);
                        if (!detail::check_qubit(t.evidence[i * stride + n + j], expected, rng)) {
                            v.mismatches++;
                        }
                    }
                }
            }
            return conclude(o.values);
        }
        case ProtocolId::P5: {
            if (!detail::lengths_ok(o.bases, m, n)) {
                return finish(detail::reject("opening has the wrong shape"));
            }
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    v.checked++;
                    const PureState expected = states::bb84_state(t.published.values[i][j], o.bases[i][j]);
                    if (!detail::check_qubit(t.evidence[i * n + j], expected, rng)) {
                        v.mismatches++;
                    }
                }
            }
            return conclude(o.bases);
        }
        case ProtocolId::P6: {
            if (!detail::lengths_ok(o.shifts, m, n)) {
                return finish(detail::reject("opening has the wrong shape"));
            }
            for (std::size_t i = 0; i < m; ++i) {
                const BitString &e = o.shifts[i];
                if (e.is_zero()) {
                    return finish(detail::reject("declared shift is zero"));
                }
                std::vector<std::size_t> support;
                for (std::size_t j = 0; j < n; ++j) {
                    if (e[j]) {
                        support.push_back(j);
                    }
                }
                const std::size_t control = support[rng.below(support.size())];
                PureState state = t.evidence[i];
                for (auto target : support) {
                    if (target != control) {
                        state = states::apply_cnot(state, control, target);
                    }
                }
                const int outcome = rng.bernoulli(states::minus_probability(state, control)) ? 1 : 0;
                v.checked++;
                if (outcome != o.declared_bit) {
                    v.mismatches++;
                }
            }
            return conclude({});
        }
        case ProtocolId::P8: {
            const auto &code = *p.code;
            const std::size_t width = p.qubits_per_commitment();
            if (!detail::lengths_ok(o.values, m, n) || !detail::lengths_ok(o.bases, m, width) ||
                !detail::lengths_ok(o.codewords, m, width)) {
                return finish(detail::reject("opening has the wrong shape"));
            }
            const std::size_t k = code.dimension();
            const std::size_t len = code.length();
            for (std::size_t i = 0; i < m; ++i) {
                BitString measured(width);
                for (std::size_t j = 0; j < width; ++j) {
                    const bool zero = detail::check_qubit(t.evidence[i * width + j], states::bb84_state(0, o.bases[i][j]), rng);
                    measured.set(j, zero ? 0 : 1);
                }
                for (std::size_t blk = 0; blk * k < n; ++blk) {
                    const BitString declared = o.values[i].slice(blk * k, k);
                    if (code.encode(declared) != o.codewords[i].slice(blk * len, len)) {
                        return finish(detail::reject("declared codeword is not the encoding of the declared block"));
                    }
                    const auto decoded = code.decode(measured.slice(blk * len, len));
                    if (!decoded) {
                        return finish(detail::reject("measured block is not decodable"));
                    }
                    if (decoded->message != declared) {
                        return finish(detail::reject("decoded block differs from the declared block"));
                    }
                }
                v.checked += width;
                v.mismatches += hamming_distance(measured, o.codewords[i]);
            }
            return conclude(o.values);
        }
    }
    return finish(detail::reject("unknown protocol"));
}

/// Honest commit, open and verify of a uniformly random bit.
inline bool run_honest(const ProtocolParams &params, Rng &rng) {
    const int b = rng.bit();
    auto t = commit(params, b, rng);
    return verify(t, open(t), rng).accepted;
}

/// Commit to b, then try to open 1 - b with one random flip per string.
inline bool run_bitflip_cheat(const ProtocolParams &params, Rng &rng) {
    const int b = rng.bit();
    auto t = commit(params, b, rng);
    std::vector<std::size_t> flips;
    for (std::size_t i = 0; i < t.params.m; ++i) {
        flips.push_back(static_cast<std::size_t>(rng.below(t.params.n)));
    }
    const Opening o = bitflip_cheat_open(t, flips);
    return verify(t, o, rng).accepted;
}

/// Super channel cheat that succeeds only if the bit actually changed and
/// Bob accepts.
inline bool run_super_channel_cheat(const ProtocolParams &params, const std::vector<std::size_t> &positions, Rng &rng) {
    const int b = rng.bit();
    auto t = commit(params, b, rng);
    const Opening o = super_channel_cheat(t, positions);
    return verify(t, o, rng).accepted && o.declared_bit != b;
}

/// Rate of `trial` over independent seeded runs; run i uses mix_seed(seed, i).
template <typename Trial>
RateEstimate estimate_rate(std::uint64_t seed, std::size_t trials, Trial &&trial) {
    RateEstimate r;
    for (std::size_t i = 0; i < trials; ++i) {
        Rng rng(mix_seed(seed, i));
        r.add(trial(rng));
    }
    return r;
}

inline RateEstimate honest_acceptance(const ProtocolParams &params, std::size_t trials, std::uint64_t seed) {
    const auto p = params.resolved();
    return estimate_rate(seed, trials, [&](Rng &rng) { return run_honest(p, rng); });
}

inline RateEstimate bitflip_cheat_success(const ProtocolParams &params, std::size_t trials, std::uint64_t seed) {
    const auto p = params.resolved();
    return estimate_rate(seed, trials, [&](Rng &rng) { return run_bitflip_cheat(p, rng); });
}

}  // namespace qsbc::protocols
