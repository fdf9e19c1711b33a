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


#include "qsbc/protocols.hpp"

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "oracles.hpp"

using namespace qsbc;
using namespace qsbc::protocols;

namespace {

ProtocolParams params(ProtocolId id, std::size_t n, std::size_t m) {
    ProtocolParams p;
    p.protocol = id;
    p.n = n;
    p.m = m;
    return p;
}

std::shared_ptr<const ecc::LinearCode> derived_code() {
    static const auto code = std::make_shared<const ecc::LinearCode>(ecc::derive_code(ecc::extended_hamming_8_4()));
    return code;
}

ProtocolParams p8(std::size_t n, std::size_t m, double flip = 0.0) {
    ProtocolParams p = params(ProtocolId::P8, n, m);
    p.code = derived_code();
    p.channel.flip_prob = flip;
    return p;
}

const ProtocolId kAll[] = {ProtocolId::P1, ProtocolId::P2, ProtocolId::P3,
                           ProtocolId::P5, ProtocolId::P6, ProtocolId::P8};

ProtocolParams any_params(ProtocolId id, std::size_t n, std::size_t m) {
    return id == ProtocolId::P8 ? p8(n, m) : params(id, n, m);
}

}  // namespace

TEST(Commit, P1EvenParityStrings) {
    Rng rng(51);
    auto t = commit(params(ProtocolId::P1, 3, 2), 0, rng);
    EXPECT_EQ(t.evidence.size(), 6U);
    ASSERT_EQ(t.secret.values.size(), 2U);
    for (const auto &a : t.secret.values) {
        EXPECT_EQ(a.weight() % 2, 0U);
    }
    EXPECT_EQ(t.phase, Phase::Committed);
    EXPECT_FALSE(t.verdict.has_value());
}

TEST(Commit, P3PublishesReference) {
    Rng rng(52);
    auto t = commit(params(ProtocolId::P3, 2, 1), 1, rng);
    EXPECT_EQ(t.evidence.size(), 4U);
    ASSERT_EQ(t.published.references.size(), 1U);
    EXPECT_EQ(t.published.references[0].size(), 2U);
}

TEST(Commit, P6SendsOneStatePerCommitment) {
    Rng rng(53);
    auto t = commit(params(ProtocolId::P6, 2, 1), 1, rng);
    ASSERT_EQ(t.evidence.size(), 1U);
    EXPECT_EQ(t.evidence[0].qubit_count(), 2U);
    const auto expected = states::phase_state(t.secret.xs[0], t.secret.shifts[0], 1);
    EXPECT_LE((t.evidence[0].amplitudes() - expected.amplitudes()).norm(), 1e-12);
}

TEST(Commit, EvidenceLengths) {
    Rng rng(54);
    for (auto id : kAll) {
        for (std::size_t m = 1; m <= 3; ++m) {
            const auto t = commit(any_params(id, 4, m), 1, rng);
            std::size_t expected = 4 * m;
            if (id == ProtocolId::P3) expected = 8 * m;
            if (id == ProtocolId::P6) expected = m;
            if (id == ProtocolId::P8) expected = 7 * m;
            EXPECT_EQ(t.evidence.size(), expected) << to_string(id);
        }
    }
}

TEST(Commit, P5EncodesBasisAndPublishesValues) {
    Rng rng(55);
    auto t = commit(params(ProtocolId::P5, 5, 3), 1, rng);
    ASSERT_EQ(t.published.values.size(), 3U);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(boolfn::parity(t.secret.bases[i]), 1);
        EXPECT_EQ(t.published.values[i], t.secret.values[i]);
    }
}

TEST(Params, Validation) {
    Rng rng(56);
    EXPECT_ERROR_KIND(commit(params(ProtocolId::P1, 0, 1), 0, rng), ErrorKind::ParamMismatch);
    auto bad_alpha = params(ProtocolId::P1, 2, 1);
    bad_alpha.alpha = 0.0;
    EXPECT_ERROR_KIND(commit(bad_alpha, 0, rng), ErrorKind::InvalidAngle);
    auto bad_fn = params(ProtocolId::P2, 3, 1);
    bad_fn.commit_fn = std::make_shared<const boolfn::BooleanFn>(boolfn::BooleanFn::parity(2));
    EXPECT_ERROR_KIND(commit(bad_fn, 0, rng), ErrorKind::ParamMismatch);
    EXPECT_ERROR_KIND(commit(params(ProtocolId::P8, 4, 1), 0, rng), ErrorKind::ParamMismatch);
    EXPECT_ERROR_KIND(commit(p8(6, 1), 0, rng), ErrorKind::ParamMismatch);
    auto stray_code = params(ProtocolId::P1, 4, 1);
    stray_code.code = derived_code();
    EXPECT_ERROR_KIND(commit(stray_code, 0, rng), ErrorKind::ParamMismatch);
    EXPECT_ERROR_KIND(commit(params(ProtocolId::P6, 13, 1), 0, rng), ErrorKind::DimensionTooLarge);
    EXPECT_ERROR_KIND(commit(params(ProtocolId::P1, 2, 1), 2, rng), ErrorKind::ParamMismatch);
}

TEST(Open, RequiresCommit) {
    SessionTranscript t;
    EXPECT_ERROR_KIND(open(t), ErrorKind::NotCommitted);
    Rng rng(57);
    EXPECT_ERROR_KIND(verify(t, Opening{}, rng), ErrorKind::NotCommitted);
}

TEST(Open, RevealsProtocolValues) {
    Rng rng(58);
    auto t1 = commit(params(ProtocolId::P1, 3, 2), 1, rng);
    const auto o1 = open(t1);
    EXPECT_EQ(o1.declared_bit, 1);
    EXPECT_EQ(o1.values, t1.secret.values);
    EXPECT_TRUE(o1.bases.empty());

    auto t5 = commit(params(ProtocolId::P5, 3, 2), 0, rng);
    const auto o5 = open(t5);
    EXPECT_TRUE(o5.values.empty());
    EXPECT_EQ(o5.bases, t5.secret.bases);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(boolfn::parity(o5.bases[i]), 0);
    }

    auto t8 = commit(p8(8, 1), 1, rng);
    const auto o8 = open(t8);
    EXPECT_EQ(o8.values, t8.secret.values);
    EXPECT_EQ(o8.bases, t8.secret.bases);
    EXPECT_EQ(o8.codewords, t8.secret.codewords);

    auto t6 = commit(params(ProtocolId::P6, 3, 1), 0, rng);
    EXPECT_EQ(open(t6).shifts, t6.secret.shifts);
}

TEST(Verify, HonestNoiselessAlwaysAccepts) {
    for (auto id : kAll) {
        for (std::size_t m : {1, 3}) {
            const auto r = honest_acceptance(any_params(id, 4, m), 1000, 59);
            EXPECT_EQ(r.successes, r.trials) << to_string(id) << " m=" << m;
        }
    }
}

TEST(Verify, VerdictOnlyAfterOpen) {
    Rng rng(60);
    auto t = commit(params(ProtocolId::P2, 3, 1), 0, rng);
    EXPECT_FALSE(t.verdict.has_value());
    const auto v = verify(t, open(t), rng);
    ASSERT_TRUE(t.verdict.has_value());
    EXPECT_EQ(t.phase, Phase::Verified);
    EXPECT_TRUE(v.accepted);
    EXPECT_EQ(v.checked, 3U);
    EXPECT_EQ(v.mismatches, 0U);
}

TEST(Verify, RejectsMalformedOpening) {
    Rng rng(61);
    auto t = commit(params(ProtocolId::P1, 3, 2), 0, rng);
    Opening o = open(t);
    o.values.pop_back();
    EXPECT_FALSE(verify(t, o, rng).accepted);
}

TEST(Verify, RejectsInconsistentDeclaredBit) {
    Rng rng(62);
    auto t = commit(params(ProtocolId::P1, 3, 1), 0, rng);
    Opening o = open(t);
    o.declared_bit = 1;
    const auto v = verify(t, o, rng);
    EXPECT_FALSE(v.accepted);
    EXPECT_EQ(v.mismatches, 0U);
}

TEST(P6, VerificationIsDeterministicForEveryInput) {
    for (std::size_t n = 1; n <= 4; ++n) {
        const std::uint64_t dim = std::uint64_t{1} << n;
        for (std::uint64_t x = 0; x < dim; ++x) {
            for (std::uint64_t e = 1; e < dim; ++e) {
                const BitString xs = BitString::from_index(x, n);
                const BitString es = BitString::from_index(e, n);
                for (int b : {0, 1}) {
                    const auto state = states::phase_state(xs, es, b);
                    for (std::size_t control = 0; control < n; ++control) {
                        if (!es[control]) continue;
                        auto s = state;
                        for (std::size_t target = 0; target < n; ++target) {
                            if (es[target] && target != control) s = states::apply_cnot(s, control, target);
                        }
                        EXPECT_NEAR(states::minus_probability(s, control), b ? 1.0 : 0.0, 1e-12);
                    }
                }
            }
        }
    }
}

TEST(P6, HonestAlwaysAcceptsAndOtherBitAlwaysRejected) {
    const auto honest = honest_acceptance(params(ProtocolId::P6, 4, 1), 1000, 63);
    EXPECT_EQ(honest.successes, honest.trials);
    const auto cheat = bitflip_cheat_success(params(ProtocolId::P6, 4, 2), 1000, 64);
    EXPECT_EQ(cheat.successes, 0U);
}

TEST(BitflipCheat, DeclaredBitFlips) {
    Rng rng(65);
    auto t = commit(params(ProtocolId::P1, 4, 1), 0, rng);
    const auto o = bitflip_cheat_open(t, {2});
    EXPECT_EQ(o.declared_bit, 1);
    EXPECT_EQ(hamming_distance(o.values[0], t.secret.values[0]), 1U);
}

TEST(BitflipCheat, InvalidPatterns) {
    Rng rng(66);
    auto t = commit(params(ProtocolId::P1, 4, 2), 0, rng);
    EXPECT_ERROR_KIND(bitflip_cheat_open(t, {1}), ErrorKind::InvalidFlipPattern);
    EXPECT_ERROR_KIND(bitflip_cheat_open(t, {1, 4}), ErrorKind::InvalidFlipPattern);
    auto t8 = commit(p8(4, 1), 0, rng);
    EXPECT_ERROR_KIND(bitflip_cheat_open(t8, {0}), ErrorKind::InvalidFlipPattern);
    // Only 11 maps to 1, so no single flip of 00 reaches the other preimage.
    auto p = params(ProtocolId::P1, 2, 1);
    p.commit_fn = std::make_shared<const boolfn::BooleanFn>(boolfn::BooleanFn::from_truth_table("0001"));
    for (int tries = 0; tries < 100; ++tries) {
        auto tf = commit(p, 0, rng);
        if (tf.secret.values[0].is_zero()) {
            EXPECT_ERROR_KIND(bitflip_cheat_open(tf, {0}), ErrorKind::InvalidFlipPattern);
            break;
        }
    }
}

TEST(BitflipCheat, SingleFlipDetectionIsHalfAtQuarterPi) {
    const std::size_t trials = 100000;
    const auto r = bitflip_cheat_success(params(ProtocolId::P1, 4, 1), trials, 67);
    EXPECT_NEAR(r.rate(), 0.5, 4 * binomial_sigma(0.5, trials));
}

TEST(BitflipCheat, P1SuccessIsCosinePower) {
    const std::size_t trials = 100000;
    const double expected = std::pow(0.5, 3);
    const auto r = bitflip_cheat_success(params(ProtocolId::P1, 4, 3), trials, 68);
    EXPECT_NEAR(r.rate(), expected, 3 * binomial_sigma(expected, trials));
    auto eighth = params(ProtocolId::P1, 3, 2);
    eighth.alpha = M_PI / 8;
    const double c = std::pow(std::cos(M_PI / 8), 4);
    EXPECT_NEAR(bitflip_cheat_success(eighth, 20000, 69).rate(), c, 4 * binomial_sigma(c, 20000));
}

TEST(BitflipCheat, ConjugateCodingRatesMatchEnumeration) {
    // Per string: value qubit |a>_x checked against |1-a>_{1-x}, plus the
    // P3 reference qubit |c>_x checked against |c>_{1-x}.
    const double per_value = oracle::bb84_pass_probability(0, 0, 1, 1);
    const double per_reference = oracle::bb84_pass_probability(0, 0, 0, 1);
    const double p2 = per_value;
    const double p3 = per_value * per_reference;
    const double p5 = oracle::bb84_pass_probability(1, 0, 1, 1);
    const std::size_t trials = 20000;
    EXPECT_NEAR(bitflip_cheat_success(params(ProtocolId::P2, 3, 1), trials, 70).rate(), p2,
                4 * binomial_sigma(p2, trials));
    EXPECT_NEAR(bitflip_cheat_success(params(ProtocolId::P3, 3, 1), trials, 71).rate(), p3,
                4 * binomial_sigma(p3, trials));
    EXPECT_NEAR(bitflip_cheat_success(params(ProtocolId::P5, 3, 2), trials, 72).rate(), p5 * p5,
                4 * binomial_sigma(p5 * p5, trials));
}

TEST(BitflipCheat, KeepingTheBasisIsAlwaysCaught) {
    Rng rng(73);
    for (int i = 0; i < 200; ++i) {
        auto t = commit(params(ProtocolId::P2, 3, 1), 0, rng);
        Opening o = open(t);
        o.declared_bit = 1;
        o.values[0].flip(0);
        EXPECT_FALSE(verify(t, o, rng).accepted);
    }
}

TEST(P5, ZeroValuesReproduceP1UpToFixedRotation) {
    // The unitary with psi_0 -> |0> and psi_1 -> |+> at alpha = pi/4.
    const auto [psi0, psi1] = states::nonorthogonal_pair(M_PI / 4);
    linalg::ComplexMatrix source(2, 2), target(2, 2);
    source << psi0.amplitudes(), psi1.amplitudes();
    target << states::bb84_state(0, 0).amplitudes(), states::bb84_state(0, 1).amplitudes();
    const linalg::ComplexMatrix u = target * source.inverse();
    ASSERT_LE(linalg::unitarity_residual(u), 1e-12);

    auto p5 = params(ProtocolId::P5, 4, 3);
    p5.zero_values = true;
    auto p1 = params(ProtocolId::P1, 4, 3);
    p1.alpha = M_PI / 4;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        for (int b : {0, 1}) {
            Rng r5(seed), r1(seed);
            const auto t5 = commit(p5, b, r5);
            const auto t1 = commit(p1, b, r1);
            ASSERT_EQ(t5.evidence.size(), t1.evidence.size());
            EXPECT_EQ(t5.secret.bases, t1.secret.values);
            for (std::size_t j = 0; j < t5.evidence.size(); ++j) {
                EXPECT_LE((u * t1.evidence[j].amplitudes() - t5.evidence[j].amplitudes()).norm(), 1e-12);
            }
        }
    }
}

TEST(Noise, BudgetFormula) {
    EXPECT_EQ(error_budget(0.0, 100), 0.0);
    EXPECT_NEAR(error_budget(0.05, 100), 0.05 + 3 * std::sqrt(0.05 * 0.95 / 100), 1e-15);
}

TEST(Noise, HonestRunsSurviveModestNoise) {
    for (auto id : {ProtocolId::P1, ProtocolId::P2, ProtocolId::P3, ProtocolId::P5}) {
        auto p = params(id, 8, 4);
        p.channel.flip_prob = 0.02;
        EXPECT_GT(honest_acceptance(p, 500, 74).rate(), 0.9) << to_string(id);
    }
}

TEST(Noise, NoiselessBudgetRejectsAnyMismatch) {
    auto p = params(ProtocolId::P2, 6, 2);
    p.error_allowance = 0.0;
    p.channel.flip_prob = 0.2;
    EXPECT_LT(honest_acceptance(p, 500, 75).rate(), 0.6);
}

TEST(P8, ErrorFractionConcentratesNearFlipProbability) {
    // Computational-basis flips disturb only the qubits sent in basis 0.
    const double flip = 0.05;
    const auto p = p8(8, 4, flip);
    std::size_t basis0 = 0, errors0 = 0, errors1 = 0;
    for (std::uint64_t i = 0; i < 2000; ++i) {
        Rng rng(mix_seed(76, i));
        const auto t = commit(p, rng.bit(), rng);
        for (std::size_t r = 0; r < p.m; ++r) {
            const BitString &word = t.secret.codewords[r];
            const BitString &bases = t.secret.bases[r];
            for (std::size_t j = 0; j < word.size(); ++j) {
                const auto &q = t.evidence[r * word.size() + j];
                const bool wrong = std::norm(states::bb84_state(word[j], bases[j]).inner(q)) < 0.5;
                if (bases[j] == 0) {
                    basis0++;
                    errors0 += wrong;
                } else {
                    errors1 += wrong;
                }
            }
        }
    }
    EXPECT_EQ(errors1, 0U);
    EXPECT_NEAR(static_cast<double>(errors0) / basis0, flip, 4 * binomial_sigma(flip, basis0));
}

TEST(P8, AcceptsWheneverEveryBlockIsWithinCorrectionRadius) {
    const auto p = p8(8, 2, 0.08);
    const auto &code = *p.code;
    std::size_t heavy = 0;
    for (std::uint64_t i = 0; i < 2000; ++i) {
        Rng rng(mix_seed(84, i));
        auto t = commit(p, rng.bit(), rng);
        // Evidence after bit flips is an eigenstate of the check, so the
        // error count per block is determined by the transcript.
        bool within = true;
        std::size_t errors = 0;
        for (std::size_t r = 0; r < p.m; ++r) {
            for (std::size_t blk = 0; blk < p.n / code.dimension(); ++blk) {
                std::size_t block_errors = 0;
                for (std::size_t j = 0; j < code.length(); ++j) {
                    const std::size_t pos = blk * code.length() + j;
                    const auto expected = states::bb84_state(t.secret.codewords[r][pos], t.secret.bases[r][pos]);
                    block_errors += std::norm(expected.inner(t.evidence[r * 14 + pos])) < 0.5;
                }
                within = within && block_errors <= code.t_prime();
                errors += block_errors;
            }
        }
        const auto v = verify(t, open(t), rng);
        const bool budget_ok = static_cast<double>(errors) / 28.0 <= error_budget(p.allowance(), 28);
        EXPECT_EQ(v.accepted, within && budget_ok) << v.reason;
        heavy += within ? 0 : 1;
    }
    EXPECT_GT(heavy, 0U);
}

TEST(P8, AcceptanceMatchesPerBlockCorrectionOracle) {
    // Each codeword qubit is wrong with probability flip/2 (basis-0 half).
    const double flip = 0.02;
    auto p = p8(4, 1, flip);
    const auto r = honest_acceptance(p, 20000, 77);
    const double expected = oracle::binomial_cdf(7, 1, flip / 2);
    EXPECT_NEAR(r.rate(), expected, 4 * binomial_sigma(expected, 20000));
}

TEST(SuperChannel, NoChangesIsHonest) {
    Rng rng(78);
    auto p = p8(8, 1);
    p.error_allowance = 0.05;
    auto t = commit(p, 1, rng);
    const auto o = super_channel_cheat(t, {});
    EXPECT_EQ(o.declared_bit, 1);
    EXPECT_TRUE(verify(t, o, rng).accepted);
}

TEST(SuperChannel, ChangeInsideRadiusIsCorrected) {
    Rng rng(79);
    auto p = p8(8, 1);
    p.error_allowance = 0.05;
    for (std::size_t pos = 0; pos < 14; ++pos) {
        auto t = commit(p, 0, rng);
        const auto o = super_channel_cheat(t, {pos});
        EXPECT_EQ(o.declared_bit, 0);
        EXPECT_EQ(o.values[0], t.secret.values[0]);
        EXPECT_EQ(o.bases[0], t.secret.bases[0]);
    }
}

TEST(SuperChannel, ParityChangeIsRejectedMoreOftenThanNoise) {
    const auto code = derived_code();
    std::vector<std::size_t> support;
    const BitString row = code->generator().row(0);
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j]) support.push_back(j);
    }
    auto cheat = p8(4, 1);
    cheat.error_allowance = 0.05;
    std::size_t cheat_rejected = 0, changed = 0;
    const std::size_t trials = 10000;
    for (std::size_t i = 0; i < trials; ++i) {
        Rng rng(mix_seed(80, i));
        auto t = commit(cheat, rng.bit(), rng);
        const auto o = super_channel_cheat(t, support);
        changed += o.declared_bit != t.committed_bit ? 1 : 0;
        cheat_rejected += verify(t, o, rng).accepted ? 0 : 1;
    }
    EXPECT_EQ(changed, trials);
    auto honest = p8(4, 1, 0.05);
    const double honest_rejection = 1.0 - honest_acceptance(honest, trials, 81).rate();
    EXPECT_GT(static_cast<double>(cheat_rejected) / trials, honest_rejection + 0.1);
}

TEST(SuperChannel, RequiresP8) {
    Rng rng(82);
    auto t = commit(params(ProtocolId::P1, 2, 1), 0, rng);
    EXPECT_ERROR_KIND(super_channel_cheat(t, {}), ErrorKind::ParamMismatch);
}

TEST(Runs, SeededRatesAreReproducible) {
    const auto a = bitflip_cheat_success(params(ProtocolId::P2, 3, 2), 300, 83);
    const auto b = bitflip_cheat_success(params(ProtocolId::P2, 3, 2), 300, 83);
    EXPECT_EQ(a.successes, b.successes);
}
