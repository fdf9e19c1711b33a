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


#include "qsbc/boolfn.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <map>

#include "expect_error.hpp"
#include "oracles.hpp"

using namespace qsbc;
using namespace qsbc::boolfn;

TEST(Parity, Examples) {
    EXPECT_EQ(parity(BitString::parse("0000")), 0);
    EXPECT_EQ(parity(BitString::parse("1011")), 1);
    EXPECT_ERROR_KIND(parity(BitString()), ErrorKind::EmptyInput);
    EXPECT_ERROR_KIND(BooleanFn::parity(0), ErrorKind::EmptyInput);
}

TEST(Parity, BalancedOnThreeInputs) {
    const auto f = BooleanFn::parity(3);
    EXPECT_EQ(f.preimage(0).size(), 4U);
    EXPECT_EQ(f.preimage(1).size(), 4U);
}

TEST(Parity, EachCoordinateIsIndependentOfOutput) {
    for (std::size_t n = 1; n <= 10; ++n) {
        const auto f = BooleanFn::parity(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t zero_given[2] = {0, 0};
            std::size_t total_given[2] = {0, 0};
            for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
                const int xi = BitString::from_index(x, n)[i];
                total_given[xi]++;
                zero_given[xi] += f.at(x) == 0 ? 1 : 0;
            }
            if (n == 1) {
                // The single input determines the output.
                EXPECT_EQ(zero_given[0], 1U);
                EXPECT_EQ(zero_given[1], 0U);
            } else {
                EXPECT_EQ(2 * zero_given[0], total_given[0]);
                EXPECT_EQ(2 * zero_given[1], total_given[1]);
            }
        }
    }
}

TEST(ImmunityOrder, Examples) {
    for (std::size_t n = 1; n <= 8; ++n) {
        EXPECT_EQ(correlation_immunity_order(BooleanFn::parity(n)), n - 1) << n;
    }
    const auto first = BooleanFn::from_function(3, [](const BitString &x) { return x[0]; });
    EXPECT_EQ(correlation_immunity_order(first), 0U);
    EXPECT_EQ(correlation_immunity_order(BooleanFn::constant(3, 0)), 3U);
}

TEST(ImmunityOrder, RejectsOversizedArity) {
    EXPECT_ERROR_KIND(BooleanFn::constant(21, 0), ErrorKind::ArityTooLarge);
}

TEST(ImmunityOrder, AgreesWithWalshSpectrum) {
    Rng rng(31);
    for (std::size_t n = 1; n <= 8; ++n) {
        for (int trial = 0; trial < 15; ++trial) {
            std::vector<std::uint8_t> table(std::size_t{1} << n);
            for (auto &v : table) {
                v = static_cast<std::uint8_t>(rng.bit());
            }
            const BooleanFn f(n, table);
            EXPECT_EQ(correlation_immunity_order(f), oracle::walsh_immunity_order(table, n)) << n;
        }
    }
}

TEST(ImmunityOrder, AgreesWithWalshOnStructuredFunctions) {
    // x0 ^ x1 ^ (x2 & x3) is first-order immune only.
    const auto f = BooleanFn::from_function(4, [](const BitString &x) { return x[0] ^ x[1] ^ (x[2] & x[3]); });
    EXPECT_EQ(correlation_immunity_order(f), oracle::walsh_immunity_order(f.table(), 4));
    EXPECT_EQ(correlation_immunity_order(f), 1U);
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto c = BooleanFn::constant(n, 1);
        EXPECT_EQ(correlation_immunity_order(c), oracle::walsh_immunity_order(c.table(), n));
    }
}

TEST(SamplePreimage, ParityTwoBitsIsUniform) {
    Rng rng(32);
    const auto f = BooleanFn::parity(2);
    std::map<std::string, std::size_t> counts;
    const std::size_t trials = 10000;
    for (std::size_t i = 0; i < trials; ++i) {
        counts[sample_preimage(f, 0, rng).to_string()]++;
    }
    ASSERT_EQ(counts.size(), 2U);
    const double sigma = std::sqrt(0.25 / trials);
    EXPECT_NEAR(counts["00"] / static_cast<double>(trials), 0.5, 4 * sigma);
    EXPECT_NEAR(counts["11"] / static_cast<double>(trials), 0.5, 4 * sigma);
}

TEST(SamplePreimage, Examples) {
    Rng rng(33);
    for (int i = 0; i < 20; ++i) {
        EXPECT_EQ(sample_preimage(BooleanFn::parity(1), 1, rng).to_string(), "1");
    }
    EXPECT_ERROR_KIND(sample_preimage(BooleanFn::constant(3, 0), 1, rng), ErrorKind::EmptyPreimage);
}

TEST(SamplePreimage, GeneralFunctionIsUniformOverPreimage) {
    Rng rng(34);
    const auto f = BooleanFn::from_truth_table("01101000");
    std::map<std::uint64_t, std::size_t> counts;
    const std::size_t trials = 30000;
    for (std::size_t i = 0; i < trials; ++i) {
        counts[sample_preimage(f, 1, rng).to_index()]++;
    }
    ASSERT_EQ(counts.size(), 3U);
    const double p = 1.0 / 3.0;
    for (const auto &[x, c] : counts) {
        EXPECT_EQ(f.at(x), 1);
        EXPECT_NEAR(c / static_cast<double>(trials), p, 4 * std::sqrt(p * (1 - p) / trials));
    }
}

TEST(SamplePreimage, OutputAlwaysMapsToRequestedBit) {
    Rng rng(35);
    for (std::size_t n = 1; n <= 8; ++n) {
        std::vector<std::uint8_t> table(std::size_t{1} << n);
        for (auto &v : table) {
            v = static_cast<std::uint8_t>(rng.bit());
        }
        table[0] = 0;
        table.back() = 1;
        const BooleanFn f(n, table);
        const auto g = BooleanFn::parity(n);
        for (int i = 0; i < 50; ++i) {
            for (int b : {0, 1}) {
                EXPECT_EQ(f(sample_preimage(f, b, rng)), b);
                EXPECT_EQ(g(sample_preimage(g, b, rng)), b);
            }
        }
    }
}

TEST(TruthTable, ParsesAndRoundTrips) {
    const auto f = BooleanFn::from_truth_table(" 0110\n");
    EXPECT_EQ(f.arity(), 2U);
    EXPECT_TRUE(f.is_parity());
    EXPECT_EQ(f.to_truth_table(), "0110");
    EXPECT_FALSE(BooleanFn::from_truth_table("0111").is_parity());
    EXPECT_ERROR_KIND(BooleanFn::from_truth_table("011"), ErrorKind::ParseError);
    EXPECT_ERROR_KIND(BooleanFn::from_truth_table("01x0"), ErrorKind::ParseError);
    EXPECT_ERROR_KIND(BooleanFn::from_truth_table(""), ErrorKind::ParseError);
}

TEST(TruthTable, LoadsFromFile) {
    const std::string path = ::testing::TempDir() + "qsbc_truth_table.txt";
    {
        std::ofstream out(path);
        out << "10010110\n";
    }
    const auto f = BooleanFn::load(path);
    std::remove(path.c_str());
    EXPECT_EQ(f.arity(), 3U);
    EXPECT_EQ(f(BitString::parse("000")), 1);
    EXPECT_EQ(f(BitString::parse("001")), 0);
    EXPECT_ERROR_KIND(BooleanFn::load(path), ErrorKind::ParseError);
}

TEST(BooleanFn, InputLengthChecked) {
    EXPECT_ERROR_KIND(BooleanFn::parity(3)(BitString::parse("01")), ErrorKind::LengthMismatch);
}
