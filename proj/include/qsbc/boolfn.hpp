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

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qsbc/bits.hpp"
#include "qsbc/error.hpp"
#include "qsbc/rng.hpp"

namespace qsbc::boolfn {

inline constexpr std::size_t kMaxArity = 20;

inline int parity(const BitString &a) {
    if (a.empty()) {
        throw Error(ErrorKind::EmptyInput, "parity of an empty string");
    }
    return static_cast<int>(a.weight() & 1U);
}

/// Boolean function on {0,1}^n stored as a truth table indexed by
/// BitString::to_index().
class BooleanFn {
  public:
    BooleanFn() = default;

    BooleanFn(std::size_t arity, std::vector<std::uint8_t> table) : arity_(arity), table_(std::move(table)) {
        if (arity_ > kMaxArity) {
            throw Error(ErrorKind::ArityTooLarge, "arity " + std::to_string(arity_) + " exceeds " + std::to_string(kMaxArity));
        }
        if (table_.size() != (std::size_t{1} << arity_)) {
            throw Error(ErrorKind::LengthMismatch, "truth table needs 2^" + std::to_string(arity_) + " entries");
        }
        for (auto &v : table_) {
            v = v ? 1 : 0;
        }
        index_preimages();
    }

    static BooleanFn from_function(std::size_t arity, const std::function<int(const BitString &)> &f) {
        if (arity > kMaxArity) {
            throw Error(ErrorKind::ArityTooLarge, "arity " + std::to_string(arity));
        }
        std::vector<std::uint8_t> table(std::size_t{1} << arity);
        for (std::size_t x = 0; x < table.size(); ++x) {
            table[x] = static_cast<std::uint8_t>(f(BitString::from_index(x, arity)) & 1);
        }
        return BooleanFn(arity, std::move(table));
    }

    static BooleanFn parity(std::size_t arity) {
        if (arity == 0) {
            throw Error(ErrorKind::EmptyInput, "parity needs at least one input");
        }
        BooleanFn f = from_function(arity, [](const BitString &a) { return boolfn::parity(a); });
        f.is_parity_ = true;
        return f;
    }

    static BooleanFn constant(std::size_t arity, int value) {
        return BooleanFn(arity, std::vector<std::uint8_t>(std::size_t{1} << arity, static_cast<std::uint8_t>(value)));
    }

    /// Truth table as 2^n characters of '0'/'1' (surrounding whitespace ignored).
    static BooleanFn from_truth_table(const std::string &text) {
        std::string bits;
        for (char ch : text) {
            if (ch == '0' || ch == '1') {
                bits.push_back(ch);
            } else if (!std::isspace(static_cast<unsigned char>(ch))) {
                throw Error(ErrorKind::ParseError, "truth table contains '" + std::string(1, ch) + "'");
            }
        }
        std::size_t arity = 0;
        while ((std::size_t{1} << arity) < bits.size()) {
            ++arity;
        }
        if (bits.empty() || (std::size_t{1} << arity) != bits.size()) {
            throw Error(ErrorKind::ParseError, "truth table length " + std::to_string(bits.size()) + " is not a power of two");
        }
        if (arity > kMaxArity) {
            throw Error(ErrorKind::ArityTooLarge, "truth table arity " + std::to_string(arity));
        }
        std::vector<std::uint8_t> table(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i) {
            table[i] = bits[i] == '1';
        }
        BooleanFn f(arity, std::move(table));
        f.is_parity_ = arity > 0 && f == parity(arity);
        return f;
    }

    static BooleanFn load(const std::string &path) {
        std::ifstream in(path);
        if (!in) {
            throw Error(ErrorKind::ParseError, "cannot open truth table file " + path);
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        return from_truth_table(buffer.str());
    }

    std::size_t arity() const { return arity_; }
    bool is_parity() const { return is_parity_; }
    const std::vector<std::uint8_t> &table() const { return table_; }

    int operator()(const BitString &x) const {
        if (x.size() != arity_) {
            throw Error(ErrorKind::LengthMismatch, "BooleanFn: input length " + std::to_string(x.size()) +
                                                       ", arity " + std::to_string(arity_));
        }
        return table_[x.to_index()];
    }

    int at(std::uint64_t index) const { return table_[index]; }

    const std::vector<std::uint64_t> &preimage(int b) const { return preimages_[b & 1]; }

    std::string to_truth_table() const {
        std::string s(table_.size(), '0');
        for (std::size_t i = 0; i < table_.size(); ++i) {
            s[i] = table_[i] ? '1' : '0';
        }
        return s;
    }

    friend bool operator==(const BooleanFn &a, const BooleanFn &b) {
        return a.arity_ == b.arity_ && a.table_ == b.table_;
    }

  private:
    void index_preimages() {
        preimages_[0].clear();
        preimages_[1].clear();
        for (std::uint64_t x = 0; x < table_.size(); ++x) {
            preimages_[table_[x]].push_back(x);
        }
    }

    std::size_t arity_ = 0;
    std::vector<std::uint8_t> table_;
    std::vector<std::uint64_t> preimages_[2];
    bool is_parity_ = false;
};

/// Largest n0 such that the output is statistically independent of every
/// n0-subset of uniformly distributed inputs, checked by counting.
inline std::size_t correlation_immunity_order(const BooleanFn &f) {
    const std::size_t n = f.arity();
    if (n > kMaxArity) {
        throw Error(ErrorKind::ArityTooLarge, "correlation_immunity_order");
    }
    const std::uint64_t total = std::uint64_t{1} << n;
    const std::uint64_t ones = f.preimage(1).size();
    const std::uint64_t zeros = total - ones;

    std::size_t order = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        // Enumerate k-subsets as bitmasks over input positions.
        std::uint64_t subset = (std::uint64_t{1} << k) - 1;
        bool all_independent = true;
        while (subset < total && all_independent) {
            std::vector<std::uint64_t> count_one(std::uint64_t{1} << k, 0);
            std::vector<std::uint64_t> count_zero(std::uint64_t{1} << k, 0);
            for (std::uint64_t x = 0; x < total; ++x) {
                std::uint64_t key = 0;
                std::size_t slot = 0;
                for (std::size_t pos = 0; pos < n; ++pos) {
                    if (subset >> pos & 1U) {
                        key |= ((x >> pos) & 1U) << slot++;
                    }
                }
                (f.at(x) ? count_one : count_zero)[key]++;
            }
            // Pr[z, s] = Pr[z] Pr[s] with Pr[s] = 2^-k.
            for (std::uint64_t s = 0; s < count_one.size(); ++s) {
                if ((count_one[s] << k) != ones || (count_zero[s] << k) != zeros) {
                    all_independent = false;
                    break;
                }
            }
            // next subset with the same popcount (Gosper's hack)
            const std::uint64_t c = subset & (0 - subset);
            const std::uint64_t r = subset + c;
            subset = (((r ^ subset) >> 2) / c) | r;
        }
        if (!all_independent) {
            break;
        }
        order = k;
    }
    return order;
}

/// Uniformly random element of f^-1(b).
inline BitString sample_preimage(const BooleanFn &f, int b, Rng &rng) {
    const std::size_t n = f.arity();
    if (f.is_parity()) {
        BitString a = BitString::random(n, rng);
        if (parity(a) != b) {
            a.flip(n - 1);
        }
        return a;
    }
    const auto &pre = f.preimage(b);
    if (pre.empty()) {
        throw Error(ErrorKind::EmptyPreimage, "function never takes the value " + std::to_string(b));
    }
    return BitString::from_index(pre[rng.below(pre.size())], n);
}

}  // namespace qsbc::boolfn
