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

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qsbc/error.hpp"
#include "qsbc/rng.hpp"

namespace qsbc {

/// Fixed-length string of classical bits. Position 0 is the leftmost
/// character and the most significant bit of to_index(), which matches the
/// qubit ordering used by every tensor product in the library.
class BitString {
  public:
    BitString() = default;
    explicit BitString(std::size_t length) : bits_(length, 0) {}
    explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
        for (auto &b : bits_) {
            b = b ? 1 : 0;
        }
    }

    static BitString parse(std::string_view text) {
        BitString out(text.size());
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] != '0' && text[i] != '1') {
                throw Error(ErrorKind::ParseError, "bitstring contains '" + std::string(1, text[i]) + "'");
            }
            out.bits_[i] = text[i] == '1';
        }
        return out;
    }

    static BitString from_index(std::uint64_t index, std::size_t length) {
        BitString out(length);
        for (std::size_t i = 0; i < length; ++i) {
            out.bits_[length - 1 - i] = (index >> i) & 1U;
        }
        return out;
    }

    static BitString random(std::size_t length, Rng &rng) {
        BitString out(length);
        for (auto &b : out.bits_) {
            b = static_cast<std::uint8_t>(rng.bit());
        }
        return out;
    }

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    int operator[](std::size_t i) const { return bits_[i]; }
    void set(std::size_t i, int value) { bits_[i] = value ? 1 : 0; }
    void flip(std::size_t i) { bits_[i] ^= 1U; }

    std::uint64_t to_index() const {
        std::uint64_t index = 0;
        for (auto b : bits_) {
            index = (index << 1) | b;
        }
        return index;
    }

    std::size_t weight() const {
        std::size_t w = 0;
        for (auto b : bits_) {
            w += b;
        }
        return w;
    }

    bool is_zero() const { return weight() == 0; }

    BitString operator^(const BitString &other) const {
        if (other.size() != size()) {
            throw Error(ErrorKind::LengthMismatch, "xor of bitstrings of different length");
        }
        BitString out(size());
        for (std::size_t i = 0; i < size(); ++i) {
            out.bits_[i] = bits_[i] ^ other.bits_[i];
        }
        return out;
    }

    BitString slice(std::size_t offset, std::size_t length) const {
        return BitString(std::vector<std::uint8_t>(bits_.begin() + static_cast<std::ptrdiff_t>(offset),
                                                   bits_.begin() + static_cast<std::ptrdiff_t>(offset + length)));
    }

    void append(const BitString &tail) { bits_.insert(bits_.end(), tail.bits_.begin(), tail.bits_.end()); }

    std::string to_string() const {
        std::string s(size(), '0');
        for (std::size_t i = 0; i < size(); ++i) {
            s[i] = bits_[i] ? '1' : '0';
        }
        return s;
    }

    const std::vector<std::uint8_t> &bits() const { return bits_; }

    friend bool operator==(const BitString &, const BitString &) = default;

  private:
    std::vector<std::uint8_t> bits_;
};

inline std::size_t hamming_distance(const BitString &a, const BitString &b) { return (a ^ b).weight(); }

}  // namespace qsbc
