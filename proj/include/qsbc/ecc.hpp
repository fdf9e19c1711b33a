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

// Binary linear codes for commitments over noisy channels.
//
// A base code C1 is given by its check matrix H (eta rows indexed by codeword
// position, eta - xi columns) with exactly one all-ones row. Dropping that
// row leaves H'; the derived code C has generator (H')^T, so every codeword
// bit is a linear form of the message that never equals the message parity.
// Any 2t rows of H being independent then makes every 2t - 1 codeword bits
// independent of the parity of the message.
//
// Codewords are row vectors: codeword = message * G.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "qsbc/bits.hpp"
#include "qsbc/boolfn.hpp"
#include "qsbc/error.hpp"

namespace qsbc::ecc {

inline constexpr std::size_t kMaxExhaustiveDimension = 20;
inline constexpr std::size_t kMaxIndependenceDimension = 12;

class Gf2Matrix {
  public:
    Gf2Matrix() = default;
    Gf2Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static Gf2Matrix from_rows(const std::vector<BitString> &rows) {
        if (rows.empty()) {
            return {};
        }
        Gf2Matrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_) {
                throw Error(ErrorKind::LengthMismatch, "Gf2Matrix: ragged rows");
            }
            for (std::size_t j = 0; j < m.cols_; ++j) {
                m.set(i, j, rows[i][j]);
            }
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    int operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, int v) { data_[i * cols_ + j] = v ? 1 : 0; }

    BitString row(std::size_t i) const {
        BitString r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) {
            r.set(j, (*this)(i, j));
        }
        return r;
    }

    Gf2Matrix transpose() const {
        Gf2Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                t.set(j, i, (*this)(i, j));
            }
        }
        return t;
    }

    Gf2Matrix operator*(const Gf2Matrix &other) const {
        if (cols_ != other.rows_) {
            throw Error(ErrorKind::DimensionMismatch, "Gf2Matrix product shapes");
        }
        Gf2Matrix out(rows_, other.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                if ((*this)(i, k)) {
                    for (std::size_t j = 0; j < other.cols_; ++j) {
                        out.data_[i * out.cols_ + j] ^= other(k, j);
                    }
                }
            }
        }
        return out;
    }

    bool is_zero() const {
        for (auto v : data_) {
            if (v) {
                return false;
            }
        }
        return true;
    }

    /// Reduced row echelon form; returns the pivot column of each pivot row.
    std::vector<std::size_t> reduce(Gf2Matrix &rref) const {
        rref = *this;
        std::vector<std::size_t> pivots;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
            std::size_t p = r;
            while (p < rows_ && !rref(p, c)) {
                ++p;
            }
            if (p == rows_) {
                continue;
            }
            rref.swap_rows(p, r);
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i != r && rref(i, c)) {
                    rref.add_row(r, i);
                }
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    std::size_t rank() const {
        Gf2Matrix rref;
        return reduce(rref).size();
    }

    /// Basis of {x : M x = 0} as the columns of a cols x (cols - rank) matrix.
    Gf2Matrix null_space() const {
        Gf2Matrix rref;
        const auto pivots = reduce(rref);
        std::vector<bool> is_pivot(cols_, false);
        for (auto p : pivots) {
            is_pivot[p] = true;
        }
        std::vector<std::size_t> free;
        for (std::size_t c = 0; c < cols_; ++c) {
            if (!is_pivot[c]) {
                free.push_back(c);
            }
        }
        Gf2Matrix basis(cols_, free.size());
        for (std::size_t k = 0; k < free.size(); ++k) {
            basis.set(free[k], k, 1);
            for (std::size_t r = 0; r < pivots.size(); ++r) {
                basis.set(pivots[r], k, rref(r, free[k]));
            }
        }
        return basis;
    }

    friend bool operator==(const Gf2Matrix &, const Gf2Matrix &) = default;

  private:
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) {
            return;
        }
        for (std::size_t j = 0; j < cols_; ++j) {
            std::swap(data_[a * cols_ + j], data_[b * cols_ + j]);
        }
    }

    void add_row(std::size_t from, std::size_t to) {
        for (std::size_t j = 0; j < cols_; ++j) {
            data_[to * cols_ + j] ^= data_[from * cols_ + j];
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Row vector times matrix over GF(2).
inline BitString multiply(const BitString &v, const Gf2Matrix &m) {
    if (v.size() != m.rows()) {
        throw Error(ErrorKind::LengthMismatch,
                    "vector of length " + std::to_string(v.size()) + " times matrix with " + std::to_string(m.rows()) + " rows");
    }
    BitString out(m.cols());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i]) {
            for (std::size_t j = 0; j < m.cols(); ++j) {
                if (m(i, j)) {
                    out.flip(j);
                }
            }
        }
    }
    return out;
}

namespace detail {

// Calls visit(mask) for every subset of {0..n-1} of size k, in increasing order.
template <typename Visit>
void for_each_subset(std::size_t n, std::size_t k, Visit &&visit) {
    if (k > n) {
        return;
    }
    if (k == 0) {
        visit(std::uint64_t{0});
        return;
    }
    std::uint64_t subset = (std::uint64_t{1} << k) - 1;
    const std::uint64_t limit = std::uint64_t{1} << n;
    while (subset < limit) {
        if (!visit(subset)) {
            return;
        }
        const std::uint64_t c = subset & (0 - subset);
        const std::uint64_t r = subset + c;
        subset = (((r ^ subset) >> 2) / c) | r;
    }
}

}  // namespace detail

struct DecodeResult {
    BitString message;
    BitString codeword;
    std::size_t corrected_errors = 0;
};

class LinearCode {
  public:
    LinearCode() = default;

    /// Builds check matrix, decoding tables and the error-correcting ability
    /// from a full-rank generator.
    static LinearCode from_generator(const Gf2Matrix &generator) {
        LinearCode code;
        code.generator_ = generator;
        const std::size_t k = generator.rows();
        const std::size_t length = generator.cols();
        if (k == 0 || length == 0) {
            throw Error(ErrorKind::InvalidArgument, "LinearCode: empty generator");
        }
        if (k > kMaxExhaustiveDimension) {
            throw Error(ErrorKind::DimensionTooLarge, "LinearCode: dimension " + std::to_string(k));
        }
        Gf2Matrix rref;
        const auto pivots = generator.reduce(rref);
        if (pivots.size() != k) {
            throw Error(ErrorKind::RowDependence, "LinearCode: generator rank " + std::to_string(pivots.size()) +
                                                      " is below its " + std::to_string(k) + " rows");
        }
        code.check_ = generator.null_space();
        code.right_inverse_ = right_inverse(generator, pivots);
        code.min_distance_ = code.compute_min_distance();
        code.t_prime_ = (code.min_distance_ - 1) / 2;
        code.build_syndrome_table();
        return code;
    }

    std::size_t length() const { return generator_.cols(); }
    std::size_t dimension() const { return generator_.rows(); }
    const Gf2Matrix &generator() const { return generator_; }
    /// length x (length - dimension); generator * check == 0.
    const Gf2Matrix &check() const { return check_; }
    std::size_t min_distance() const { return min_distance_; }
    std::size_t t_prime() const { return t_prime_; }

    BitString encode(const BitString &message) const {
        if (message.size() != dimension()) {
            throw Error(ErrorKind::LengthMismatch, "encode: message length " + std::to_string(message.size()) +
                                                       ", dimension " + std::to_string(dimension()));
        }
        return multiply(message, generator_);
    }

    BitString syndrome(const BitString &word) const { return multiply(word, check_); }

    /// Message of the unique codeword within distance t' of `word`, or
    /// nullopt when the syndrome has no correctable error pattern.
    std::optional<DecodeResult> decode(const BitString &word) const {
        if (word.size() != length()) {
            throw Error(ErrorKind::LengthMismatch, "decode: word length " + std::to_string(word.size()) +
                                                       ", code length " + std::to_string(length()));
        }
        const auto it = syndrome_table_.find(syndrome(word).to_index());
        if (it == syndrome_table_.end()) {
            return std::nullopt;
        }
        DecodeResult out;
        out.codeword = word ^ it->second;
        out.message = multiply(out.codeword, right_inverse_);
        out.corrected_errors = it->second.weight();
        return out;
    }

    std::vector<BitString> codewords() const {
        std::vector<BitString> out;
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << dimension()); ++m) {
            out.push_back(encode(BitString::from_index(m, dimension())));
        }
        return out;
    }

  private:
    static Gf2Matrix right_inverse(const Gf2Matrix &g, const std::vector<std::size_t> &pivots) {
        // The pivot columns of g form an invertible k x k block S; a codeword
        // restricted to them equals message * S.
        const std::size_t k = g.rows();
        Gf2Matrix aug(k, 2 * k);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                aug.set(i, j, g(i, pivots[j]));
            }
            aug.set(i, k + i, 1);
        }
        Gf2Matrix rref;
        aug.reduce(rref);
        Gf2Matrix inverse(g.cols(), k);
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t c = 0; c < k; ++c) {
                inverse.set(pivots[j], c, rref(j, k + c));
            }
        }
        return inverse;
    }

    std::size_t compute_min_distance() const {
        std::size_t best = length();
        for (std::uint64_t m = 1; m < (std::uint64_t{1} << dimension()); ++m) {
            best = std::min(best, encode(BitString::from_index(m, dimension())).weight());
        }
        return best;
    }

    void build_syndrome_table() {
        syndrome_table_.clear();
        for (std::size_t w = 0; w <= t_prime_; ++w) {
            detail::for_each_subset(length(), w, [&](std::uint64_t mask) {
                BitString error(length());
                for (std::size_t j = 0; j < length(); ++j) {
                    if (mask >> j & 1U) {
                        error.set(j, 1);
                    }
                }
                const auto [it, inserted] = syndrome_table_.emplace(syndrome(error).to_index(), error);
                if (!inserted) {
                    throw Error(ErrorKind::InvalidArgument, "LinearCode: two correctable errors share a syndrome");
                }
                return true;
            });
        }
    }

    Gf2Matrix generator_;
    Gf2Matrix check_;
    Gf2Matrix right_inverse_;
    std::size_t min_distance_ = 0;
    std::size_t t_prime_ = 0;
    std::unordered_map<std::uint64_t, BitString> syndrome_table_;
};

inline std::optional<DecodeResult> syndrome_decode(const LinearCode &code, const BitString &word) {
    return code.decode(word);
}

/// Base code C1 described by its position-by-check matrix H.
struct BaseCodeSpec {
    std::size_t eta = 0;
    std::size_t xi = 0;
    std::size_t t = 0;
    Gf2Matrix h;  // eta x (eta - xi)

    std::vector<std::size_t> all_ones_rows() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < h.rows(); ++i) {
            if (h.row(i).weight() == h.cols()) {
                out.push_back(i);
            }
        }
        return out;
    }

    void validate() const {
        if (eta < 2 || xi == 0 || xi >= eta) {
            throw Error(ErrorKind::InvalidArgument, "base code needs 0 < xi < eta");
        }
        if (h.rows() != eta || h.cols() != eta - xi) {
            throw Error(ErrorKind::DimensionMismatch, "H must be eta x (eta - xi)");
        }
        if (all_ones_rows().size() != 1) {
            throw Error(ErrorKind::NoAllOnesRow, "H must contain exactly one all-ones row, found " +
                                                     std::to_string(all_ones_rows().size()));
        }
        bool independent = true;
        std::uint64_t witness = 0;
        detail::for_each_subset(eta, 2 * t, [&](std::uint64_t mask) {
            std::vector<BitString> rows;
            for (std::size_t i = 0; i < eta; ++i) {
                if (mask >> i & 1U) {
                    rows.push_back(h.row(i));
                }
            }
            if (!rows.empty() && Gf2Matrix::from_rows(rows).rank() != rows.size()) {
                independent = false;
                witness = mask;
                return false;
            }
            return true;
        });
        if (!independent) {
            throw Error(ErrorKind::RowDependence, "rows of H in subset mask " + std::to_string(witness) + " are dependent");
        }
    }

    /// Text form: "eta xi t", then eta lines of eta - xi space-separated bits.
    static BaseCodeSpec parse(const std::string &text) {
        std::istringstream in(text);
        BaseCodeSpec spec;
        long long eta = 0, xi = 0, t = 0;
        if (!(in >> eta >> xi >> t) || eta <= 0 || xi < 0 || t < 0 || xi >= eta) {
            throw Error(ErrorKind::ParseError, "base code header must be 'eta xi t' with 0 <= xi < eta");
        }
        spec.eta = static_cast<std::size_t>(eta);
        spec.xi = static_cast<std::size_t>(xi);
        spec.t = static_cast<std::size_t>(t);
        spec.h = Gf2Matrix(spec.eta, spec.eta - spec.xi);
        for (std::size_t i = 0; i < spec.eta; ++i) {
            for (std::size_t j = 0; j < spec.eta - spec.xi; ++j) {
                int bit = -1;
                if (!(in >> bit) || (bit != 0 && bit != 1)) {
                    throw Error(ErrorKind::ParseError, "H entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                                           ") missing or not a bit");
                }
                spec.h.set(i, j, bit);
            }
        }
        std::string extra;
        if (in >> extra) {
            throw Error(ErrorKind::ParseError, "trailing content after H: '" + extra + "'");
        }
        return spec;
    }

    static BaseCodeSpec load(const std::string &path) {
        std::ifstream in(path);
        if (!in) {
            throw Error(ErrorKind::ParseError, "cannot open base code file " + path);
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        return parse(buffer.str());
    }

    std::string to_text() const {
        std::ostringstream out;
        out << eta << ' ' << xi << ' ' << t << '\n';
        for (std::size_t i = 0; i < h.rows(); ++i) {
            for (std::size_t j = 0; j < h.cols(); ++j) {
                out << (j ? " " : "") << h(i, j);
            }
            out << '\n';
        }
        return out.str();
    }
};

/// Extended Hamming [8,4,4]: row i of H is (binary of i on three bits, 1),
/// so position 7 carries the all-ones row.
inline BaseCodeSpec extended_hamming_8_4() {
    BaseCodeSpec spec;
    spec.eta = 8;
    spec.xi = 4;
    spec.t = 1;
    spec.h = Gf2Matrix(8, 4);
    for (std::size_t i = 0; i < 8; ++i) {
        spec.h.set(i, 0, (i >> 2) & 1U);
        spec.h.set(i, 1, (i >> 1) & 1U);
        spec.h.set(i, 2, i & 1U);
        spec.h.set(i, 3, 1);
    }
    return spec;
}

/// Code C with generator (H')^T, H' being H without its all-ones row.
inline LinearCode derive_code(const BaseCodeSpec &base) {
    base.validate();
    const std::size_t skip = base.all_ones_rows().front();
    std::vector<BitString> rows;
    for (std::size_t i = 0; i < base.eta; ++i) {
        if (i != skip) {
            rows.push_back(base.h.row(i));
        }
    }
    return LinearCode::from_generator(Gf2Matrix::from_rows(rows).transpose());
}

/// True iff for every set of 2t - 1 codeword positions the joint
/// distribution of those bits is the same over messages with
/// commit_fn(message) = 0 and = 1.
inline bool independence_check(const LinearCode &code, std::size_t t, const boolfn::BooleanFn &commit_fn) {
    const std::size_t k = code.dimension();
    if (k > kMaxIndependenceDimension) {
        throw Error(ErrorKind::DimensionTooLarge, "independence_check: dimension " + std::to_string(k));
    }
    if (commit_fn.arity() != k) {
        throw Error(ErrorKind::ParamMismatch, "independence_check: commit function arity differs from code dimension");
    }
    if (t == 0) {
        return true;
    }
    const std::size_t width = 2 * t - 1;
    const auto words = code.codewords();
    const std::uint64_t n0 = commit_fn.preimage(0).size();
    const std::uint64_t n1 = commit_fn.preimage(1).size();
    bool independent = true;
    detail::for_each_subset(code.length(), width, [&](std::uint64_t mask) {
        std::unordered_map<std::uint64_t, std::uint64_t> count[2];
        for (std::uint64_t m = 0; m < words.size(); ++m) {
            std::uint64_t key = 0;
            for (std::size_t j = 0; j < code.length(); ++j) {
                if (mask >> j & 1U) {
                    key = (key << 1) | static_cast<std::uint64_t>(words[m][j]);
                }
            }
            count[commit_fn.at(m)][key]++;
        }
        for (std::uint64_t key = 0; key < (std::uint64_t{1} << width); ++key) {
            const std::uint64_t c0 = count[0].count(key) ? count[0][key] : 0;
            const std::uint64_t c1 = count[1].count(key) ? count[1][key] : 0;
            if (c0 * n1 != c1 * n0) {
                independent = false;
                return false;
            }
        }
        return true;
    });
    return independent;
}

struct GuessProbabilities {
    double p_max1 = 0.0;  // one (eta - 1)-qubit block
    double p_max = 0.0;   // all n / (eta - xi) blocks of one string
    double P_max = 0.0;   // any of m strings
};

inline double binomial_coefficient(std::size_t n, std::size_t k) {
    return std::exp(std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
                    std::lgamma(static_cast<double>(n - k) + 1));
}

inline GuessProbabilities bob_guess_probabilities(std::size_t eta, std::size_t xi, std::size_t t, double p_s,
                                                  std::size_t n, std::size_t m) {
    if (!(p_s >= 0.0 && p_s <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "p_s must lie in [0, 1]");
    }
    if (xi >= eta || n % (eta - xi) != 0) {
        throw Error(ErrorKind::DivisibilityViolation,
                    "eta - xi = " + std::to_string(eta - xi) + " must divide n = " + std::to_string(n));
    }
    GuessProbabilities out;
    const std::size_t length = eta - 1;
    for (std::size_t i = 2 * t; i <= length; ++i) {
        out.p_max1 += std::round(binomial_coefficient(length, i)) * std::pow(p_s, static_cast<double>(i)) *
                      std::pow(1.0 - p_s, static_cast<double>(length - i));
    }
    out.p_max1 = std::min(1.0, out.p_max1);
    out.p_max = std::pow(out.p_max1, static_cast<double>(n / (eta - xi)));
    out.P_max = 1.0 - std::pow(1.0 - out.p_max, static_cast<double>(m));
    return out;
}

struct BindingMargin {
    bool satisfied = false;
    double lhs = 0.0;            // t'
    double rhs = 0.0;            // max of the two right-hand sides
    double correction_rhs = 0.0; // (xi - 1) p_ce
    double cheat_rhs = 0.0;      // (eta - xi) p_ce / p_cv - 1
};

inline BindingMargin binding_margin(std::size_t t_prime, std::size_t eta, std::size_t xi, double p_ce, double p_cv) {
    if (!(p_ce >= 0.0 && p_ce <= 1.0 && p_cv > 0.0 && p_cv <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "binding_margin needs p_ce in [0, 1] and p_cv in (0, 1]");
    }
    BindingMargin out;
    out.lhs = static_cast<double>(t_prime);
    out.correction_rhs = static_cast<double>(xi - 1) * p_ce;
    out.cheat_rhs = static_cast<double>(eta - xi) * p_ce / p_cv - 1.0;
    out.rhs = std::max(out.correction_rhs, out.cheat_rhs);
    out.satisfied = out.lhs > out.correction_rhs && out.lhs > out.cheat_rhs;
    return out;
}

/// Number of evidence qubits for an n-bit string: blocks * (eta - 1), and the
/// alternative blocks * (xi - 1) count that shows up next to it in reports.
struct EvidenceLength {
    std::size_t blocks = 0;
    std::size_t zeta = 0;          // blocks * (eta - 1), the codeword length actually sent
    std::size_t zeta_xi_form = 0;  // blocks * (xi - 1)
};

inline EvidenceLength evidence_length(std::size_t n, std::size_t eta, std::size_t xi) {
    if (xi >= eta || n % (eta - xi) != 0) {
        throw Error(ErrorKind::DivisibilityViolation,
                    "eta - xi = " + std::to_string(eta - xi) + " must divide n = " + std::to_string(n));
    }
    EvidenceLength out;
    out.blocks = n / (eta - xi);
    out.zeta = out.blocks * (eta - 1);
    out.zeta_xi_form = out.blocks * (xi - 1);
    return out;
}

}  // namespace qsbc::ecc
