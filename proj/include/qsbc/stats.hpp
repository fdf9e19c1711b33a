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

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace qsbc {

/// Bernoulli rate with a normal-approximation confidence interval.
struct RateEstimate {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;

    void add(bool success) {
        successes += success ? 1 : 0;
        ++trials;
    }

    double rate() const { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0; }

    double standard_error() const {
        if (trials == 0) {
            return 0.0;
        }
        const double p = rate();
        return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    }

    /// Interval rate +- z * standard_error, clipped to [0, 1].
    double lower(double z = 1.96) const { return std::max(0.0, rate() - z * standard_error()); }
    double upper(double z = 1.96) const { return std::min(1.0, rate() + z * standard_error()); }
};

/// Binomial standard deviation of a rate estimate when the true rate is p.
inline double binomial_sigma(double p, std::uint64_t trials) {
    return trials ? std::sqrt(p * (1.0 - p) / static_cast<double>(trials)) : 0.0;
}

}  // namespace qsbc
