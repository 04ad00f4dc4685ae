// Copyright 2026 The locc-spectrum Authors
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
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace locc {

/// Malformed input: wrong shapes, unnormalized weights, invalid protocols.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A numeric argument outside the domain of the function (alpha, r, v_star).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A materialization guard tripped (product powers, type enumeration, dense states).
struct ResourceError : std::length_error {
    using std::length_error::length_error;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Weights at or below this are outside the support (rank, relative-entropy checks).
inline constexpr double kSupportThreshold = 1e-12;
/// |total - 1| at or below this counts as normalized.
inline constexpr double kNormalizationTolerance = 1e-9;
/// Renyi entropies with |1 - alpha| below this are evaluated as Shannon entropy.
inline constexpr double kShannonSwitch = 1e-7;
/// Slack on majorization prefix-sum comparisons.
inline constexpr double kMajorizationSlack = 1e-12;
/// Kraus constraint, idempotency and PSD-noise tolerance.
inline constexpr double kOperatorTolerance = 1e-10;
/// Relative tolerance for the spectral inequality checks.
inline constexpr double kInequalityTolerance = 1e-10;

/// Neumaier-compensated sum.
inline double compensated_sum(std::span<const double> xs) {
    double sum = 0.0;
    double carry = 0.0;
    for (double x : xs) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    return sum + carry;
}

/// Streaming version of compensated_sum.
class CompensatedAccumulator {
   public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

   private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

}  // namespace locc
