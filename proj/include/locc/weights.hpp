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

// Weight vectors (squared Schmidt coefficients, probability distributions)
// and the entropic quantities computed from them. All logarithms are base 2.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "locc/common.hpp"

namespace locc {

/// Finite list of nonnegative finite weights, possibly unnormalized.
class WeightVector {
   public:
    WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
        if (weights_.empty()) {
            throw ValidationError("weight vector must have at least one entry");
        }
        for (size_t i = 0; i < weights_.size(); i++) {
            double w = weights_[i];
            if (!std::isfinite(w) || w < 0) {
                throw ValidationError("weight " + std::to_string(i) + " is negative or not finite");
            }
        }
    }
    WeightVector(std::initializer_list<double> weights) : WeightVector(std::vector<double>(weights)) {}

    static WeightVector uniform(size_t d) {
        if (d == 0) {
            throw ValidationError("uniform distribution needs at least one outcome");
        }
        return WeightVector(std::vector<double>(d, 1.0 / static_cast<double>(d)));
    }

    static WeightVector point_mass(size_t d = 1) {
        std::vector<double> w(std::max<size_t>(d, 1), 0.0);
        w[0] = 1.0;
        return WeightVector(std::move(w));
    }

    size_t size() const { return weights_.size(); }
    double operator[](size_t i) const { return weights_[i]; }
    std::span<const double> values() const { return weights_; }
    const std::vector<double>& vector() const { return weights_; }
    auto begin() const { return weights_.begin(); }
    auto end() const { return weights_.end(); }

    double total() const { return compensated_sum(weights_); }
    bool is_normalized() const { return std::abs(total() - 1.0) <= kNormalizationTolerance; }

    /// Number of entries above the support threshold.
    size_t rank() const {
        return static_cast<size_t>(
            std::count_if(weights_.begin(), weights_.end(), [](double w) { return w > kSupportThreshold; }));
    }

    bool operator==(const WeightVector&) const = default;

   private:
    std::vector<double> weights_;
};

inline void require_normalized(const WeightVector& w, const char* what) {
    if (!w.is_normalized()) {
        throw ValidationError(std::string(what) + " must be normalized (sum " + std::to_string(w.total()) + ")");
    }
}

inline void require_alpha_in_unit_interval(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in [0, 1], got " + std::to_string(alpha));
    }
}

inline WeightVector sort_desc(const WeightVector& w) {
    std::vector<double> out = w.vector();
    std::sort(out.begin(), out.end(), std::greater<>());
    return WeightVector(std::move(out));
}

/// Zero-pads both vectors to a common length and sorts them non-increasingly.
inline std::pair<std::vector<double>, std::vector<double>> padded_sorted_pair(const WeightVector& a,
                                                                                const WeightVector& b) {
    size_t n = std::max(a.size(), b.size());
    std::vector<double> x = a.vector();
    std::vector<double> y = b.vector();
    x.resize(n, 0.0);
    y.resize(n, 0.0);
    std::sort(x.begin(), x.end(), std::greater<>());
    std::sort(y.begin(), y.end(), std::greater<>());
    return {std::move(x), std::move(y)};
}

/// sum_i w_i^alpha with 0^0 = 0; at alpha = 0 this is the rank.
inline double power_sum(const WeightVector& w, double alpha) {
    require_alpha_in_unit_interval(alpha);
    if (alpha == 0.0) {
        return static_cast<double>(w.rank());
    }
    CompensatedAccumulator acc;
    for (double x : w) {
        if (x > 0) {
            acc.add(std::pow(x, alpha));
        }
    }
    return acc.value();
}

/// log2 sum_i p_i^alpha for a normalized p, accurate as alpha -> 1.
///
/// Rewrites the sum as 1 + sum_i p_i expm1((alpha - 1) ln p_i) over the
/// renormalized weights; every term is nonnegative so nothing cancels and the
/// result keeps full relative precision where it is O(1 - alpha).
inline double log2_power_sum_normalized(const WeightVector& p, double alpha) {
    require_alpha_in_unit_interval(alpha);
    if (alpha == 0.0) {
        return std::log2(static_cast<double>(p.rank()));
    }
    double total = p.total();
    CompensatedAccumulator excess;
    for (double x : p) {
        if (x > 0) {
            double q = x / total;
            excess.add(q * std::expm1((alpha - 1.0) * std::log(q)));
        }
    }
    return std::log1p(excess.value()) / std::numbers::ln2;
}

/// -sum_i w_i log2 w_i with 0 log 0 = 0.
inline double shannon_entropy(const WeightVector& w) {
    require_normalized(w, "distribution");
    CompensatedAccumulator acc;
    for (double x : w) {
        if (x > 0) {
            acc.add(-x * std::log2(x));
        }
    }
    return std::max(0.0, acc.value());
}

/// H_alpha(w) = log2(sum w_i^alpha) / (1 - alpha), Shannon entropy near alpha = 1.
inline double renyi_entropy(const WeightVector& w, double alpha) {
    require_alpha_in_unit_interval(alpha);
    require_normalized(w, "distribution");
    if (1.0 - alpha <= kShannonSwitch) {
        return shannon_entropy(w);
    }
    return std::max(0.0, log2_power_sum_normalized(w, alpha) / (1.0 - alpha));
}

/// D(q || p) in bits; +infinity when supp q is not contained in supp p.
inline double relative_entropy(const WeightVector& q, const WeightVector& p) {
    require_normalized(q, "first distribution");
    require_normalized(p, "second distribution");
    size_t n = std::max(q.size(), p.size());
    CompensatedAccumulator acc;
    for (size_t i = 0; i < n; i++) {
        double qi = i < q.size() ? q[i] : 0.0;
        double pi = i < p.size() ? p[i] : 0.0;
        if (qi <= kSupportThreshold) {
            continue;
        }
        if (pi <= kSupportThreshold) {
            return kInfinity;
        }
        acc.add(qi * std::log2(qi / pi));
    }
    return std::max(0.0, acc.value());
}

struct TiltResult {
    double normalizer;
    WeightVector tilted;
};

/// Exponential tilt p_i * values_i^(1/alpha) / Z with Z = sum_i p_i values_i^(1/alpha).
inline TiltResult tilt(const WeightVector& p, std::span<const double> values, double alpha) {
    require_normalized(p, "distribution");
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("tilt needs alpha in (0, 1], got " + std::to_string(alpha));
    }
    if (values.size() != p.size()) {
        throw ValidationError("tilt values must match the distribution length");
    }
    std::vector<double> weighted(p.size());
    for (size_t i = 0; i < p.size(); i++) {
        if (!std::isfinite(values[i]) || values[i] < 0) {
            throw ValidationError("tilt values must be nonnegative and finite");
        }
        weighted[i] = p[i] == 0.0 ? 0.0 : p[i] * std::pow(values[i], 1.0 / alpha);
    }
    double z = compensated_sum(weighted);
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw DomainError("degenerate tilt: normalizer is zero");
    }
    for (double& x : weighted) {
        x /= z;
    }
    return {z, WeightVector(std::move(weighted))};
}

}  // namespace locc
