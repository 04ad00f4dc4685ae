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

// Single- and multi-copy convertibility of bipartite pure states through
// their Schmidt spectra: majorization, optimal single-copy success
// probability, product powers and the truncation protocol.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "locc/common.hpp"
#include "locc/weights.hpp"

namespace locc {

/// Product powers may hold at most 2^24 entries.
inline constexpr size_t kMaxProductEntries = size_t{1} << 24;

namespace detail {

inline std::vector<double> prefix_sums(const std::vector<double>& sorted) {
    std::vector<double> out(sorted.size());
    CompensatedAccumulator acc;
    for (size_t i = 0; i < sorted.size(); i++) {
        acc.add(sorted[i]);
        out[i] = acc.value();
    }
    return out;
}

/// out[l] = sum_{i >= l} sorted[i].
inline std::vector<double> tail_sums(const std::vector<double>& sorted) {
    std::vector<double> out(sorted.size());
    CompensatedAccumulator acc;
    for (size_t i = sorted.size(); i-- > 0;) {
        acc.add(sorted[i]);
        out[i] = acc.value();
    }
    return out;
}

inline bool majorized_sorted(const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> sp = prefix_sums(p);
    std::vector<double> sq = prefix_sums(q);
    for (size_t i = 0; i < sp.size(); i++) {
        if (sp[i] > sq[i] + kMajorizationSlack) return false;
    }
    return true;
}

/// Vidal's formula on already padded, sorted vectors.
inline double conversion_probability_sorted(const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> tp = tail_sums(p);
    std::vector<double> tq = tail_sums(q);
    double best = 1.0;
    for (size_t l = 0; l < tp.size(); l++) {
        if (tq[l] > 0.0) {
            best = std::min(best, tp[l] / tq[l]);
        }
    }
    return std::clamp(best, 0.0, 1.0);
}

inline std::vector<double> sorted_padded(std::vector<double> v, size_t length) {
    v.resize(std::max(length, v.size()), 0.0);
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

inline size_t checked_power_size(size_t d, size_t n) {
    if (n == 0) {
        throw DomainError("copy count must be positive");
    }
    size_t size = 1;
    for (size_t i = 0; i < n; i++) {
        if (size > kMaxProductEntries / d) {
            throw ResourceError("product power of length " + std::to_string(d) + "^" + std::to_string(n) +
                                " exceeds the 2^24 entry guard");
        }
        size *= d;
    }
    return size;
}

}  // namespace detail

/// True iff p is majorized by q (every sorted prefix sum of p is at most that of q).
inline bool majorizes(const WeightVector& p, const WeightVector& q) {
    require_normalized(p, "first distribution");
    require_normalized(q, "second distribution");
    auto [a, b] = padded_sorted_pair(p, q);
    return detail::majorized_sorted(a, b);
}

/// Deterministic LOCC convertibility |psi_P> -> |psi_Q>.
inline bool nielsen_convertible(const WeightVector& p, const WeightVector& q) { return majorizes(p, q); }

/// Optimal probability of converting |psi_P> into |psi_Q> with a single copy:
/// min over l of the ratio of sorted tail sums.
inline double optimal_conversion_probability(const WeightVector& p, const WeightVector& q) {
    require_normalized(p, "source distribution");
    require_normalized(q, "target distribution");
    auto [a, b] = padded_sorted_pair(p, q);
    return detail::conversion_probability_sorted(a, b);
}

/// All n-fold products p_{I_1} ... p_{I_n}, row-major in the multi-index.
inline WeightVector product_power(const WeightVector& p, size_t n) {
    size_t total = detail::checked_power_size(p.size(), n);
    std::vector<double> out{1.0};
    out.reserve(total);
    for (size_t copy = 0; copy < n; copy++) {
        std::vector<double> next(out.size() * p.size());
        for (size_t i = 0; i < out.size(); i++) {
            for (size_t j = 0; j < p.size(); j++) {
                next[i * p.size() + j] = out[i] * p[j];
            }
        }
        out = std::move(next);
    }
    return WeightVector(std::move(out));
}

/// Whether |psi_P>^{(x)n} converts to |psi_Q>^{(x)m} with success probability at least s.
inline bool exact_multi_copy_check(const WeightVector& p, const WeightVector& q, size_t n, size_t m, double s) {
    require_normalized(p, "source distribution");
    require_normalized(q, "target distribution");
    if (!(s > 0.0 && s <= 1.0)) {
        throw DomainError("success probability must lie in (0, 1], got " + std::to_string(s));
    }
    return s <= optimal_conversion_probability(product_power(p, n), product_power(q, m)) + kMajorizationSlack;
}

/// Largest m such that n copies of P convert to m copies of Q with probability at least 2^{-n r}.
inline size_t max_extractable_copies(const WeightVector& p, const WeightVector& q, size_t n, double r) {
    require_normalized(p, "source distribution");
    require_normalized(q, "target distribution");
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw DomainError("converse error exponent must be finite and nonnegative");
    }
    if (q.rank() <= 1) {
        throw DomainError("target is a product state; the number of extractable copies is unbounded");
    }
    double s = std::exp2(-static_cast<double>(n) * r);
    if (!(s > 0.0)) {
        throw DomainError("success floor 2^{-nr} underflows");
    }
    std::vector<double> source = product_power(p, n).vector();
    std::sort(source.begin(), source.end(), std::greater<>());
    size_t m = 0;
    while (true) {
        std::vector<double> target = product_power(q, m + 1).vector();
        size_t length = std::max(source.size(), target.size());
        std::vector<double> a = detail::sorted_padded(source, length);
        std::vector<double> b = detail::sorted_padded(std::move(target), length);
        if (s > detail::conversion_probability_sorted(a, b) + kMajorizationSlack) {
            return m;
        }
        m++;
    }
}

struct TruncationReport {
    size_t n = 0;
    double v_star = 0.0;
    double t_n = 0.0;
    double x_n = 1.0;
    WeightVector truncated{1.0};
    double clipped_mass = 0.0;
};

/// v_star used when the caller does not pick one: -0.9 H(P).
inline double default_v_star(const WeightVector& p) { return -0.9 * shannon_entropy(p); }

/// Clips every entry of P^{(x)n} at t_n = 2^{n v_star} and renormalizes by x_n.
inline TruncationReport truncate(const WeightVector& p, size_t n, double v_star) {
    require_normalized(p, "distribution");
    double entropy = shannon_entropy(p);
    if (!(v_star > -entropy) || !std::isfinite(v_star)) {
        throw DomainError("v_star must exceed -H(P) = " + std::to_string(-entropy));
    }
    WeightVector power = product_power(p, n);
    double t = std::exp2(static_cast<double>(n) * v_star);
    std::vector<double> clipped(power.size());
    CompensatedAccumulator excess;
    CompensatedAccumulator above;
    for (size_t i = 0; i < power.size(); i++) {
        clipped[i] = std::min(power[i], t);
        if (power[i] >= t) {
            above.add(power[i]);
            excess.add(power[i] - t);
        }
    }
    // 1 / (1 - excess) rather than 1 / sum(clipped): keeps x_n >= 1 when nothing is clipped.
    double x = 1.0 / (1.0 - excess.value());
    for (double& c : clipped) c *= x;
    return TruncationReport{n, v_star, t, x, WeightVector(std::move(clipped)), above.value()};
}

/// Whether the truncated distribution is majorized by Q^{(x)n}.
inline bool truncation_majorization_check(const WeightVector& p, const WeightVector& q, size_t n, double v_star) {
    require_normalized(q, "target distribution");
    TruncationReport report = truncate(p, n, v_star);
    return majorizes(report.truncated, product_power(q, n));
}

}  // namespace locc
