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

// Asymptotic conversion rates between bipartite pure states, expressed as a
// one-dimensional infimum over the spectral exponent alpha.
//
//   converse_rate      inf_{a in [0,1)} (r a + log sum p^a) / log sum q^a
//   deterministic_rate min_{a in [0,1]} H_a(P) / H_a(Q)
//   concentration_rate inf_{a in [0,1)} (r a + log sum p^a) / (1 - a)
//
// The objective is not assumed unimodal: a uniform grid is scanned and every
// grid-local minimum is refined by golden-section search.

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locc/common.hpp"
#include "locc/parallel.hpp"
#include "locc/spectral.hpp"
#include "locc/state.hpp"
#include "locc/weights.hpp"

namespace locc {

struct RateOptions {
    size_t grid_size = 4096;
    double alpha_max = 1.0 - 1e-9;
    double alpha_tolerance = 1e-9;
    double value_tolerance = 1e-10;
};

struct RateQuery {
    WeightVector source;
    WeightVector target;
    double r = 0.0;
};

struct RateResult {
    double value = kInfinity;
    std::optional<double> argmin_alpha;
    size_t grid_size = 0;
    size_t refinement_steps = 0;
    double value_tolerance = 0.0;

    bool finite() const { return std::isfinite(value); }
};

namespace detail {

inline void require_exponent(double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw DomainError("converse error exponent must be a finite nonnegative number, got " + std::to_string(r));
    }
}

inline double sanitize(double v) { return std::isnan(v) ? kInfinity : v; }

struct Minimum {
    double value = kInfinity;
    double alpha = 0.0;
    double spread = 0.0;
};

/// Golden-section search on [lo, hi]; returns the best point seen.
inline Minimum golden_section(const std::function<double(double)>& f, double lo, double hi, const RateOptions& opt,
                              size_t& steps) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = sanitize(f(c));
    double fd = sanitize(f(d));
    while (hi - lo > opt.alpha_tolerance) {
        steps++;
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = sanitize(f(c));
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = sanitize(f(d));
        }
    }
    Minimum m;
    if (fc <= fd) {
        m = {fc, c, 0.0};
    } else {
        m = {fd, d, 0.0};
    }
    if (std::isfinite(fc) && std::isfinite(fd)) {
        m.spread = std::abs(fc - fd);
    }
    return m;
}

/// Grid scan plus refinement of every grid-local minimum. `closed_end`, when
/// given, is the objective's value at alpha = 1 and competes with the interior.
inline RateResult minimize_over_alpha(const std::function<double(double)>& f, std::optional<double> closed_end,
                                      const RateOptions& opt) {
    size_t n = std::max<size_t>(opt.grid_size, 3);
    std::vector<double> alphas(n);
    std::vector<double> values(n);
    for (size_t i = 0; i < n; i++) {
        alphas[i] = opt.alpha_max * static_cast<double>(i) / static_cast<double>(n - 1);
        values[i] = sanitize(f(alphas[i]));
    }

    RateResult result;
    result.grid_size = n;
    Minimum best;
    for (size_t i = 0; i < n; i++) {
        if (values[i] < best.value) {
            best = {values[i], alphas[i], 0.0};
        }
    }
    double spread = 0.0;
    for (size_t i = 0; i < n; i++) {
        if (!std::isfinite(values[i])) continue;
        bool left_ok = i == 0 || values[i] <= values[i - 1];
        bool right_ok = i + 1 == n || values[i] < values[i + 1];
        if (!left_ok || !right_ok) continue;
        double lo = alphas[i == 0 ? 0 : i - 1];
        double hi = alphas[i + 1 == n ? n - 1 : i + 1];
        Minimum local = golden_section(f, lo, hi, opt, result.refinement_steps);
        if (local.value < best.value) {
            best = local;
            spread = local.spread;
        }
    }
    if (closed_end && *closed_end <= best.value) {
        best = {*closed_end, 1.0, 0.0};
        spread = 0.0;
    }

    result.value = best.value;
    if (std::isfinite(best.value)) {
        result.argmin_alpha = best.alpha;
    }
    result.value_tolerance = std::max(opt.value_tolerance, spread);
    return result;
}

inline RateResult fixed_result(double value, std::optional<double> alpha) {
    RateResult r;
    r.value = value;
    r.argmin_alpha = alpha;
    return r;
}

}  // namespace detail

/// (r alpha + log2 sum p^alpha) / log2 sum q^alpha for alpha in [0, 1).
/// +infinity when the denominator vanishes (a product-state target).
inline double rate_objective(const WeightVector& p, const WeightVector& q, double r, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw DomainError("rate objective needs alpha in [0, 1), got " + std::to_string(alpha));
    }
    detail::require_exponent(r);
    require_normalized(p, "source distribution");
    require_normalized(q, "target distribution");
    double numerator = r * alpha + log2_power_sum_normalized(p, alpha);
    double denominator = log2_power_sum_normalized(q, alpha);
    if (denominator <= kSupportThreshold) {
        return kInfinity;
    }
    return numerator / denominator;
}

/// E*(r, P, Q): copies of |Q> per copy of |P> with success probability 2^{-nr+o(n)}.
inline RateResult converse_rate(const RateQuery& query, const RateOptions& opt = {}) {
    const auto& [p, q, r] = query;
    require_normalized(p, "source distribution");
    require_normalized(q, "target distribution");
    detail::require_exponent(r);
    if (q.rank() <= 1) {
        return detail::fixed_result(kInfinity, std::nullopt);
    }
    if (p.rank() <= 1) {
        return detail::fixed_result(0.0, 0.0);
    }
    auto objective = [&](double alpha) {
        return (r * alpha + log2_power_sum_normalized(p, alpha)) / log2_power_sum_normalized(q, alpha);
    };
    std::optional<double> closed_end;
    if (r == 0.0) {
        closed_end = shannon_entropy(p) / shannon_entropy(q);
    }
    return detail::minimize_over_alpha(objective, closed_end, opt);
}

/// E(P, Q) = min over alpha in [0, 1] of H_alpha(P) / H_alpha(Q).
inline RateResult deterministic_rate(const WeightVector& p, const WeightVector& q, const RateOptions& opt = {}) {
    require_normalized(p, "source distribution");
    require_normalized(q, "target distribution");
    if (q.rank() <= 1) {
        return detail::fixed_result(kInfinity, std::nullopt);
    }
    if (p.rank() <= 1) {
        return detail::fixed_result(0.0, 0.0);
    }
    auto ratio = [&](double alpha) { return renyi_entropy(p, alpha) / renyi_entropy(q, alpha); };
    return detail::minimize_over_alpha(ratio, ratio(1.0), opt);
}

/// Entanglement concentration: the target fixed to the normalized EPR pair.
inline RateResult concentration_rate(const WeightVector& p, double r, const RateOptions& opt = {}) {
    require_normalized(p, "source distribution");
    detail::require_exponent(r);
    if (p.rank() <= 1) {
        return detail::fixed_result(0.0, 0.0);
    }
    auto objective = [&](double alpha) { return (r * alpha + log2_power_sum_normalized(p, alpha)) / (1.0 - alpha); };
    std::optional<double> closed_end;
    if (r == 0.0) {
        closed_end = shannon_entropy(p);
    }
    return detail::minimize_over_alpha(objective, closed_end, opt);
}

/// converse_rate at each r, in input order.
inline std::vector<std::pair<double, RateResult>> rate_curve(const WeightVector& p, const WeightVector& q,
                                                             const std::vector<double>& r_values,
                                                             const RateOptions& opt = {}) {
    for (double r : r_values) {
        detail::require_exponent(r);
    }
    std::vector<std::pair<double, RateResult>> out(r_values.size());
    parallel_for(r_values.size(), [&](size_t i) { out[i] = {r_values[i], converse_rate({p, q, r_values[i]}, opt)}; });
    return out;
}

/// Nonempty proper subsets of {0..k-1} containing party 0 (one per complement pair).
inline std::vector<std::vector<size_t>> bipartition_cuts(size_t k) {
    std::vector<std::vector<size_t>> cuts;
    if (k < 2) return cuts;
    size_t rest = k - 1;
    for (size_t mask = 0; mask + 1 < (size_t{1} << rest); mask++) {
        std::vector<size_t> cut{0};
        for (size_t b = 0; b < rest; b++) {
            if (mask & (size_t{1} << b)) cut.push_back(b + 1);
        }
        cuts.push_back(std::move(cut));
    }
    return cuts;
}

/// Upper bound on the k-party rate: the minimum bipartite rate over all bipartitions.
inline double multipartite_upper_bound(const PureState& source, const PureState& target, double r,
                                       const RateOptions& opt = {}) {
    detail::require_exponent(r);
    if (source.party_count() < 2 || target.party_count() != source.party_count()) {
        throw ValidationError("source and target need the same party count, at least two");
    }
    if (std::abs(source.squared_norm() - 1.0) > kNormalizationTolerance ||
        std::abs(target.squared_norm() - 1.0) > kNormalizationTolerance) {
        throw ValidationError("source and target must be normalized");
    }
    double best = kInfinity;
    for (const auto& cut : bipartition_cuts(source.party_count())) {
        RateResult rr = converse_rate({schmidt_spectrum(source, cut), schmidt_spectrum(target, cut), r}, opt);
        best = std::min(best, rr.value);
    }
    return best;
}

}  // namespace locc
