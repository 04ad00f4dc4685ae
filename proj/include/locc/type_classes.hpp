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

// Method of types: n-types over a finite alphabet, exact type-class sizes and
// the lower bound |T_Q^n| >= 2^{n H(Q) - |I| log2(n+1)}.

#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "locc/common.hpp"
#include "locc/weights.hpp"

namespace locc {

using BigInt = boost::multiprecision::cpp_int;

/// Enumerations may produce at most this many types.
inline constexpr size_t kMaxTypeCount = 10'000'000;

class NType {
   public:
    NType(size_t n, std::vector<size_t> counts) : n_(n), counts_(std::move(counts)) {
        if (n_ == 0) {
            throw ValidationError("an n-type needs n >= 1");
        }
        if (counts_.empty()) {
            throw ValidationError("an n-type needs a nonempty alphabet");
        }
        if (std::accumulate(counts_.begin(), counts_.end(), size_t{0}) != n_) {
            throw ValidationError("type counts must sum to n");
        }
    }

    size_t n() const { return n_; }
    size_t alphabet_size() const { return counts_.size(); }
    const std::vector<size_t>& counts() const { return counts_; }

    /// counts / n as a distribution.
    WeightVector distribution() const {
        std::vector<double> w(counts_.size());
        for (size_t i = 0; i < w.size(); i++) {
            w[i] = static_cast<double>(counts_[i]) / static_cast<double>(n_);
        }
        return WeightVector(std::move(w));
    }

    bool operator==(const NType&) const = default;

   private:
    size_t n_;
    std::vector<size_t> counts_;
};

inline BigInt binomial(size_t n, size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt out = 1;
    for (size_t i = 1; i <= k; i++) {
        out *= n - k + i;
        out /= i;
    }
    return out;
}

/// Number of n-types over an alphabet of the given size: C(n + |I| - 1, |I| - 1).
inline BigInt type_count(size_t n, size_t alphabet_size) {
    if (alphabet_size == 0) return 0;
    return binomial(n + alphabet_size - 1, alphabet_size - 1);
}

/// Calls visit(counts) for every composition of n into alphabet_size parts,
/// the first count running from n down to 0.
template <typename Visit>
void for_each_type(size_t n, size_t alphabet_size, Visit&& visit) {
    if (n == 0 || alphabet_size == 0) {
        throw ValidationError("type enumeration needs n >= 1 and a nonempty alphabet");
    }
    if (type_count(n, alphabet_size) > kMaxTypeCount) {
        throw ResourceError("number of types exceeds the 10^7 guard");
    }
    std::vector<size_t> counts(alphabet_size, 0);
    std::function<void(size_t, size_t)> rec = [&](size_t pos, size_t left) {
        if (pos + 1 == alphabet_size) {
            counts[pos] = left;
            visit(static_cast<const std::vector<size_t>&>(counts));
            return;
        }
        for (size_t c = left + 1; c-- > 0;) {
            counts[pos] = c;
            rec(pos + 1, left - c);
        }
    };
    rec(0, n);
}

inline std::vector<NType> enumerate_types(size_t n, size_t alphabet_size) {
    std::vector<NType> out;
    for_each_type(n, alphabet_size, [&](const std::vector<size_t>& counts) { out.emplace_back(n, counts); });
    return out;
}

/// Multinomial coefficient n! / prod_i counts_i!.
inline BigInt type_class_size(const NType& t) {
    BigInt out = 1;
    size_t placed = 0;
    for (size_t c : t.counts()) {
        placed += c;
        out *= binomial(placed, c);
    }
    return out;
}

/// log2 of a positive big integer.
inline double log2_big(const BigInt& x) {
    if (x <= 0) {
        return -kInfinity;
    }
    size_t bits = boost::multiprecision::msb(x);
    if (bits < 1000) {
        return std::log2(x.convert_to<double>());
    }
    size_t shift = bits - 60;
    BigInt top = x >> shift;
    return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

struct TypeClassBound {
    BigInt size;
    double log2_size = 0.0;
    double log2_bound = 0.0;
    bool holds = false;

    double bound() const { return std::exp2(log2_bound); }
};

/// Compares |T_Q^n| with 2^{n H(Q) - |I| log2(n+1)} in the log domain.
inline TypeClassBound check_type_class_bound(const NType& t) {
    TypeClassBound out;
    out.size = type_class_size(t);
    out.log2_size = log2_big(out.size);
    double n = static_cast<double>(t.n());
    out.log2_bound = n * shannon_entropy(t.distribution()) - static_cast<double>(t.alphabet_size()) * std::log2(n + 1.0);
    out.holds = out.log2_size >= out.log2_bound;
    return out;
}

/// The support-preserving n-type closest to p in relative entropy.
///
/// Starts from largest-remainder rounding with at least one count per support
/// element, then applies single-unit transfers while D(counts/n || p)
/// decreases. D is separable and convex in the counts, so no transfer
/// improving it means the minimum over all support-preserving n-types.
inline NType closest_type(const WeightVector& p, size_t n) {
    require_normalized(p, "distribution");
    std::vector<size_t> support;
    for (size_t i = 0; i < p.size(); i++) {
        if (p[i] > kSupportThreshold) support.push_back(i);
    }
    if (n < support.size()) {
        throw ValidationError("n = " + std::to_string(n) + " cannot cover a support of size " +
                              std::to_string(support.size()));
    }
    double total = p.total();
    std::vector<double> target(p.size());
    for (size_t i : support) target[i] = static_cast<double>(n) * p[i] / total;

    std::vector<size_t> counts(p.size(), 0);
    size_t assigned = 0;
    for (size_t i : support) {
        counts[i] = std::max<size_t>(1, static_cast<size_t>(std::floor(target[i])));
        assigned += counts[i];
    }
    auto remainder = [&](size_t i) { return target[i] - static_cast<double>(counts[i]); };
    while (assigned < n) {
        size_t pick = *std::max_element(support.begin(), support.end(),
                                        [&](size_t a, size_t b) { return remainder(a) < remainder(b); });
        counts[pick]++;
        assigned++;
    }
    while (assigned > n) {
        size_t pick = support.size();
        for (size_t i : support) {
            if (counts[i] > 1 && (pick == support.size() || remainder(i) < remainder(pick))) pick = i;
        }
        counts[pick]--;
        assigned--;
    }

    // Contribution of one support element to n * D, in bits.
    auto term = [&](size_t i, size_t c) {
        double cd = static_cast<double>(c);
        return cd * std::log2(cd / target[i]);
    };
    for (size_t iter = 0; iter < 4 * n + 16; iter++) {
        double best_gain = 1e-15;
        size_t from = 0;
        size_t to = 0;
        bool found = false;
        for (size_t a : support) {
            if (counts[a] <= 1) continue;
            double loss_a = term(a, counts[a] - 1) - term(a, counts[a]);
            for (size_t b : support) {
                if (a == b) continue;
                double gain = -(loss_a + term(b, counts[b] + 1) - term(b, counts[b]));
                if (gain > best_gain) {
                    best_gain = gain;
                    from = a;
                    to = b;
                    found = true;
                }
            }
        }
        if (!found) break;
        counts[from]--;
        counts[to]++;
    }
    return NType(n, std::move(counts));
}

}  // namespace locc
