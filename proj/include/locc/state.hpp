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

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "locc/common.hpp"
#include "locc/weights.hpp"

namespace locc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Joint pure-state dimension ceiling.
inline constexpr size_t kMaxJointDimension = size_t{1} << 20;

inline size_t checked_dimension(const std::vector<size_t>& dims) {
    size_t total = 1;
    for (size_t d : dims) {
        if (d == 0) {
            throw ValidationError("local dimensions must be positive");
        }
        if (total > kMaxJointDimension / d) {
            throw ResourceError("joint dimension exceeds 2^20");
        }
        total *= d;
    }
    return total;
}

/// Dense amplitude tensor over k parties, row-major with party 0 most significant.
/// The norm is not fixed: an unnormalized state carries a success weight.
class PureState {
   public:
    PureState(std::vector<size_t> dims, std::vector<Complex> amplitudes)
        : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
        if (dims_.empty()) {
            throw ValidationError("a state needs at least one party");
        }
        size_t expected = checked_dimension(dims_);
        if (amplitudes_.size() != expected) {
            throw ValidationError("amplitude count " + std::to_string(amplitudes_.size()) +
                                  " does not match product of dims " + std::to_string(expected));
        }
        for (const Complex& a : amplitudes_) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                throw ValidationError("amplitudes must be finite");
            }
        }
    }

    static PureState zero(std::vector<size_t> dims) {
        size_t n = checked_dimension(dims);
        return PureState(std::move(dims), std::vector<Complex>(n));
    }

    /// |i_0 i_1 ... i_{k-1}> with unit amplitude.
    static PureState basis(std::vector<size_t> dims, const std::vector<size_t>& index) {
        PureState s = zero(std::move(dims));
        s.amplitudes_[s.flat_index(index)] = 1.0;
        return s;
    }

    size_t party_count() const { return dims_.size(); }
    const std::vector<size_t>& dims() const { return dims_; }
    size_t dim(size_t party) const { return dims_.at(party); }
    size_t size() const { return amplitudes_.size(); }
    const std::vector<Complex>& amplitudes() const { return amplitudes_; }
    std::vector<Complex>& mutable_amplitudes() { return amplitudes_; }
    Complex operator[](size_t i) const { return amplitudes_[i]; }

    size_t flat_index(const std::vector<size_t>& index) const {
        if (index.size() != dims_.size()) {
            throw ValidationError("multi-index has wrong party count");
        }
        size_t flat = 0;
        for (size_t p = 0; p < dims_.size(); p++) {
            if (index[p] >= dims_[p]) {
                throw ValidationError("multi-index out of range");
            }
            flat = flat * dims_[p] + index[p];
        }
        return flat;
    }

    double squared_norm() const {
        CompensatedAccumulator acc;
        for (const Complex& a : amplitudes_) {
            acc.add(std::norm(a));
        }
        return acc.value();
    }

    PureState scaled(Complex c) const {
        PureState out = *this;
        for (Complex& a : out.amplitudes_) {
            a *= c;
        }
        return out;
    }

    PureState normalized() const {
        double n = squared_norm();
        if (!(n > 0)) {
            throw ValidationError("cannot normalize the zero state");
        }
        return scaled(1.0 / std::sqrt(n));
    }

    bool same_shape(const PureState& other) const { return dims_ == other.dims_; }

   private:
    std::vector<size_t> dims_;
    std::vector<Complex> amplitudes_;
};

/// sum_i sqrt(p_i) |ii>.
inline PureState bipartite_state(const WeightVector& p) {
    size_t d = p.size();
    PureState s = PureState::zero({d, d});
    for (size_t i = 0; i < d; i++) {
        s.mutable_amplitudes()[i * d + i] = std::sqrt(p[i]);
    }
    return s;
}

/// Party-wise tensor product; party p of the result has dimension d_p * e_p.
inline PureState tensor_product(const PureState& a, const PureState& b) {
    if (a.party_count() != b.party_count()) {
        throw ValidationError("tensor product needs equal party counts");
    }
    size_t k = a.party_count();
    std::vector<size_t> dims(k);
    for (size_t p = 0; p < k; p++) {
        dims[p] = a.dim(p) * b.dim(p);
    }
    PureState out = PureState::zero(dims);
    std::vector<size_t> ia(k, 0);
    for (size_t x = 0; x < a.size(); x++) {
        if (a[x] != Complex{}) {
            std::vector<size_t> ib(k, 0);
            for (size_t y = 0; y < b.size(); y++) {
                size_t flat = 0;
                for (size_t p = 0; p < k; p++) {
                    flat = flat * dims[p] + ia[p] * b.dim(p) + ib[p];
                }
                out.mutable_amplitudes()[flat] = a[x] * b[y];
                for (size_t p = k; p-- > 0;) {
                    if (++ib[p] < b.dim(p)) break;
                    ib[p] = 0;
                }
            }
        }
        for (size_t p = k; p-- > 0;) {
            if (++ia[p] < a.dim(p)) break;
            ia[p] = 0;
        }
    }
    return out;
}

/// Block direct sum; party p of the result has dimension d_p + e_p with a's block first.
inline PureState direct_sum(const PureState& a, const PureState& b) {
    if (a.party_count() != b.party_count()) {
        throw ValidationError("direct sum needs equal party counts");
    }
    size_t k = a.party_count();
    std::vector<size_t> dims(k);
    for (size_t p = 0; p < k; p++) {
        dims[p] = a.dim(p) + b.dim(p);
    }
    PureState out = PureState::zero(dims);
    auto place = [&](const PureState& src, bool second) {
        std::vector<size_t> idx(k, 0);
        for (size_t x = 0; x < src.size(); x++) {
            size_t flat = 0;
            for (size_t p = 0; p < k; p++) {
                flat = flat * dims[p] + idx[p] + (second ? a.dim(p) : 0);
            }
            out.mutable_amplitudes()[flat] = src[x];
            for (size_t p = k; p-- > 0;) {
                if (++idx[p] < src.dim(p)) break;
                idx[p] = 0;
            }
        }
    };
    place(a, false);
    place(b, true);
    return out;
}

/// (op)_party |state>; op maps C^{dims[party]} to C^{op.rows()}.
inline PureState apply_local(const PureState& state, size_t party, const Matrix& op) {
    if (party >= state.party_count()) {
        throw ValidationError("party index " + std::to_string(party) + " out of range");
    }
    size_t d_in = state.dim(party);
    if (static_cast<size_t>(op.cols()) != d_in) {
        throw ValidationError("local operator has " + std::to_string(op.cols()) + " columns, party dimension is " +
                              std::to_string(d_in));
    }
    size_t d_out = static_cast<size_t>(op.rows());
    size_t left = 1;
    size_t right = 1;
    for (size_t p = 0; p < party; p++) left *= state.dim(p);
    for (size_t p = party + 1; p < state.party_count(); p++) right *= state.dim(p);
    std::vector<size_t> dims = state.dims();
    dims[party] = d_out;
    PureState out = PureState::zero(dims);
    auto& dst = out.mutable_amplitudes();
    const auto& src = state.amplitudes();
    for (size_t l = 0; l < left; l++) {
        for (size_t i = 0; i < d_in; i++) {
            for (size_t r = 0; r < right; r++) {
                Complex v = src[(l * d_in + i) * right + r];
                if (v == Complex{}) continue;
                for (size_t o = 0; o < d_out; o++) {
                    dst[(l * d_out + o) * right + r] += op(o, i) * v;
                }
            }
        }
    }
    return out;
}

/// Validates a cut (nonempty proper subset of parties) and returns it sorted.
inline std::vector<size_t> normalize_cut(std::vector<size_t> cut, size_t party_count) {
    std::sort(cut.begin(), cut.end());
    cut.erase(std::unique(cut.begin(), cut.end()), cut.end());
    if (cut.empty() || cut.size() >= party_count) {
        throw ValidationError("cut must be a nonempty proper subset of the parties");
    }
    if (cut.back() >= party_count) {
        throw ValidationError("cut names party " + std::to_string(cut.back()) + " of a " +
                              std::to_string(party_count) + "-party state");
    }
    return cut;
}

/// Amplitude matrix with the cut parties as row index and the rest as column index.
inline Matrix matricize(const PureState& state, const std::vector<size_t>& sorted_cut) {
    size_t k = state.party_count();
    std::vector<bool> in_cut(k, false);
    for (size_t p : sorted_cut) in_cut[p] = true;
    size_t rows = 1;
    for (size_t p = 0; p < k; p++) {
        if (in_cut[p]) rows *= state.dim(p);
    }
    size_t cols = state.size() / rows;
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::vector<size_t> idx(k, 0);
    for (size_t x = 0; x < state.size(); x++) {
        size_t r = 0;
        size_t c = 0;
        for (size_t p = 0; p < k; p++) {
            if (in_cut[p]) {
                r = r * state.dim(p) + idx[p];
            } else {
                c = c * state.dim(p) + idx[p];
            }
        }
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = state[x];
        for (size_t p = k; p-- > 0;) {
            if (++idx[p] < state.dim(p)) break;
            idx[p] = 0;
        }
    }
    return m;
}

/// Classical mixture sum_x |phi_x><phi_x| (x) |x><x| of pure branches.
class ConditionallyPure {
   public:
    using Branches = std::map<std::string, PureState>;

    /// The zero state on the given local dimensions.
    explicit ConditionallyPure(std::vector<size_t> dims) : dims_(std::move(dims)) { checked_dimension(dims_); }

    ConditionallyPure(std::vector<size_t> dims, Branches branches)
        : dims_(std::move(dims)), branches_(std::move(branches)) {
        checked_dimension(dims_);
        for (const auto& [label, state] : branches_) {
            if (state.dims() != dims_) {
                throw ValidationError("branch '" + label + "' has mismatched local dimensions");
            }
        }
    }

    /// A pure state with a one-point register labelled `label`.
    static ConditionallyPure from_pure(const PureState& state, const std::string& label = "") {
        return ConditionallyPure(state.dims(), Branches{{label, state}});
    }

    const std::vector<size_t>& dims() const { return dims_; }
    const Branches& branches() const { return branches_; }
    size_t branch_count() const { return branches_.size(); }
    bool empty() const { return branches_.empty(); }

    /// Sum of squared branch norms.
    double trace() const {
        CompensatedAccumulator acc;
        for (const auto& [label, state] : branches_) {
            acc.add(state.squared_norm());
        }
        return acc.value();
    }

   private:
    std::vector<size_t> dims_;
    Branches branches_;
};

/// Register labels of a tensor product are "x&y"; throws if that encoding collides.
inline ConditionallyPure tensor_product(const ConditionallyPure& a, const ConditionallyPure& b) {
    if (a.dims().size() != b.dims().size()) {
        throw ValidationError("tensor product needs equal party counts");
    }
    std::vector<size_t> dims(a.dims().size());
    for (size_t p = 0; p < dims.size(); p++) {
        dims[p] = a.dims()[p] * b.dims()[p];
    }
    ConditionallyPure::Branches out;
    for (const auto& [x, phi] : a.branches()) {
        for (const auto& [y, psi] : b.branches()) {
            auto [it, inserted] = out.emplace(x + "&" + y, tensor_product(phi, psi));
            if (!inserted) {
                throw ValidationError("register label collision in tensor product: " + it->first);
            }
        }
    }
    return ConditionallyPure(std::move(dims), std::move(out));
}

}  // namespace locc
