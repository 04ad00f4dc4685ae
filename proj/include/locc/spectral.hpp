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

// Spectral points f_alpha(phi) = Tr[(Tr_2 |phi><phi|)^alpha] evaluated across a
// cut, their extension to conditionally pure states, and numeric witnesses
// for the split inequalities that characterize monotone homomorphisms.

#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "locc/common.hpp"
#include "locc/state.hpp"
#include "locc/weights.hpp"

namespace locc {

/// alpha in [0, 1]; the exponent of the spectral point.
class SpectralPoint {
   public:
    explicit SpectralPoint(double alpha) : alpha_(alpha) { require_alpha_in_unit_interval(alpha); }
    double alpha() const { return alpha_; }

   private:
    double alpha_;
};

/// Eigenvalues of a Hermitian PSD matrix, non-increasing, with solver noise removed.
///
/// Values within 1e-12 of the largest eigenvalue (relative) are set to zero.
/// Values below -1e-10 (relative to max(1, largest)) mean the input was not PSD.
inline std::vector<double> psd_eigenvalues(const Matrix& hermitian) {
    if (hermitian.rows() == 0) {
        return {};
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw ValidationError("eigendecomposition failed");
    }
    const Eigen::VectorXd& ev = solver.eigenvalues();
    std::vector<double> out(ev.data(), ev.data() + ev.size());
    double top = std::max(0.0, *std::max_element(out.begin(), out.end()));
    double negative_floor = -kOperatorTolerance * std::max(1.0, top);
    for (double& x : out) {
        if (x < negative_floor) {
            throw ValidationError("matrix is not positive semidefinite (eigenvalue " + std::to_string(x) + ")");
        }
        if (x <= kSupportThreshold * top) {
            x = 0.0;
        }
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

/// Tr[H^alpha] for Hermitian PSD H; at alpha = 0 the rank.
inline double trace_power(const Matrix& hermitian, double alpha) {
    std::vector<double> ev = psd_eigenvalues(hermitian);
    if (ev.empty()) {
        return 0.0;
    }
    return power_sum(WeightVector(std::move(ev)), alpha);
}

/// Squared Schmidt coefficients across `cut`, non-increasing. Sums to the squared norm.
inline WeightVector schmidt_spectrum(const PureState& state, const std::vector<size_t>& cut) {
    std::vector<size_t> sorted = normalize_cut(cut, state.party_count());
    Matrix m = matricize(state, sorted);
    // Gram matrix of the smaller side.
    Matrix gram = m.rows() <= m.cols() ? Matrix(m * m.adjoint()) : Matrix(m.adjoint() * m);
    return WeightVector(psd_eigenvalues(gram));
}

inline WeightVector schmidt_spectrum(const PureState& state) { return schmidt_spectrum(state, {0}); }

/// f_alpha across `cut`: the power sum of the Schmidt spectrum.
inline double eval_f_alpha(const PureState& state, const std::vector<size_t>& cut, double alpha) {
    require_alpha_in_unit_interval(alpha);
    return power_sum(schmidt_spectrum(state, cut), alpha);
}

inline double eval_f_alpha(const PureState& state, double alpha) { return eval_f_alpha(state, {0}, alpha); }

/// (sum_x f(phi_x)^(1/alpha))^alpha, or max_x f(phi_x) at alpha = 0. Zero on the empty mixture.
inline double eval_f_alpha_conditional(const ConditionallyPure& state, const std::vector<size_t>& cut,
                                       double alpha) {
    require_alpha_in_unit_interval(alpha);
    if (state.empty()) {
        return 0.0;
    }
    if (alpha == 0.0) {
        double best = 0.0;
        for (const auto& [label, branch] : state.branches()) {
            best = std::max(best, eval_f_alpha(branch, cut, 0.0));
        }
        return best;
    }
    CompensatedAccumulator acc;
    for (const auto& [label, branch] : state.branches()) {
        acc.add(std::pow(eval_f_alpha(branch, cut, alpha), 1.0 / alpha));
    }
    return std::pow(acc.value(), alpha);
}

inline double eval_f_alpha_conditional(const ConditionallyPure& state, double alpha) {
    return eval_f_alpha_conditional(state, {0}, alpha);
}

/// Witness for an inequality lhs >= rhs with relative slack.
struct InequalityWitness {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;

    /// (lhs - rhs) / lhs; negative beyond -1e-10 means a violation.
    double relative_margin() const { return lhs > 0 ? (lhs - rhs) / lhs : (rhs <= 0 ? 0.0 : -kInfinity); }
};

namespace detail {

inline InequalityWitness make_witness(double lhs, double rhs) {
    return {lhs, rhs, lhs >= rhs - kInequalityTolerance * lhs};
}

inline void require_open_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
}

inline void require_bipartite(const PureState& state) {
    if (state.party_count() != 2) {
        throw ValidationError("split checks evaluate f_alpha on a bipartite state");
    }
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline void require_projector(const Matrix& projector, size_t dim) {
    if (static_cast<size_t>(projector.rows()) != dim || static_cast<size_t>(projector.cols()) != dim) {
        throw ValidationError("projector must be " + std::to_string(dim) + "x" + std::to_string(dim));
    }
    if (max_abs(projector * projector - projector) > kOperatorTolerance) {
        throw ValidationError("projector is not idempotent");
    }
    if (max_abs(projector - projector.adjoint()) > kOperatorTolerance) {
        throw ValidationError("projector is not Hermitian");
    }
}

inline double split_rhs(double first, double second, double alpha) {
    return std::pow(std::pow(first, 1.0 / alpha) + std::pow(second, 1.0 / alpha), alpha);
}

}  // namespace detail

/// f(phi) >= (f(P phi)^(1/alpha) + f((I-P) phi)^(1/alpha))^alpha for an orthogonal projection P on `party`.
inline InequalityWitness check_projection_split(const PureState& state, size_t party, const Matrix& projector,
                                                double alpha) {
    detail::require_open_alpha(alpha);
    detail::require_bipartite(state);
    if (party >= state.party_count()) {
        throw ValidationError("party index out of range");
    }
    size_t d = state.dim(party);
    detail::require_projector(projector, d);
    Matrix complement = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) - projector;
    double lhs = eval_f_alpha(state, alpha);
    double first = eval_f_alpha(apply_local(state, party, projector), alpha);
    double second = eval_f_alpha(apply_local(state, party, complement), alpha);
    return detail::make_witness(lhs, detail::split_rhs(first, second, alpha));
}

/// Same inequality with arbitrary A, B subject to A*A + B*B <= I.
inline InequalityWitness check_general_split(const PureState& state, size_t party, const Matrix& a, const Matrix& b,
                                             double alpha) {
    detail::require_open_alpha(alpha);
    detail::require_bipartite(state);
    if (party >= state.party_count()) {
        throw ValidationError("party index out of range");
    }
    if (a.cols() != b.cols() || static_cast<size_t>(a.cols()) != state.dim(party)) {
        throw ValidationError("A and B must act on the party's space");
    }
    Matrix sum = a.adjoint() * a + b.adjoint() * b;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sum, Eigen::EigenvaluesOnly);
    double top = solver.eigenvalues().maxCoeff();
    if (top > 1.0 + kOperatorTolerance) {
        throw ValidationError("A*A + B*B exceeds the identity (top eigenvalue " + std::to_string(top) + ")");
    }
    double lhs = eval_f_alpha(state, alpha);
    double first = eval_f_alpha(apply_local(state, party, a), alpha);
    double second = eval_f_alpha(apply_local(state, party, b), alpha);
    return detail::make_witness(lhs, detail::split_rhs(first, second, alpha));
}

/// [Tr (X*X)^a]^(1/a) >= [Tr (X*PX)^a]^(1/a) + [Tr (X*(I-P)X)^a]^(1/a).
inline InequalityWitness check_trace_inequality(const Matrix& x, const Matrix& projector, double alpha) {
    detail::require_open_alpha(alpha);
    if (x.rows() != x.cols()) {
        throw ValidationError("X must be square");
    }
    if (projector.rows() != x.rows() || projector.cols() != x.cols()) {
        throw ValidationError("projector and X have different dimensions");
    }
    size_t d = static_cast<size_t>(x.rows());
    detail::require_projector(projector, d);
    Matrix complement = Matrix::Identity(x.rows(), x.cols()) - projector;
    auto schatten = [alpha](const Matrix& h) { return std::pow(trace_power(h, alpha), 1.0 / alpha); };
    double lhs = schatten(x.adjoint() * x);
    double rhs = schatten(x.adjoint() * projector * x) + schatten(x.adjoint() * complement * x);
    return detail::make_witness(lhs, rhs);
}

}  // namespace locc
