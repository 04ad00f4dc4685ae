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

// Finite LOCC protocols acting on k-partite states with a classical register.
//
// A one-step channel acts on a single party. Kraus operator K_j is applied to
// the branch whose register reads read[j], and the result is written under
// register label write[j]:
//
//     rho -> sum_j ((K_j)_party (x) |write[j]><read[j]|) rho ( ... )^*
//
// Conditionally pure states are tracked exactly as pure branches. Mixed
// states (block diagonal in the register) give the general channel
// semantics and serve as the reference for protocol rewrites.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "locc/common.hpp"
#include "locc/spectral.hpp"
#include "locc/state.hpp"

namespace locc {

/// Register label of a pure input and of a traced-out register.
inline const std::string kUnitLabel = "";

/// Separator of path labels produced by to_normal_form.
inline constexpr char kPathSeparator = '|';

/// Dense mixed states are limited to this joint dimension.
inline constexpr size_t kMaxMixedDimension = size_t{1} << 11;

/// Branch-count ceiling for conditionally pure states and normal-form registers.
inline constexpr size_t kMaxBranches = size_t{1} << 12;

struct LoccStep {
    size_t party = 0;
    std::map<std::string, Matrix> kraus;
    std::map<std::string, std::string> read;
    std::map<std::string, std::string> write;

    size_t input_dim() const { return kraus.empty() ? 0 : static_cast<size_t>(kraus.begin()->second.cols()); }
    size_t output_dim() const { return kraus.empty() ? 0 : static_cast<size_t>(kraus.begin()->second.rows()); }

    std::set<std::string> input_labels() const {
        std::set<std::string> out;
        for (const auto& [j, x] : read) out.insert(x);
        return out;
    }

    std::set<std::string> output_labels() const {
        std::set<std::string> out;
        for (const auto& [j, y] : write) out.insert(y);
        return out;
    }

    /// Every Kraus operator writes its own register label.
    bool remembering() const { return output_labels().size() == write.size(); }
};

struct LabelMargin {
    std::string label;
    double top_eigenvalue = 0.0;
    /// 1 - top eigenvalue of sum_{j : read[j] = label} K_j^* K_j.
    double margin = 0.0;
};

struct StepValidation {
    bool ok = true;
    std::vector<LabelMargin> margins;
    std::vector<std::string> violations;
};

/// Structural checks and the Kraus constraint per input label.
inline StepValidation validate_step(const LoccStep& step) {
    StepValidation v;
    auto fail = [&](std::string msg) {
        v.ok = false;
        v.violations.push_back(std::move(msg));
    };
    if (step.kraus.empty()) {
        fail("step has no Kraus operators");
        return v;
    }
    Eigen::Index rows = step.kraus.begin()->second.rows();
    Eigen::Index cols = step.kraus.begin()->second.cols();
    if (rows == 0 || cols == 0) {
        fail("Kraus operators must be nonempty matrices");
    }
    for (const auto& [j, k] : step.kraus) {
        if (k.rows() != rows || k.cols() != cols) {
            fail("Kraus operator '" + j + "' has a different shape");
        }
        if (!k.allFinite()) {
            fail("Kraus operator '" + j + "' has non-finite entries");
        }
        if (!step.read.contains(j)) fail("Kraus operator '" + j + "' has no read label");
        if (!step.write.contains(j)) fail("Kraus operator '" + j + "' has no write label");
    }
    for (const auto& [j, x] : step.read) {
        if (!step.kraus.contains(j)) fail("read map names unknown Kraus index '" + j + "'");
    }
    for (const auto& [j, y] : step.write) {
        if (!step.kraus.contains(j)) fail("write map names unknown Kraus index '" + j + "'");
    }
    if (!v.ok) {
        return v;
    }
    for (const std::string& label : step.input_labels()) {
        Matrix sum = Matrix::Zero(cols, cols);
        for (const auto& [j, k] : step.kraus) {
            if (step.read.at(j) == label) sum += k.adjoint() * k;
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(sum, Eigen::EigenvaluesOnly);
        double top = solver.eigenvalues().maxCoeff();
        v.margins.push_back({label, top, 1.0 - top});
        if (top > 1.0 + kOperatorTolerance) {
            fail("Kraus constraint violated for input label '" + label + "' (top eigenvalue " + std::to_string(top) +
                 ")");
        }
    }
    return v;
}

/// Composable sequence of one-step channels, optionally followed by a trace of the register.
class Protocol {
   public:
    Protocol() = default;

    Protocol(std::vector<LoccStep> steps, bool trace_final_register)
        : steps_(std::move(steps)), trace_final_register_(trace_final_register) {
        std::map<size_t, size_t> current_dim;
        for (size_t i = 0; i < steps_.size(); i++) {
            const LoccStep& s = steps_[i];
            StepValidation v = validate_step(s);
            if (!v.ok) {
                throw ValidationError("step " + std::to_string(i) + ": " + v.violations.front());
            }
            auto it = current_dim.find(s.party);
            if (it != current_dim.end() && it->second != s.input_dim()) {
                throw ValidationError("step " + std::to_string(i) + " expects dimension " +
                                      std::to_string(s.input_dim()) + " on party " + std::to_string(s.party) +
                                      " but the previous step left " + std::to_string(it->second));
            }
            current_dim[s.party] = s.output_dim();
            if (i > 0) {
                std::set<std::string> readable = s.input_labels();
                for (const std::string& y : steps_[i - 1].output_labels()) {
                    if (!readable.contains(y)) {
                        throw ValidationError("step " + std::to_string(i) + " does not read register label '" + y +
                                              "' written by step " + std::to_string(i - 1));
                    }
                }
            }
        }
    }

    const std::vector<LoccStep>& steps() const { return steps_; }
    bool trace_final_register() const { return trace_final_register_; }
    bool empty() const { return steps_.empty(); }

    bool remembering() const {
        return std::all_of(steps_.begin(), steps_.end(), [](const LoccStep& s) { return s.remembering(); });
    }

   private:
    std::vector<LoccStep> steps_;
    bool trace_final_register_ = false;
};

/// Block-diagonal state sum_x rho_x (x) |x><x| with dense blocks over the joint system.
class MixedState {
   public:
    using Blocks = std::map<std::string, Matrix>;

    MixedState(std::vector<size_t> dims, Blocks blocks) : dims_(std::move(dims)), blocks_(std::move(blocks)) {
        size_t d = joint_dimension(dims_);
        for (const auto& [label, block] : blocks_) {
            if (static_cast<size_t>(block.rows()) != d || static_cast<size_t>(block.cols()) != d) {
                throw ValidationError("block '" + label + "' has the wrong dimension");
            }
        }
    }

    static MixedState from_conditionally_pure(const ConditionallyPure& state) {
        Blocks blocks;
        for (const auto& [label, branch] : state.branches()) {
            Eigen::Map<const Eigen::VectorXcd> v(branch.amplitudes().data(),
                                                 static_cast<Eigen::Index>(branch.size()));
            blocks.emplace(label, v * v.adjoint());
        }
        return MixedState(state.dims(), std::move(blocks));
    }

    static size_t joint_dimension(const std::vector<size_t>& dims) {
        size_t d = checked_dimension(dims);
        if (d > kMaxMixedDimension) {
            throw ResourceError("dense mixed states are limited to joint dimension 2^11");
        }
        return d;
    }

    const std::vector<size_t>& dims() const { return dims_; }
    const Blocks& blocks() const { return blocks_; }

    /// The state with the register traced out.
    Matrix register_trace() const {
        size_t d = joint_dimension(dims_);
        Matrix out = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (const auto& [label, block] : blocks_) out += block;
        return out;
    }

    double trace() const { return register_trace().trace().real(); }

    MixedState traced() const { return MixedState(dims_, Blocks{{kUnitLabel, register_trace()}}); }

   private:
    std::vector<size_t> dims_;
    Blocks blocks_;
};

namespace detail {

/// I (x) ... (x) K (x) ... (x) I acting on the joint space.
inline Matrix embed_local(const std::vector<size_t>& dims, size_t party, const Matrix& op) {
    size_t left = 1;
    size_t right = 1;
    for (size_t p = 0; p < party; p++) left *= dims[p];
    for (size_t p = party + 1; p < dims.size(); p++) right *= dims[p];
    auto l = static_cast<Eigen::Index>(left);
    auto r = static_cast<Eigen::Index>(right);
    Eigen::Index rows = l * op.rows() * r;
    Eigen::Index cols = l * op.cols() * r;
    Matrix out = Matrix::Zero(rows, cols);
    for (Eigen::Index a = 0; a < l; a++) {
        for (Eigen::Index o = 0; o < op.rows(); o++) {
            for (Eigen::Index i = 0; i < op.cols(); i++) {
                Complex v = op(o, i);
                if (v == Complex{}) continue;
                for (Eigen::Index b = 0; b < r; b++) {
                    out((a * op.rows() + o) * r + b, (a * op.cols() + i) * r + b) = v;
                }
            }
        }
    }
    return out;
}

inline void require_step_fits(const std::vector<size_t>& dims, const LoccStep& step) {
    StepValidation v = validate_step(step);
    if (!v.ok) {
        throw ValidationError("invalid step: " + v.violations.front());
    }
    if (step.party >= dims.size()) {
        throw ValidationError("step acts on party " + std::to_string(step.party) + " of a " +
                              std::to_string(dims.size()) + "-party state");
    }
    if (dims[step.party] != step.input_dim()) {
        throw ValidationError("step expects dimension " + std::to_string(step.input_dim()) + " on party " +
                              std::to_string(step.party) + ", state has " + std::to_string(dims[step.party]));
    }
}

template <typename Labels>
void require_labels_readable(const Labels& labels, const LoccStep& step) {
    std::set<std::string> readable = step.input_labels();
    for (const auto& [label, value] : labels) {
        if (!readable.contains(label)) {
            throw ValidationError("register label '" + label + "' is not read by the step");
        }
    }
}

}  // namespace detail

/// One step on a conditionally pure state. Rejects steps whose output would
/// mix several Kraus outcomes under one register label.
inline ConditionallyPure apply_step(const ConditionallyPure& state, const LoccStep& step) {
    detail::require_step_fits(state.dims(), step);
    detail::require_labels_readable(state.branches(), step);
    std::vector<size_t> dims = state.dims();
    dims[step.party] = step.output_dim();
    ConditionallyPure::Branches out;
    for (const auto& [j, k] : step.kraus) {
        auto it = state.branches().find(step.read.at(j));
        if (it == state.branches().end()) continue;
        const std::string& y = step.write.at(j);
        if (out.contains(y)) {
            throw ValidationError("register label '" + y +
                                  "' receives several Kraus outcomes; the output is not conditionally pure. "
                                  "Rewrite the protocol with to_normal_form first.");
        }
        out.emplace(y, apply_local(it->second, step.party, k));
    }
    if (out.size() > kMaxBranches) {
        throw ResourceError("branch count exceeds 2^12");
    }
    return ConditionallyPure(std::move(dims), std::move(out));
}

/// One step on a block-diagonal mixed state (general channel semantics).
inline MixedState apply_step(const MixedState& state, const LoccStep& step) {
    detail::require_step_fits(state.dims(), step);
    detail::require_labels_readable(state.blocks(), step);
    std::vector<size_t> dims = state.dims();
    dims[step.party] = step.output_dim();
    size_t d = MixedState::joint_dimension(dims);
    MixedState::Blocks out;
    for (const auto& [j, k] : step.kraus) {
        auto it = state.blocks().find(step.read.at(j));
        if (it == state.blocks().end()) continue;
        Matrix full = detail::embed_local(state.dims(), step.party, k);
        Matrix contribution = full * it->second * full.adjoint();
        auto [slot, inserted] =
            out.try_emplace(step.write.at(j), Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
        slot->second += contribution;
    }
    return MixedState(std::move(dims), std::move(out));
}

using ProtocolOutput = std::variant<ConditionallyPure, MixedState>;

/// Applies every step in order. With trace_final_register the register is
/// summed out and the result is a MixedState under the unit label.
inline ProtocolOutput apply_protocol(const ConditionallyPure& state, const Protocol& protocol) {
    ConditionallyPure current = state;
    for (const LoccStep& step : protocol.steps()) {
        current = apply_step(current, step);
    }
    if (protocol.trace_final_register()) {
        return MixedState::from_conditionally_pure(current).traced();
    }
    return current;
}

inline MixedState apply_protocol(const MixedState& state, const Protocol& protocol) {
    MixedState current = state;
    for (const LoccStep& step : protocol.steps()) {
        current = apply_step(current, step);
    }
    return protocol.trace_final_register() ? current.traced() : current;
}

namespace detail {

inline std::string escape_label(const std::string& label) {
    std::string out;
    for (char c : label) {
        if (c == kPathSeparator || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

/// A step that only renames register labels: one identity Kraus operator per input label.
inline bool is_relabeling(const LoccStep& step) {
    if (step.input_dim() != step.output_dim()) return false;
    if (step.input_labels().size() != step.read.size()) return false;
    auto d = static_cast<Eigen::Index>(step.input_dim());
    Matrix identity = Matrix::Identity(d, d);
    return std::all_of(step.kraus.begin(), step.kraus.end(), [&](const auto& jk) { return jk.second == identity; });
}

}  // namespace detail

/// Rewrites a protocol with a one-point final register (or a traced final
/// register) as remembering steps followed by a trace of the register.
///
/// Register labels of step t become paths "j1|...|jt" through compatible
/// Kraus indices, i.e. sequences with read_{s+1}[j_{s+1}] = write_s[j_s].
/// Step t applies K_{j_t} to the branch labelled by the path prefix, so each
/// step keeps the Kraus constraint of the original step. Pure relabeling
/// steps after the first add no step, so an identity final step turns into
/// the bare register trace.
inline Protocol to_normal_form(const Protocol& protocol) {
    if (!protocol.trace_final_register() && !protocol.empty() &&
        protocol.steps().back().output_labels().size() != 1) {
        throw ValidationError("normal form needs a one-point final register or a traced register");
    }
    struct Path {
        std::string label;
        std::string original;
    };
    std::vector<LoccStep> out;
    std::vector<Path> paths;
    for (size_t t = 0; t < protocol.steps().size(); t++) {
        const LoccStep& step = protocol.steps()[t];
        if (t == 0) {
            LoccStep first{step.party, {}, {}, {}};
            for (const auto& [j, k] : step.kraus) {
                std::string key = detail::escape_label(j);
                first.kraus.emplace(key, k);
                first.read.emplace(key, step.read.at(j));
                first.write.emplace(key, key);
                paths.push_back({key, step.write.at(j)});
            }
            out.push_back(std::move(first));
            continue;
        }
        if (detail::is_relabeling(step)) {
            std::map<std::string, std::string> rename;
            for (const auto& [j, x] : step.read) rename.emplace(x, step.write.at(j));
            std::vector<Path> next;
            for (const Path& path : paths) {
                auto it = rename.find(path.original);
                if (it != rename.end()) next.push_back({path.label, it->second});
            }
            paths = std::move(next);
            continue;
        }
        LoccStep rewritten{step.party, {}, {}, {}};
        std::vector<Path> next;
        for (const Path& path : paths) {
            for (const auto& [j, k] : step.kraus) {
                if (step.read.at(j) != path.original) continue;
                std::string key = path.label + kPathSeparator + detail::escape_label(j);
                rewritten.kraus.emplace(key, k);
                rewritten.read.emplace(key, path.label);
                rewritten.write.emplace(key, key);
                next.push_back({key, step.write.at(j)});
            }
        }
        if (next.size() > kMaxBranches) {
            throw ResourceError("normal-form register exceeds 2^12 labels");
        }
        if (rewritten.kraus.empty()) {
            throw ValidationError("step " + std::to_string(t) + " continues no register path");
        }
        paths = std::move(next);
        out.push_back(std::move(rewritten));
    }
    return Protocol(std::move(out), true);
}

/// Output of lift_direct_sum: the lifted protocol, the branch weights a_y and
/// the per-branch targets phi_2 with sum_y a_y = 1.
struct LiftedProtocol {
    Protocol protocol;
    std::map<std::string, double> weights;
    std::map<std::string, PureState> targets;
};

namespace detail {

/// Normalized Schmidt spectra across every bipartition agree within tol.
inline bool same_local_unitary_class(const PureState& a, const PureState& b, double tol) {
    if (a.dims() != b.dims()) return false;
    double na = a.squared_norm();
    double nb = b.squared_norm();
    if (a.party_count() < 2) return true;
    size_t k = a.party_count();
    for (size_t mask = 0; mask + 1 < (size_t{1} << (k - 1)); mask++) {
        std::vector<size_t> cut{0};
        for (size_t bit = 0; bit + 1 < k; bit++) {
            if (mask & (size_t{1} << bit)) cut.push_back(bit + 1);
        }
        WeightVector sa = schmidt_spectrum(a, cut);
        WeightVector sb = schmidt_spectrum(b, cut);
        size_t n = std::max(sa.size(), sb.size());
        for (size_t i = 0; i < n; i++) {
            double x = i < sa.size() ? sa[i] / na : 0.0;
            double y = i < sb.size() ? sb[i] / nb : 0.0;
            if (std::abs(x - y) > tol) return false;
        }
    }
    return true;
}

inline Matrix direct_sum(const Matrix& a, const Matrix& b) {
    Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

}  // namespace detail

/// Given a remembering protocol carrying `source` to sum_y a_y |phi_2><phi_2| (x) |y><y|,
/// builds a protocol carrying source (+) spectator to
/// sum_y a_y |phi_2 (+) spectator><phi_2 (+) spectator| (x) |y><y|.
///
/// Kraus operator K_z reading x becomes K_z (+) sqrt(c_z / c_x) I, where c_z
/// sums a_y over the final labels descending from z.
inline LiftedProtocol lift_direct_sum(const Protocol& protocol, const PureState& source, const PureState& spectator) {
    if (!protocol.remembering()) {
        throw ValidationError("direct-sum lift needs a protocol of remembering steps");
    }
    if (spectator.party_count() != source.party_count()) {
        throw ValidationError("spectator and source need the same party count");
    }
    ConditionallyPure current = ConditionallyPure::from_pure(source);
    for (const LoccStep& step : protocol.steps()) {
        current = apply_step(current, step);
    }

    LiftedProtocol lifted;
    double total = current.trace();
    if (!(total > 0.0)) {
        throw ValidationError("protocol output is zero; nothing to lift");
    }
    const PureState* reference = nullptr;
    for (const auto& [y, branch] : current.branches()) {
        double a = branch.squared_norm() / total;
        lifted.weights[y] = a;
        if (a <= kSupportThreshold) continue;
        PureState target = branch.scaled(1.0 / std::sqrt(a));
        if (reference && !detail::same_local_unitary_class(*reference, target, 1e-8)) {
            throw ValidationError("protocol output branch '" + y + "' is not proportional to a common target state");
        }
        auto [it, inserted] = lifted.targets.emplace(y, std::move(target));
        if (!reference) reference = &it->second;
    }

    // c for every label, from the last step backwards.
    const auto& steps = protocol.steps();
    std::vector<std::map<std::string, double>> mass(steps.size());
    for (size_t t = steps.size(); t-- > 0;) {
        for (const auto& [z, k] : steps[t].kraus) {
            double c = 0.0;
            if (t + 1 == steps.size()) {
                auto it = lifted.weights.find(z);
                c = it == lifted.weights.end() ? 0.0 : it->second;
            } else {
                for (const auto& [child, parent] : steps[t + 1].read) {
                    if (parent == z) c += mass[t + 1][child];
                }
            }
            mass[t][z] = c;
        }
    }

    std::vector<LoccStep> out;
    for (size_t t = 0; t < steps.size(); t++) {
        const LoccStep& step = steps[t];
        auto e = static_cast<Eigen::Index>(spectator.dim(step.party));
        LoccStep s{step.party, {}, step.read, step.write};
        for (const auto& [z, k] : step.kraus) {
            const std::string& x = step.read.at(z);
            double parent = 0.0;
            if (t == 0) {
                for (const auto& [sibling, label] : step.read) {
                    if (label == x) parent += mass[0][sibling];
                }
            } else {
                parent = mass[t - 1].contains(x) ? mass[t - 1][x] : 0.0;
            }
            double ratio = parent > 0.0 ? std::min(1.0, mass[t][z] / parent) : 0.0;
            s.kraus.emplace(z, detail::direct_sum(k, std::sqrt(ratio) * Matrix::Identity(e, e)));
        }
        out.push_back(std::move(s));
    }
    lifted.protocol = Protocol(std::move(out), protocol.trace_final_register());
    return lifted;
}

/// Unnormalized k-party GHZ state sum_{i<d} |i...i>.
inline PureState ghz_state(size_t d, size_t k) {
    if (d == 0 || k == 0) {
        throw ValidationError("GHZ state needs d >= 1 and k >= 1");
    }
    std::vector<size_t> dims(k, d);
    PureState s = PureState::zero(dims);
    size_t stride = 0;
    size_t power = 1;
    for (size_t p = 0; p < k; p++) {
        stride += power;
        power *= d;
    }
    for (size_t i = 0; i < d; i++) {
        s.mutable_amplitudes()[i * stride] = 1.0;
    }
    return s;
}

}  // namespace locc
