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

// JSON forms of the library types. Objects serialize with sorted keys.
// Infinite values are written as the string "inf"; absent optionals as null.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "locc/locc.hpp"
#include "locc/majorization.hpp"
#include "locc/rate.hpp"
#include "locc/verify.hpp"

namespace locc::json_io {

using Json = nlohmann::json;

/// Parses text, reporting the byte offset of a syntax error.
inline Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ValidationError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

namespace detail {

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
    throw ValidationError(where + ": " + what);
}

inline const Json& field(const Json& j, const char* name, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    auto it = j.find(name);
    if (it == j.end()) fail(where, std::string("missing field '") + name + "'");
    return *it;
}

inline double number(const Json& j, const std::string& where) {
    if (j.is_string() && j.get<std::string>() == "inf") return kInfinity;
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

inline size_t count(const Json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 0) fail(where, "expected a nonnegative integer");
    return j.get<size_t>();
}

inline std::vector<double> numbers(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (size_t i = 0; i < j.size(); i++) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

inline Json real(double x) {
    if (std::isinf(x)) return x > 0 ? Json("inf") : Json("-inf");
    return Json(x);
}

inline const std::string& string(const Json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get_ref<const std::string&>();
}

inline std::map<std::string, std::string> label_map(const Json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object of labels");
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : j.items()) out.emplace(k, string(v, where + "." + k));
    return out;
}

}  // namespace detail

inline Json to_json(const WeightVector& w) { return Json{{"weights", w.vector()}}; }

/// Accepts {"weights": [...]} or a bare array.
inline WeightVector weights_from_json(const Json& j, const std::string& where = "weights") {
    const Json& arr = j.is_array() ? j : detail::field(j, "weights", where);
    return WeightVector(detail::numbers(arr, where));
}

inline Json to_json(const PureState& s) {
    std::vector<double> re(s.size());
    std::vector<double> im(s.size());
    for (size_t i = 0; i < s.size(); i++) {
        re[i] = s.amplitudes()[i].real();
        im[i] = s.amplitudes()[i].imag();
    }
    return Json{{"dims", s.dims()}, {"re", re}, {"im", im}};
}

/// "im" may be omitted for real amplitudes.
inline PureState pure_state_from_json(const Json& j, const std::string& where = "state") {
    const Json& dims_json = detail::field(j, "dims", where);
    if (!dims_json.is_array()) detail::fail(where, "dims must be an array");
    std::vector<size_t> dims;
    for (const auto& d : dims_json) dims.push_back(detail::count(d, where + ".dims"));
    std::vector<double> re = detail::numbers(detail::field(j, "re", where), where + ".re");
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("im")) im = detail::numbers(j.at("im"), where + ".im");
    if (im.size() != re.size()) detail::fail(where, "re and im have different lengths");
    std::vector<Complex> amps(re.size());
    for (size_t i = 0; i < re.size(); i++) amps[i] = {re[i], im[i]};
    return PureState(std::move(dims), std::move(amps));
}

inline Json to_json(const ConditionallyPure& s) {
    Json branches = Json::object();
    for (const auto& [label, state] : s.branches()) branches[label] = to_json(state);
    return Json{{"dims", s.dims()}, {"branches", branches}};
}

/// Accepts {"branches": {...}} (with "dims" required only when there are no branches) or a bare PureState.
inline ConditionallyPure conditionally_pure_from_json(const Json& j, const std::string& where = "state") {
    if (j.is_object() && !j.contains("branches")) {
        return ConditionallyPure::from_pure(pure_state_from_json(j, where));
    }
    const Json& b = detail::field(j, "branches", where);
    if (!b.is_object()) detail::fail(where, "branches must be an object");
    ConditionallyPure::Branches branches;
    for (const auto& [label, state] : b.items()) {
        branches.emplace(label, pure_state_from_json(state, where + ".branches." + label));
    }
    std::vector<size_t> dims;
    if (j.contains("dims")) {
        for (const auto& d : j.at("dims")) dims.push_back(detail::count(d, where + ".dims"));
    } else if (!branches.empty()) {
        dims = branches.begin()->second.dims();
    } else {
        detail::fail(where, "an empty branch map needs dims");
    }
    return ConditionallyPure(std::move(dims), std::move(branches));
}

inline Json to_json(const Matrix& m) {
    Json re = Json::array();
    Json im = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        std::vector<double> r(static_cast<size_t>(m.cols()));
        std::vector<double> c(static_cast<size_t>(m.cols()));
        for (Eigen::Index k = 0; k < m.cols(); k++) {
            r[static_cast<size_t>(k)] = m(i, k).real();
            c[static_cast<size_t>(k)] = m(i, k).imag();
        }
        re.push_back(r);
        im.push_back(c);
    }
    return Json{{"re", re}, {"im", im}};
}

inline Matrix matrix_from_json(const Json& j, const std::string& where) {
    const Json& re = detail::field(j, "re", where);
    if (!re.is_array() || re.empty()) detail::fail(where, "re must be a nonempty array of rows");
    const Json* im = j.contains("im") ? &j.at("im") : nullptr;
    if (im && (!im->is_array() || im->size() != re.size())) detail::fail(where, "im must match re");
    auto rows = static_cast<Eigen::Index>(re.size());
    Eigen::Index cols = -1;
    Matrix m;
    for (Eigen::Index i = 0; i < rows; i++) {
        std::string row_where = where + ".re[" + std::to_string(i) + "]";
        std::vector<double> r = detail::numbers(re[static_cast<size_t>(i)], row_where);
        std::vector<double> c(r.size(), 0.0);
        if (im) c = detail::numbers((*im)[static_cast<size_t>(i)], where + ".im[" + std::to_string(i) + "]");
        if (cols < 0) {
            cols = static_cast<Eigen::Index>(r.size());
            if (cols == 0) detail::fail(where, "rows must be nonempty");
            m = Matrix::Zero(rows, cols);
        }
        if (static_cast<Eigen::Index>(r.size()) != cols || c.size() != r.size()) {
            detail::fail(row_where, "ragged matrix row");
        }
        for (Eigen::Index k = 0; k < cols; k++) {
            m(i, k) = Complex{r[static_cast<size_t>(k)], c[static_cast<size_t>(k)]};
        }
    }
    return m;
}

inline Json to_json(const LoccStep& s) {
    Json kraus = Json::object();
    for (const auto& [j, k] : s.kraus) kraus[j] = to_json(k);
    return Json{{"party", s.party}, {"kraus", kraus}, {"read", s.read}, {"write", s.write}};
}

inline LoccStep step_from_json(const Json& j, const std::string& where) {
    LoccStep s;
    s.party = detail::count(detail::field(j, "party", where), where + ".party");
    const Json& kraus = detail::field(j, "kraus", where);
    if (!kraus.is_object()) detail::fail(where, "kraus must be an object");
    for (const auto& [k, m] : kraus.items()) s.kraus.emplace(k, matrix_from_json(m, where + ".kraus." + k));
    s.read = detail::label_map(detail::field(j, "read", where), where + ".read");
    s.write = detail::label_map(detail::field(j, "write", where), where + ".write");
    return s;
}

inline Json to_json(const Protocol& p) {
    Json steps = Json::array();
    for (const auto& s : p.steps()) steps.push_back(to_json(s));
    return Json{{"steps", steps}, {"trace_final_register", p.trace_final_register()}};
}

inline Protocol protocol_from_json(const Json& j, const std::string& where = "protocol") {
    const Json& steps_json = detail::field(j, "steps", where);
    if (!steps_json.is_array()) detail::fail(where, "steps must be an array");
    std::vector<LoccStep> steps;
    for (size_t i = 0; i < steps_json.size(); i++) {
        steps.push_back(step_from_json(steps_json[i], where + ".steps[" + std::to_string(i) + "]"));
    }
    bool trace = false;
    if (j.contains("trace_final_register")) {
        if (!j.at("trace_final_register").is_boolean()) detail::fail(where, "trace_final_register must be a boolean");
        trace = j.at("trace_final_register").get<bool>();
    }
    return Protocol(std::move(steps), trace);
}

inline Json to_json(const MixedState& s) {
    Json blocks = Json::object();
    for (const auto& [label, block] : s.blocks()) blocks[label] = to_json(block);
    return Json{{"dims", s.dims()}, {"blocks", blocks}};
}

inline MixedState mixed_state_from_json(const Json& j, const std::string& where = "state") {
    std::vector<size_t> dims;
    for (const auto& d : detail::field(j, "dims", where)) dims.push_back(detail::count(d, where + ".dims"));
    const Json& b = detail::field(j, "blocks", where);
    if (!b.is_object()) detail::fail(where, "blocks must be an object");
    MixedState::Blocks blocks;
    for (const auto& [label, m] : b.items()) blocks.emplace(label, matrix_from_json(m, where + ".blocks." + label));
    return MixedState(std::move(dims), std::move(blocks));
}

inline Json to_json(const RateResult& r) {
    return Json{{"value", detail::real(r.value)},
                {"argmin_alpha", r.argmin_alpha ? Json(*r.argmin_alpha) : Json(nullptr)},
                {"grid_size", r.grid_size},
                {"refinement_steps", r.refinement_steps},
                {"value_tolerance", r.value_tolerance}};
}

inline RateResult rate_result_from_json(const Json& j, const std::string& where = "rate") {
    RateResult r;
    r.value = detail::number(detail::field(j, "value", where), where + ".value");
    const Json& a = detail::field(j, "argmin_alpha", where);
    if (!a.is_null()) r.argmin_alpha = detail::number(a, where + ".argmin_alpha");
    r.grid_size = detail::count(detail::field(j, "grid_size", where), where + ".grid_size");
    r.refinement_steps = detail::count(detail::field(j, "refinement_steps", where), where + ".refinement_steps");
    r.value_tolerance = detail::number(detail::field(j, "value_tolerance", where), where + ".value_tolerance");
    return r;
}

/// With include_weights = false the truncated distribution is left out.
inline Json to_json(const TruncationReport& t, bool include_weights = true) {
    Json out{{"n", t.n},       {"v_star", t.v_star}, {"t_n", t.t_n},
             {"x_n", t.x_n},   {"clipped_mass", t.clipped_mass}};
    if (include_weights) out["truncated"] = to_json(t.truncated);
    return out;
}

inline TruncationReport truncation_report_from_json(const Json& j, const std::string& where = "truncation") {
    TruncationReport t;
    t.n = detail::count(detail::field(j, "n", where), where + ".n");
    t.v_star = detail::number(detail::field(j, "v_star", where), where + ".v_star");
    t.t_n = detail::number(detail::field(j, "t_n", where), where + ".t_n");
    t.x_n = detail::number(detail::field(j, "x_n", where), where + ".x_n");
    t.clipped_mass = detail::number(detail::field(j, "clipped_mass", where), where + ".clipped_mass");
    if (j.contains("truncated")) t.truncated = weights_from_json(j.at("truncated"), where + ".truncated");
    return t;
}

inline Json to_json(const SweepReport& r) {
    Json checks = Json::object();
    for (const auto& t : r.tallies) {
        checks[t.check] = Json{{"instances", t.instances},
                               {"violations", t.violations},
                               {"worst_relative_margin", detail::real(t.worst_margin)}};
    }
    return Json{{"seed", r.seed}, {"instances", r.instances()}, {"violations", r.violations()}, {"checks", checks}};
}

inline SweepReport sweep_report_from_json(const Json& j, const std::string& where = "sweep") {
    SweepReport r;
    const Json& seed = detail::field(j, "seed", where);
    if (!seed.is_number_unsigned()) detail::fail(where, "seed must be a nonnegative integer");
    r.seed = seed.get<uint64_t>();
    const Json& checks = detail::field(j, "checks", where);
    if (!checks.is_object()) detail::fail(where, "checks must be an object");
    for (const char* name : kSweepChecks) {
        std::string w = where + ".checks." + name;
        const Json& c = detail::field(checks, name, w);
        r.tallies.push_back({name, detail::count(detail::field(c, "instances", w), w),
                             detail::count(detail::field(c, "violations", w), w),
                             detail::number(detail::field(c, "worst_relative_margin", w), w)});
    }
    return r;
}

}  // namespace locc::json_io
