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

// Command-line front end. run() takes the output and error streams so the
// test suite can drive it in-process.
//
// Exit codes: 0 success, 1 unexpected failure, 2 invalid input (arguments,
// JSON, domain), 3 resource guard tripped.

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "locc/locc_spectrum.hpp"

namespace locc::cli {

using json_io::Json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitResource = 3;

/// Inline JSON when the argument starts with '[' or '{', otherwise a file path.
inline Json load_json(const std::string& arg) {
    size_t first = arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (arg[first] == '[' || arg[first] == '{')) {
        return json_io::parse(arg);
    }
    std::ifstream in(arg, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot read input file '" + arg + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return json_io::parse(buf.str());
}

/// 17 significant digits; "inf" for infinity.
inline std::string format_real(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string rate_curve_csv(const std::vector<std::pair<double, RateResult>>& rows) {
    std::string out = "r,value,argmin_alpha\n";
    for (const auto& [r, result] : rows) {
        out += format_real(r) + "," + format_real(result.value) + ",";
        if (result.argmin_alpha) out += format_real(*result.argmin_alpha);
        out += "\n";
    }
    return out;
}

/// r_start, r_start + step, ... up to r_stop inclusive (within half a step).
inline std::vector<double> r_grid(double start, double stop, double step) {
    if (!(step > 0.0) || !(stop >= start) || !std::isfinite(stop)) {
        throw ValidationError("r grid needs step > 0 and stop >= start");
    }
    auto count = static_cast<size_t>(std::floor((stop - start) / step + 0.5)) + 1;
    if (count > 1'000'000) {
        throw ResourceError("r grid exceeds 10^6 points");
    }
    std::vector<double> out(count);
    for (size_t i = 0; i < count; i++) out[i] = start + static_cast<double>(i) * step;
    return out;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Asymptotic LOCC conversion rates, spectral points and protocol simulation"};
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("--out", out_path, "Write the result to this file instead of stdout");
    app.set_version_flag("--version", "locc-spectrum 0.1.0");

    std::string p_arg;
    std::string q_arg;
    double r = 0.0;

    auto add_pq = [&](CLI::App* sub, bool need_q) {
        sub->add_option("--p", p_arg, "Source weights: JSON array, {\"weights\": [...]}, or a file")->required();
        if (need_q) {
            sub->add_option("--q", q_arg, "Target weights: JSON array, {\"weights\": [...]}, or a file")->required();
        }
    };

    auto* rate = app.add_subcommand("rate", "Converse-exponent rate E*(r, P, Q) as JSON");
    add_pq(rate, true);
    rate->add_option("--r", r, "Converse error exponent in bits per copy")->capture_default_str();

    std::vector<double> r_values;
    double r_start = 0.0;
    double r_stop = 1.0;
    double r_step = 0.05;
    auto* curve = app.add_subcommand("rate-curve", "E*(r, P, Q) over a list or grid of r, as CSV");
    add_pq(curve, true);
    auto* r_list = curve->add_option("--r-values", r_values, "Comma-separated r values")->delimiter(',');
    curve->add_option("--r-start", r_start, "First r of the grid")->capture_default_str()->excludes(r_list);
    curve->add_option("--r-stop", r_stop, "Last r of the grid")->capture_default_str()->excludes(r_list);
    curve->add_option("--r-step", r_step, "Grid spacing")->capture_default_str()->excludes(r_list);

    auto* det = app.add_subcommand("det-rate", "Deterministic rate min_a H_a(P) / H_a(Q) as JSON");
    add_pq(det, true);

    auto* conc = app.add_subcommand("concentrate", "Entanglement concentration rate at exponent r as JSON");
    add_pq(conc, false);
    conc->add_option("--r", r, "Converse error exponent in bits per copy")->capture_default_str();

    auto* convert = app.add_subcommand("convert", "Single-copy convertibility and optimal success probability");
    add_pq(convert, true);

    size_t n = 1;
    std::optional<size_t> m;
    auto* oracle = app.add_subcommand("oracle", "Finite-copy conversion check by majorization of product powers");
    add_pq(oracle, true);
    oracle->add_option("--n", n, "Source copies")->required()->check(CLI::PositiveNumber);
    oracle->add_option("--m", m, "Target copies; omitted means the largest extractable m")
        ->check(CLI::PositiveNumber);
    oracle->add_option("--r", r, "Success floor 2^{-n r}")->capture_default_str();

    std::optional<double> v_star;
    bool no_weights = false;
    auto* trunc = app.add_subcommand("truncate", "Clip P^n at 2^{n v_star} and renormalize");
    add_pq(trunc, false);
    trunc->add_option("--q", q_arg, "Optional target; adds whether the truncation is majorized by Q^n");
    trunc->add_option("--n", n, "Copy count")->required()->check(CLI::PositiveNumber);
    trunc->add_option("--v-star", v_star, "Clipping exponent; default -0.9 H(P)");
    trunc->add_flag("--no-weights", no_weights, "Leave the truncated distribution out of the report");

    SweepConfig sweep;
    auto* verify = app.add_subcommand("spectrum-verify", "Random sweep of the spectral inequalities");
    verify->add_option("--instances", sweep.instances, "Number of random instances")->capture_default_str();
    verify->add_option("--seed", sweep.seed, "Seed of the instance generator")->capture_default_str();
    verify->add_option("--max-dim", sweep.max_dim, "Largest local dimension")->capture_default_str();

    std::string state_arg;
    std::string protocol_arg;
    bool mixed = false;
    auto* sim = app.add_subcommand("simulate", "Apply a protocol to a state");
    sim->add_option("--state", state_arg, "PureState or ConditionallyPure JSON, or a file")->required();
    sim->add_option("--protocol", protocol_arg, "Protocol JSON, or a file")->required();
    sim->add_flag("--mixed", mixed, "Track a dense mixed state (accepts non-remembering steps)");

    auto* nf = app.add_subcommand("normal-form", "Rewrite a protocol as remembering steps plus a register trace");
    nf->add_option("--protocol", protocol_arg, "Protocol JSON, or a file")->required();

    std::string result;
    try {
        app.parse(argc, argv);

        auto weights = [](const std::string& arg, const char* what) {
            return json_io::weights_from_json(load_json(arg), what);
        };
        auto emit = [&](const Json& j) { result = j.dump(2) + "\n"; };

        if (rate->parsed()) {
            emit(json_io::to_json(converse_rate({weights(p_arg, "p"), weights(q_arg, "q"), r})));
        } else if (curve->parsed()) {
            std::vector<double> grid = r_list->count() > 0 ? r_values : r_grid(r_start, r_stop, r_step);
            result = rate_curve_csv(rate_curve(weights(p_arg, "p"), weights(q_arg, "q"), grid));
        } else if (det->parsed()) {
            emit(json_io::to_json(deterministic_rate(weights(p_arg, "p"), weights(q_arg, "q"))));
        } else if (conc->parsed()) {
            emit(json_io::to_json(concentration_rate(weights(p_arg, "p"), r)));
        } else if (convert->parsed()) {
            WeightVector p = weights(p_arg, "p");
            WeightVector q = weights(q_arg, "q");
            emit(Json{{"nielsen", nielsen_convertible(p, q)}, {"probability", optimal_conversion_probability(p, q)}});
        } else if (oracle->parsed()) {
            WeightVector p = weights(p_arg, "p");
            WeightVector q = weights(q_arg, "q");
            if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("r must be finite and nonnegative");
            double s = std::exp2(-static_cast<double>(n) * r);
            if (m) {
                emit(Json{{"n", n}, {"m", *m}, {"s", s}, {"ok", exact_multi_copy_check(p, q, n, *m, s)}});
            } else {
                emit(Json{{"n", n}, {"m", max_extractable_copies(p, q, n, r)}, {"s", s}, {"ok", true}});
            }
        } else if (trunc->parsed()) {
            WeightVector p = weights(p_arg, "p");
            TruncationReport report = truncate(p, n, v_star.value_or(default_v_star(p)));
            Json j = json_io::to_json(report, !no_weights);
            if (!q_arg.empty()) {
                WeightVector q = weights(q_arg, "q");
                require_normalized(q, "target distribution");
                j["majorized_by_target"] = majorizes(report.truncated, product_power(q, n));
            }
            emit(j);
        } else if (verify->parsed()) {
            emit(json_io::to_json(spectrum_sweep(sweep)));
        } else if (sim->parsed()) {
            Protocol protocol = json_io::protocol_from_json(load_json(protocol_arg));
            Json state_json = load_json(state_arg);
            if (state_json.is_object() && state_json.contains("blocks")) {
                emit(json_io::to_json(apply_protocol(json_io::mixed_state_from_json(state_json), protocol)));
            } else {
                ConditionallyPure state = json_io::conditionally_pure_from_json(state_json);
                if (mixed) {
                    emit(json_io::to_json(apply_protocol(MixedState::from_conditionally_pure(state), protocol)));
                } else {
                    ProtocolOutput output = apply_protocol(state, protocol);
                    emit(std::visit([](const auto& s) { return json_io::to_json(s); }, output));
                }
            }
        } else if (nf->parsed()) {
            emit(json_io::to_json(to_normal_form(json_io::protocol_from_json(load_json(protocol_arg)))));
        }
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const nlohmann::json::exception& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }

    if (out_path.empty()) {
        out << result;
    } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file || !(file << result)) {
            err << "error: cannot write '" << out_path << "'\n";
            return kExitFailure;
        }
    }
    return kExitOk;
}

}  // namespace locc::cli
