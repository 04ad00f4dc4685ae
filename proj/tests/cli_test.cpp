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


#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "../tools/cli_app.hpp"
#include "locc/json_io.hpp"
#include "test_support.hpp"

namespace locc {
namespace {

using json_io::Json;

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "locc-spectrum");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

Json run_json(std::vector<std::string> args) {
    CliResult r = run_cli(std::move(args));
    EXPECT_EQ(r.code, 0) << r.err;
    return Json::parse(r.out);
}

TEST(JsonIo, WeightVectorRoundTrip) {
    WeightVector w({0.1, 0.2, 0.7});
    EXPECT_EQ(json_io::weights_from_json(json_io::to_json(w)).vector(), w.vector());
    EXPECT_EQ(json_io::weights_from_json(Json::parse("[0.5, 0.5]")).vector(), (std::vector<double>{0.5, 0.5}));
    EXPECT_THROW(json_io::weights_from_json(Json::parse("{\"w\": [1]}")), ValidationError);
    EXPECT_THROW(json_io::weights_from_json(Json::parse("[1, \"a\"]")), ValidationError);
    EXPECT_THROW(json_io::weights_from_json(Json::parse("[-1]")), ValidationError);
}

TEST(JsonIo, StatesRoundTrip) {
    Rng rng(81);
    PureState s = random_state(rng, {2, 3});
    PureState back = json_io::pure_state_from_json(Json::parse(json_io::to_json(s).dump()));
    EXPECT_EQ(back.dims(), s.dims());
    EXPECT_EQ(back.amplitudes(), s.amplitudes());

    ConditionallyPure cp({2, 3}, {{"a", s}, {"b|c", s.scaled(0.5)}});
    ConditionallyPure cp_back = json_io::conditionally_pure_from_json(Json::parse(json_io::to_json(cp).dump()));
    EXPECT_EQ(cp_back.branches().at("b|c").amplitudes(), s.scaled(0.5).amplitudes());

    ConditionallyPure empty({2, 3});
    EXPECT_TRUE(json_io::conditionally_pure_from_json(json_io::to_json(empty)).empty());

    MixedState m = MixedState::from_conditionally_pure(cp);
    MixedState m_back = json_io::mixed_state_from_json(Json::parse(json_io::to_json(m).dump()));
    EXPECT_EQ(m_back.blocks().at("a"), m.blocks().at("a"));
}

TEST(JsonIo, StateErrors) {
    EXPECT_THROW(json_io::pure_state_from_json(Json::parse(R"({"dims":[2,2],"re":[1,0,0]})")), ValidationError);
    EXPECT_THROW(json_io::pure_state_from_json(Json::parse(R"({"dims":[2],"re":[1,0],"im":[0]})")),
                 ValidationError);
    EXPECT_THROW(json_io::pure_state_from_json(Json::parse(R"({"re":[1]})")), ValidationError);
}

TEST(JsonIo, ProtocolRoundTrip) {
    Rng rng(82);
    for (int trial = 0; trial < 5; trial++) {
        Protocol p = testing::random_protocol(rng).protocol;
        std::string text = json_io::to_json(p).dump();
        Protocol back = json_io::protocol_from_json(Json::parse(text));
        EXPECT_EQ(json_io::to_json(back).dump(), text);
        EXPECT_EQ(back.trace_final_register(), p.trace_final_register());
        ASSERT_EQ(back.steps().size(), p.steps().size());
        for (size_t i = 0; i < p.steps().size(); i++) {
            for (const auto& [j, k] : p.steps()[i].kraus) EXPECT_EQ(back.steps()[i].kraus.at(j), k);
        }
    }
}

TEST(JsonIo, RaggedMatrixIsRejected) {
    Json bad = Json::parse(R"({"steps":[{"party":0,"kraus":{"a":{"re":[[1,0],[0]]}},
                             "read":{"a":""},"write":{"a":"a"}}]})");
    EXPECT_THROW(json_io::protocol_from_json(bad), ValidationError);
}

TEST(JsonIo, RateResultRoundTrip) {
    RateResult finite = converse_rate({WeightVector({0.75, 0.25}), WeightVector::uniform(2), 0.1});
    RateResult back = json_io::rate_result_from_json(Json::parse(json_io::to_json(finite).dump()));
    EXPECT_EQ(back.value, finite.value);
    EXPECT_EQ(back.argmin_alpha, finite.argmin_alpha);
    EXPECT_EQ(back.grid_size, finite.grid_size);
    EXPECT_EQ(back.refinement_steps, finite.refinement_steps);

    RateResult inf = converse_rate({WeightVector::uniform(2), WeightVector({1.0}), 0.1});
    Json j = json_io::to_json(inf);
    EXPECT_EQ(j["value"], "inf");
    EXPECT_TRUE(j["argmin_alpha"].is_null());
    RateResult inf_back = json_io::rate_result_from_json(Json::parse(j.dump()));
    EXPECT_EQ(inf_back.value, kInfinity);
    EXPECT_FALSE(inf_back.argmin_alpha);
}

TEST(JsonIo, TruncationAndSweepRoundTrip) {
    TruncationReport t = truncate(WeightVector({0.7, 0.3}), 3, -0.5);
    TruncationReport back = json_io::truncation_report_from_json(Json::parse(json_io::to_json(t).dump()));
    EXPECT_EQ(back.x_n, t.x_n);
    EXPECT_EQ(back.truncated.vector(), t.truncated.vector());

    SweepReport sweep = spectrum_sweep({30, 5, 4});
    SweepReport sweep_back = json_io::sweep_report_from_json(Json::parse(json_io::to_json(sweep).dump()));
    EXPECT_EQ(json_io::to_json(sweep_back), json_io::to_json(sweep));
}

TEST(Cli, DetRate) {
    Json j = run_json({"det-rate", "--p", "[0.25,0.25,0.25,0.25]", "--q", "[0.5,0.5]"});
    EXPECT_NEAR(j["value"].get<double>(), 2.0, 1e-10);
    RateResult r = json_io::rate_result_from_json(j);
    EXPECT_TRUE(r.argmin_alpha);
}

TEST(Cli, Convert) {
    Json j = run_json({"convert", "--p", "[0.8,0.2]", "--q", "{\"weights\":[0.5,0.5]}"});
    EXPECT_EQ(j["nielsen"], false);
    EXPECT_NEAR(j["probability"].get<double>(), 0.4, 1e-15);
}

TEST(Cli, RateCurveCsv) {
    CliResult r = run_cli({"rate-curve", "--p", "[0.75,0.25]", "--q", "[0.5,0.5]", "--r-start", "0", "--r-stop",
                           "1", "--r-step", "0.05"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.find('\r'), std::string::npos);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "r,value,argmin_alpha");
    double previous = 0.0;
    int rows = 0;
    while (std::getline(lines, line)) {
        rows++;
        size_t a = line.find(',');
        size_t b = line.find(',', a + 1);
        double value = std::stod(line.substr(a + 1, b - a - 1));
        EXPECT_GE(value, previous - 1e-12);
        previous = value;
    }
    EXPECT_EQ(rows, 21);
    EXPECT_EQ(run_cli({"rate-curve", "--p", "[0.75,0.25]", "--q", "[0.5,0.5]"}).out, r.out);
}

TEST(Cli, RateCurveFormatting) {
    CliResult r = run_cli({"rate-curve", "--p", "[0.5,0.5]", "--q", "[1]", "--r-values", "0,0.1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "r,value,argmin_alpha\n0,inf,\n0.10000000000000001,inf,\n");
}

TEST(Cli, RateAndConcentrateAgree) {
    Json a = run_json({"rate", "--p", "[0.75,0.25]", "--q", "[0.5,0.5]", "--r", "0.1"});
    Json b = run_json({"concentrate", "--p", "[0.75,0.25]", "--r", "0.1"});
    EXPECT_NEAR(a["value"].get<double>(), b["value"].get<double>(), 1e-8);
}

TEST(Cli, Oracle) {
    Json j = run_json({"oracle", "--p", "[0.25,0.25,0.25,0.25]", "--q", "[0.5,0.5]", "--n", "3"});
    EXPECT_EQ(j["m"], 6);
    EXPECT_EQ(j["n"], 3);
    Json k = run_json({"oracle", "--p", "[0.25,0.25,0.25,0.25]", "--q", "[0.5,0.5]", "--n", "1", "--m", "3"});
    EXPECT_EQ(k["ok"], false);
    EXPECT_EQ(k["s"], 1.0);
}

TEST(Cli, Truncate) {
    Json j = run_json({"truncate", "--p", "[0.7,0.3]", "--n", "2", "--v-star", "-0.6"});
    TruncationReport t = json_io::truncation_report_from_json(j);
    EXPECT_NEAR(t.x_n, 1.057892890477922, 1e-13);
    EXPECT_EQ(t.truncated.size(), 4u);
    Json lean = run_json({"truncate", "--p", "[0.4,0.3,0.2,0.1]", "--n", "3", "--no-weights", "--q", "[0.7,0.3]"});
    EXPECT_FALSE(lean.contains("truncated"));
    EXPECT_EQ(lean["majorized_by_target"], true);
    EXPECT_NEAR(lean["v_star"].get<double>(), -0.9 * shannon_entropy(WeightVector({0.4, 0.3, 0.2, 0.1})), 1e-15);
}

TEST(Cli, SpectrumVerifyIsDeterministic) {
    CliResult a = run_cli({"spectrum-verify", "--instances", "300", "--seed", "9"});
    CliResult b = run_cli({"spectrum-verify", "--instances", "300", "--seed", "9"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    Json j = Json::parse(a.out);
    EXPECT_EQ(j["violations"], 0);
    EXPECT_EQ(j["instances"], 300);
    EXPECT_NE(run_cli({"spectrum-verify", "--instances", "300", "--seed", "10"}).out, a.out);
}

TEST(Cli, SimulateAndNormalForm) {
    std::string state = R"({"dims":[2,2],"re":[0.7071067811865476,0,0,0.7071067811865476]})";
    std::string protocol = R"({"steps":[{"party":0,"kraus":{"0":{"re":[[1,0],[0,0]]},"1":{"re":[[0,0],[0,1]]}},
        "read":{"0":"","1":""},"write":{"0":"m","1":"m"}}],"trace_final_register":false})";
    CliResult rejected = run_cli({"simulate", "--state", state, "--protocol", protocol});
    EXPECT_EQ(rejected.code, 2);
    EXPECT_NE(rejected.err.find("to_normal_form"), std::string::npos);

    Json mixed = run_json({"simulate", "--state", state, "--protocol", protocol, "--mixed"});
    MixedState rho = json_io::mixed_state_from_json(mixed);
    EXPECT_NEAR(rho.blocks().at("m")(0, 0).real(), 0.5, 1e-15);

    Json nf = run_json({"normal-form", "--protocol", protocol});
    Protocol rewritten = json_io::protocol_from_json(nf);
    EXPECT_TRUE(rewritten.trace_final_register());
    Json traced = run_json({"simulate", "--state", state, "--protocol", nf.dump()});
    MixedState out = json_io::mixed_state_from_json(traced);
    EXPECT_LE(testing::max_abs_diff(out.register_trace(), rho.register_trace()), 1e-15);

    Json measured = run_json({"simulate", "--state", state, "--protocol",
                              R"({"steps":[{"party":1,"kraus":{"0":{"re":[[1,0],[0,0]]},"1":{"re":[[0,0],[0,1]]}},
                                  "read":{"0":"","1":""},"write":{"0":"0","1":"1"}}]})"});
    ConditionallyPure cp = json_io::conditionally_pure_from_json(measured);
    EXPECT_EQ(cp.branch_count(), 2u);
}

TEST(Cli, InputFromFileAndOutputFile) {
    std::string in_path = ::testing::TempDir() + "weights.json";
    std::string out_path = ::testing::TempDir() + "result.json";
    std::ofstream(in_path) << "{\"weights\": [0.5, 0.5]}";
    CliResult r = run_cli({"--out", out_path, "det-rate", "--p", in_path, "--q", in_path});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(out_path);
    std::stringstream buf;
    buf << in.rdbuf();
    EXPECT_NEAR(Json::parse(buf.str())["value"].get<double>(), 1.0, 1e-10);
    std::remove(in_path.c_str());
    std::remove(out_path.c_str());
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli({"det-rate", "--p", "[0.6", "--q", "[1]"}).code, 2);
    CliResult bad_json = run_cli({"det-rate", "--p", "[0.6,", "--q", "[1]"});
    EXPECT_NE(bad_json.err.find("byte"), std::string::npos);
    EXPECT_EQ(run_cli({"det-rate", "--p", "[0.6,0.6]", "--q", "[1]"}).code, 2);
    EXPECT_EQ(run_cli({"det-rate", "--p", "/nonexistent/file.json", "--q", "[1]"}).code, 2);
    EXPECT_EQ(run_cli({"truncate", "--p", "[0.5,0.5]", "--n", "2", "--v-star", "-2"}).code, 2);
    EXPECT_EQ(run_cli({"oracle", "--p", "[0.5,0.5]", "--q", "[0.5,0.5]", "--n", "30", "--m", "1"}).code, 3);
    EXPECT_EQ(run_cli({"rate", "--p", "[1]"}).code, 2);
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"no-such-command"}).code, 2);
}

TEST(Cli, HelpListsEverySubcommand) {
    CliResult r = run_cli({"--help"});
    EXPECT_EQ(r.code, 0);
    for (const char* sub : {"rate", "rate-curve", "det-rate", "concentrate", "convert", "oracle", "truncate",
                            "spectrum-verify", "simulate", "normal-form"}) {
        EXPECT_NE(r.out.find(sub), std::string::npos) << sub;
    }
    CliResult sub = run_cli({"truncate", "--help"});
    EXPECT_EQ(sub.code, 0);
    EXPECT_NE(sub.out.find("--v-star"), std::string::npos);
}

}  // namespace
}  // namespace locc
