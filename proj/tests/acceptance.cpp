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


// Acceptance run: one PASS/FAIL line per criterion with the measured margins.
// Exit status is the number of failed criteria (0 when all pass).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "locc/locc_spectrum.hpp"
#include "test_support.hpp"

namespace locc {
namespace {

using testing::max_abs_diff;
using testing::relative_diff;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

// 1. Converse rate against the uniform-2 target equals the concentration rate.
Outcome concentration_specialization() {
    Rng rng(101);
    double worst = 0.0;
    for (int i = 0; i < 100; i++) {
        WeightVector p = random_weights(rng, rng.integer(1, 8));
        for (double r : {0.0, 0.1, 0.5, 1.0}) {
            double a = converse_rate({p, WeightVector::uniform(2), r}).value;
            double b = concentration_rate(p, r).value;
            double diff = (std::isinf(a) && std::isinf(b)) ? 0.0 : std::abs(a - b);
            worst = std::max(worst, diff);
        }
    }
    return {worst <= 1e-8, fmt("400 cases, max |E* - E_conc| = %.3e (tol 1e-8)", worst)};
}

// 2. r -> 0 limit of the converse rate.
Outcome small_r_limit() {
    Rng rng(102);
    const std::vector<double> rs{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    int close = 0;
    int monotone = 0;
    double worst_final = 0.0;
    for (int i = 0; i < 50; i++) {
        WeightVector p = random_weights(rng, rng.integer(2, 6));
        WeightVector q = random_weights(rng, rng.integer(2, 6));
        double det = deterministic_rate(p, q).value;
        std::vector<double> gaps;
        for (double r : rs) gaps.push_back(std::abs(converse_rate({p, q, r}).value - det));
        bool mono = true;
        for (size_t k = 1; k < gaps.size(); k++) mono = mono && gaps[k] <= gaps[k - 1] + 1e-12;
        monotone += mono;
        close += gaps.back() <= 1e-4;
        worst_final = std::max(worst_final, gaps.back());
    }
    return {close == 50 && monotone == 50,
            fmt("within 1e-4 at r=1e-6: %d/50 (max gap %.3e); monotone gap sequence: %d/50", close, worst_final,
                monotone)};
}

// 3. Finite-copy oracle stays below the rate and climbs toward it.
Outcome oracle_sandwich() {
    struct Pair {
        const char* name;
        WeightVector p;
        WeightVector q;
        size_t n_max;
    };
    std::vector<Pair> pairs{{"(.75,.25)->(.5,.5)", WeightVector({0.75, 0.25}), WeightVector({0.5, 0.5}), 20},
                            {"(.9,.1)->(.7,.3)", WeightVector({0.9, 0.1}), WeightVector({0.7, 0.3}), 20},
                            {"U4->U2", WeightVector::uniform(4), WeightVector::uniform(2), 10}};
    bool pass = true;
    std::string detail;
    for (const Pair& pair : pairs) {
        for (double r : {0.0, 0.5}) {
            double rate = converse_rate({pair.p, pair.q, r}).value;
            std::vector<double> ratios;
            double worst_excess = -kInfinity;
            for (size_t n = 1; n <= pair.n_max; n++) {
                double ratio = static_cast<double>(max_extractable_copies(pair.p, pair.q, n, r)) / static_cast<double>(n);
                ratios.push_back(ratio);
                worst_excess = std::max(worst_excess, ratio - rate);
            }
            size_t half = ratios.size() / 2;
            double first = *std::max_element(ratios.begin(), ratios.begin() + static_cast<long>(half));
            double second = *std::max_element(ratios.begin() + static_cast<long>(half), ratios.end());
            double gap = rate - ratios.back();
            bool ok = worst_excess <= 1e-9 && second >= first && gap < 0.15;
            pass = pass && ok;
            detail += fmt("\n      %s r=%.1f: rate %.6f, m/n at n=%zu %.4f, gap %.4f, max excess %.2e, trend %s%s",
                          pair.name, r, rate, pair.n_max, ratios.back(), gap, worst_excess,
                          second >= first ? "up" : "down", ok ? "" : "  <-- fails");
        }
    }
    return {pass, "sandwich, trend, final gap < 0.15" + detail};
}

// 4. Spectral inequality sweep.
Outcome spectral_sweep() {
    SweepReport report = spectrum_sweep({10'000, 1, 6});
    size_t beyond = 0;
    std::string detail;
    for (const SweepTally& t : report.tallies) {
        detail += fmt(" %s: %zu viol, worst margin %.3e;", t.check.c_str(), t.violations, t.worst_margin);
        if (t.worst_margin < -1e-10) beyond++;
    }
    return {report.violations() == 0 && beyond == 0, fmt("%zu instances;", report.instances()) + detail};
}

// 5. Probability one exactly when majorized. Half the pairs are built as
// p = lambda q + (1 - lambda) pi(q), which is majorized by q.
Outcome nielsen_vidal() {
    Rng rng(105);
    size_t mismatches = 0;
    size_t majorized = 0;
    double worst_one = 0.0;
    for (int i = 0; i < 10'000; i++) {
        size_t d = rng.integer(1, 16);
        WeightVector q = random_weights(rng, d);
        WeightVector p = q;
        if (i % 2 == 0) {
            p = random_weights(rng, rng.integer(1, 16));
        } else {
            std::vector<double> perm(q.values().begin(), q.values().end());
            for (size_t k = perm.size(); k > 1; k--) std::swap(perm[k - 1], perm[rng.integer(0, k - 1)]);
            double lambda = rng.uniform();
            std::vector<double> mix(d);
            for (size_t k = 0; k < d; k++) mix[k] = lambda * q[k] + (1.0 - lambda) * perm[k];
            p = WeightVector(std::move(mix));
        }
        bool m = majorizes(p, q);
        double prob = optimal_conversion_probability(p, q);
        bool one = std::abs(prob - 1.0) <= 1e-12;
        if (m) {
            majorized++;
            worst_one = std::max(worst_one, std::abs(prob - 1.0));
        }
        mismatches += m != one;
    }
    return {mismatches == 0, fmt("10000 pairs (%zu majorized), mismatches %zu, max |prob-1| when majorized %.2e",
                                 majorized, mismatches, worst_one)};
}

struct NormalFormRun {
    Outcome outcome;
    size_t monotone_checks = 0;
    size_t monotone_failures = 0;
    double worst_monotone = kInfinity;
};

Matrix traced_output(const ProtocolOutput& out) {
    if (const auto* cp = std::get_if<ConditionallyPure>(&out)) {
        return MixedState::from_conditionally_pure(*cp).register_trace();
    }
    return std::get<MixedState>(out).register_trace();
}

// 6. Normal form keeps the channel. Also gathers the monotonicity data for 10.
NormalFormRun normal_form_equivalence() {
    Rng rng(106);
    NormalFormRun run;
    double worst = 0.0;
    for (int i = 0; i < 100; i++) {
        testing::RandomProtocol rp = testing::random_protocol(rng, 3, 3);
        Protocol nf = to_normal_form(rp.protocol);
        for (int j = 0; j < 20; j++) {
            ConditionallyPure in = testing::random_conditionally_pure(rng, rp.input_dims, rp.input_labels);
            Matrix reference = apply_protocol(MixedState::from_conditionally_pure(in), rp.protocol).register_trace();
            worst = std::max(worst, max_abs_diff(reference, traced_output(apply_protocol(in, nf))));

            ConditionallyPure state = in;
            for (const LoccStep& step : nf.steps()) {
                ConditionallyPure next = apply_step(state, step);
                for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                    double before = eval_f_alpha_conditional(state, alpha);
                    double after = eval_f_alpha_conditional(next, alpha);
                    double margin = before > 0 ? (before - after) / before : (after <= 0 ? 0.0 : -kInfinity);
                    run.monotone_checks++;
                    run.worst_monotone = std::min(run.worst_monotone, margin);
                    if (margin < -1e-10) run.monotone_failures++;
                }
                state = std::move(next);
            }
        }
    }
    run.outcome = {worst <= 1e-10, fmt("100 protocols x 20 inputs, max entry diff %.3e (tol 1e-10)", worst)};
    return run;
}

// 7. Direct-sum lift of remembering protocols.
Outcome direct_sum_lift() {
    Rng rng(107);
    double worst_state = 0.0;
    double worst_weight = 0.0;
    for (int i = 0; i < 20; i++) {
        PureState s = random_state(rng, {rng.integer(1, 3), rng.integer(1, 3)});
        PureState spectator = random_state(rng, {rng.integer(1, 2), rng.integer(1, 2)}).scaled(rng.uniform(0.1, 2.0));
        Protocol p = testing::random_branching_protocol(rng, s.dims());
        LiftedProtocol lifted = lift_direct_sum(p, s, spectator);
        ConditionallyPure original = std::get<ConditionallyPure>(apply_protocol(ConditionallyPure::from_pure(s), p));
        ConditionallyPure out = std::get<ConditionallyPure>(
            apply_protocol(ConditionallyPure::from_pure(direct_sum(s, spectator)), lifted.protocol));
        if (out.branch_count() != lifted.weights.size()) return {false, fmt("protocol %d: branch count differs", i)};
        for (const auto& [y, a] : lifted.weights) {
            worst_weight = std::max(worst_weight, std::abs(a - original.branches().at(y).squared_norm()));
            PureState expected = direct_sum(lifted.targets.at(y), spectator).scaled(std::sqrt(a));
            worst_state = std::max(worst_state,
                                   max_abs_diff(testing::density(out.branches().at(y)), testing::density(expected)));
        }
    }
    return {worst_state <= 1e-10 && worst_weight <= 1e-10,
            fmt("20 protocols, max branch density diff %.3e, max weight diff %.3e (tol 1e-10)", worst_state,
                worst_weight)};
}

// 8. Type-class lower bound and the partition identity.
Outcome type_class_bound() {
    size_t types = 0;
    size_t failures = 0;
    double worst = kInfinity;
    for (size_t n = 1; n <= 25; n++) {
        for (const NType& t : enumerate_types(n, 3)) {
            TypeClassBound b = check_type_class_bound(t);
            types++;
            failures += !b.holds;
            worst = std::min(worst, b.log2_size - b.log2_bound);
        }
    }
    size_t identity_failures = 0;
    for (size_t alphabet : {2, 3, 4}) {
        for (size_t n = 1; n <= 12; n++) {
            BigInt total = 0;
            for (const NType& t : enumerate_types(n, alphabet)) total += type_class_size(t);
            BigInt expected = boost::multiprecision::pow(BigInt(alphabet), static_cast<unsigned>(n));
            identity_failures += total != expected;
        }
    }
    return {failures == 0 && identity_failures == 0,
            fmt("%zu ternary types n<=25, bound failures %zu, min log2 slack %.4f; partition identity failures %zu",
                types, failures, worst, identity_failures)};
}

// 9. Truncation behaviour for P=(.4,.3,.2,.1), Q=(.7,.3).
Outcome truncation_behaviour() {
    WeightVector p({0.4, 0.3, 0.2, 0.1});
    WeightVector q({0.7, 0.3});
    double v_star = default_v_star(p);
    bool x_ok = true;
    bool decreasing = true;
    bool below_power = true;
    std::vector<bool> check;
    std::string masses;
    double previous = kInfinity;
    for (size_t n = 1; n <= 10; n++) {
        TruncationReport t = truncate(p, n, v_star);
        x_ok = x_ok && t.x_n >= 1.0;
        decreasing = decreasing && t.clipped_mass < previous;
        previous = t.clipped_mass;
        below_power = below_power && majorizes(t.truncated, product_power(p, n));
        check.push_back(truncation_majorization_check(p, q, n, v_star));
        masses += fmt(" %.4f", t.clipped_mass);
    }
    size_t n0 = 11;
    while (n0 > 1 && check[n0 - 2]) n0--;
    bool pass = x_ok && decreasing && below_power && n0 <= 10;
    return {pass, fmt("x_n>=1 %s, clipped mass strictly decreasing %s, truncated below P^n %s, n0 = %zu;",
                      x_ok ? "yes" : "no", decreasing ? "yes" : "no", below_power ? "yes" : "no", n0) +
                      "\n      clipped mass n=1..10:" + masses};
}

// 10. Homomorphism laws and spectral monotonicity on the criterion 6 protocols.
Outcome homomorphism_laws(const NormalFormRun& run) {
    Rng rng(110);
    double mult = 0.0;
    double add = 0.0;
    double homog = 0.0;
    auto random_pure = [&] {
        return random_state(rng, {rng.integer(1, 3), rng.integer(1, 3)}).scaled(rng.uniform(0.5, 2.0));
    };
    for (int i = 0; i < 1000; i++) {
        PureState a = random_pure();
        PureState b = random_pure();
        PureState ab = tensor_product(a, b);
        for (int k = 0; k <= 10; k++) {
            double alpha = k / 10.0;
            mult = std::max(mult, relative_diff(eval_f_alpha(ab, alpha), eval_f_alpha(a, alpha) * eval_f_alpha(b, alpha)));
        }
    }
    for (int i = 0; i < 1000; i++) {
        PureState a = random_pure();
        PureState b = random_pure();
        PureState sum = direct_sum(a, b);
        for (int k = 0; k <= 10; k++) {
            double alpha = k / 10.0;
            add = std::max(add, relative_diff(eval_f_alpha(sum, alpha), eval_f_alpha(a, alpha) + eval_f_alpha(b, alpha)));
        }
    }
    for (int i = 0; i < 1000; i++) {
        PureState a = random_pure();
        Complex c = rng.complex_normal();
        for (int k = 0; k <= 10; k++) {
            double alpha = k / 10.0;
            homog = std::max(homog, relative_diff(eval_f_alpha(a.scaled(c), alpha),
                                                  std::pow(std::norm(c), alpha) * eval_f_alpha(a, alpha)));
        }
    }
    bool pass = mult <= 1e-10 && add <= 1e-10 && homog <= 1e-10 && run.monotone_failures == 0;
    return {pass, fmt("max rel err mult %.2e, add %.2e, homog %.2e (tol 1e-10); monotonicity %zu/%zu steps, "
                      "worst rel margin %.3e",
                      mult, add, homog, run.monotone_checks - run.monotone_failures, run.monotone_checks,
                      run.worst_monotone)};
}

}  // namespace
}  // namespace locc

int main() {
    using namespace locc;
    int failed = 0;
    auto report = [&](int id, const char* name, const std::function<Outcome()>& body) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::printf("%s [%d] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
        std::fflush(stdout);
    };
    report(1, "concentration specialization", concentration_specialization);
    report(2, "r->0 limit", small_r_limit);
    report(3, "oracle sandwich", oracle_sandwich);
    report(4, "spectral inequality sweep", spectral_sweep);
    report(5, "Nielsen-Vidal consistency", nielsen_vidal);
    NormalFormRun nf;
    report(6, "normal-form channel equivalence", [&] {
        nf = normal_form_equivalence();
        return nf.outcome;
    });
    report(7, "direct-sum lift", direct_sum_lift);
    report(8, "type-class bound", type_class_bound);
    report(9, "truncation behaviour", truncation_behaviour);
    report(10, "homomorphism laws", [&] { return homomorphism_laws(nf); });
    std::printf("%d of 10 criteria failed\n", failed);
    return failed;
}
