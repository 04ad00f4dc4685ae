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

// Seeded random sweeps over the projection-split, general-split and trace
// inequalities, reporting violation counts and the worst relative margin.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "locc/parallel.hpp"
#include "locc/random.hpp"
#include "locc/spectral.hpp"

namespace locc {

struct SweepConfig {
    size_t instances = 10'000;
    uint64_t seed = 1;
    size_t max_dim = 6;
};

struct SweepTally {
    std::string check;
    size_t instances = 0;
    size_t violations = 0;
    double worst_margin = kInfinity;
};

struct SweepReport {
    uint64_t seed = 0;
    std::vector<SweepTally> tallies;

    size_t violations() const {
        size_t v = 0;
        for (const auto& t : tallies) v += t.violations;
        return v;
    }
    size_t instances() const {
        size_t n = 0;
        for (const auto& t : tallies) n += t.instances;
        return n;
    }
};

inline constexpr std::array<const char*, 3> kSweepChecks = {"projection_split", "general_split", "trace_inequality"};

/// Instance i runs check i % 3 with alpha drawn from {0.1, ..., 1.0} and local dimensions in [2, max_dim].
inline InequalityWitness sweep_instance(uint64_t seed, size_t i, size_t max_dim) {
    Rng rng(instance_seed(seed, i));
    double alpha = static_cast<double>(rng.integer(1, 10)) / 10.0;
    size_t d0 = rng.integer(2, max_dim);
    size_t d1 = rng.integer(2, max_dim);
    switch (i % 3) {
        case 0: {
            PureState state = random_state(rng, {d0, d1});
            size_t party = rng.integer(0, 1);
            size_t d = state.dim(party);
            Matrix projector = random_projector(rng, d, rng.integer(0, d));
            return check_projection_split(state, party, projector, alpha);
        }
        case 1: {
            PureState state = random_state(rng, {d0, d1});
            size_t party = rng.integer(0, 1);
            size_t d_out = rng.integer(1, max_dim);
            auto [a, b] = random_contraction_pair(rng, d_out, state.dim(party));
            return check_general_split(state, party, a, b, alpha);
        }
        default: {
            Matrix x = random_gaussian_matrix(rng, d0, d0);
            Matrix projector = random_projector(rng, d0, rng.integer(0, d0));
            return check_trace_inequality(x, projector, alpha);
        }
    }
}

inline SweepReport spectrum_sweep(const SweepConfig& config) {
    if (config.max_dim < 2) {
        throw ValidationError("sweep needs max_dim >= 2");
    }
    std::vector<InequalityWitness> witnesses(config.instances);
    parallel_for(config.instances,
                 [&](size_t i) { witnesses[i] = sweep_instance(config.seed, i, config.max_dim); });
    SweepReport report;
    report.seed = config.seed;
    for (const char* name : kSweepChecks) report.tallies.push_back({name});
    for (size_t i = 0; i < witnesses.size(); i++) {
        SweepTally& t = report.tallies[i % 3];
        t.instances++;
        if (!witnesses[i].holds) t.violations++;
        t.worst_margin = std::min(t.worst_margin, witnesses[i].relative_margin());
    }
    return report;
}

}  // namespace locc
