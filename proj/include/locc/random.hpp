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

// Seeded random instances for sweeps and property tests.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Uniforms are (x >> 11) * 2^-53 and normals use Box-Muller, both
// written here, so a seed reproduces the same instances on every platform
// (std:: distributions are implementation-defined). Instance i of a sweep
// with seed s draws from its own engine seeded by splitmix64(s ^ splitmix64(i)),
// so results do not depend on how instances are scheduled.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "locc/state.hpp"
#include "locc/weights.hpp"

namespace locc {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline uint64_t instance_seed(uint64_t seed, uint64_t index) { return splitmix64(seed ^ splitmix64(index)); }

class Rng {
   public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi]. Modulo bias is below 2^-40 for the ranges used here.
    size_t integer(size_t lo, size_t hi) { return lo + static_cast<size_t>(engine_() % (hi - lo + 1)); }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();
        double u2 = uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    Complex complex_normal() {
        double re = normal();
        double im = normal();
        return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }

   private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Uniform on the probability simplex (normalized exponentials).
inline WeightVector random_weights(Rng& rng, size_t d) {
    std::vector<double> w(d);
    double total = 0.0;
    for (double& x : w) {
        x = -std::log(1.0 - rng.uniform());
        total += x;
    }
    for (double& x : w) x /= total;
    return WeightVector(std::move(w));
}

inline Matrix random_gaussian_matrix(Rng& rng, size_t rows, size_t cols) {
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        for (Eigen::Index j = 0; j < m.cols(); j++) m(i, j) = rng.complex_normal();
    }
    return m;
}

/// Haar-random normalized pure state.
inline PureState random_state(Rng& rng, const std::vector<size_t>& dims) {
    std::vector<Complex> amps(checked_dimension(dims));
    for (Complex& a : amps) a = rng.complex_normal();
    return PureState(dims, std::move(amps)).normalized();
}

/// Haar-random unitary: QR of a Gaussian matrix with the phases of R removed.
inline Matrix random_unitary(Rng& rng, size_t d) {
    Matrix g = random_gaussian_matrix(rng, d, d);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR();
    for (Eigen::Index i = 0; i < q.cols(); i++) {
        Complex diag = r(i, i);
        double mag = std::abs(diag);
        if (mag > 0.0) q.col(i) *= diag / mag;
    }
    return q;
}

/// Orthogonal projector of the given rank onto a Haar-random subspace.
inline Matrix random_projector(Rng& rng, size_t d, size_t rank) {
    Matrix u = random_unitary(rng, d);
    Matrix v = u.leftCols(static_cast<Eigen::Index>(rank));
    return v * v.adjoint();
}

/// A pair (A, B) of d_out x d_in matrices with top eigenvalue of A*A + B*B drawn from [0.2, 1].
inline std::pair<Matrix, Matrix> random_contraction_pair(Rng& rng, size_t d_out, size_t d_in) {
    Matrix a = random_gaussian_matrix(rng, d_out, d_in);
    Matrix b = random_gaussian_matrix(rng, d_out, d_in);
    Matrix sum = a.adjoint() * a + b.adjoint() * b;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sum, Eigen::EigenvaluesOnly);
    double top = solver.eigenvalues().maxCoeff();
    double scale = std::sqrt(rng.uniform(0.2, 1.0) / top);
    return {a * scale, b * scale};
}

}  // namespace locc
