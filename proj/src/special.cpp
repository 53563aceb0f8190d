// Copyright 2026 The lsq Authors
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

#include "lsq/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace lsq {

namespace {

// Orthonormal Hermite functions e^{-z^2/2} phi_j(z) for j = k-1, k, scaled to
// avoid overflow. The common factor cancels in the Newton step; the scale is
// returned so the weight can be formed.
struct EndPair {
    double phi_k;
    double phi_km1;
    double log_scale;
};

EndPair hermite_pair(int k, double z) {
    constexpr double kRescale = 1e150;
    double prev = 0.0;
    double cur = 1.0;
    double log_scale = -std::log(std::numbers::pi) / 4 - z * z / 2;
    for (int j = 0; j < k; ++j) {
        const double next = std::sqrt(2.0 / (j + 1)) * z * cur - std::sqrt(double(j) / (j + 1)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > kRescale) {
            cur /= kRescale;
            prev /= kRescale;
            log_scale += std::log(kRescale);
        }
    }
    return {cur, prev, log_scale};
}

}  // namespace

QuadratureRule gauss_hermite(int k) {
    if (k < 1) {
        throw ValidationError("Gauss-Hermite order must be >= 1, got " + std::to_string(k));
    }
    constexpr int kMaxIterations = 100;
    QuadratureRule rule;
    rule.nodes.resize(k);
    rule.weights.resize(k);
    rule.scaled_weights.resize(k);

    // Eigenvalues of the Jacobi matrix are accurate starting points at any
    // order; Newton on the recurrence then polishes them and yields weights
    // through logarithms, which stay representable far into the tails.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd sub(std::max(k - 1, 0));
    for (int j = 0; j + 1 < k; ++j) {
        sub(j) = std::sqrt((j + 1) / 2.0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> jacobi;
    jacobi.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd guesses = jacobi.eigenvalues();

    const int half = (k + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::abs(guesses(k - 1 - i));
        bool converged = false;
        EndPair p{};
        for (int it = 0; it < kMaxIterations; ++it) {
            p = hermite_pair(k, z);
            // phi_k' = sqrt(2k) phi_{k-1}
            const double step = p.phi_k / (std::sqrt(2.0 * k) * p.phi_km1);
            z -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw NumericalError("Gauss-Hermite node " + std::to_string(i) + " of " + std::to_string(k) +
                                 " did not converge");
        }
        p = hermite_pair(k, z);
        // w = 1 / (k phi_{k-1}(z)^2); with the Gaussian folded into the values
        // this gives w e^{z^2} directly.
        const double log_h = std::log(std::abs(p.phi_km1)) + p.log_scale;
        const double scaled = std::exp(-2.0 * log_h) / k;
        const double weight = std::exp(-2.0 * log_h - z * z) / k;

        rule.nodes(k - 1 - i) = z;
        rule.nodes(i) = -z;
        rule.scaled_weights(k - 1 - i) = scaled;
        rule.scaled_weights(i) = scaled;
        rule.weights(k - 1 - i) = weight;
        rule.weights(i) = weight;
    }
    if (k % 2 == 1) {
        rule.nodes(k / 2) = 0.0;
    }
    return rule;
}

}  // namespace lsq
