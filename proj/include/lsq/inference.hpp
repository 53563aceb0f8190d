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

// Estimating d from position measurements on |psi_n(d)>.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lsq/fockspace.hpp"
#include "lsq/sampling.hpp"

namespace lsq {

struct SampleBatch {
    int n = 0;
    std::optional<double> d_true;  // absent for external data
    std::vector<double> samples;
    std::optional<std::uint64_t> seed;
    std::string generator;

    int size() const { return static_cast<int>(samples.size()); }
};

/// M draws of the position of |psi_n(d)>; draw i uses the i-th uniform of
/// PhiloxStream(seed).
SampleBatch sample_position(int n, LengthScale d, int shots, std::uint64_t seed);
SampleBatch sample_position(const PositionSampler& sampler, int shots, std::uint64_t seed);

enum class EstimatorKind { mom, mle, jeffreys };

std::string_view estimator_name(EstimatorKind kind);
EstimatorKind parse_estimator(std::string_view name);

struct EstimateReport {
    EstimatorKind estimator = EstimatorKind::mom;
    double estimate = 0.0;
    int shots = 0;
    double log_likelihood = 0.0;
    int iterations = 0;
    double bracket_low = 0.0;
    double bracket_high = 0.0;
    /// Delta-method variance of the MOM estimate.
    std::optional<double> asymptotic_variance;
    /// 1 / (M QFI) evaluated at the estimate.
    std::optional<double> crb;
    std::map<std::string, double> diagnostics;
};

/// sum of q_i^2 in index order; every estimator goes through this.
double sum_of_squares(std::span<const double> samples);

/// d = M(2n+1) / (2 sum q^2).
EstimateReport mom_estimate(const SampleBatch& batch, int n);

/// Natural-log likelihood sum_i ln psi_n(d, q_i)^2. Returns -infinity if any
/// q sqrt(d) is a node of H_n.
double log_likelihood(double d, std::span<const double> samples, int n);

/// Maximizer of log_likelihood. For n <= 1 the stationary point
/// M(2n+1)/(2 sum q^2) is returned in closed form (the same expression as
/// mom_estimate). Otherwise a 400-point log grid on [MOM/10, 10 MOM] brackets
/// the maximum (widened once by 10x on a boundary hit), then golden-section
/// search refines to relative width 1e-10.
EstimateReport mle_estimate(const SampleBatch& batch, int n, int grid_points = 400);

struct GammaPosterior {
    double shape = 0.0;
    double rate = 0.0;

    double mean() const { return shape / rate; }
};

/// Conjugate update for n = 1: Gamma(s + 3M/2, lambda + sum q^2).
GammaPosterior gamma_posterior(const SampleBatch& batch, double prior_shape, double prior_rate);
/// Posterior under the 1/d prior, Gamma(3M/2, sum q^2). Requires n = 1, M >= 1.
GammaPosterior jeffreys_posterior(const SampleBatch& batch);

/// Ci(x) = -int_x^inf cos(t)/t dt for x > 0.
double cosine_integral(double x);

/// Ci(eps |ln(d_hat / d)|); -infinity when d_hat == d.
double covariant_cost(double d_hat, double d, double eps);

struct McReport {
    int n = 0;
    double d = 1.0;
    int shots = 0;
    int reps = 0;
    EstimatorKind estimator = EstimatorKind::mom;
    std::uint64_t seed = 0;
    std::vector<double> estimates;  // NaN marks a failed replicate
    int failures = 0;
    double mean = 0.0;
    double bias = 0.0;
    double bias_standard_error = 0.0;
    double variance = 0.0;
    double crb = 0.0;
    double variance_ratio = 0.0;
    /// (n^2+n+1)^2 / (2n+1)^2 for MOM.
    std::optional<double> predicted_ratio;
};

/// Replicate r draws with seed + r. Throws NumericalError if more than 1% of
/// replicates fail.
McReport mc_benchmark(int n, LengthScale d, int shots, int reps, EstimatorKind estimator, std::uint64_t seed);

}  // namespace lsq
