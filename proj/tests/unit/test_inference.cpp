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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "lsq/inference.hpp"
#include "lsq/qfi.hpp"
#include "lsq/sampling.hpp"
#include "lsq/special.hpp"
#include "oracle.hpp"

namespace {

using lsq::LengthScale;
using lsq::testing::adaptive_simpson;
using lsq::testing::eigenfunction_reference;

double density_reference(int n, double d, double x) {
    const double psi = eigenfunction_reference(n, d, x);
    return psi * psi;
}

TEST(Sampler, CdfMatchesQuadrature) {
    for (int n : {0, 3, 12}) {
        for (double d : {0.5, 1.0, 3.0}) {
            const lsq::PositionSampler sampler(n, LengthScale(d));
            const double lo = -sampler.half_width() - 10.0;
            for (double frac : {-0.8, -0.31, 0.0, 0.05, 0.47, 0.9}) {
                const double x = frac * sampler.half_width();
                const double ref =
                    adaptive_simpson([&](double t) { return density_reference(n, d, t); }, lo, x, 1e-14);
                EXPECT_NEAR(sampler.cdf(x), ref, 1e-10) << n << " " << d << " " << x;
            }
        }
    }
}

TEST(Sampler, InverseIsConsistentWithCdf) {
    const lsq::PositionSampler sampler(5, LengthScale(1.3));
    for (double u = 0.001; u < 1.0; u += 0.0371) {
        EXPECT_NEAR(sampler.cdf(sampler.inverse(u)), u, 1e-12) << u;
    }
    EXPECT_THROW(lsq::PositionSampler(-1, LengthScale(1.0)), lsq::ValidationError);
}

TEST(Sampler, KolmogorovSmirnov) {
    const int n = 3;
    const double d = 1.0;
    const lsq::PositionSampler sampler(n, LengthScale(d));
    auto batch = lsq::sample_position(sampler, 4000, 11);
    std::vector<double> q = batch.samples;
    std::sort(q.begin(), q.end());
    // Reference CDF by cumulative Simpson on sorted points.
    double cumulative = adaptive_simpson([&](double t) { return density_reference(n, d, t); }, -20.0, q.front(), 1e-13);
    double ks = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (i > 0) {
            cumulative += adaptive_simpson([&](double t) { return density_reference(n, d, t); }, q[i - 1], q[i], 1e-13);
        }
        const double hi = double(i + 1) / q.size();
        const double lo = double(i) / q.size();
        ks = std::max({ks, std::abs(hi - cumulative), std::abs(cumulative - lo)});
    }
    // 1.63 / sqrt(M) is the 1% critical value.
    EXPECT_LT(ks, 1.63 / std::sqrt(double(q.size())));
}

TEST(Sampler, SecondMomentMatches) {
    const int n = 2;
    const double d = 2.0;
    auto batch = lsq::sample_position(n, LengthScale(d), 20000, 3);
    const double mean_sq = lsq::sum_of_squares(batch.samples) / batch.size();
    const double expected = (2 * n + 1) / (2 * d);
    // Var(q^2) for a Fock state: 2 E[q^2]^2 + (n^2+n+1)/(2 d^2) - (2n+1)^2/(4 d^2) ... bound it loosely.
    EXPECT_NEAR(mean_sq, expected, 5 * 2.0 * expected / std::sqrt(20000.0));
}

TEST(Sampling, DeterministicAndSeedSensitive) {
    auto a = lsq::sample_position(2, LengthScale(1.0), 100, 42);
    auto b = lsq::sample_position(2, LengthScale(1.0), 100, 42);
    auto c = lsq::sample_position(2, LengthScale(1.0), 100, 43);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_NE(a.samples, c.samples);
    EXPECT_EQ(a.seed, std::optional<std::uint64_t>(42));
    EXPECT_EQ(a.d_true, std::optional<double>(1.0));
}

TEST(Likelihood, IsSumOfLogDensities) {
    const std::vector<double> q = {0.1, -0.7, 1.9, 0.33};
    for (int n : {0, 1, 4}) {
        for (double d : {0.4, 1.0, 2.5}) {
            double ref = 0.0;
            for (double x : q) {
                ref += std::log(density_reference(n, d, x));
            }
            EXPECT_NEAR(lsq::log_likelihood(d, q, n), ref, 1e-11 * std::abs(ref) + 1e-11) << n << " " << d;
        }
    }
}

TEST(Likelihood, NodeGivesMinusInfinity) {
    const std::vector<double> q = {0.0, 0.5};
    EXPECT_EQ(lsq::log_likelihood(1.0, q, 1), -std::numeric_limits<double>::infinity());
}

lsq::SampleBatch batch_of(std::vector<double> q) {
    lsq::SampleBatch b;
    b.n = 1;
    b.samples = std::move(q);
    return b;
}

TEST(Estimators, MomClosedForm) {
    const auto b = batch_of({0.4, -1.2, 0.9, 2.0, -0.1});
    const double s = 0.16 + 1.44 + 0.81 + 4.0 + 0.01;
    for (int n : {0, 2, 5}) {
        EXPECT_NEAR(lsq::mom_estimate(b, n).estimate, 5.0 * (2 * n + 1) / (2 * s), 1e-14);
    }
}

TEST(Estimators, LowLevelsCoincideExactly) {
    const auto b = lsq::sample_position(1, LengthScale(1.7), 500, 9);
    const double mom = lsq::mom_estimate(b, 1).estimate;
    EXPECT_EQ(lsq::mle_estimate(b, 1).estimate, mom);
    EXPECT_EQ(lsq::jeffreys_posterior(b).mean(), mom);
    const auto b0 = lsq::sample_position(0, LengthScale(0.6), 300, 2);
    EXPECT_EQ(lsq::mle_estimate(b0, 0).estimate, lsq::mom_estimate(b0, 0).estimate);
}

TEST(Estimators, MleMatchesGridArgmax) {
    const int n = 3;
    const auto b = lsq::sample_position(n, LengthScale(1.0), 400, 5);
    const double mle = lsq::mle_estimate(b, n).estimate;
    double best = 0.0;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (double d = 0.5; d <= 2.0; d += 1e-5) {
        const double ll = lsq::log_likelihood(d, b.samples, n);
        if (ll > best_ll) {
            best_ll = ll;
            best = d;
        }
    }
    EXPECT_NEAR(mle, best, 2e-5);
    EXPECT_GE(lsq::log_likelihood(mle, b.samples, n), best_ll - 1e-9);
}

TEST(Estimators, ReportsCrbAtEstimate) {
    const auto b = lsq::sample_position(2, LengthScale(1.0), 200, 1);
    const auto r = lsq::mle_estimate(b, 2);
    ASSERT_TRUE(r.crb.has_value());
    EXPECT_NEAR(*r.crb, 1.0 / (200 * lsq::qfi_fock(2, LengthScale(r.estimate))), 1e-15);
}

TEST(Estimators, NamesRoundTrip) {
    for (auto k : {lsq::EstimatorKind::mom, lsq::EstimatorKind::mle, lsq::EstimatorKind::jeffreys}) {
        EXPECT_EQ(lsq::parse_estimator(lsq::estimator_name(k)), k);
    }
    EXPECT_THROW(lsq::parse_estimator("bayes"), lsq::ValidationError);
}

TEST(Posterior, ConjugateUpdate) {
    const auto b = batch_of({0.5, -1.0, 0.25});
    const double s = 0.25 + 1.0 + 0.0625;
    const auto post = lsq::gamma_posterior(b, 2.0, 0.5);
    EXPECT_DOUBLE_EQ(post.shape, 2.0 + 4.5);
    EXPECT_DOUBLE_EQ(post.rate, 0.5 + s);
    const auto j = lsq::jeffreys_posterior(b);
    EXPECT_DOUBLE_EQ(j.shape, 4.5);
    EXPECT_DOUBLE_EQ(j.rate, s);
    // Vanishing prior approaches the Jeffreys posterior.
    EXPECT_NEAR(lsq::gamma_posterior(b, 1e-12, 1e-12).mean(), j.mean(), 1e-10);
    EXPECT_THROW(lsq::gamma_posterior(b, -1.0, 1.0), lsq::ValidationError);
}

TEST(CosineIntegral, MatchesSeriesByQuadrature) {
    constexpr double euler_gamma = 0.57721566490153286061;
    EXPECT_NEAR(lsq::cosine_integral(1.0), 0.3374039229009681, 1e-14);
    for (double x : {1e-3, 0.2, 0.9, 2.5, 7.0, 15.0, 40.0}) {
        const double tail = adaptive_simpson(
            [](double t) { return t == 0.0 ? 0.0 : (std::cos(t) - 1.0) / t; }, 0.0, x, 1e-14);
        EXPECT_NEAR(lsq::cosine_integral(x), euler_gamma + std::log(x) + tail, 1e-11) << x;
    }
    EXPECT_THROW(lsq::cosine_integral(0.0), lsq::ValidationError);
}

TEST(CovariantCost, Behavior) {
    EXPECT_EQ(lsq::covariant_cost(1.5, 1.5, 0.1), -std::numeric_limits<double>::infinity());
    // Symmetric in the log ratio.
    EXPECT_DOUBLE_EQ(lsq::covariant_cost(2.0, 1.0, 0.3), lsq::covariant_cost(0.5, 1.0, 0.3));
    EXPECT_NEAR(lsq::covariant_cost(std::exp(1.0), 1.0, 1.0), 0.3374039229009681, 1e-14);
}

TEST(MonteCarlo, DeterministicSummary) {
    const auto a = lsq::mc_benchmark(1, LengthScale(1.0), 200, 30, lsq::EstimatorKind::mom, 7);
    const auto b = lsq::mc_benchmark(1, LengthScale(1.0), 200, 30, lsq::EstimatorKind::mom, 7);
    EXPECT_EQ(a.estimates, b.estimates);
    EXPECT_EQ(a.reps, 30);
    EXPECT_EQ(a.failures, 0);
    const double mean = std::accumulate(a.estimates.begin(), a.estimates.end(), 0.0) / a.reps;
    EXPECT_NEAR(a.mean, mean, 1e-14);
    EXPECT_NEAR(a.crb, 1.0 / (200 * lsq::qfi_fock(1, LengthScale(1.0))), 1e-15);
    ASSERT_TRUE(a.predicted_ratio.has_value());
    EXPECT_NEAR(*a.predicted_ratio, 9.0 / 9.0, 1e-15);
    // Replicate r uses seed + r.
    const auto single = lsq::sample_position(1, LengthScale(1.0), 200, 7 + 4);
    EXPECT_EQ(a.estimates[4], lsq::mom_estimate(single, 1).estimate);
}

TEST(MonteCarlo, Validation) {
    EXPECT_THROW(lsq::mc_benchmark(1, LengthScale(1.0), 0, 3, lsq::EstimatorKind::mom, 1), lsq::ValidationError);
    EXPECT_THROW(lsq::mc_benchmark(1, LengthScale(1.0), 10, 0, lsq::EstimatorKind::mom, 1), lsq::ValidationError);
}

}  // namespace
