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

#include "lsq/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "lsq/special.hpp"

namespace lsq {

namespace {

constexpr int kLegendreOrder = 20;

struct LegendreRule {
    std::array<double, kLegendreOrder> nodes{};
    std::array<double, kLegendreOrder> weights{};
};

// Gauss-Legendre on [-1, 1] by Newton on P_k.
const LegendreRule& legendre_rule() {
    static const LegendreRule rule = [] {
        LegendreRule r;
        constexpr int k = kLegendreOrder;
        for (int i = 0; i < k; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
            double dp = 1.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0;
                double p1 = 0.0;
                for (int j = 0; j < k; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1);
                }
                dp = k * (z * p0 - p1) / (z * z - 1.0);
                const double step = p0 / dp;
                z -= step;
                if (std::abs(step) <= 1e-16) {
                    break;
                }
            }
            r.nodes[i] = z;
            r.weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        return r;
    }();
    return rule;
}

}  // namespace

double PositionSampler::density(double x) const {
    const double u = x * sqrt_d_;
    if (u * u > 1400.0) {
        // exp(-u^2/2) would underflow before the recurrence grows; use the scaled path.
        const double psi = eigenfunction(n_, d_, x);
        return psi * psi;
    }
    // Hermite functions are bounded by pi^{-1/4}, so the plain recurrence is safe here.
    static const double kPiQuarter = std::pow(std::numbers::pi, -0.25);
    double prev = 0.0;
    double cur = std::exp(-0.5 * u * u) * kPiQuarter;
    for (int k = 0; k < n_; ++k) {
        const double next = up_[k] * u * cur - down_[k] * prev;
        prev = cur;
        cur = next;
    }
    return sqrt_d_ * cur * cur;
}

double PositionSampler::integrate(double a, double b) const {
    const LegendreRule& rule = legendre_rule();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < kLegendreOrder; ++i) {
        sum += rule.weights[i] * density(mid + half * rule.nodes[i]);
    }
    return sum * half;
}

PositionSampler::PositionSampler(int n, LengthScale d) : n_(n), d_(d.value()), sqrt_d_(std::sqrt(d_)) {
    if (n < 0) {
        throw ValidationError("excitation number must be non-negative");
    }
    up_.resize(n);
    down_.resize(n);
    for (int k = 0; k < n; ++k) {
        up_[k] = std::sqrt(2.0 / (k + 1));
        down_[k] = std::sqrt(double(k) / (k + 1));
    }
    const int cells = 200 + 40 * n;
    double half = std::sqrt((4.0 * n + 6.0) / d_);

    for (int attempt = 0; attempt < 2; ++attempt) {
        grid_.assign(cells + 1, 0.0);
        for (int i = 0; i <= cells; ++i) {
            grid_[i] = -half + 2.0 * half * i / cells;
        }
        mass_.assign(cells + 1, 0.0);
        for (int i = 0; i < cells; ++i) {
            mass_[i + 1] = mass_[i] + integrate(grid_[i], grid_[i + 1]);
        }
        total_ = mass_.back();
        tail_ = std::max(0.0, 1.0 - total_);
        if (tail_ <= 1e-12) {
            break;
        }
        if (attempt == 1) {
            throw NumericalError("position CDF leaves " + std::to_string(tail_) + " outside [-" +
                                 std::to_string(half) + ", " + std::to_string(half) + "]");
        }
        half += 6.0 / std::sqrt(d_);
    }

    // Drop knots whose CDF does not increase (underflowed tails).
    std::vector<double> gx{grid_.front()};
    std::vector<double> gm{mass_.front()};
    for (std::size_t i = 1; i < mass_.size(); ++i) {
        if (mass_[i] > gm.back()) {
            gx.push_back(grid_[i]);
            gm.push_back(mass_[i]);
        }
    }
    grid_ = std::move(gx);
    mass_ = std::move(gm);
    cdf_.resize(mass_.size());
    for (std::size_t i = 0; i < mass_.size(); ++i) {
        cdf_[i] = mass_[i] / total_;
    }
    cdf_.back() = 1.0;

    // Fritsch-Carlson slopes for x(F); the spline only seeds the root polish.
    const std::size_t k = grid_.size();
    std::vector<double> secant(k - 1);
    for (std::size_t i = 0; i + 1 < k; ++i) {
        secant[i] = (grid_[i + 1] - grid_[i]) / (cdf_[i + 1] - cdf_[i]);
    }
    slope_.assign(k, 0.0);
    slope_.front() = secant.front();
    slope_.back() = secant.back();
    for (std::size_t i = 1; i + 1 < k; ++i) {
        const double h0 = cdf_[i] - cdf_[i - 1];
        const double h1 = cdf_[i + 1] - cdf_[i];
        const double w0 = 2.0 * h1 + h0;
        const double w1 = h1 + 2.0 * h0;
        slope_[i] = (w0 + w1) / (w0 / secant[i - 1] + w1 / secant[i]);  // weighted harmonic mean
    }
}

double PositionSampler::inverse(double u) const {
    if (u <= cdf_.front()) {
        return grid_.front();
    }
    if (u >= cdf_.back()) {
        return grid_.back();
    }
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t i = static_cast<std::size_t>(it - cdf_.begin()) - 1;
    const double h = cdf_[i + 1] - cdf_[i];
    const double t = (u - cdf_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    double x = (2 * t3 - 3 * t2 + 1) * grid_[i] + (t3 - 2 * t2 + t) * h * slope_[i] +
               (-2 * t3 + 3 * t2) * grid_[i + 1] + (t3 - t2) * h * slope_[i + 1];

    // Safeguarded Newton on the exact in-cell mass; the spline alone is poor
    // next to nodes of the wavefunction, where the density vanishes quadratically.
    const double target = u * total_ - mass_[i];
    double lo = grid_[i];
    double hi = grid_[i + 1];
    if (!(x > lo && x < hi)) {
        x = 0.5 * (lo + hi);
    }
    for (int it = 0; it < 100; ++it) {
        const double residual = integrate(grid_[i], x) - target;
        if (residual > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        const double p = density(x);
        double next = p > 0.0 ? x - residual / p : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        const double tol = 1e-14 * std::max(1.0, std::abs(x));
        if (std::abs(next - x) <= tol || hi - lo <= tol) {
            return next;
        }
        x = next;
    }
    return x;
}

double PositionSampler::cdf(double x) const {
    if (x <= grid_.front()) {
        return 0.0;
    }
    if (x >= grid_.back()) {
        return 1.0;
    }
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
    return std::min(1.0, (mass_[i] + integrate(grid_[i], x)) / total_);
}

}  // namespace lsq
