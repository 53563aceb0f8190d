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

#include "lsq/inference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "lsq/qfi.hpp"
#include "lsq/random.hpp"

namespace lsq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

constexpr std::array<std::pair<EstimatorKind, std::string_view>, 3> kEstimatorNames{{
    {EstimatorKind::mom, "mom"},
    {EstimatorKind::mle, "mle"},
    {EstimatorKind::jeffreys, "jeffreys"},
}};

void require_samples(const SampleBatch& batch) {
    if (batch.samples.empty()) {
        throw ValidationError("sample batch is empty");
    }
    for (const double q : batch.samples) {
        if (!std::isfinite(q)) {
            throw ValidationError("sample batch contains a non-finite value");
        }
    }
}

void require_n(int n) {
    if (n < 0) {
        throw ValidationError("excitation number must be non-negative, got " + std::to_string(n));
    }
}

// sum_i ln|pi^{1/4} phi_n(u_i)| for the orthonormal Hermite functions (without
// the Gaussian), accumulated as a product with a separate binary exponent so only
// one logarithm is taken per batch.
class HermiteLogSum {
   public:
    explicit HermiteLogSum(int n) : n_(n), up_(n), down_(n) {
        for (int k = 0; k < n; ++k) {
            up_[k] = std::sqrt(2.0 / (k + 1));
            down_[k] = std::sqrt(double(k) / (k + 1));
        }
    }

    double operator()(std::span<const double> samples, double sqrt_d) const {
        constexpr double kRescale = 1e150;
        const double eps = std::numeric_limits<double>::epsilon();
        double mantissa = 1.0;
        long exponent = 0;
        double log_extra = 0.0;
        for (const double q : samples) {
            const double u = q * sqrt_d;
            double prev = 0.0;
            double cur = 1.0;
            for (int k = 0; k < n_; ++k) {
                const double a = up_[k] * u * cur;
                const double b = down_[k] * prev;
                const double next = a - b;
                if (k == n_ - 1 && std::abs(next) <= 8 * eps * (std::abs(a) + std::abs(b))) {
                    return kNegInf;
                }
                prev = cur;
                cur = next;
                if (std::abs(cur) > kRescale) {
                    cur /= kRescale;
                    prev /= kRescale;
                    log_extra += std::log(kRescale);
                }
            }
            if (cur == 0.0) {
                return kNegInf;
            }
            int e = 0;
            mantissa = std::frexp(mantissa * std::abs(cur), &e);
            exponent += e;
        }
        return std::log(mantissa) + double(exponent) * std::numbers::ln2 + log_extra;
    }

   private:
    int n_;
    std::vector<double> up_;
    std::vector<double> down_;
};

double log_likelihood_with(const HermiteLogSum& logs, double d, std::span<const double> samples, int n,
                           double sum_sq) {
    if (!(d > 0.0)) {
        throw ValidationError("likelihood needs d > 0");
    }
    const double m = double(samples.size());
    // HermiteLogSum starts its recurrence at 1, so its values are H_n / sqrt(2^n n!)
    // and the density is sqrt(d / pi) exp(-d q^2) value^2.
    double value = 0.5 * m * (std::log(d) - std::log(std::numbers::pi)) - d * sum_sq;
    if (n > 0) {
        const double l = logs(samples, std::sqrt(d));
        if (l == kNegInf) {
            return kNegInf;
        }
        value += 2.0 * l;
    }
    return value;
}

double closed_form_estimate(int shots, int n, double sum_sq) {
    return double(shots) * (2.0 * n + 1.0) / (2.0 * sum_sq);
}

}  // namespace

std::string_view estimator_name(EstimatorKind kind) {
    for (const auto& [k, name] : kEstimatorNames) {
        if (k == kind) {
            return name;
        }
    }
    return "unknown";
}

EstimatorKind parse_estimator(std::string_view name) {
    for (const auto& [k, n] : kEstimatorNames) {
        if (n == name) {
            return k;
        }
    }
    throw ValidationError("unknown estimator '" + std::string(name) + "'");
}

SampleBatch sample_position(const PositionSampler& sampler, int shots, std::uint64_t seed) {
    if (shots < 1) {
        throw ValidationError("need at least one shot, got " + std::to_string(shots));
    }
    SampleBatch batch;
    batch.n = sampler.n();
    batch.d_true = sampler.d();
    batch.seed = seed;
    batch.generator = std::string(kRngName) + "/inverse-cdf";
    batch.samples.resize(shots);
    PhiloxStream rng(seed);
    for (double& q : batch.samples) {
        q = sampler.inverse(rng.next_uniform());
    }
    return batch;
}

SampleBatch sample_position(int n, LengthScale d, int shots, std::uint64_t seed) {
    return sample_position(PositionSampler(n, d), shots, seed);
}

double sum_of_squares(std::span<const double> samples) {
    double s = 0.0;
    for (const double q : samples) {
        s += q * q;
    }
    return s;
}

EstimateReport mom_estimate(const SampleBatch& batch, int n) {
    require_samples(batch);
    require_n(n);
    const double s = sum_of_squares(batch.samples);
    if (!(s > 0.0)) {
        throw ValidationError("method of moments needs a nonzero sum of squares");
    }
    EstimateReport r;
    r.estimator = EstimatorKind::mom;
    r.shots = batch.size();
    r.estimate = closed_form_estimate(r.shots, n, s);
    const double nn = n;
    const double m = r.shots;
    r.asymptotic_variance =
        2.0 * (nn * nn + nn + 1.0) * r.estimate * r.estimate / (m * (2.0 * nn + 1.0) * (2.0 * nn + 1.0));
    r.crb = 1.0 / (m * qfi_fock(n, LengthScale(r.estimate)));
    r.log_likelihood = log_likelihood(r.estimate, batch.samples, n);
    r.diagnostics["sum_of_squares"] = s;
    return r;
}

double log_likelihood(double d, std::span<const double> samples, int n) {
    require_n(n);
    return log_likelihood_with(HermiteLogSum(n), d, samples, n, sum_of_squares(samples));
}

EstimateReport mle_estimate(const SampleBatch& batch, int n, int grid_points) {
    require_samples(batch);
    require_n(n);
    if (grid_points < 3) {
        throw ValidationError("MLE grid needs at least 3 points");
    }
    const double s = sum_of_squares(batch.samples);
    if (!(s > 0.0)) {
        throw ValidationError("likelihood is unbounded for an all-zero batch");
    }
    const HermiteLogSum logs(n);
    auto objective = [&](double d) { return log_likelihood_with(logs, d, batch.samples, n, s); };

    EstimateReport r;
    r.estimator = EstimatorKind::mle;
    r.shots = batch.size();
    const double mom = closed_form_estimate(r.shots, n, s);
    r.crb = std::nullopt;

    if (n <= 1) {
        // Unique stationary point of (M/2 + nM) ln d - d sum q^2.
        r.estimate = mom;
        r.bracket_low = r.bracket_high = mom;
        r.log_likelihood = objective(mom);
        r.crb = 1.0 / (r.shots * qfi_fock(n, LengthScale(mom)));
        r.diagnostics["closed_form"] = 1.0;
        return r;
    }

    double lo = mom / 10.0;
    double hi = mom * 10.0;
    std::vector<double> grid(grid_points);
    int best = -1;
    int widenings = 0;
    while (true) {
        const double tlo = std::log(lo);
        const double step = (std::log(hi) - tlo) / (grid_points - 1);
        double best_value = kNegInf;
        best = -1;
        for (int i = 0; i < grid_points; ++i) {
            grid[i] = std::exp(tlo + step * i);
            const double v = objective(grid[i]);
            if (v == kNegInf) {
                continue;
            }
            const bool closer = best >= 0 && std::abs(std::log(grid[i] / mom)) < std::abs(std::log(grid[best] / mom));
            if (v > best_value || (v == best_value && closer)) {
                best_value = v;
                best = i;
            }
        }
        if (best < 0) {
            throw NumericalError("log-likelihood is -infinity on the whole search grid");
        }
        const bool boundary = best == 0 || best == grid_points - 1;
        if (!boundary || widenings == 1) {
            r.diagnostics["boundary_hit"] = boundary ? 1.0 : 0.0;
            break;
        }
        ++widenings;
        lo /= 10.0;
        hi *= 10.0;
    }
    r.bracket_low = grid.front();
    r.bracket_high = grid.back();
    r.diagnostics["widenings"] = widenings;

    // Golden-section search in ln d.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::log(grid[std::max(best - 1, 0)]);
    double b = std::log(grid[std::min(best + 1, grid_points - 1)]);
    double c = b - inv_phi * (b - a);
    double e = a + inv_phi * (b - a);
    double fc = objective(std::exp(c));
    double fe = objective(std::exp(e));
    int it = 0;
    while (b - a > 1e-10) {
        if (fc >= fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - inv_phi * (b - a);
            fc = objective(std::exp(c));
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + inv_phi * (b - a);
            fe = objective(std::exp(e));
        }
        ++it;
    }
    double t = 0.5 * (a + b);
    double ft = objective(std::exp(t));
    // Keep the grid winner if refinement landed on a node spike.
    if (!(ft >= objective(grid[best]))) {
        t = std::log(grid[best]);
        ft = objective(grid[best]);
    }
    r.estimate = std::exp(t);
    r.log_likelihood = ft;
    r.iterations = it;
    r.crb = 1.0 / (r.shots * qfi_fock(n, LengthScale(r.estimate)));
    return r;
}

GammaPosterior gamma_posterior(const SampleBatch& batch, double prior_shape, double prior_rate) {
    if (batch.n != 1) {
        throw ValidationError("the gamma prior is conjugate only for n = 1 probes");
    }
    if (!(prior_shape > 0.0) || !(prior_rate > 0.0)) {
        throw ValidationError("gamma prior needs positive shape and rate");
    }
    return {1.5 * batch.size() + prior_shape, sum_of_squares(batch.samples) + prior_rate};
}

GammaPosterior jeffreys_posterior(const SampleBatch& batch) {
    if (batch.n != 1) {
        throw ValidationError("the Jeffreys posterior is gamma only for n = 1 probes");
    }
    if (batch.samples.empty()) {
        throw ValidationError("the Jeffreys posterior is improper without data");
    }
    return {1.5 * batch.size(), sum_of_squares(batch.samples)};
}

double cosine_integral(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw ValidationError("Ci(x) needs finite x > 0");
    }
    constexpr double kEuler = 0.57721566490153286061;
    const double eps = std::numeric_limits<double>::epsilon();
    if (x <= 4.0) {
        // gamma + ln x + sum_k (-1)^k x^{2k} / (2k (2k)!)
        double sum = 0.0;
        double term = 1.0;  // (-1)^k x^{2k} / (2k)!
        for (int k = 1; k < 100; ++k) {
            term *= -x * x / ((2.0 * k - 1.0) * (2.0 * k));
            const double add = term / (2.0 * k);
            sum += add;
            if (std::abs(add) < eps * std::abs(sum)) {
                break;
            }
        }
        return kEuler + std::log(x) + sum;
    }
    if (x < 32.0) {
        // Continued fraction for E1(ix); Ci(x) = -Re E1(ix).
        using C = std::complex<double>;
        C b(1.0, x);
        C c = 1.0 / 1e-300;
        C d = 1.0 / b;
        C h = d;
        for (int i = 2; i < 1000; ++i) {
            const double a = -double(i - 1) * (i - 1);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            const C del = c * d;
            h *= del;
            if (std::abs(del - 1.0) < eps) {
                break;
            }
        }
        h *= C(std::cos(x), -std::sin(x));
        return -h.real();
    }
    // Ci(x) = f(x) sin x - g(x) cos x with the auxiliary asymptotic series.
    double f = 0.0;
    double g = 0.0;
    double tf = 1.0 / x;
    double tg = 1.0 / (x * x);
    for (int k = 0; k < 40; ++k) {
        f += tf;
        g += tg;
        const double nf = -tf * (2.0 * k + 1.0) * (2.0 * k + 2.0) / (x * x);
        const double ng = -tg * (2.0 * k + 2.0) * (2.0 * k + 3.0) / (x * x);
        if (std::abs(nf) >= std::abs(tf) || std::abs(nf) < eps * std::abs(f)) {
            break;
        }
        tf = nf;
        tg = ng;
    }
    return f * std::sin(x) - g * std::cos(x);
}

double covariant_cost(double d_hat, double d, double eps) {
    if (!(d_hat > 0.0) || !(d > 0.0) || !(eps > 0.0)) {
        throw ValidationError("covariant cost needs positive d_hat, d and eps");
    }
    const double t = std::abs(std::log(d_hat / d));
    if (t == 0.0) {
        return kNegInf;
    }
    return cosine_integral(eps * t);
}

McReport mc_benchmark(int n, LengthScale d, int shots, int reps, EstimatorKind estimator, std::uint64_t seed) {
    require_n(n);
    if (reps < 2) {
        throw ValidationError("Monte Carlo needs at least 2 replicates");
    }
    if (shots < 1) {
        throw ValidationError("need at least one shot, got " + std::to_string(shots));
    }
    if (estimator == EstimatorKind::jeffreys && n != 1) {
        throw ValidationError("the Jeffreys posterior mean is available only for n = 1");
    }
    const PositionSampler sampler(n, d);
    McReport r;
    r.n = n;
    r.d = d.value();
    r.shots = shots;
    r.reps = reps;
    r.estimator = estimator;
    r.seed = seed;
    r.estimates.assign(reps, std::numeric_limits<double>::quiet_NaN());

    for (int rep = 0; rep < reps; ++rep) {
        try {
            const SampleBatch batch = sample_position(sampler, shots, seed + std::uint64_t(rep));
            switch (estimator) {
                case EstimatorKind::mom:
                    r.estimates[rep] = mom_estimate(batch, n).estimate;
                    break;
                case EstimatorKind::mle:
                    r.estimates[rep] = mle_estimate(batch, n).estimate;
                    break;
                case EstimatorKind::jeffreys:
                    r.estimates[rep] = jeffreys_posterior(batch).mean();
                    break;
            }
        } catch (const Error&) {
            ++r.failures;
        }
    }
    if (r.failures * 100 > reps) {
        throw NumericalError(std::to_string(r.failures) + " of " + std::to_string(reps) + " replicates failed");
    }

    double sum = 0.0;
    int ok = 0;
    for (const double e : r.estimates) {
        if (std::isfinite(e)) {
            sum += e;
            ++ok;
        }
    }
    r.mean = sum / ok;
    double ss = 0.0;
    for (const double e : r.estimates) {
        if (std::isfinite(e)) {
            ss += (e - r.mean) * (e - r.mean);
        }
    }
    r.variance = ss / (ok - 1);
    r.bias = r.mean - d.value();
    r.bias_standard_error = std::sqrt(r.variance / ok);
    r.crb = 1.0 / (double(shots) * qfi_fock(n, d));
    r.variance_ratio = r.variance / r.crb;
    if (estimator == EstimatorKind::mom) {
        const double a = double(n) * n + n + 1.0;
        const double b = 2.0 * n + 1.0;
        r.predicted_ratio = a * a / (b * b);
    }
    return r;
}

}  // namespace lsq
