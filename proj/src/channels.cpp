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

#include "lsq/channels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsq/random.hpp"

namespace lsq {

namespace {

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

void require_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw ValidationError("loss parameter gamma must lie in [0, 1], got " + std::to_string(gamma));
    }
}

void require_xi(double xi) {
    if (!(xi >= 0.0 && xi <= 0.99)) {
        throw ValidationError("thermal parameter xi must lie in [0, 0.99], got " + std::to_string(xi));
    }
}

constexpr int kMaxThermalCutoff = 4096;

}  // namespace

DensityOperator damping_channel(const DensityOperator& rho, double gamma) {
    require_gamma(gamma);
    const int n = rho.cutoff();
    DensityOperator out{ComplexMatrix::Zero(n, n), rho.d, rho.truncation_mass};
    for (int mp = 0; mp < n; ++mp) {
        for (int m = 0; m < n; ++m) {
            Complex sum = 0.0;
            for (int j = 0; m + j < n && mp + j < n; ++j) {
                if (j > 0 && gamma == 0.0) {
                    break;
                }
                const double binom = j == 0 ? 1.0
                                            : std::exp(0.5 * (log_binomial(m + j, j) + log_binomial(mp + j, j)));
                sum += binom * std::pow(gamma, j) * rho.matrix(m + j, mp + j);
            }
            out.matrix(m, mp) = sum * std::pow(1.0 - gamma, 0.5 * (m + mp));
        }
    }
    return out;
}

DensityOperator damped_fock_state(int n, double gamma, LengthScale d, int cutoff) {
    require_gamma(gamma);
    if (n < 0) {
        throw ValidationError("excitation number must be non-negative");
    }
    const int size = cutoff > 0 ? cutoff : default_cutoff(n);
    if (size <= n) {
        throw ValidationError("cutoff must exceed n");
    }
    DensityOperator out{ComplexMatrix::Zero(size, size), d, 0.0};
    for (int k = 0; k <= n; ++k) {
        // pow(0, 0) == 1 keeps the end points exact.
        const double w = std::exp(log_binomial(n, k)) * std::pow(1.0 - gamma, k) * std::pow(gamma, n - k);
        out.matrix(k, k) = w;
    }
    return out;
}

QfiReport damped_fock_qfi(int n, double gamma, LengthScale d) {
    QfiReport report = qfi_sld(damped_fock_state(n, gamma, d));
    const double dd = d.value() * d.value();
    report.diagnostics["first_order"] = (double(n) * n + n + 1.0) / (2.0 * dd) - gamma * n * n / dd;
    report.diagnostics["gamma"] = gamma;
    return report;
}

DensityOperator thermal_state(double xi, LengthScale d, int cutoff) {
    require_xi(xi);
    if (cutoff < 1) {
        throw ValidationError("cutoff must be positive");
    }
    DensityOperator out{ComplexMatrix::Zero(cutoff, cutoff), d, std::pow(xi, cutoff)};
    double w = 1.0 - xi;
    for (int k = 0; k < cutoff; ++k) {
        out.matrix(k, k) = w;
        w *= xi;
    }
    return out;
}

int thermal_cutoff(double xi, double tail) {
    require_xi(xi);
    if (xi == 0.0) {
        return 8;
    }
    return std::max(8, static_cast<int>(std::ceil(std::log(tail) / std::log(xi))) + 1);
}

QfiReport thermal_qfi(double xi, LengthScale d) {
    int cutoff = thermal_cutoff(xi, 1e-16);
    if (cutoff > kMaxThermalCutoff) {
        throw CutoffInsufficient("thermal tail needs more than " + std::to_string(kMaxThermalCutoff) + " levels",
                                 std::pow(xi, kMaxThermalCutoff));
    }
    QfiReport report = qfi_sld(thermal_state(xi, d, cutoff));
    while (true) {
        const int next = std::min(kMaxThermalCutoff, cutoff + std::max(8, cutoff / 4));
        QfiReport wider = qfi_sld(thermal_state(xi, d, next));
        const double change = std::abs(wider.value - report.value);
        if (change <= 1e-8 * std::max(wider.value, 1e-300)) {
            wider.error_estimate = std::max(wider.error_estimate, change);
            wider.diagnostics["xi"] = xi;
            wider.diagnostics["mean_excitation"] = xi / (1.0 - xi);
            return wider;
        }
        if (next >= kMaxThermalCutoff) {
            throw CutoffInsufficient("thermal QFI did not settle below " + std::to_string(kMaxThermalCutoff) +
                                         " levels",
                                     wider.diagnostics["truncation_mass"]);
        }
        cutoff = next;
        report = wider;
    }
}

DensityOperator thermal_from_coherent_mixture(double xi, LengthScale d, int cutoff, int samples,
                                              std::uint64_t seed) {
    require_xi(xi);
    if (samples < 1 || cutoff < 1) {
        throw ValidationError("need at least one sample and a positive cutoff");
    }
    const double sigma = std::sqrt(xi / (1.0 - xi) / 2.0);
    PhiloxStream rng(seed);
    ComplexMatrix acc = ComplexMatrix::Zero(cutoff, cutoff);
    ComplexVector c(cutoff);
    for (int s = 0; s < samples; ++s) {
        const double re = sigma * rng.next_normal();
        const double im = sigma * rng.next_normal();
        const Complex alpha(re, im);
        Complex amp = std::exp(-std::norm(alpha) / 2.0);
        for (int k = 0; k < cutoff; ++k) {
            c(k) = amp;
            amp *= alpha / std::sqrt(double(k + 1));
        }
        acc.noalias() += c * c.adjoint();
    }
    acc /= double(samples);
    return {acc, d, std::max(0.0, 1.0 - acc.trace().real())};
}

}  // namespace lsq
