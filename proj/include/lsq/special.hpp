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

// Hermite polynomials, oscillator eigenfunctions and Gauss-Hermite rules.
//
// Eigenfunctions are evaluated with the orthonormal three-term recurrence
//   phi_{k+1}(u) = sqrt(2/(k+1)) u phi_k(u) - sqrt(k/(k+1)) phi_{k-1}(u)
// carrying a separate logarithmic scale, so no factorial is ever formed and
// orders in the thousands stay representable.

#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "lsq/errors.hpp"

namespace lsq {

namespace detail {

template <typename Scalar>
struct ScaledHermite {
    Scalar mantissa;   // phi_n(u) = mantissa * exp(log_scale)
    Scalar log_scale;
    bool at_node;      // last recurrence step cancelled to rounding level
};

// phi_n(u) = H_n(u) / sqrt(2^n n! sqrt(pi)), orthonormal against exp(-u^2).
template <typename Scalar>
ScaledHermite<Scalar> normalized_hermite_scaled(int n, Scalar u) {
    using std::abs;
    using std::log;
    using std::sqrt;
    constexpr Scalar kRescale = Scalar(1e150);
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();

    Scalar prev = 0;
    Scalar cur = 1;
    Scalar log_scale = -log(std::numbers::pi_v<Scalar>) / 4;
    bool at_node = false;
    for (int k = 0; k < n; ++k) {
        const Scalar up = sqrt(Scalar(2) / Scalar(k + 1)) * u * cur;
        const Scalar down = sqrt(Scalar(k) / Scalar(k + 1)) * prev;
        const Scalar next = up - down;
        if (k == n - 1) {
            at_node = abs(next) <= 8 * eps * (abs(up) + abs(down));
        }
        prev = cur;
        cur = next;
        if (abs(cur) > kRescale) {
            cur /= kRescale;
            prev /= kRescale;
            log_scale += log(kRescale);
        }
    }
    return {cur, log_scale, at_node};
}

template <typename Scalar>
void require_finite(Scalar value, const char* what) {
    using std::isfinite;
    if (!isfinite(value)) {
        throw ValidationError(std::string(what) + " must be finite");
    }
}

template <typename Scalar>
void require_order(int n) {
    if (n < 0) {
        throw ValidationError("Hermite order must be non-negative, got " + std::to_string(n));
    }
}

}  // namespace detail

/// Physicists' Hermite polynomial H_n(u) by the unnormalized recurrence
/// H_{k+1} = 2u H_k - 2k H_{k-1}. Throws std::overflow_error when the value
/// leaves the representable range; use log_abs_hermite() for large orders.
template <typename Scalar>
Scalar hermite(int n, Scalar u) {
    using std::isfinite;
    detail::require_order<Scalar>(n);
    detail::require_finite(u, "Hermite argument");
    Scalar prev = 0;
    Scalar cur = 1;
    for (int k = 0; k < n; ++k) {
        const Scalar next = 2 * u * cur - 2 * Scalar(k) * prev;
        prev = cur;
        cur = next;
        if (!isfinite(cur)) {
            throw std::overflow_error("H_" + std::to_string(n) + "(u) overflows at order " +
                                      std::to_string(k + 1));
        }
    }
    return cur;
}

/// log|H_n(u)|, or -infinity when u is a zero of H_n to rounding accuracy.
template <typename Scalar>
Scalar log_abs_hermite(int n, Scalar u) {
    using std::abs;
    using std::lgamma;
    using std::log;
    detail::require_order<Scalar>(n);
    detail::require_finite(u, "Hermite argument");
    const auto h = detail::normalized_hermite_scaled(n, u);
    if (h.at_node || h.mantissa == Scalar(0)) {
        return -std::numeric_limits<Scalar>::infinity();
    }
    const Scalar log_norm = (Scalar(n) * log(Scalar(2)) + lgamma(Scalar(n + 1)) +
                             log(std::numbers::pi_v<Scalar>) / 2) / 2;
    return log(abs(h.mantissa)) + h.log_scale + log_norm;
}

/// Normalized oscillator eigenfunction
///   psi_n(d, x) = (d/pi)^{1/4} (2^n n!)^{-1/2} exp(-d x^2 / 2) H_n(x sqrt(d)).
template <typename Scalar>
Scalar eigenfunction(int n, Scalar d, Scalar x) {
    using std::exp;
    using std::log;
    using std::sqrt;
    detail::require_order<Scalar>(n);
    detail::require_finite(x, "position");
    if (!(d > 0) || !std::isfinite(d)) {
        throw ValidationError("length scale d must be positive and finite");
    }
    const Scalar u = x * sqrt(d);
    const auto h = detail::normalized_hermite_scaled(n, u);
    if (h.mantissa == Scalar(0)) {
        return Scalar(0);
    }
    return h.mantissa * exp(h.log_scale - u * u / 2 + log(d) / 4);
}

/// Values e^{-u^2/2} phi_k(u) for k = 0..n_max, i.e. eigenfunctions at d = 1.
/// Entries that underflow are returned as zero.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> hermite_functions(int n_max, Scalar u) {
    using std::abs;
    using std::exp;
    using std::log;
    using std::sqrt;
    detail::require_order<Scalar>(n_max);
    detail::require_finite(u, "Hermite argument");
    constexpr Scalar kRescale = Scalar(1e150);
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(n_max + 1);
    Scalar prev = 0;
    Scalar cur = 1;
    Scalar log_scale = -log(std::numbers::pi_v<Scalar>) / 4 - u * u / 2;
    out(0) = exp(log_scale);
    for (int k = 0; k < n_max; ++k) {
        const Scalar next =
            sqrt(Scalar(2) / Scalar(k + 1)) * u * cur - sqrt(Scalar(k) / Scalar(k + 1)) * prev;
        prev = cur;
        cur = next;
        if (abs(cur) > kRescale) {
            cur /= kRescale;
            prev /= kRescale;
            log_scale += log(kRescale);
        }
        out(k + 1) = cur * exp(log_scale);
    }
    return out;
}

/// Natural log of the position density psi_n(d, x)^2:
///   (1/2) log d - (1/2) log pi - n log 2 - log n! - d x^2 + 2 log|H_n(x sqrt d)|.
/// Returns -infinity at the nodes of psi_n (a valid value, not an error).
template <typename Scalar>
Scalar log_density(int n, Scalar d, Scalar x) {
    using std::lgamma;
    using std::log;
    using std::sqrt;
    detail::require_finite(x, "position");
    if (!(d > 0) || !std::isfinite(d)) {
        throw ValidationError("length scale d must be positive and finite");
    }
    const Scalar u = x * sqrt(d);
    const Scalar lh = log_abs_hermite(n, u);
    if (lh == -std::numeric_limits<Scalar>::infinity()) {
        return lh;
    }
    return log(d) / 2 - log(std::numbers::pi_v<Scalar>) / 2 - Scalar(n) * log(Scalar(2)) -
           lgamma(Scalar(n + 1)) - u * u + 2 * lh;
}

/// Gauss-Hermite rule for the weight exp(-u^2).
struct QuadratureRule {
    Eigen::VectorXd nodes;           // ascending
    Eigen::VectorXd weights;         // w_i, sum to sqrt(pi)
    Eigen::VectorXd scaled_weights;  // w_i exp(u_i^2), finite even where w_i underflows
};

/// k-point rule, exact for polynomials of degree <= 2k-1. Nodes are found by
/// Newton iteration on the orthonormal recurrence; throws NumericalError if a
/// node fails to converge.
QuadratureRule gauss_hermite(int k);

/// Node count used for integrands built from eigenfunctions up to order n_max.
constexpr int default_quadrature_order(int n_max) { return 4 * (n_max + 8); }

}  // namespace lsq
