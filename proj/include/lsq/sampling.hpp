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

#pragma once

#include <vector>

#include "lsq/fockspace.hpp"

namespace lsq {

/// Inverse-CDF sampler for the position density psi_n(d, x)^2.
///
/// Cell masses on [-X, X], X = sqrt((4n + 6)/d), come from Gauss-Legendre
/// quadrature. A monotone (Fritsch-Carlson) cubic in F gives a first guess for
/// x(u), which safeguarded Newton then solves against the exact in-cell mass.
/// If more than 1e-12 of the mass lies outside, X is widened once by 6/sqrt(d);
/// a second failure throws NumericalError.
class PositionSampler {
   public:
    PositionSampler(int n, LengthScale d);

    /// x with F(x) = u, u in (0, 1).
    double inverse(double u) const;
    /// F(x) from the tabulated cell masses plus a quadrature of the partial cell.
    double cdf(double x) const;

    int n() const { return n_; }
    double d() const { return d_; }
    double half_width() const { return grid_.back(); }
    double tail_mass() const { return tail_; }

   private:
    double density(double x) const;
    /// Integral of the density over [a, b] by 20-point Gauss-Legendre.
    double integrate(double a, double b) const;

    int n_;
    double d_;
    double sqrt_d_;
    std::vector<double> up_;    // recurrence coefficients sqrt(2/(k+1))
    std::vector<double> down_;  // and sqrt(k/(k+1))
    double tail_ = 0.0;
    std::vector<double> grid_;   // x_i, ascending
    std::vector<double> mass_;   // unnormalized mass left of x_i
    double total_ = 1.0;
    std::vector<double> cdf_;    // mass_ / total_, strictly increasing, ends at 1
    std::vector<double> slope_;  // dx/dF at the knots
};

}  // namespace lsq
