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

// Truncated Fock-space states in the instantaneous eigenbasis {|psi_n(d)>}.
//
// Every state carries the length scale d of the basis it is written in. A
// family "fixed coefficients, varying d" is the object whose d-derivative the
// derivative operator describes:
//   d/dd |psi_n(d)> = (sqrt(n(n-1)) |psi_{n-2}> - sqrt((n+1)(n+2)) |psi_{n+2}>) / (4d).
// Moving a state between bases goes through the dilation generator
//   A = (i a^2 - i a^dag^2) / 4,   |psi_n(d')> = exp(-i ln(d'/d) A) |psi_n(d)>.

#pragma once

#include <complex>
#include <string>

#include <Eigen/Core>

#include "lsq/errors.hpp"

namespace lsq {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Length-scale parameter d = L^{-2}; always positive and finite.
class LengthScale {
   public:
    explicit LengthScale(double d);

    double value() const noexcept { return d_; }
    double log() const;

    friend bool operator==(LengthScale, LengthScale) = default;

   private:
    double d_;
};

/// Pure state sum_n c_n |psi_n(d)>, n < cutoff.
struct FockVector {
    ComplexVector coeffs;
    LengthScale d;
    /// Norm^2 known to have been discarded by truncation when the vector was built.
    double truncation_mass = 0.0;

    int cutoff() const { return static_cast<int>(coeffs.size()); }
    double norm_squared() const { return coeffs.squaredNorm(); }
    /// Largest index carrying more than `threshold` probability.
    int support_top(double threshold = 1e-30) const;
    /// Probability in the last `count` retained levels.
    double edge_mass(int count = 4) const;
};

/// Density matrix in the basis at d.
struct DensityOperator {
    ComplexMatrix matrix;
    LengthScale d;
    double truncation_mass = 0.0;

    int cutoff() const { return static_cast<int>(matrix.rows()); }
    /// Throws ValidationError unless Hermitian, unit trace and positive within tolerance.
    void validate(double hermitian_tol = 1e-12, double trace_tol = 1e-9, double eigen_tol = 1e-10) const;

    static DensityOperator pure(const FockVector& state);
};

/// Matrix of an operator restricted to the first `cutoff` levels.
struct TruncatedOperator {
    ComplexMatrix matrix;
    std::string label;

    int cutoff() const { return static_cast<int>(matrix.rows()); }
};

struct LadderPair {
    TruncatedOperator annihilation;
    TruncatedOperator creation;
};

/// a and a^dag on the first `cutoff` levels. Requires cutoff >= 2.
LadderPair ladder_ops(int cutoff);

/// Real matrix with columns d/dd |psi_n(d)>, rows 0..rows-1, columns 0..cols-1.
/// Use rows = cols + 2 to keep the derivative of the top levels exact.
RealMatrix derivative_matrix(LengthScale d, int rows, int cols);

/// Square derivative operator on the first `cutoff` levels (cutoff >= 4).
TruncatedOperator derivative_operator(LengthScale d, int cutoff);

/// A = (i a^2 - i a^dag^2) / 4 on the first `cutoff` levels (cutoff >= 4).
TruncatedOperator scale_generator(int cutoff);

/// Coefficients of d/dd of the fixed-coefficient family through `state`,
/// in the basis at state.d; length cutoff + 2 so nothing is lost.
ComplexVector apply_derivative(const FockVector& state);

/// Zero-pads (or trims, checking the discarded mass) to `cutoff` levels.
FockVector resize(const FockVector& state, int cutoff);
DensityOperator resize(const DensityOperator& rho, int cutoff);

struct FlowOptions {
    /// Cutoff of the returned state; 0 keeps the input cutoff.
    int output_cutoff = 0;
    /// Maximum probability allowed outside the returned window.
    double leakage_tolerance = 1e-8;
    /// Working spaces are doubled up to this size while edge leakage is visible.
    int max_working_cutoff = 4096;
};

/// Re-expresses the same physical state in the basis at `target`:
///   c' = exp(i ln(target/d) A) c.
/// Throws CutoffInsufficient if more than options.leakage_tolerance falls
/// outside the returned window.
FockVector apply_scale_flow(const FockVector& state, LengthScale target, const FlowOptions& options = {});
DensityOperator apply_scale_flow(const DensityOperator& rho, LengthScale target,
                                 const FlowOptions& options = {});

/// |psi_0(source)> written in the basis at `basis` (closed form, even levels only).
/// Discarded norm beyond the cutoff is recorded in truncation_mass.
FockVector ground_state_in_basis(LengthScale source, LengthScale basis, int cutoff);

/// |psi_0(1)> in the basis at d. Requires an even cutoff >= 8.
FockVector vacuum_in_basis(LengthScale d, int cutoff);

/// |psi_n(d)>.
FockVector fock_vector(int n, LengthScale d, int cutoff);

/// Coherent state with Poisson amplitudes exp(-|alpha|^2/2) alpha^n / sqrt(n!),
/// renormalized after truncation. Requires |alpha|^2 <= cutoff / 4.
FockVector coherent_vector(Complex alpha, LengthScale d, int cutoff);

/// Displaced squeezed ground state with real position wavefunction
///   (dD/pi)^{1/4} exp(-dD (x - sqrt(2/d) alpha)^2 / 2),  D >= 1.
FockVector displaced_squeezed_vector(double alpha, double squeeze, LengthScale d, int cutoff);

/// Uhlmann fidelity (tr sqrt(sqrt(s2) s1 sqrt(s2)))^2; |<s1|s2>|^2 for pure states.
/// Both arguments must share cutoff and basis.
double fidelity(const FockVector& s1, const FockVector& s2);
double fidelity(const DensityOperator& s1, const DensityOperator& s2);

/// Position wavefunction sum_n c_n psi_n(d, x).
Complex position_amplitude(const FockVector& state, double x);

/// Default cutoff for a state supported up to n_max.
constexpr int default_cutoff(int n_max) { return 2 * n_max + 32; }

}  // namespace lsq
