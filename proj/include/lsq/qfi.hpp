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

// Quantum and classical Fisher information for the length scale d.
//
// Four independent routes are provided and cross-check each other:
//   analytic        closed forms for Fock, coherent and displaced squeezed probes
//   pure-numeric    4(<dpsi|dpsi> - |<psi|dpsi>|^2) with dpsi from the derivative operator
//   sld-eigen       symmetric logarithmic derivative in the eigenbasis of rho
//   fidelity-fd     -4 d^2/dd'^2 sqrt(F(rho_d, rho_d')) at d' = d
// plus the Fisher information of a position measurement (cfi-quadrature).

#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "lsq/fockspace.hpp"

namespace lsq {

enum class QfiMethod { analytic, pure_numeric, sld_eigen, fidelity_fd, cfi_quadrature };

std::string_view method_name(QfiMethod method);
/// Inverse of method_name(); throws ValidationError on unknown names.
QfiMethod parse_method(std::string_view name);

struct QfiReport {
    double value = 0.0;
    QfiMethod method = QfiMethod::analytic;
    int cutoff = 0;
    /// Estimated absolute numerical error of `value`.
    double error_estimate = 0.0;
    double d = 1.0;
    std::string notes;
    std::map<std::string, double> diagnostics;
};

double qfi_coherent(double alpha, LengthScale d);
double qfi_displaced_squeezed(double alpha, double squeeze, LengthScale d);
double qfi_fock(int n, LengthScale d);

/// QFI of the fixed-coefficient family through a normalized pure state.
/// Throws CutoffInsufficient if the state lost more than `truncation_tolerance`
/// of its norm when it was built.
QfiReport qfi_pure_numeric(const FockVector& state, double truncation_tolerance = 1e-8);

struct SldResult {
    ComplexMatrix sld;
    double qfi = 0.0;
    int rank = 0;
};

/// SLD and QFI from rho and its derivative. Pairs of eigenvalues with
/// p_j + p_k <= 1e-12 max(p) are dropped. Diagonal rho skips the eigensolver.
SldResult sld_mixed(const ComplexMatrix& rho, const ComplexMatrix& drho);

/// QFI of the fixed-coefficient family through rho; rho is padded by two
/// levels so that d rho = D rho - rho D is exact.
QfiReport qfi_sld(const DensityOperator& rho);

using PureFamily = std::function<FockVector(LengthScale)>;
using MixedFamily = std::function<DensityOperator(LengthScale)>;

/// Bures oracle: -4 times the second central difference of sqrt(F) with one
/// Richardson step (h and h/2). `step` is relative to d and must lie in
/// [1e-6, 1e-2]; states at d +- h are moved into the basis at d before the
/// overlap is taken. Throws NumericalError on a clearly negative result.
QfiReport qfi_fidelity_fd(const PureFamily& family, LengthScale d, double step = 1e-4);
QfiReport qfi_fidelity_fd(const MixedFamily& family, LengthScale d, double step = 1e-4);

/// Fisher information of a position measurement, by Gauss-Hermite quadrature
/// over the real line. Exact for real wavefunctions up to node count; complex
/// wavefunctions use 4 (Re conj(psi) dpsi)^2 / |psi|^2 and are flagged in notes.
QfiReport cfi_position(const FockVector& state, int nodes = 0);

struct MsnResult {
    double value = 0.0;
    double derivative = 0.0;
    double variance = 0.0;
    double expectation = 0.0;
};

/// (d<A>/dd)^2 / Var(A) for a d-independent observable A on the fixed-coefficient
/// family through `state`. A must cover the state's cutoff; the state is padded
/// to A's size. Throws NumericalError when Var(A) vanishes.
MsnResult msn_reciprocal(const TruncatedOperator& observable, const FockVector& state);

/// Same quotient from already computed moments; shared by readouts that never
/// form the observable as a matrix.
MsnResult msn_from_moments(double derivative, double expectation, double second_moment);

}  // namespace lsq
