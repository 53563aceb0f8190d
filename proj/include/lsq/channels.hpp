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

// Excitation loss and thermal probes.

#pragma once

#include <cstdint>

#include "lsq/fockspace.hpp"
#include "lsq/qfi.hpp"

namespace lsq {

/// Excitation-loss channel with loss probability gamma, in closed form:
///   rho'_{m,m'} = sum_j sqrt(C(m+j,j) C(m'+j,j)) gamma^j (1-gamma)^{(m+m')/2} rho_{m+j,m'+j}.
/// Exact on the truncated space (loss only moves weight downward).
DensityOperator damping_channel(const DensityOperator& rho, double gamma);

/// |psi_n><psi_n| after loss: diagonal with weight C(n,k) (1-gamma)^k gamma^{n-k} on level k.
DensityOperator damped_fock_state(int n, double gamma, LengthScale d, int cutoff = 0);

/// SLD QFI of damped_fock_state. diagnostics["first_order"] holds
/// (n^2+n+1)/(2d^2) - gamma n^2/d^2.
QfiReport damped_fock_qfi(int n, double gamma, LengthScale d);

/// Geometric populations xi^k (1 - xi); the discarded tail xi^cutoff is recorded.
DensityOperator thermal_state(double xi, LengthScale d, int cutoff);

/// Smallest cutoff whose thermal tail xi^cutoff is below `tail`.
int thermal_cutoff(double xi, double tail = 1e-10);

/// SLD QFI of the thermal state, xi in [0, 0.99]. The cutoff starts at
/// thermal_cutoff(xi, 1e-16) and grows until the value moves by less than 1e-8
/// relative; throws CutoffInsufficient past 4096 levels.
QfiReport thermal_qfi(double xi, LengthScale d);

/// Monte Carlo average of coherent projectors |alpha><alpha| with alpha drawn
/// from the complex Gaussian of variance xi / (1 - xi). Converges to
/// thermal_state(xi, d, cutoff).
DensityOperator thermal_from_coherent_mixture(double xi, LengthScale d, int cutoff, int samples,
                                              std::uint64_t seed);

}  // namespace lsq
