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

// Entangled probes of several oscillators sharing one length scale, and
// projective readouts built from the d = 1 vacuum.
//
// General states are kept as a short superposition of product states
// ("branches"); every quantity is reduced to per-mode inner products, so the
// N-mode tensor is never formed.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsq/fockspace.hpp"
#include "lsq/qfi.hpp"

namespace lsq {

enum class PairKind { swap_sym, swap_antisym, super_plus, super_minus };

std::string_view pair_kind_name(PairKind kind);
PairKind parse_pair_kind(std::string_view name);

struct ProductBranch {
    Complex weight;
    std::vector<ComplexVector> modes;  // one coefficient vector per mode
};

struct MultimodeVector {
    int mode_count = 0;
    int cutoff = 0;
    LengthScale d{1.0};
    std::vector<ProductBranch> branches;

    /// <psi|psi> from the branch Gram matrix.
    double norm_squared() const;
    /// Dense amplitude matrix C(j, k) for two modes.
    ComplexMatrix dense_two_mode() const;
};

/// (I +- SWAP)|n>|m>/sqrt(2) or (|n>|n> +- |m>|m>)/sqrt(2). Requires n != m.
/// Default cutoff is max(n, m) + 8.
MultimodeVector pair_state(PairKind kind, int n, int m, LengthScale d, int cutoff = 0);

/// (2l+1)^{-1/2} sum_{j=-l..l} (-1)^{[j=0]} |n+2j>|n+2j>. Requires n > 2l.
MultimodeVector sequence_state(int ell, int n, LengthScale d, int cutoff = 0);

/// ( ((|n> + i|n+2>)/sqrt2)^{(x)N} + ((|n> - i|n+2>)/sqrt2)^{(x)N} ) / sqrt2.
MultimodeVector ghz_state(int modes, int n, LengthScale d, int cutoff = 0);

/// QFI = 4 Var(sum_j A_j) / d^2 evaluated on the branch form; branches need
/// not be orthogonal or normalized.
QfiReport multimode_qfi(const MultimodeVector& state);

/// Brute-force QFI of a normalized two-mode amplitude matrix through
/// dC = D C + C D^T on a padded grid.
double two_mode_qfi_dense(const ComplexMatrix& amplitudes, LengthScale d);

/// Variance of the total generator projected onto span{|n>, |n+2>} per mode,
/// computed on the 2^N-dimensional qubit image of the GHZ state, converted to
/// a QFI for d. Requires 1 <= N <= 20.
double ghz_qubit_shadow_qfi(int modes, int n, LengthScale d);

/// Two-copy projective readout onto
///   Phi = exp(pi/4 (a1^dag a2 - a2^dag a1)) exp(i pi/2 a2^dag a2) |psi_0(1)>|psi_0(1)>
/// with the probe |psi_n(d)>|psi_n(d)>. The beam splitter conserves total
/// excitation, so only the blocks that touch the probe are exponentiated.
struct BellReadout {
    int n = 0;
    double d = 1.0;
    int cutoff = 0;
    double probability = 0.0;
    /// d/dd of the probability when the ladder operators defining Phi follow d.
    double derivative = 0.0;
    double msn = 0.0;
    /// d/dd with Phi frozen at the evaluation point.
    double fixed_derivative = 0.0;
    double fixed_msn = 0.0;
    double vacuum_truncation = 0.0;
};

/// cutoff defaults to 4n + 32 (rounded up to even); the d = 1 vacuum must fit
/// with truncation below 1e-12.
BellReadout bell_readout(int n, LengthScale d, int cutoff = 0);
double bell_readout_msn(int n, LengthScale d, int cutoff = 0);

struct ReadoutPoint {
    int n = 0;
    double d = 1.0;
    int cutoff = 0;
    /// Empty when the observable has zero variance on the probe.
    std::optional<double> msn;
    double derivative = 0.0;
    double variance = 0.0;
    double expectation = 0.0;
};

struct ReadoutScan {
    std::string observable;
    std::vector<ReadoutPoint> points;
};

/// A = |psi_0(1)><psi_0(1)| on the probes |psi_n(d)>.
ReadoutScan vacuum_projection_scan(const std::vector<int>& n_list, LengthScale d);

}  // namespace lsq
