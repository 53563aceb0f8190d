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

#include "lsq/multimode.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

namespace lsq {

namespace {

constexpr Complex kI{0.0, 1.0};

constexpr std::array<std::pair<PairKind, std::string_view>, 4> kPairNames{{
    {PairKind::swap_sym, "swap_sym"},
    {PairKind::swap_antisym, "swap_antisym"},
    {PairKind::super_plus, "super_plus"},
    {PairKind::super_minus, "super_minus"},
}};

ComplexVector basis_vector(int n, int cutoff) {
    ComplexVector v = ComplexVector::Zero(cutoff);
    v(n) = 1.0;
    return v;
}

// A phi with A = (i a^2 - i a^dag^2) / 4; the result has two extra levels.
ComplexVector apply_generator(const ComplexVector& phi) {
    const Eigen::Index n = phi.size();
    ComplexVector out = ComplexVector::Zero(n + 2);
    for (Eigen::Index k = 0; k < n + 2; ++k) {
        Complex v = 0.0;
        if (k + 2 < n) {
            v += kI * std::sqrt(double(k + 1) * (k + 2)) * phi(k + 2);
        }
        if (k >= 2 && k - 2 < n) {
            v -= kI * std::sqrt(double(k) * (k - 1)) * phi(k - 2);
        }
        out(k) = v / 4.0;
    }
    return out;
}

Complex inner(const ComplexVector& a, const ComplexVector& b) {
    const Eigen::Index n = std::min(a.size(), b.size());
    return a.head(n).dot(b.head(n));
}

Complex branch_overlap(const ProductBranch& a, const ProductBranch& b) {
    Complex s = 1.0;
    for (std::size_t j = 0; j < a.modes.size(); ++j) {
        s *= a.modes[j].dot(b.modes[j]);
    }
    return s;
}

void normalize(MultimodeVector& state) {
    const double norm = state.norm_squared();
    if (!(norm > 1e-300)) {
        throw ValidationError("multimode state has zero norm");
    }
    for (auto& b : state.branches) {
        b.weight /= std::sqrt(norm);
    }
}

ProductBranch product(Complex weight, std::initializer_list<int> levels, int cutoff) {
    ProductBranch b{weight, {}};
    for (int n : levels) {
        b.modes.push_back(basis_vector(n, cutoff));
    }
    return b;
}

// Exact beam-splitter image of a block of total excitation T:
// amplitudes x_j on |j, T-j>, j = 0..T.
ComplexVector beam_splitter_block(const ComplexVector& x) {
    const int t = static_cast<int>(x.size()) - 1;
    RealMatrix gen = RealMatrix::Zero(t + 1, t + 1);
    for (int j = 0; j <= t; ++j) {
        const int k = t - j;
        if (k > 0) {  // a1^dag a2 |j,k> = sqrt((j+1) k) |j+1,k-1>
            gen(j + 1, j) += std::sqrt(double(j + 1) * k);
        }
        if (j > 0) {  // a2^dag a1 |j,k> = sqrt(j (k+1)) |j-1,k+1>
            gen(j - 1, j) -= std::sqrt(double(j) * (k + 1));
        }
    }
    gen *= std::numbers::pi / 4.0;
    return gen.exp().cast<Complex>() * x;
}

Complex phase_power(int k) {
    static constexpr std::array<Complex, 4> kPowers{Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)};
    return kPowers[k % 4];
}

// Phi restricted to block T, from single-mode vacuum coefficients v (and
// optionally their derivative dv, giving dPhi).
ComplexVector bell_block(int t, const ComplexVector& v, const ComplexVector* dv) {
    ComplexVector x = ComplexVector::Zero(t + 1);
    auto at = [](const ComplexVector& c, int i) { return i < c.size() ? c(i) : Complex(0.0); };
    for (int j = 0; j <= t; ++j) {
        const int k = t - j;
        const Complex amp = dv == nullptr ? at(v, j) * at(v, k) : at(*dv, j) * at(v, k) + at(v, j) * at(*dv, k);
        x(j) = amp * phase_power(k);
    }
    return beam_splitter_block(x);
}

}  // namespace

std::string_view pair_kind_name(PairKind kind) {
    for (const auto& [k, name] : kPairNames) {
        if (k == kind) {
            return name;
        }
    }
    return "unknown";
}

PairKind parse_pair_kind(std::string_view name) {
    for (const auto& [k, n] : kPairNames) {
        if (n == name) {
            return k;
        }
    }
    throw ValidationError("unknown pair kind '" + std::string(name) + "'");
}

double MultimodeVector::norm_squared() const {
    Complex total = 0.0;
    for (const auto& a : branches) {
        for (const auto& b : branches) {
            total += std::conj(a.weight) * b.weight * branch_overlap(a, b);
        }
    }
    return total.real();
}

ComplexMatrix MultimodeVector::dense_two_mode() const {
    if (mode_count != 2) {
        throw ValidationError("dense form is only available for two modes");
    }
    ComplexMatrix c = ComplexMatrix::Zero(cutoff, cutoff);
    for (const auto& b : branches) {
        c += b.weight * b.modes[0] * b.modes[1].transpose();
    }
    return c;
}

MultimodeVector pair_state(PairKind kind, int n, int m, LengthScale d, int cutoff) {
    if (n < 0 || m < 0 || n == m) {
        throw ValidationError("pair states need distinct non-negative levels, got n = " + std::to_string(n) +
                              ", m = " + std::to_string(m));
    }
    const int size = cutoff > 0 ? cutoff : std::max(n, m) + 8;
    if (size < std::max(n, m) + 8) {
        throw ValidationError("pair state cutoff must be at least max(n, m) + 8");
    }
    const double w = 1.0 / std::sqrt(2.0);
    MultimodeVector s{2, size, d, {}};
    switch (kind) {
        case PairKind::swap_sym:
            s.branches = {product(w, {n, m}, size), product(w, {m, n}, size)};
            break;
        case PairKind::swap_antisym:
            s.branches = {product(w, {n, m}, size), product(-w, {m, n}, size)};
            break;
        case PairKind::super_plus:
            s.branches = {product(w, {n, n}, size), product(w, {m, m}, size)};
            break;
        case PairKind::super_minus:
            s.branches = {product(w, {n, n}, size), product(-w, {m, m}, size)};
            break;
    }
    normalize(s);
    return s;
}

MultimodeVector sequence_state(int ell, int n, LengthScale d, int cutoff) {
    if (ell < 0 || n <= 2 * ell) {
        throw ValidationError("sequence state needs l >= 0 and n > 2l (l = " + std::to_string(ell) +
                              ", n = " + std::to_string(n) + ")");
    }
    const int top = n + 2 * ell;
    const int size = cutoff > 0 ? cutoff : top + 8;
    if (size <= top) {
        throw ValidationError("sequence state support exceeds cutoff " + std::to_string(size));
    }
    MultimodeVector s{2, size, d, {}};
    const double w = 1.0 / std::sqrt(2.0 * ell + 1.0);
    for (int j = -ell; j <= ell; ++j) {
        s.branches.push_back(product(j == 0 ? -w : w, {n + 2 * j, n + 2 * j}, size));
    }
    normalize(s);
    return s;
}

MultimodeVector ghz_state(int modes, int n, LengthScale d, int cutoff) {
    if (modes < 1 || n < 0) {
        throw ValidationError("GHZ state needs N >= 1 and n >= 0");
    }
    const int size = cutoff > 0 ? cutoff : n + 8;
    if (size <= n + 2) {
        throw ValidationError("GHZ state support exceeds cutoff " + std::to_string(size));
    }
    MultimodeVector s{modes, size, d, {}};
    for (const double sign : {1.0, -1.0}) {
        ComplexVector phi = ComplexVector::Zero(size);
        phi(n) = 1.0 / std::sqrt(2.0);
        phi(n + 2) = sign * kI / std::sqrt(2.0);
        s.branches.push_back({1.0 / std::sqrt(2.0), std::vector<ComplexVector>(modes, phi)});
    }
    normalize(s);
    return s;
}

QfiReport multimode_qfi(const MultimodeVector& state) {
    const auto& br = state.branches;
    if (br.empty()) {
        throw ValidationError("multimode state has no branches");
    }
    // Generator images per branch and mode.
    std::vector<std::vector<ComplexVector>> gen(br.size());
    for (std::size_t b = 0; b < br.size(); ++b) {
        for (const auto& phi : br[b].modes) {
            gen[b].push_back(apply_generator(phi));
        }
    }

    Complex norm = 0.0, first = 0.0, second = 0.0;
    for (std::size_t b = 0; b < br.size(); ++b) {
        for (std::size_t c = 0; c < br.size(); ++c) {
            // Elementary symmetric sums over modes of (s, a, q):
            // e0 = prod s, e1 = sum a prod s, e2 = sum_{j<k} a_j a_k prod s, eq = sum q prod s.
            Complex e0 = 1.0, e1 = 0.0, e2 = 0.0, eq = 0.0;
            for (int j = 0; j < state.mode_count; ++j) {
                const Complex s = br[b].modes[j].dot(br[c].modes[j]);
                const Complex a = inner(br[b].modes[j], gen[c][j]);
                const Complex q = gen[b][j].dot(gen[c][j]);
                e2 = e2 * s + e1 * a;
                e1 = e1 * s + e0 * a;
                eq = eq * s + e0 * q;
                e0 = e0 * s;
            }
            const Complex w = std::conj(br[b].weight) * br[c].weight;
            norm += w * e0;
            first += w * e1;
            second += w * (eq + 2.0 * e2);
        }
    }
    const double mean = first.real() / norm.real();
    const double var = second.real() / norm.real() - mean * mean;
    const double dd = state.d.value() * state.d.value();

    QfiReport report;
    report.value = std::max(0.0, 4.0 * var / dd);
    report.method = QfiMethod::pure_numeric;
    report.cutoff = state.cutoff;
    report.error_estimate = 1e-13 * std::max(1.0, 4.0 * second.real() / norm.real() / dd);
    report.d = state.d.value();
    report.diagnostics = {{"branches", double(br.size())},
                          {"modes", double(state.mode_count)},
                          {"norm", norm.real()},
                          {"generator_mean", mean}};
    return report;
}

double two_mode_qfi_dense(const ComplexMatrix& amplitudes, LengthScale d) {
    const double norm = amplitudes.squaredNorm();
    if (std::abs(norm - 1.0) > 1e-9) {
        throw ValidationError("two-mode amplitudes are not normalized");
    }
    const Eigen::Index n = amplitudes.rows();
    ComplexMatrix c = ComplexMatrix::Zero(n + 2, amplitudes.cols() + 2);
    c.topLeftCorner(n, amplitudes.cols()) = amplitudes;
    const ComplexMatrix d1 = derivative_matrix(d, n + 2, n + 2).cast<Complex>();
    const ComplexMatrix d2 = derivative_matrix(d, amplitudes.cols() + 2, amplitudes.cols() + 2).cast<Complex>();
    const ComplexMatrix dc = d1 * c + c * d2.transpose();
    const Complex overlap = (c.conjugate().array() * dc.array()).sum();
    return 4.0 * (dc.squaredNorm() - std::norm(overlap));
}

double ghz_qubit_shadow_qfi(int modes, int n, LengthScale d) {
    if (modes < 1 || modes > 20 || n < 0) {
        throw ValidationError("qubit shadow needs 1 <= N <= 20 and n >= 0");
    }
    // Qubit |0> = |n>, |1> = |n+2>. The projected i a^2 - i a^dag^2 is
    // s [[0, i], [-i, 0]] with s = sqrt((n+1)(n+2)).
    const double s = std::sqrt(double(n + 1) * (n + 2));
    const std::size_t dim = std::size_t{1} << modes;
    ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t x = 0; x < dim; ++x) {
        const int ones = std::popcount(x);
        const Complex plus = phase_power(ones);
        const Complex minus = std::conj(plus);
        psi(static_cast<Eigen::Index>(x)) = (plus + minus) / std::sqrt(2.0) / std::pow(2.0, modes / 2.0);
    }
    ComplexVector g = ComplexVector::Zero(psi.size());
    for (int j = 0; j < modes; ++j) {
        const std::size_t bit = std::size_t{1} << j;
        for (std::size_t x = 0; x < dim; ++x) {
            const auto from = static_cast<Eigen::Index>(x);
            const auto to = static_cast<Eigen::Index>(x ^ bit);
            // M|0> = -i s |1>, M|1> = i s |0>
            g(to) += ((x & bit) ? kI : -kI) * s * psi(from);
        }
    }
    const double mean = psi.dot(g).real();
    const double var = g.squaredNorm() - mean * mean;
    return var / (4.0 * d.value() * d.value());
}

BellReadout bell_readout(int n, LengthScale d, int cutoff) {
    if (n < 0) {
        throw ValidationError("excitation number must be non-negative");
    }
    int size = cutoff > 0 ? cutoff : 4 * n + 32;
    size += size % 2;
    if (size < 2 * n + 4) {
        throw ValidationError("Bell readout cutoff must be at least 2n + 4");
    }
    const FockVector vac = vacuum_in_basis(d, size);
    if (vac.truncation_mass > 1e-12) {
        throw CutoffInsufficient("d = 1 vacuum does not fit in cutoff " + std::to_string(size),
                                 vac.truncation_mass);
    }
    const ComplexVector& v = vac.coeffs;
    const ComplexVector dv = -apply_derivative(vac);
    const double norm = v.squaredNorm() * v.squaredNorm();

    const ComplexVector block = bell_block(2 * n, v, nullptr);
    const ComplexVector dblock = bell_block(2 * n, v, &dv);
    const Complex phi = block(n) / std::sqrt(norm);
    const Complex dphi = dblock(n) / std::sqrt(norm);

    BellReadout out;
    out.n = n;
    out.d = d.value();
    out.cutoff = size;
    out.vacuum_truncation = vac.truncation_mass;
    out.probability = std::norm(phi);
    out.derivative = 2.0 * (std::conj(phi) * dphi).real();

    // Frozen Phi: only the probe moves, d|nn> = (D e_n) x e_n + e_n x (D e_n).
    const double down = n >= 2 ? std::sqrt(double(n) * (n - 1)) / (4.0 * d.value()) : 0.0;
    const double up = -std::sqrt(double(n + 1) * (n + 2)) / (4.0 * d.value());
    Complex w = 0.0;
    if (n >= 2) {
        const ComplexVector lower = bell_block(2 * n - 2, v, nullptr) / std::sqrt(norm);
        w += down * (std::conj(lower(n - 2)) + std::conj(lower(n)));  // |n-2,n> and |n,n-2>
    }
    const ComplexVector upper = bell_block(2 * n + 2, v, nullptr) / std::sqrt(norm);
    w += up * (std::conj(upper(n + 2)) + std::conj(upper(n)));  // |n+2,n> and |n,n+2>
    out.fixed_derivative = 2.0 * (phi * w).real();

    const double variance = out.probability * (1.0 - out.probability);
    if (!(variance > 0.0)) {
        throw NumericalError("Bell projector has zero variance on the probe");
    }
    out.msn = out.derivative * out.derivative / variance;
    out.fixed_msn = out.fixed_derivative * out.fixed_derivative / variance;
    return out;
}

double bell_readout_msn(int n, LengthScale d, int cutoff) { return bell_readout(n, d, cutoff).msn; }

ReadoutScan vacuum_projection_scan(const std::vector<int>& n_list, LengthScale d) {
    ReadoutScan scan{"|psi_0(1)><psi_0(1)|", {}};
    for (const int n : n_list) {
        if (n < 0) {
            throw ValidationError("excitation numbers must be non-negative");
        }
        int size = std::max(8, default_cutoff(n));
        size += size % 2;
        FockVector vac = vacuum_in_basis(d, size);
        while (vac.truncation_mass > 1e-14 && size < 4096) {
            size *= 2;
            vac = vacuum_in_basis(d, size);
        }
        const ComplexVector v = vac.coeffs / vac.coeffs.norm();
        // <A> = |v_n|^2, dA = 2 Re(<dpsi|v><v|psi>) with dpsi = D e_n.
        const ComplexVector g = apply_derivative(fock_vector(n, d, size));
        const double expectation = std::norm(v(n));
        const double derivative = 2.0 * (g.head(size).dot(v) * std::conj(v(n))).real();

        ReadoutPoint point;
        point.n = n;
        point.d = d.value();
        point.cutoff = size;
        point.expectation = expectation;
        point.derivative = derivative;
        point.variance = expectation * (1.0 - expectation);
        // p (1 - p) is exact here, so no cancellation guard is needed.
        if (point.variance > 0.0) {
            const double ratio = derivative / std::sqrt(point.variance);
            point.msn = ratio * ratio;
        }
        scan.points.push_back(point);
    }
    return scan;
}

}  // namespace lsq
