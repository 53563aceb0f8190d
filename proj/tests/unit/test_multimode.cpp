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

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "lsq/fockspace.hpp"
#include "lsq/multimode.hpp"
#include "lsq/qfi.hpp"
#include "oracle.hpp"

namespace {

using lsq::Complex;
using lsq::ComplexMatrix;
using lsq::ComplexVector;
using lsq::LengthScale;
using lsq::PairKind;

// ---------------------------------------------------------------------------
// Dense reference: N modes of dimension L, full tensor, generator summed mode
// by mode. Kept deliberately naive.

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

ComplexVector unit(int k, int dim) {
    ComplexVector e = ComplexVector::Zero(dim);
    e(k) = 1.0;
    return e;
}

ComplexMatrix single_mode_derivative(double d, int dim) {
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) {
        if (n >= 2) {
            m(n - 2, n) = std::sqrt(double(n) * (n - 1)) / (4 * d);
        }
        if (n + 2 < dim) {
            m(n + 2, n) = -std::sqrt(double(n + 1) * (n + 2)) / (4 * d);
        }
    }
    return m;
}

// d/dd of the fixed-coefficient family, applied mode by mode on the tensor.
ComplexVector total_derivative(const ComplexVector& psi, int modes, int dim, double d) {
    const ComplexMatrix D = single_mode_derivative(d, dim);
    ComplexVector out = ComplexVector::Zero(psi.size());
    Eigen::Index stride = 1;
    for (int j = modes - 1; j >= 0; --j) {
        for (Eigen::Index idx = 0; idx < psi.size(); ++idx) {
            const Eigen::Index digit = (idx / stride) % dim;
            for (int to = 0; to < dim; ++to) {
                if (D(to, digit) != Complex(0.0)) {
                    out(idx + (to - digit) * stride) += D(to, digit) * psi(idx);
                }
            }
        }
        stride *= dim;
    }
    return out;
}

double dense_qfi(const ComplexVector& psi_in, int modes, int dim, double d) {
    const ComplexVector psi = psi_in / psi_in.norm();
    const ComplexVector g = total_derivative(psi, modes, dim, d);
    return 4.0 * (g.squaredNorm() - std::norm(psi.dot(g)));
}

ComplexVector product(const std::vector<ComplexVector>& factors) {
    ComplexVector out = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) {
        out = kron(out, factors[i]);
    }
    return out;
}

ComplexVector dense_ghz(int modes, int n, int dim) {
    const ComplexVector plus = (unit(n, dim) + Complex(0, 1) * unit(n + 2, dim)) / std::sqrt(2.0);
    const ComplexVector minus = (unit(n, dim) - Complex(0, 1) * unit(n + 2, dim)) / std::sqrt(2.0);
    return product(std::vector<ComplexVector>(modes, plus)) + product(std::vector<ComplexVector>(modes, minus));
}

TEST(Ghz, MatchesDenseTensorBruteForce) {
    const double d = 1.0;
    for (auto [modes, n, expected] : {std::tuple{2, 1, 11.0}, std::tuple{3, 1, 21.0}, std::tuple{2, 2, 20.0}}) {
        const int dim = n + 5;
        const double brute = dense_qfi(dense_ghz(modes, n, dim), modes, dim, d);
        EXPECT_NEAR(brute, expected, 1e-10) << modes << " " << n;
        EXPECT_NEAR(lsq::multimode_qfi(lsq::ghz_state(modes, n, LengthScale(d))).value, brute, 1e-10);
    }
}

TEST(Ghz, MatchesDenseAtSeveralScalesAndSizes) {
    for (int modes : {2, 3, 4}) {
        for (int n : {0, 2, 3}) {
            const double d = 1.7;
            const int dim = n + 5;
            const double brute = dense_qfi(dense_ghz(modes, n, dim), modes, dim, d);
            EXPECT_NEAR(lsq::multimode_qfi(lsq::ghz_state(modes, n, LengthScale(d))).value / brute, 1.0, 1e-12);
        }
    }
}

TEST(Ghz, TwoModeDenseRouteAgrees) {
    const auto s = lsq::ghz_state(2, 3, LengthScale(0.9));
    EXPECT_NEAR(lsq::two_mode_qfi_dense(s.dense_two_mode(), LengthScale(0.9)),
                lsq::multimode_qfi(s).value, 1e-10);
}

TEST(Ghz, QubitShadowVariance) {
    // On the two-level image the generator is s sigma_y-like per mode with
    // s = sqrt((n+1)(n+2))/4; the GHZ variance is N^2 s^2, so QFI = 4 N^2 s^2 / d^2.
    for (int modes : {1, 2, 5}) {
        for (int n : {0, 1, 4}) {
            const double d = 1.3;
            const double expected = modes * modes * (n + 1.0) * (n + 2.0) / (4.0 * d * d);
            EXPECT_NEAR(lsq::ghz_qubit_shadow_qfi(modes, n, LengthScale(d)), expected, 1e-10 * expected);
        }
    }
    EXPECT_THROW(lsq::ghz_qubit_shadow_qfi(21, 1, LengthScale(1.0)), lsq::ValidationError);
}

ComplexVector dense_pair(PairKind kind, int n, int m, int dim) {
    switch (kind) {
        case PairKind::swap_sym:
            return kron(unit(n, dim), unit(m, dim)) + kron(unit(m, dim), unit(n, dim));
        case PairKind::swap_antisym:
            return kron(unit(n, dim), unit(m, dim)) - kron(unit(m, dim), unit(n, dim));
        case PairKind::super_plus:
            return kron(unit(n, dim), unit(n, dim)) + kron(unit(m, dim), unit(m, dim));
        case PairKind::super_minus:
            return kron(unit(n, dim), unit(n, dim)) - kron(unit(m, dim), unit(m, dim));
    }
    return {};
}

TEST(Pair, MatchesDenseBruteForce) {
    for (PairKind kind : {PairKind::swap_sym, PairKind::swap_antisym, PairKind::super_plus, PairKind::super_minus}) {
        for (auto [n, m] : {std::pair{1, 3}, std::pair{2, 4}, std::pair{0, 5}, std::pair{6, 4}}) {
            const double d = 1.2;
            const int dim = std::max(n, m) + 4;
            const double brute = dense_qfi(dense_pair(kind, n, m, dim), 2, dim, d);
            EXPECT_NEAR(lsq::multimode_qfi(lsq::pair_state(kind, n, m, LengthScale(d))).value, brute, 1e-10)
                << lsq::pair_kind_name(kind) << " " << n << " " << m;
        }
    }
}

TEST(Pair, AdditiveUnlessLevelsDifferByTwo) {
    const LengthScale d(1.0);
    for (PairKind kind : {PairKind::swap_sym, PairKind::swap_antisym, PairKind::super_plus, PairKind::super_minus}) {
        for (int n = 0; n < 8; ++n) {
            for (int m = 0; m < 8; ++m) {
                if (std::abs(n - m) <= 2) {
                    continue;
                }
                const double q = lsq::multimode_qfi(lsq::pair_state(kind, n, m, d)).value;
                EXPECT_NEAR(q, lsq::qfi_fock(n, d) + lsq::qfi_fock(m, d), 1e-9);
            }
        }
    }
}

TEST(Pair, GainForMinusSuperpositionAndSymmetricSwap) {
    const LengthScale d(1.0);
    for (int n = 0; n < 10; ++n) {
        const int m = n + 2;
        const double product = lsq::qfi_fock(n, d) + lsq::qfi_fock(m, d);
        EXPECT_GT(lsq::multimode_qfi(lsq::pair_state(PairKind::super_minus, n, m, d)).value, product);
        EXPECT_GT(lsq::multimode_qfi(lsq::pair_state(PairKind::swap_sym, n, m, d)).value, product);
    }
}

TEST(Pair, NamesRoundTrip) {
    for (PairKind kind : {PairKind::swap_sym, PairKind::swap_antisym, PairKind::super_plus, PairKind::super_minus}) {
        EXPECT_EQ(lsq::parse_pair_kind(lsq::pair_kind_name(kind)), kind);
    }
    EXPECT_THROW(lsq::parse_pair_kind("nope"), lsq::ValidationError);
    EXPECT_THROW(lsq::pair_state(PairKind::super_plus, 3, 3, LengthScale(1.0)), lsq::ValidationError);
}

TEST(Sequence, MatchesDenseBruteForce) {
    for (auto [ell, n] : {std::pair{1, 3}, std::pair{2, 5}, std::pair{2, 9}}) {
        const double d = 0.8;
        const int dim = n + 2 * ell + 4;
        ComplexVector psi = ComplexVector::Zero(dim * dim);
        for (int j = -ell; j <= ell; ++j) {
            const double sign = j == 0 ? -1.0 : 1.0;
            psi += sign * kron(unit(n + 2 * j, dim), unit(n + 2 * j, dim));
        }
        const double brute = dense_qfi(psi, 2, dim, d);
        EXPECT_NEAR(lsq::multimode_qfi(lsq::sequence_state(ell, n, LengthScale(d))).value, brute, 1e-9)
            << ell << " " << n;
    }
    EXPECT_THROW(lsq::sequence_state(2, 4, LengthScale(1.0)), lsq::ValidationError);
}

TEST(Product, QfiIsAdditive) {
    lsq::MultimodeVector s;
    s.mode_count = 3;
    s.cutoff = 12;
    s.d = LengthScale(1.4);
    lsq::ProductBranch b{1.0, {unit(1, 12), unit(4, 12), unit(2, 12)}};
    s.branches.push_back(b);
    const double expected =
        lsq::qfi_fock(1, s.d) + lsq::qfi_fock(4, s.d) + lsq::qfi_fock(2, s.d);
    EXPECT_NEAR(lsq::multimode_qfi(s).value, expected, 1e-12);
}

// Passive real rotations leave a1^2 + a2^2 (and so the total generator)
// invariant; product coherent inputs stay products of coherent states and
// gain nothing.
TEST(TwoModeDense, PassiveRotationGivesNoAdvantage) {
    const int dim = 30;
    const LengthScale d(1.0);
    const Complex alpha(0.6, 0.0);
    const Complex beta(-0.3, 0.2);
    const ComplexVector a = lsq::coherent_vector(alpha, d, dim).coeffs;
    const ComplexVector b = lsq::coherent_vector(beta, d, dim).coeffs;

    ComplexMatrix lower = ComplexMatrix::Zero(dim, dim);
    for (int k = 1; k < dim; ++k) {
        lower(k - 1, k) = std::sqrt(double(k));
    }
    const ComplexMatrix eye = ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix a1 = Eigen::kroneckerProduct(lower, eye);
    const ComplexMatrix a2 = Eigen::kroneckerProduct(eye, lower);
    for (double theta : {0.3, std::numbers::pi / 4}) {
        const ComplexMatrix gen = theta * (a1.adjoint() * a2 - a2.adjoint() * a1);
        const ComplexVector rotated = gen.exp() * kron(a, b);
        ComplexMatrix c(dim, dim);
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                c(i, j) = rotated(i * dim + j);
            }
        }
        // Total excitation above dim - 1 is lost to truncation; the coherent
        // amplitudes here leave far less than that.
        c /= c.norm();
        const double q = lsq::two_mode_qfi_dense(c, d);
        const double separate = lsq::qfi_coherent(std::abs(alpha), d) + lsq::qfi_coherent(std::abs(beta), d);
        const double rotated_amplitudes = lsq::qfi_coherent(std::abs(std::cos(theta) * alpha - std::sin(theta) * beta), d) +
                                          lsq::qfi_coherent(std::abs(std::sin(theta) * alpha + std::cos(theta) * beta), d);
        EXPECT_NEAR(q, separate, 1e-9) << theta;
        EXPECT_NEAR(q, rotated_amplitudes, 1e-9) << theta;
    }
}

// ---------------------------------------------------------------------------
// Readouts built from the d = 1 vacuum.

// <psi_k(d)|psi_0(1)> by Simpson.
ComplexVector vacuum_by_quadrature(double d, int dim) {
    ComplexVector v(dim);
    for (int k = 0; k < dim; ++k) {
        v(k) = lsq::testing::simpson(
            [&](double x) {
                return lsq::testing::eigenfunction_reference(k, d, x) * lsq::testing::eigenfunction_reference(0, 1.0, x);
            },
            -14.0, 14.0, 12000);
    }
    return v;
}

double bell_probability_reference(int n, double d, int dim) {
    const ComplexVector v = vacuum_by_quadrature(d, dim);
    ComplexVector phased = v;
    for (int k = 0; k < dim; ++k) {
        phased(k) *= std::pow(Complex(0, 1), k);
    }
    ComplexMatrix lower = ComplexMatrix::Zero(dim, dim);
    for (int k = 1; k < dim; ++k) {
        lower(k - 1, k) = std::sqrt(double(k));
    }
    const ComplexMatrix eye = ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix a1 = Eigen::kroneckerProduct(lower, eye);
    const ComplexMatrix a2 = Eigen::kroneckerProduct(eye, lower);
    const ComplexMatrix bs = (std::numbers::pi / 4 * (a1.adjoint() * a2 - a2.adjoint() * a1)).exp();
    const ComplexVector phi = bs * kron(v, phased);
    return std::norm(phi(n * dim + n));
}

TEST(BellReadout, ProbabilityMatchesDenseConstruction) {
    for (int n : {0, 1, 2, 3}) {
        const double d = 2.0;
        const auto r = lsq::bell_readout(n, LengthScale(d));
        EXPECT_NEAR(r.probability, bell_probability_reference(n, d, 20), 1e-11) << n;
    }
}

TEST(BellReadout, CoMovingDerivativeMatchesFiniteDifference) {
    for (int n : {1, 2}) {
        const double d = 2.0;
        const double h = 1e-4;
        const double fd = (bell_probability_reference(n, d + h, 20) - bell_probability_reference(n, d - h, 20)) / (2 * h);
        const auto r = lsq::bell_readout(n, LengthScale(d));
        EXPECT_NEAR(r.derivative, fd, 1e-7) << n;
    }
}

TEST(VacuumProjection, ExpectationAndDerivativeMatchOverlaps) {
    const double d = 2.0;
    const double h = 1e-5;
    auto overlap2 = [&](int n, double dd) {
        const double o = lsq::testing::simpson(
            [&](double x) {
                return lsq::testing::eigenfunction_reference(n, dd, x) * lsq::testing::eigenfunction_reference(0, 1.0, x);
            },
            -14.0, 14.0, 12000);
        return o * o;
    };
    const auto scan = lsq::vacuum_projection_scan({0, 1, 2, 3, 4, 5, 6}, LengthScale(d));
    for (const auto& p : scan.points) {
        EXPECT_NEAR(p.expectation, overlap2(p.n, d), 1e-12) << p.n;
        const double fd = (overlap2(p.n, d + h) - overlap2(p.n, d - h)) / (2 * h);
        EXPECT_NEAR(p.derivative, fd, 1e-8) << p.n;
        if (p.n % 2 == 1) {
            EXPECT_EQ(p.derivative, 0.0);
            EXPECT_FALSE(p.msn.has_value());
        } else {
            ASSERT_TRUE(p.msn.has_value());
        }
    }
}

}  // namespace
