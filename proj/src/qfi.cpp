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

#include "lsq/qfi.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "lsq/special.hpp"

namespace lsq {

namespace {

constexpr std::array<std::pair<QfiMethod, std::string_view>, 5> kMethodNames{{
    {QfiMethod::analytic, "analytic"},
    {QfiMethod::pure_numeric, "pure-numeric"},
    {QfiMethod::sld_eigen, "sld-eigen"},
    {QfiMethod::fidelity_fd, "fidelity-fd"},
    {QfiMethod::cfi_quadrature, "cfi-quadrature"},
}};

void require_normalized(const FockVector& state) {
    const double norm = state.norm_squared();
    if (std::abs(norm - 1.0) > 1e-9) {
        throw ValidationError("state is not normalized (norm^2 = " + std::to_string(norm) + ")");
    }
}

bool is_diagonal(const ComplexMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (i != j && m(i, j) != Complex(0.0)) {
                return false;
            }
        }
    }
    return true;
}

// Second central difference with one Richardson step. `g(s)` returns sqrt(F)
// between the states at d and d + s.
template <typename Overlap>
QfiReport bures_difference(Overlap&& g, LengthScale d, double step, double center, int cutoff) {
    if (!(step >= 1e-6 && step <= 1e-2)) {
        throw ValidationError("fidelity step must lie in [1e-6, 1e-2] (relative to d), got " +
                              std::to_string(step));
    }
    const double h = step * d.value();
    auto q = [&](double s) { return -4.0 * (g(s) + g(-s) - 2.0 * center) / (s * s); };
    const double coarse = q(h);
    const double fine = q(h / 2);
    const double value = (4.0 * fine - coarse) / 3.0;
    const double error = std::abs(fine - coarse) / 3.0 + 1e-14 / (h * h);

    if (value < -error) {
        throw NumericalError("fidelity difference gave negative QFI " + std::to_string(value) +
                             "; retry with a larger step");
    }
    QfiReport report;
    report.value = std::max(value, 0.0);
    report.method = QfiMethod::fidelity_fd;
    report.cutoff = cutoff;
    report.error_estimate = error;
    report.d = d.value();
    report.diagnostics = {{"step", h}, {"coarse", coarse}, {"fine", fine}};
    return report;
}

}  // namespace

std::string_view method_name(QfiMethod method) {
    for (const auto& [m, name] : kMethodNames) {
        if (m == method) {
            return name;
        }
    }
    return "unknown";
}

QfiMethod parse_method(std::string_view name) {
    for (const auto& [m, n] : kMethodNames) {
        if (n == name) {
            return m;
        }
    }
    throw ValidationError("unknown QFI method '" + std::string(name) + "'");
}

double qfi_coherent(double alpha, LengthScale d) {
    return (1.0 + 2.0 * alpha * alpha) / (2.0 * d.value() * d.value());
}

double qfi_displaced_squeezed(double alpha, double squeeze, LengthScale d) {
    if (!(squeeze >= 1.0)) {
        throw ValidationError("squeeze factor D must be >= 1, got " + std::to_string(squeeze));
    }
    return (1.0 + 2.0 * alpha * alpha * squeeze) / (2.0 * d.value() * d.value());
}

double qfi_fock(int n, LengthScale d) {
    if (n < 0) {
        throw ValidationError("excitation number must be non-negative, got " + std::to_string(n));
    }
    const double nn = n;
    return (nn * nn + nn + 1.0) / (2.0 * d.value() * d.value());
}

QfiReport qfi_pure_numeric(const FockVector& state, double truncation_tolerance) {
    require_normalized(state);
    if (state.truncation_mass > truncation_tolerance) {
        throw CutoffInsufficient("state was truncated at cutoff " + std::to_string(state.cutoff()),
                                 state.truncation_mass);
    }
    const ComplexVector g = apply_derivative(state);
    const Complex overlap = state.coeffs.dot(g.head(state.cutoff()));
    const double value = 4.0 * (g.squaredNorm() - std::norm(overlap));

    QfiReport report;
    report.value = std::max(value, 0.0);
    report.method = QfiMethod::pure_numeric;
    report.cutoff = state.cutoff();
    // Discarded amplitude enters the derivative linearly.
    report.error_estimate = 4.0 * g.squaredNorm() * 2.0 * std::sqrt(state.truncation_mass) +
                            1e-15 * std::abs(value);
    report.d = state.d.value();
    report.diagnostics = {{"derivative_norm2", g.squaredNorm()}, {"overlap_abs", std::abs(overlap)}};
    return report;
}

namespace {

// D M - M D with the derivative operator applied through its two nonzero
// bands, so large diagonal states do not pay for dense products.
ComplexMatrix derivative_commutator(LengthScale d, const ComplexMatrix& m) {
    const Eigen::Index n = m.rows();
    const double scale = 1.0 / (4.0 * d.value());
    // D(j, j + 2) = up(j), D(j + 2, j) = -up(j) with up(j) = sqrt((j + 1)(j + 2)) / (4d).
    Eigen::VectorXd up = Eigen::VectorXd::Zero(std::max<Eigen::Index>(n - 2, 0));
    for (Eigen::Index j = 0; j + 2 < n; ++j) {
        up(j) = std::sqrt(double(j + 1) * double(j + 2)) * scale;
    }
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j + 2 < n; ++j) {
        out.row(j) += up(j) * m.row(j + 2);
        out.row(j + 2) -= up(j) * m.row(j);
        out.col(j + 2) -= up(j) * m.col(j);
        out.col(j) += up(j) * m.col(j + 2);
    }
    return out;
}

}  // namespace

SldResult sld_mixed(const ComplexMatrix& rho, const ComplexMatrix& drho) {
    if (rho.rows() != rho.cols() || drho.rows() != rho.rows() || drho.cols() != rho.cols()) {
        throw ValidationError("rho and drho must be square matrices of the same size");
    }
    const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw ValidationError("rho is not Hermitian");
    }
    const double dscale = std::max(1.0, drho.cwiseAbs().maxCoeff());
    if ((drho - drho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * dscale) {
        throw ValidationError("drho is not Hermitian");
    }

    const Eigen::Index n = rho.rows();
    Eigen::VectorXd p(n);
    ComplexMatrix vecs;
    ComplexMatrix x;
    const bool diagonal = is_diagonal(rho);
    if (diagonal) {
        p = rho.diagonal().real();
        x = drho;
    } else {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
        if (es.info() != Eigen::Success) {
            throw NumericalError("eigendecomposition of rho failed");
        }
        p = es.eigenvalues();
        vecs = es.eigenvectors();
        x = vecs.adjoint() * drho * vecs;
    }
    p = p.cwiseMax(0.0);
    const double threshold = 1e-12 * p.maxCoeff();
    if (!(p.maxCoeff() > 0.0)) {
        throw NumericalError("rho has no positive eigenvalue");
    }

    SldResult result;
    ComplexMatrix l = ComplexMatrix::Zero(n, n);
    double qfi = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double s = p(j) + p(k);
            if (s > threshold) {
                l(j, k) = 2.0 * x(j, k) / s;
                qfi += 2.0 * std::norm(x(j, k)) / s;
            }
        }
    }
    result.rank = static_cast<int>((p.array() > threshold).count());
    result.sld = diagonal ? l : ComplexMatrix(vecs * l * vecs.adjoint());
    result.qfi = qfi;
    return result;
}

QfiReport qfi_sld(const DensityOperator& rho) {
    const int n = rho.cutoff();
    QfiReport report;
    int rank = 0;
    if (is_diagonal(rho.matrix)) {
        // drho couples only j and j + 2, with |drho(j, j + 2)|^2 = (j+1)(j+2)/(16 d^2) (p_j - p_{j+2})^2.
        if ((rho.matrix.diagonal().real().array() < -1e-10).any()) {
            throw ValidationError("rho has negative populations");
        }
        Eigen::VectorXd p = Eigen::VectorXd::Zero(n + 2);
        p.head(n) = rho.matrix.diagonal().real().cwiseMax(0.0);
        // Populations are exact here, so only empty pairs are skipped.
        const double d2 = rho.d.value() * rho.d.value();
        double qfi = 0.0;
        for (int j = 0; j < n; ++j) {
            const double s = p(j) + p(j + 2);
            if (s > 0.0) {
                const double diff = p(j) - p(j + 2);
                qfi += 4.0 * (double(j + 1) * double(j + 2) / (16.0 * d2)) * (diff * diff / s);
            }
        }
        report.value = qfi;
        rank = static_cast<int>((p.array() > 1e-12 * p.maxCoeff()).count());
    } else {
        const DensityOperator padded = resize(rho, n + 2);
        const SldResult sld = sld_mixed(padded.matrix, derivative_commutator(rho.d, padded.matrix));
        report.value = sld.qfi;
        rank = sld.rank;
    }
    report.method = QfiMethod::sld_eigen;
    report.cutoff = n;
    report.error_estimate = (1e-12 + rho.truncation_mass) * report.value;
    report.d = rho.d.value();
    report.diagnostics = {{"rank", double(rank)}, {"truncation_mass", rho.truncation_mass}};
    return report;
}

QfiReport qfi_fidelity_fd(const PureFamily& family, LengthScale d, double step) {
    const FockVector center = family(d);
    const double center_norm = center.coeffs.norm();
    FlowOptions options;
    options.output_cutoff = center.cutoff();
    auto g = [&](double s) {
        const FockVector moved = apply_scale_flow(family(LengthScale(d.value() + s)), d, options);
        return std::abs(center.coeffs.dot(moved.coeffs)) / (center_norm * moved.coeffs.norm());
    };
    return bures_difference(g, d, step, 1.0, center.cutoff());
}

QfiReport qfi_fidelity_fd(const MixedFamily& family, LengthScale d, double step) {
    const DensityOperator center = family(d);
    const double center_trace = center.matrix.trace().real();
    FlowOptions options;
    options.output_cutoff = center.cutoff();
    auto root_fidelity = [&](const DensityOperator& other) {
        return std::sqrt(fidelity(center, other)) / std::sqrt(center_trace * other.matrix.trace().real());
    };
    // sqrt(F(rho, rho)) is 1 analytically; using the computed value cancels the
    // bias of the matrix square roots.
    const double self = root_fidelity(center);
    auto g = [&](double s) {
        return root_fidelity(apply_scale_flow(family(LengthScale(d.value() + s)), d, options));
    };
    return bures_difference(g, d, step, self, center.cutoff());
}

QfiReport cfi_position(const FockVector& state, int nodes) {
    require_normalized(state);
    const int n_top = state.cutoff() + 1;
    const int k = nodes > 0 ? nodes : default_quadrature_order(n_top);
    const QuadratureRule rule = gauss_hermite(k);
    const ComplexVector g = apply_derivative(state);

    // Rotate away a global phase; a real remainder means a real wavefunction.
    Eigen::Index top = 0;
    state.coeffs.cwiseAbs().maxCoeff(&top);
    const Complex phase = std::conj(state.coeffs(top)) / std::abs(state.coeffs(top));
    const ComplexVector c = state.coeffs * phase;
    const ComplexVector dc = g * phase;
    const bool real = c.imag().cwiseAbs().maxCoeff() <= 1e-12 && dc.imag().cwiseAbs().maxCoeff() <= 1e-12;

    // With x = u / sqrt(d) the Jacobian cancels the d^{1/4} factors of psi^2.
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        const Eigen::VectorXd h = hermite_functions(n_top, rule.nodes(i));
        double integrand = 0.0;
        if (real) {
            const double dpsi = h.dot(dc.real());
            integrand = 4.0 * dpsi * dpsi;
        } else {
            const Complex psi = (h.head(state.cutoff()).cast<Complex>().array() * c.array()).sum();
            const Complex dpsi = (h.cast<Complex>().array() * dc.array()).sum();
            const double p = std::norm(psi);
            if (p < 1e-300) {
                continue;
            }
            const double dp = (std::conj(psi) * dpsi).real();
            integrand = 4.0 * dp * dp / p;
        }
        total += rule.scaled_weights(i) * integrand;
    }

    QfiReport report;
    report.value = total;
    report.method = QfiMethod::cfi_quadrature;
    report.cutoff = state.cutoff();
    report.error_estimate = real ? 1e-13 * total : 1e-8 * total;
    report.d = state.d.value();
    report.diagnostics = {{"nodes", double(k)}};
    if (!real) {
        report.notes = "complex position wavefunction: quadrature of a non-polynomial integrand";
    }
    return report;
}

MsnResult msn_from_moments(double derivative, double expectation, double second_moment) {
    const double variance = second_moment - expectation * expectation;
    if (!(variance > 1e-14 * std::max(1.0, std::abs(second_moment)))) {
        throw NumericalError("observable has zero variance on the probe (Var = " + std::to_string(variance) +
                             ")");
    }
    return {derivative * derivative / variance, derivative, variance, expectation};
}

MsnResult msn_reciprocal(const TruncatedOperator& observable, const FockVector& state) {
    require_normalized(state);
    const int size = observable.cutoff();
    if (size < state.cutoff()) {
        throw ValidationError("observable cutoff " + std::to_string(size) + " is smaller than the state cutoff " +
                              std::to_string(state.cutoff()));
    }
    const FockVector padded = resize(state, size);
    const ComplexVector g = apply_derivative(padded);
    const double lost = g.tail(2).squaredNorm();
    if (lost > 1e-12 * std::max(1.0, g.squaredNorm())) {
        throw CutoffInsufficient("state derivative leaves the observable's cutoff", lost);
    }
    const ComplexVector ac = observable.matrix * padded.coeffs;
    const double expectation = padded.coeffs.dot(ac).real();
    const double second = ac.squaredNorm();  // <A^2> for Hermitian A
    const double derivative = 2.0 * g.head(size).dot(ac).real();
    return msn_from_moments(derivative, expectation, second);
}

}  // namespace lsq
