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

#include "lsq/fockspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "lsq/special.hpp"

namespace lsq {

namespace {

constexpr Complex kI{0.0, 1.0};

// Edge mass at which a working space is considered wide enough for the flow.
constexpr double kEdgeTolerance = 1e-26;
constexpr int kEdgeWindow = 8;

void require_cutoff(int cutoff, int minimum, const char* what) {
    if (cutoff < minimum) {
        throw ValidationError(std::string(what) + ": cutoff must be >= " + std::to_string(minimum) +
                              ", got " + std::to_string(cutoff));
    }
}

void require_same_basis(LengthScale a, LengthScale b, int ca, int cb) {
    if (ca != cb) {
        throw ValidationError("states have mismatched cutoffs " + std::to_string(ca) + " and " +
                              std::to_string(cb));
    }
    if (std::abs(a.value() - b.value()) > 1e-12 * std::max(a.value(), b.value())) {
        throw ValidationError("states are written in different bases (d = " + std::to_string(a.value()) +
                              " vs " + std::to_string(b.value()) + ")");
    }
}

// Real generator exp(i theta A) = exp(-theta (a^2 - a^dag^2) / 4) on `size` levels.
RealMatrix flow_generator(double theta, int size) {
    RealMatrix g = RealMatrix::Zero(size, size);
    for (int n = 0; n < size; ++n) {
        if (n >= 2) {
            g(n - 2, n) = -theta * std::sqrt(double(n) * (n - 1)) / 4.0;
        }
        if (n + 2 < size) {
            g(n + 2, n) = theta * std::sqrt(double(n + 1) * (n + 2)) / 4.0;
        }
    }
    return g;
}

double tail_mass(const ComplexVector& v, int from) {
    if (from >= v.size()) {
        return 0.0;
    }
    return v.tail(v.size() - from).squaredNorm();
}

double tail_trace(const ComplexMatrix& m, int from) {
    double t = 0.0;
    for (int i = from; i < m.rows(); ++i) {
        t += m(i, i).real();
    }
    return t;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    Eigen::VectorXd ev = es.eigenvalues();
    const double top = std::max(ev.maxCoeff(), 0.0);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        ev(i) = ev(i) > 1e-14 * top ? std::sqrt(ev(i)) : 0.0;
    }
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

LengthScale::LengthScale(double d) : d_(d) {
    if (!(d > 0.0) || !std::isfinite(d)) {
        throw ValidationError("length scale d must be positive and finite, got " + std::to_string(d));
    }
}

double LengthScale::log() const { return std::log(d_); }

int FockVector::support_top(double threshold) const {
    for (int n = cutoff() - 1; n >= 0; --n) {
        if (std::norm(coeffs(n)) > threshold) {
            return n;
        }
    }
    return -1;
}

double FockVector::edge_mass(int count) const {
    return tail_mass(coeffs, std::max(0, cutoff() - count));
}

void DensityOperator::validate(double hermitian_tol, double trace_tol, double eigen_tol) const {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
        throw ValidationError("density operator must be a non-empty square matrix");
    }
    const double asym = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (asym > hermitian_tol) {
        throw ValidationError("density operator is not Hermitian (deviation " + std::to_string(asym) + ")");
    }
    const double trace = matrix.trace().real();
    if (std::abs(trace - 1.0) > trace_tol) {
        throw ValidationError("density operator trace is " + std::to_string(trace));
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(matrix, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -eigen_tol) {
        throw ValidationError("density operator has negative eigenvalue " +
                              std::to_string(es.eigenvalues().minCoeff()));
    }
}

DensityOperator DensityOperator::pure(const FockVector& state) {
    return {state.coeffs * state.coeffs.adjoint(), state.d, state.truncation_mass};
}

LadderPair ladder_ops(int cutoff) {
    require_cutoff(cutoff, 2, "ladder_ops");
    ComplexMatrix a = ComplexMatrix::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) {
        a(n - 1, n) = std::sqrt(double(n));
    }
    return {{a, "a"}, {a.adjoint(), "a_dag"}};
}

RealMatrix derivative_matrix(LengthScale d, int rows, int cols) {
    RealMatrix m = RealMatrix::Zero(rows, cols);
    const double s = 1.0 / (4.0 * d.value());
    for (int n = 0; n < cols; ++n) {
        if (n >= 2 && n - 2 < rows) {
            m(n - 2, n) = s * std::sqrt(double(n) * (n - 1));
        }
        if (n + 2 < rows) {
            m(n + 2, n) = -s * std::sqrt(double(n + 1) * (n + 2));
        }
    }
    return m;
}

TruncatedOperator derivative_operator(LengthScale d, int cutoff) {
    require_cutoff(cutoff, 4, "derivative_operator");
    return {derivative_matrix(d, cutoff, cutoff).cast<Complex>(), "D_d"};
}

TruncatedOperator scale_generator(int cutoff) {
    require_cutoff(cutoff, 4, "scale_generator");
    const auto [a, ad] = ladder_ops(cutoff);
    ComplexMatrix gen = (kI * (a.matrix * a.matrix) - kI * (ad.matrix * ad.matrix)) / 4.0;
    return {gen, "A"};
}

ComplexVector apply_derivative(const FockVector& state) {
    const int n = state.cutoff();
    return derivative_matrix(state.d, n + 2, n).cast<Complex>() * state.coeffs;
}

FockVector resize(const FockVector& state, int cutoff) {
    require_cutoff(cutoff, 1, "resize");
    FockVector out{ComplexVector::Zero(cutoff), state.d, state.truncation_mass};
    const int keep = std::min(cutoff, state.cutoff());
    out.coeffs.head(keep) = state.coeffs.head(keep);
    out.truncation_mass += tail_mass(state.coeffs, keep);
    return out;
}

DensityOperator resize(const DensityOperator& rho, int cutoff) {
    require_cutoff(cutoff, 1, "resize");
    DensityOperator out{ComplexMatrix::Zero(cutoff, cutoff), rho.d, rho.truncation_mass};
    const int keep = std::min(cutoff, rho.cutoff());
    out.matrix.topLeftCorner(keep, keep) = rho.matrix.topLeftCorner(keep, keep);
    out.truncation_mass += tail_trace(rho.matrix, keep);
    return out;
}

namespace {

// Orthogonal flow matrix on a working space that is grown until the edge of
// the transported support is empty.
template <typename Transport>
void with_flow(double theta, int initial_size, int max_size, Transport&& transport) {
    int size = initial_size;
    while (true) {
        const RealMatrix u = flow_generator(theta, size).exp();
        const double edge = transport(u);
        if (edge <= kEdgeTolerance) {
            return;
        }
        if (size >= max_size) {
            throw CutoffInsufficient("scale flow reached the working-space edge at cutoff " +
                                         std::to_string(size),
                                     edge);
        }
        size = std::min(2 * size, max_size);
    }
}

}  // namespace

FockVector apply_scale_flow(const FockVector& state, LengthScale target, const FlowOptions& options) {
    const int out_cutoff = options.output_cutoff > 0 ? options.output_cutoff : state.cutoff();
    const double theta = std::log(target.value() / state.d.value());
    if (theta == 0.0) {
        FockVector same = resize(state, out_cutoff);
        same.d = target;
        return same;
    }
    const int top = std::max(state.support_top(), 0);
    const int initial = std::max({state.cutoff(), out_cutoff, default_cutoff(top)});

    ComplexVector moved;
    with_flow(theta, initial, std::max(initial, options.max_working_cutoff), [&](const RealMatrix& u) {
        ComplexVector padded = ComplexVector::Zero(u.rows());
        padded.head(state.cutoff()) = state.coeffs;
        moved = u.cast<Complex>() * padded;
        return tail_mass(moved, static_cast<int>(moved.size()) - kEdgeWindow);
    });

    const double discarded = tail_mass(moved, out_cutoff);
    if (discarded > options.leakage_tolerance) {
        throw CutoffInsufficient("scale flow leaks outside cutoff " + std::to_string(out_cutoff), discarded);
    }
    return {moved.head(out_cutoff), target, state.truncation_mass + discarded};
}

DensityOperator apply_scale_flow(const DensityOperator& rho, LengthScale target, const FlowOptions& options) {
    const int out_cutoff = options.output_cutoff > 0 ? options.output_cutoff : rho.cutoff();
    const double theta = std::log(target.value() / rho.d.value());
    if (theta == 0.0) {
        DensityOperator same = resize(rho, out_cutoff);
        same.d = target;
        return same;
    }
    int top = 0;
    for (int i = rho.cutoff() - 1; i >= 0; --i) {
        if (std::abs(rho.matrix(i, i)) > 1e-30) {
            top = i;
            break;
        }
    }
    const int initial = std::max({rho.cutoff(), out_cutoff, default_cutoff(top)});

    ComplexMatrix moved;
    with_flow(theta, initial, std::max(initial, options.max_working_cutoff), [&](const RealMatrix& u) {
        ComplexMatrix padded = ComplexMatrix::Zero(u.rows(), u.cols());
        padded.topLeftCorner(rho.cutoff(), rho.cutoff()) = rho.matrix;
        const ComplexMatrix uc = u.cast<Complex>();
        moved = uc * padded * uc.adjoint();
        return tail_trace(moved, static_cast<int>(moved.rows()) - kEdgeWindow);
    });

    const double discarded = tail_trace(moved, out_cutoff);
    if (discarded > options.leakage_tolerance) {
        throw CutoffInsufficient("scale flow leaks outside cutoff " + std::to_string(out_cutoff), discarded);
    }
    return {moved.topLeftCorner(out_cutoff, out_cutoff), target, rho.truncation_mass + discarded};
}

FockVector ground_state_in_basis(LengthScale source, LengthScale basis, int cutoff) {
    require_cutoff(cutoff, 1, "ground_state_in_basis");
    // Squeezed vacuum with r = -ln(basis/source)/2:
    //   c_{2k} = sqrt(C(2k,k)) (tanh(ln(ratio)/2) / 2)^k / sqrt(cosh(ln(ratio)/2))
    const double ratio = basis.value() / source.value();
    const double t = (ratio - 1.0) / (ratio + 1.0);
    FockVector out{ComplexVector::Zero(cutoff), basis, 0.0};
    double c = std::sqrt(2.0 * std::sqrt(ratio) / (1.0 + ratio));
    out.coeffs(0) = c;
    for (int k = 1; 2 * k < cutoff; ++k) {
        c *= t * std::sqrt((2.0 * k - 1.0) / (2.0 * k));
        out.coeffs(2 * k) = c;
    }
    out.truncation_mass = std::max(0.0, 1.0 - out.coeffs.squaredNorm());
    return out;
}

FockVector vacuum_in_basis(LengthScale d, int cutoff) {
    if (cutoff < 8 || cutoff % 2 != 0) {
        throw ValidationError("vacuum_in_basis: cutoff must be even and >= 8, got " + std::to_string(cutoff));
    }
    return ground_state_in_basis(LengthScale(1.0), d, cutoff);
}

FockVector fock_vector(int n, LengthScale d, int cutoff) {
    if (n < 0 || n >= cutoff) {
        throw ValidationError("fock_vector: need 0 <= n < cutoff (n = " + std::to_string(n) +
                              ", cutoff = " + std::to_string(cutoff) + ")");
    }
    FockVector out{ComplexVector::Zero(cutoff), d, 0.0};
    out.coeffs(n) = 1.0;
    return out;
}

FockVector coherent_vector(Complex alpha, LengthScale d, int cutoff) {
    require_cutoff(cutoff, 1, "coherent_vector");
    const double mean = std::norm(alpha);
    if (mean > cutoff / 4.0) {
        throw ValidationError("coherent_vector: |alpha|^2 = " + std::to_string(mean) +
                              " exceeds cutoff/4 = " + std::to_string(cutoff / 4.0));
    }
    FockVector out{ComplexVector::Zero(cutoff), d, 0.0};
    Complex c = std::exp(-mean / 2.0);
    out.coeffs(0) = c;
    for (int n = 1; n < cutoff; ++n) {
        c *= alpha / std::sqrt(double(n));
        out.coeffs(n) = c;
    }
    const double kept = out.coeffs.squaredNorm();
    out.truncation_mass = std::max(0.0, 1.0 - kept);
    out.coeffs /= std::sqrt(kept);
    return out;
}

namespace {

// exp(alpha (a^dag - a)) v for real alpha, by Taylor steps of length at most
// 1/2 in the generator norm; the generator is antisymmetric, so the steps
// neither grow nor shrink the vector and no dense exponential is needed.
ComplexVector displace(double alpha, const ComplexVector& v) {
    const Eigen::Index size = v.size();
    const double norm = 2.0 * std::abs(alpha) * std::sqrt(double(size));
    const int steps = std::max(1, static_cast<int>(std::ceil(2.0 * norm)));
    const double h = alpha / steps;
    auto apply = [&](const ComplexVector& x) {
        ComplexVector y = ComplexVector::Zero(size);
        for (Eigen::Index n = 1; n < size; ++n) {
            const double s = h * std::sqrt(double(n));
            y(n) += s * x(n - 1);
            y(n - 1) -= s * x(n);
        }
        return y;
    };
    ComplexVector out = v;
    for (int step = 0; step < steps; ++step) {
        ComplexVector term = out;
        ComplexVector sum = out;
        for (int k = 1; k < 60; ++k) {
            term = apply(term) / double(k);
            sum += term;
            if (term.norm() <= 1e-18 * sum.norm()) {
                break;
            }
        }
        out = sum;
    }
    return out;
}

}  // namespace

FockVector displaced_squeezed_vector(double alpha, double squeeze, LengthScale d, int cutoff) {
    require_cutoff(cutoff, 8, "displaced_squeezed_vector");
    if (!(squeeze >= 1.0) || !std::isfinite(squeeze)) {
        throw ValidationError("squeeze factor D must be >= 1, got " + std::to_string(squeeze));
    }
    if (!std::isfinite(alpha)) {
        throw ValidationError("displacement alpha must be finite");
    }
    int work = std::max(2 * cutoff, cutoff + 64);
    while (true) {
        const FockVector squeezed = ground_state_in_basis(LengthScale(d.value() * squeeze), d, work);
        const ComplexVector moved = displace(alpha, squeezed.coeffs);
        const double edge = tail_mass(moved, work - kEdgeWindow) + squeezed.truncation_mass;
        if (edge <= kEdgeTolerance || work >= 4096) {
            FockVector out{moved.head(cutoff), d, tail_mass(moved, cutoff) + squeezed.truncation_mass};
            out.coeffs /= out.coeffs.norm();
            return out;
        }
        work *= 2;
    }
}

double fidelity(const FockVector& s1, const FockVector& s2) {
    require_same_basis(s1.d, s2.d, s1.cutoff(), s2.cutoff());
    return std::norm(s1.coeffs.dot(s2.coeffs));
}

double fidelity(const DensityOperator& s1, const DensityOperator& s2) {
    require_same_basis(s1.d, s2.d, s1.cutoff(), s2.cutoff());
    const ComplexMatrix product = psd_sqrt(s1.matrix) * psd_sqrt(s2.matrix);
    Eigen::JacobiSVD<ComplexMatrix> svd(product);
    const double trace_norm = svd.singularValues().sum();
    return trace_norm * trace_norm;
}

Complex position_amplitude(const FockVector& state, double x) {
    const double u = x * std::sqrt(state.d.value());
    const Eigen::VectorXd h = hermite_functions(state.cutoff() - 1, u);
    const Complex sum = (h.cast<Complex>().array() * state.coeffs.array()).sum();
    return std::pow(state.d.value(), 0.25) * sum;
}

}  // namespace lsq
