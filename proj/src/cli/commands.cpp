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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <variant>

#include <CLI11.hpp>

#include "lsq/channels.hpp"
#include "lsq/cli.hpp"
#include "lsq/inference.hpp"
#include "lsq/multimode.hpp"
#include "lsq/qfi.hpp"

namespace lsq::cli {

namespace {

using Cell = std::variant<std::string, double, long long>;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Output table; printed as CSV and embedded in reports as an array of rows.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }

    std::string csv() const {
        std::string s;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            s += (i ? "," : "") + columns[i];
        }
        s += '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) {
                    s += ',';
                }
                if (const auto* str = std::get_if<std::string>(&row[i])) {
                    s += *str;
                } else if (const auto* d = std::get_if<double>(&row[i])) {
                    s += std::isfinite(*d) ? format_double(*d) : std::string();
                } else {
                    s += std::to_string(std::get<long long>(row[i]));
                }
            }
            s += '\n';
        }
        return s;
    }

    nlohmann::json json() const {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& row : rows) {
            nlohmann::json r = nlohmann::json::object();
            for (std::size_t i = 0; i < row.size(); ++i) {
                std::visit(
                    [&](const auto& v) {
                        using T = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<T, double>) {
                            r[columns[i]] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
                        } else {
                            r[columns[i]] = v;
                        }
                    },
                    row[i]);
            }
            out.push_back(std::move(r));
        }
        return out;
    }
};

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

// Writes --out (CSV table) and --report (JSON) when requested.
void emit_table(const ExperimentConfig& c, const Table& table, std::ostream& out) {
    const std::string csv = table.csv();
    out << csv;
    if (!c.out_path.empty()) {
        write_file_atomic(c.out_path, csv);
    }
    if (!c.report_path.empty()) {
        write_file_atomic(c.report_path, make_report(c, {{"table", table.json()}}).dump(2) + "\n");
    }
}

void write_report(const ExperimentConfig& c, const std::string& path, nlohmann::json results) {
    if (!path.empty()) {
        write_file_atomic(path, make_report(c, std::move(results)).dump(2) + "\n");
    }
}

// ---------------------------------------------------------------------------
// qfi

struct QfiPoint {
    int n = 0;
    double d = 1.0;
    Complex alpha{0.0, 0.0};
    double gamma = 0.0;
    double xi = 0.0;
    int modes = 2;
};

bool has_analytic(const std::string& state) {
    return state == "fock" || state == "coherent" || state == "displaced-squeezed";
}

bool is_multimode(const std::string& state) { return state == "pair" || state == "sequence" || state == "ghz"; }

FockVector adaptive_vector(const std::function<FockVector(int)>& build, std::optional<int> cutoff, int start) {
    if (cutoff) {
        return build(*cutoff);
    }
    int size = start;
    FockVector v = build(size);
    while (v.truncation_mass > 1e-15 && size < 1024) {
        size *= 2;
        v = build(size);
    }
    return v;
}

int coherent_start(Complex alpha) {
    const double mean = std::norm(alpha);
    return default_cutoff(static_cast<int>(std::ceil(mean + 12.0 * std::sqrt(mean) + 16.0)));
}

PureFamily pure_family(const ExperimentConfig& c, const QfiPoint& p, int cutoff) {
    if (c.state == "fock") {
        return [n = p.n, cutoff](LengthScale x) { return fock_vector(n, x, cutoff); };
    }
    if (c.state == "coherent") {
        return [a = p.alpha, cutoff](LengthScale x) { return coherent_vector(a, x, cutoff); };
    }
    return [a = p.alpha.real(), s = c.squeeze, cutoff](LengthScale x) {
        return displaced_squeezed_vector(a, s, x, cutoff);
    };
}

FockVector pure_probe(const ExperimentConfig& c, const QfiPoint& p) {
    const LengthScale d(p.d);
    if (c.state == "fock") {
        return fock_vector(p.n, d, c.cutoff.value_or(default_cutoff(p.n)));
    }
    if (c.state == "coherent") {
        return adaptive_vector([&](int size) { return coherent_vector(p.alpha, d, size); }, c.cutoff,
                               coherent_start(p.alpha));
    }
    return adaptive_vector(
        [&](int size) { return displaced_squeezed_vector(p.alpha.real(), c.squeeze, d, size); }, c.cutoff,
        coherent_start(p.alpha.real() * std::sqrt(c.squeeze)) + 32);
}

QfiReport compute_qfi(const ExperimentConfig& c, const QfiPoint& p, QfiMethod method) {
    const LengthScale d(p.d);
    auto unsupported = [&]() -> QfiReport {
        throw ValidationError("method " + std::string(method_name(method)) + " is not available for state '" +
                              c.state + "'");
    };

    if (has_analytic(c.state)) {
        if (c.state == "coherent" || c.state == "displaced-squeezed") {
            if (c.state == "displaced-squeezed" && p.alpha.imag() != 0.0) {
                throw ValidationError("displaced squeezed probes take a real alpha");
            }
        }
        switch (method) {
            case QfiMethod::analytic: {
                QfiReport r;
                r.method = method;
                r.d = p.d;
                if (c.state == "fock") {
                    r.value = qfi_fock(p.n, d);
                } else if (c.state == "coherent") {
                    r.value = qfi_coherent(std::abs(p.alpha), d);
                } else {
                    r.value = qfi_displaced_squeezed(p.alpha.real(), c.squeeze, d);
                }
                return r;
            }
            case QfiMethod::pure_numeric:
                return qfi_pure_numeric(pure_probe(c, p));
            case QfiMethod::sld_eigen:
                return qfi_sld(DensityOperator::pure(pure_probe(c, p)));
            case QfiMethod::fidelity_fd: {
                const FockVector probe = pure_probe(c, p);
                return qfi_fidelity_fd(pure_family(c, p, probe.cutoff()), d);
            }
            case QfiMethod::cfi_quadrature:
                return cfi_position(pure_probe(c, p));
        }
    }

    if (c.state == "damped" || c.state == "thermal") {
        const bool damped = c.state == "damped";
        switch (method) {
            case QfiMethod::sld_eigen:
                if (damped) {
                    QfiReport r = damped_fock_qfi(p.n, p.gamma, d);
                    if (c.cutoff) {
                        r = qfi_sld(damped_fock_state(p.n, p.gamma, d, *c.cutoff));
                    }
                    return r;
                }
                return c.cutoff ? qfi_sld(thermal_state(p.xi, d, *c.cutoff)) : thermal_qfi(p.xi, d);
            case QfiMethod::fidelity_fd: {
                const int size = c.cutoff.value_or(damped ? default_cutoff(p.n) : thermal_cutoff(p.xi, 1e-14));
                MixedFamily family;
                if (damped) {
                    family = [n = p.n, g = p.gamma, size](LengthScale x) { return damped_fock_state(n, g, x, size); };
                } else {
                    family = [xi = p.xi, size](LengthScale x) { return thermal_state(xi, x, size); };
                }
                return qfi_fidelity_fd(family, d);
            }
            default:
                return unsupported();
        }
    }

    if (is_multimode(c.state)) {
        if (method != QfiMethod::pure_numeric) {
            return unsupported();
        }
        const int size = c.cutoff.value_or(0);
        if (c.state == "pair") {
            return multimode_qfi(pair_state(parse_pair_kind(c.kind), p.n, c.m, d, size));
        }
        if (c.state == "sequence") {
            return multimode_qfi(sequence_state(c.ell, p.n, d, size));
        }
        return multimode_qfi(ghz_state(p.modes, p.n, d, size));
    }
    throw ValidationError("unknown state family '" + c.state + "'");
}

int cmd_qfi(ExperimentConfig& c, std::ostream& out, std::ostream& err) {
    static const std::vector<std::string> kStates = {"fock",    "coherent", "displaced-squeezed", "damped",
                                                     "thermal", "pair",     "sequence",           "ghz"};
    if (std::find(kStates.begin(), kStates.end(), c.state) == kStates.end()) {
        throw ValidationError("unknown state family '" + c.state + "'");
    }
    if (c.methods.empty()) {
        c.methods = {has_analytic(c.state) ? "analytic" : is_multimode(c.state) ? "pure-numeric" : "sld-eigen"};
    }
    std::vector<QfiMethod> methods;
    for (const auto& m : c.methods) {
        methods.push_back(parse_method(m));
    }
    if (c.state == "pair" && c.kind.empty()) {
        c.kind = "super_minus";
    }
    if (!(c.squeeze >= 1.0)) {
        throw ValidationError("--squeeze must be >= 1");
    }

    std::vector<QfiPoint> points;
    for (const int n : parse_int_range(c.n)) {
        for (const double d : parse_range(c.d)) {
            for (const double a : parse_range(c.alpha)) {
                for (const double g : parse_range(c.gamma)) {
                    for (const double xi : parse_range(c.xi)) {
                        for (const int modes : parse_int_range(c.modes)) {
                            points.push_back({n, d, Complex(a, c.alpha_imag), g, xi, modes});
                        }
                    }
                }
            }
        }
    }

    Table table;
    table.columns = {"state", "n", "d", "alpha", "alpha_imag", "squeeze", "gamma", "xi", "modes", "method", "qfi",
                     "error_estimate", "cutoff"};
    bool verify_failed = false;
    for (const auto& p : points) {
        std::optional<double> reference;
        for (std::size_t i = 0; i < methods.size(); ++i) {
            const QfiReport r = compute_qfi(c, p, methods[i]);
            table.add({c.state, (long long)p.n, p.d, p.alpha.real(), p.alpha.imag(), c.squeeze, p.gamma, p.xi,
                       (long long)p.modes, std::string(method_name(r.method)), r.value, r.error_estimate,
                       (long long)r.cutoff});
            if (!c.verify) {
                continue;
            }
            if (!reference) {
                reference = has_analytic(c.state) ? compute_qfi(c, p, QfiMethod::analytic).value : r.value;
            }
            const double tol =
                c.tolerance.value_or(methods[i] == QfiMethod::fidelity_fd ? 1e-4 : 1e-8) * std::abs(*reference);
            if (!(std::abs(r.value - *reference) <= tol)) {
                verify_failed = true;
                err << "verify: " << method_name(r.method) << " gave " << format_double(r.value) << ", reference "
                    << format_double(*reference) << " (n=" << p.n << ", d=" << format_double(p.d) << ")\n";
            }
        }
    }
    emit_table(c, table, out);
    return verify_failed ? kToleranceFailure : kSuccess;
}

// ---------------------------------------------------------------------------
// sample / estimate / mc

int single_int(const std::string& text, const char* flag) {
    const auto v = parse_int_range(text);
    if (v.size() != 1) {
        throw ValidationError(std::string(flag) + " takes a single value here");
    }
    return v.front();
}

double single_double(const std::string& text, const char* flag) {
    const auto v = parse_range(text);
    if (v.size() != 1) {
        throw ValidationError(std::string(flag) + " takes a single value here");
    }
    return v.front();
}

int cmd_sample(ExperimentConfig& c, std::ostream& out) {
    if (c.out_path.empty()) {
        throw ValidationError("sample needs --out");
    }
    const int n = single_int(c.n, "--n");
    const double d = single_double(c.d, "--d");
    const SampleBatch batch = sample_position(n, LengthScale(d), c.shots, c.seed);
    write_file_atomic(c.out_path, format_samples_csv(batch.samples));
    write_report(c, c.report_path,
                 {{"shots", batch.size()},
                  {"n", n},
                  {"d", d},
                  {"seed", c.seed},
                  {"generator", batch.generator},
                  {"sum_of_squares", sum_of_squares(batch.samples)}});
    out << "wrote " << batch.size() << " samples to " << c.out_path << "\n";
    return kSuccess;
}

int cmd_estimate(ExperimentConfig& c, std::ostream& out) {
    if (c.in_path.empty()) {
        throw ValidationError("estimate needs --in");
    }
    const int n = single_int(c.n, "--n");
    SampleBatch batch;
    batch.n = n;
    batch.samples = read_samples_csv(c.in_path);
    batch.generator = "external";

    Table table;
    table.columns = {"estimator", "n", "shots", "d_hat", "log_likelihood", "shape", "rate"};
    nlohmann::json results;
    if (c.estimator == "gamma" || c.estimator == "jeffreys") {
        GammaPosterior post;
        if (c.estimator == "gamma") {
            if (!c.prior_shape || !c.prior_rate) {
                throw ValidationError("the gamma posterior needs --prior-shape and --prior-rate");
            }
            post = gamma_posterior(batch, *c.prior_shape, *c.prior_rate);
        } else {
            post = jeffreys_posterior(batch);
        }
        const double ll = log_likelihood(post.mean(), batch.samples, n);
        table.add({c.estimator, (long long)n, (long long)batch.size(), post.mean(), ll, post.shape, post.rate});
        results = {{"estimate", post.mean()}, {"shape", post.shape}, {"rate", post.rate}, {"log_likelihood", ll}};
    } else {
        const EstimatorKind kind = parse_estimator(c.estimator);
        const EstimateReport r = kind == EstimatorKind::mle ? mle_estimate(batch, n) : mom_estimate(batch, n);
        table.add({c.estimator, (long long)n, (long long)r.shots, r.estimate, r.log_likelihood, kMissing, kMissing});
        results = {{"estimate", r.estimate},
                   {"log_likelihood", r.log_likelihood},
                   {"iterations", r.iterations},
                   {"bracket", {r.bracket_low, r.bracket_high}},
                   {"diagnostics", r.diagnostics}};
        results["crb"] = r.crb ? nlohmann::json(*r.crb) : nlohmann::json(nullptr);
        results["asymptotic_variance"] =
            r.asymptotic_variance ? nlohmann::json(*r.asymptotic_variance) : nlohmann::json(nullptr);
    }
    results["shots"] = batch.size();
    results["sum_of_squares"] = sum_of_squares(batch.samples);
    out << table.csv();
    write_report(c, c.out_path.empty() ? c.report_path : c.out_path, results);
    return kSuccess;
}

int cmd_mc(ExperimentConfig& c, std::ostream& out) {
    const int n = single_int(c.n, "--n");
    const double d = single_double(c.d, "--d");
    const McReport r = mc_benchmark(n, LengthScale(d), c.shots, c.reps, parse_estimator(c.estimator), c.seed);

    Table table;
    table.columns = {"estimator", "n", "d", "shots", "reps", "mean", "bias", "bias_standard_error", "variance", "crb",
                     "variance_ratio", "predicted_ratio", "failures"};
    table.add({c.estimator, (long long)n, d, (long long)c.shots, (long long)c.reps, r.mean, r.bias,
               r.bias_standard_error, r.variance, r.crb, r.variance_ratio, r.predicted_ratio.value_or(kMissing),
               (long long)r.failures});
    out << table.csv();

    nlohmann::json estimates = nlohmann::json::array();
    for (const double e : r.estimates) {
        estimates.push_back(std::isfinite(e) ? nlohmann::json(e) : nlohmann::json(nullptr));
    }
    nlohmann::json results = table.json().at(0);
    results["seed"] = r.seed;
    results["estimates"] = std::move(estimates);
    write_report(c, c.out_path.empty() ? c.report_path : c.out_path, results);
    return kSuccess;
}

// ---------------------------------------------------------------------------
// channel / multimode

int cmd_channel(ExperimentConfig& c, std::ostream& out) {
    Table table;
    if (c.kind == "damping") {
        table.columns = {"n", "gamma", "d", "qfi", "first_order", "error_estimate", "cutoff"};
        for (const int n : parse_int_range(c.n)) {
            for (const double d : parse_range(c.d)) {
                for (const double g : parse_range(c.gamma)) {
                    QfiReport r = damped_fock_qfi(n, g, LengthScale(d));
                    table.add({(long long)n, g, d, r.value, r.diagnostics.at("first_order"), r.error_estimate,
                               (long long)r.cutoff});
                }
            }
        }
    } else if (c.kind == "thermal") {
        table.columns = {"xi", "d", "mean_excitation", "qfi", "error_estimate", "cutoff"};
        for (const double d : parse_range(c.d)) {
            for (const double xi : parse_range(c.xi)) {
                const QfiReport r = thermal_qfi(xi, LengthScale(d));
                table.add({xi, d, xi / (1.0 - xi), r.value, r.error_estimate, (long long)r.cutoff});
            }
        }
    } else {
        throw ValidationError("channel --type must be damping or thermal, got '" + c.kind + "'");
    }
    emit_table(c, table, out);
    return kSuccess;
}

int cmd_multimode(ExperimentConfig& c, std::ostream& out) {
    Table table;
    const auto ns = parse_int_range(c.n);
    const auto ds = parse_range(c.d);
    const int size = c.cutoff.value_or(0);
    if (c.state == "pair") {
        if (c.kind.empty()) {
            c.kind = "super_minus";
        }
        table.columns = {"kind", "n", "m", "d", "qfi", "product_qfi", "gap"};
        for (const int n : ns) {
            for (const double d : ds) {
                const LengthScale dd(d);
                const double q = multimode_qfi(pair_state(parse_pair_kind(c.kind), n, c.m, dd, size)).value;
                const double prod = qfi_fock(n, dd) + qfi_fock(c.m, dd);
                table.add({c.kind, (long long)n, (long long)c.m, d, q, prod, q - prod});
            }
        }
    } else if (c.state == "sequence") {
        table.columns = {"ell", "n", "d", "qfi", "product_qfi", "gap", "gap_ratio"};
        for (const int n : ns) {
            for (const double d : ds) {
                const LengthScale dd(d);
                const double q = multimode_qfi(sequence_state(c.ell, n, dd, size)).value;
                const double prod = 2.0 * qfi_fock(n, dd);
                table.add({(long long)c.ell, (long long)n, d, q, prod, q - prod, (q - prod) * d * d / (double(n) * n)});
            }
        }
    } else if (c.state == "ghz") {
        table.columns = {"modes", "n", "d", "qfi", "shadow_qfi", "dense_qfi"};
        for (const int modes : parse_int_range(c.modes)) {
            for (const int n : ns) {
                for (const double d : ds) {
                    const LengthScale dd(d);
                    const MultimodeVector s = ghz_state(modes, n, dd, size);
                    const double dense = modes == 2 ? two_mode_qfi_dense(s.dense_two_mode(), dd) : kMissing;
                    const double shadow = modes <= 20 ? ghz_qubit_shadow_qfi(modes, n, dd) : kMissing;
                    table.add({(long long)modes, (long long)n, d, multimode_qfi(s).value, shadow, dense});
                }
            }
        }
    } else if (c.state == "bell") {
        table.columns = {"n",   "d",          "cutoff",           "probability", "derivative",
                         "msn", "msn_over_n2", "fixed_derivative", "fixed_msn"};
        for (const int n : ns) {
            for (const double d : ds) {
                const BellReadout b = bell_readout(n, LengthScale(d), size);
                const double ratio = n > 0 ? b.msn / (double(n) * n) : kMissing;
                table.add({(long long)n, d, (long long)b.cutoff, b.probability, b.derivative, b.msn, ratio,
                           b.fixed_derivative, b.fixed_msn});
            }
        }
    } else if (c.state == "vacuum-projection") {
        table.columns = {"n", "d", "cutoff", "expectation", "derivative", "variance", "msn"};
        for (const double d : ds) {
            const ReadoutScan scan = vacuum_projection_scan(ns, LengthScale(d));
            for (const auto& p : scan.points) {
                table.add({(long long)p.n, p.d, (long long)p.cutoff, p.expectation, p.derivative, p.variance,
                           p.msn.value_or(kMissing)});
            }
        }
    } else {
        throw ValidationError("multimode --state must be pair, sequence, ghz, bell or vacuum-projection");
    }
    emit_table(c, table, out);
    return kSuccess;
}

// ---------------------------------------------------------------------------

void add_common(CLI::App* app, ExperimentConfig& c) {
    app->add_option("--out", c.out_path, "Output file");
    app->add_option("--report", c.report_path, "JSON report file");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"lsq: quantum estimation of the oscillator length scale d"};
    app.name("lsq");
    app.require_subcommand(1);
    ExperimentConfig c;
    std::optional<int> cutoff;
    std::optional<double> tolerance, prior_shape, prior_rate;

    auto* qfi = app.add_subcommand("qfi", "Quantum/classical Fisher information of a probe family");
    qfi->add_option("--state", c.state, "fock|coherent|displaced-squeezed|damped|thermal|pair|sequence|ghz")
        ->required();
    qfi->add_option("--method", c.methods, "analytic|pure-numeric|sld-eigen|fidelity-fd|cfi-quadrature")
        ->delimiter(',');
    qfi->add_option("--n", c.n, "Excitation number (range allowed)");
    qfi->add_option("--m", c.m, "Second excitation number of pair states");
    qfi->add_option("--ell", c.ell, "Sequence-state width");
    qfi->add_option("--modes", c.modes, "Number of modes of GHZ states (range allowed)");
    qfi->add_option("--kind", c.kind, "Pair kind: swap_sym|swap_antisym|super_plus|super_minus");
    qfi->add_option("--d", c.d, "Length scale (range allowed)");
    qfi->add_option("--alpha", c.alpha, "Real part of the displacement (range allowed)");
    qfi->add_option("--alpha-imag", c.alpha_imag, "Imaginary part of the displacement");
    qfi->add_option("--squeeze", c.squeeze, "Squeezing factor D >= 1");
    qfi->add_option("--gamma", c.gamma, "Loss parameter (range allowed)");
    qfi->add_option("--xi", c.xi, "Thermal parameter (range allowed)");
    qfi->add_option("--cutoff", cutoff, "Fock cutoff override");
    qfi->add_option("--tolerance", tolerance, "Relative tolerance for --verify");
    qfi->add_flag("--verify", c.verify, "Exit 3 if a method disagrees with the reference value");
    add_common(qfi, c);

    auto* sample = app.add_subcommand("sample", "Draw position measurements of |psi_n(d)>");
    sample->add_option("--n", c.n, "Excitation number")->required();
    sample->add_option("--d", c.d, "Length scale")->required();
    sample->add_option("--shots", c.shots, "Number of samples")->required();
    sample->add_option("--seed", c.seed, "Random seed")->required();
    add_common(sample, c);

    auto* estimate = app.add_subcommand("estimate", "Estimate d from a sample CSV");
    estimate->add_option("--estimator", c.estimator, "mom|mle|jeffreys|gamma")->required();
    estimate->add_option("--n", c.n, "Excitation number of the probe")->required();
    estimate->add_option("--in", c.in_path, "Sample CSV")->required();
    estimate->add_option("--prior-shape", prior_shape, "Gamma prior shape");
    estimate->add_option("--prior-rate", prior_rate, "Gamma prior rate");
    add_common(estimate, c);

    auto* mc = app.add_subcommand("mc", "Monte Carlo benchmark of an estimator");
    mc->add_option("--n", c.n, "Excitation number")->required();
    mc->add_option("--d", c.d, "True length scale")->required();
    mc->add_option("--shots", c.shots, "Samples per replicate")->required();
    mc->add_option("--reps", c.reps, "Replicates")->required();
    mc->add_option("--estimator", c.estimator, "mom|mle|jeffreys")->required();
    mc->add_option("--seed", c.seed, "Base seed; replicate r uses seed + r")->required();
    add_common(mc, c);

    auto* channel = app.add_subcommand("channel", "QFI of probes after loss or thermalization");
    channel->add_option("--type", c.kind, "damping|thermal")->required();
    channel->add_option("--n", c.n, "Excitation number (range allowed)");
    channel->add_option("--gamma", c.gamma, "Loss parameter (range allowed)");
    channel->add_option("--xi", c.xi, "Thermal parameter (range allowed)");
    channel->add_option("--d", c.d, "Length scale (range allowed)");
    add_common(channel, c);

    auto* multimode = app.add_subcommand("multimode", "Entangled probes and two-copy readouts");
    multimode->add_option("--state", c.state, "pair|sequence|ghz|bell|vacuum-projection")->required();
    multimode->add_option("--kind", c.kind, "Pair kind");
    multimode->add_option("--n", c.n, "Excitation number (range allowed)");
    multimode->add_option("--m", c.m, "Second excitation number of pair states");
    multimode->add_option("--ell", c.ell, "Sequence-state width");
    multimode->add_option("--modes", c.modes, "Number of modes (range allowed)");
    multimode->add_option("--d", c.d, "Length scale (range allowed)");
    multimode->add_option("--cutoff", cutoff, "Fock cutoff override");
    add_common(multimode, c);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            for (auto* sub : app.get_subcommands()) {
                out << sub->help();
            }
            return kSuccess;
        }
        err << "error: " << e.what() << "\n";
        return kValidation;
    }

    c.subcommand = app.get_subcommands().front()->get_name();
    c.cutoff = cutoff;
    c.tolerance = tolerance;
    c.prior_shape = prior_shape;
    c.prior_rate = prior_rate;

    try {
        if (c.cutoff && *c.cutoff < 1) {
            throw ValidationError("--cutoff must be positive");
        }
        if (c.subcommand == "qfi") {
            return cmd_qfi(c, out, err);
        }
        if (c.subcommand == "sample") {
            return cmd_sample(c, out);
        }
        if (c.subcommand == "estimate") {
            return cmd_estimate(c, out);
        }
        if (c.subcommand == "mc") {
            return cmd_mc(c, out);
        }
        if (c.subcommand == "channel") {
            return cmd_channel(c, out);
        }
        return cmd_multimode(c, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIoFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
}

}  // namespace lsq::cli
