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

#include <charconv>
#include <cmath>
#include <string>

#include <Eigen/Core>

#include "lsq/cli.hpp"
#include "lsq/errors.hpp"
#include "lsq/random.hpp"

namespace lsq::cli {

namespace {

double parse_number(std::string_view text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw ValidationError("not a finite number: '" + std::string(text) + "'");
    }
    return v;
}

template <typename T>
void get_optional(const nlohmann::json& j, const char* key, std::optional<T>& out) {
    if (j.contains(key) && !j.at(key).is_null()) {
        out = j.at(key).get<T>();
    } else {
        out.reset();
    }
}

template <typename T>
void put_optional(nlohmann::json& j, const char* key, const std::optional<T>& value) {
    if (value) {
        j[key] = *value;
    } else {
        j[key] = nullptr;
    }
}

}  // namespace

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
    j = nlohmann::json{
        {"subcommand", c.subcommand}, {"state", c.state},
        {"kind", c.kind},             {"methods", c.methods},
        {"n", c.n},                   {"m", c.m},
        {"ell", c.ell},               {"modes", c.modes},
        {"d", c.d},                   {"alpha", c.alpha},
        {"alpha_imag", c.alpha_imag}, {"squeeze", c.squeeze},
        {"gamma", c.gamma},           {"xi", c.xi},
        {"shots", c.shots},           {"reps", c.reps},
        {"seed", c.seed},             {"estimator", c.estimator},
        {"in", c.in_path},            {"out", c.out_path},
        {"report", c.report_path},    {"verify", c.verify},
    };
    put_optional(j, "prior_shape", c.prior_shape);
    put_optional(j, "prior_rate", c.prior_rate);
    put_optional(j, "cutoff", c.cutoff);
    put_optional(j, "tolerance", c.tolerance);
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
    j.at("subcommand").get_to(c.subcommand);
    j.at("state").get_to(c.state);
    j.at("kind").get_to(c.kind);
    j.at("methods").get_to(c.methods);
    j.at("n").get_to(c.n);
    j.at("m").get_to(c.m);
    j.at("ell").get_to(c.ell);
    j.at("modes").get_to(c.modes);
    j.at("d").get_to(c.d);
    j.at("alpha").get_to(c.alpha);
    j.at("alpha_imag").get_to(c.alpha_imag);
    j.at("squeeze").get_to(c.squeeze);
    j.at("gamma").get_to(c.gamma);
    j.at("xi").get_to(c.xi);
    j.at("shots").get_to(c.shots);
    j.at("reps").get_to(c.reps);
    j.at("seed").get_to(c.seed);
    j.at("estimator").get_to(c.estimator);
    j.at("in").get_to(c.in_path);
    j.at("out").get_to(c.out_path);
    j.at("report").get_to(c.report_path);
    j.at("verify").get_to(c.verify);
    get_optional(j, "prior_shape", c.prior_shape);
    get_optional(j, "prior_rate", c.prior_rate);
    get_optional(j, "cutoff", c.cutoff);
    get_optional(j, "tolerance", c.tolerance);
}

std::vector<double> parse_range(std::string_view text) {
    if (text.empty()) {
        throw ValidationError("empty range");
    }
    std::vector<double> values;
    if (text.find(':') != std::string_view::npos) {
        const auto p1 = text.find(':');
        const auto p2 = text.find(':', p1 + 1);
        if (p2 == std::string_view::npos || text.find(':', p2 + 1) != std::string_view::npos) {
            throw ValidationError("range must look like start:stop:step, got '" + std::string(text) + "'");
        }
        const double start = parse_number(text.substr(0, p1));
        const double stop = parse_number(text.substr(p1 + 1, p2 - p1 - 1));
        const double step = parse_number(text.substr(p2 + 1));
        if (!(step > 0.0) || stop < start) {
            throw ValidationError("range needs step > 0 and stop >= start, got '" + std::string(text) + "'");
        }
        const double count = std::floor((stop - start) / step + 0.5);
        if (count > 1e6) {
            throw ValidationError("range has too many points");
        }
        for (int i = 0; i <= static_cast<int>(count); ++i) {
            values.push_back(start + i * step);
        }
        return values;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto end = comma == std::string_view::npos ? text.size() : comma;
        values.push_back(parse_number(text.substr(pos, end - pos)));
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    return values;
}

std::vector<int> parse_int_range(std::string_view text) {
    std::vector<int> out;
    for (const double v : parse_range(text)) {
        const double r = std::round(v);
        if (std::abs(v - r) > 1e-9 || std::abs(r) > 1e9) {
            throw ValidationError("expected integers in '" + std::string(text) + "'");
        }
        out.push_back(static_cast<int>(r));
    }
    return out;
}

nlohmann::json make_report(const ExperimentConfig& config, nlohmann::json results) {
    const std::string eigen = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION);
    return nlohmann::json{
        {"schema", kReportSchema},
        {"config", config},
        {"versions", {{"lsq", kVersion}, {"rng", kRngName}, {"eigen", eigen}}},
        {"results", std::move(results)},
    };
}

}  // namespace lsq::cli
