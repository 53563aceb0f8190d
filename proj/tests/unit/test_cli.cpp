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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "lsq/cli.hpp"
#include "lsq/errors.hpp"

namespace {

namespace fs = std::filesystem;
using lsq::cli::run_cli;

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

class TempDir : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("lsq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    fs::path dir_;
};

// Second line, column `col` of a CSV table.
std::string cell(const std::string& csv, int row, int col) {
    std::istringstream in(csv);
    std::string line;
    for (int i = 0; i <= row; ++i) {
        std::getline(in, line);
    }
    std::istringstream fields(line);
    std::string field;
    for (int i = 0; i <= col; ++i) {
        std::getline(fields, field, ',');
    }
    return field;
}

int column(const std::string& csv, const std::string& name) {
    std::istringstream in(csv.substr(0, csv.find('\n')));
    std::string field;
    for (int i = 0; std::getline(in, field, ','); ++i) {
        if (field == name) {
            return i;
        }
    }
    return -1;
}

TEST(Range, Forms) {
    EXPECT_EQ(lsq::cli::parse_range("2.5"), std::vector<double>{2.5});
    EXPECT_EQ(lsq::cli::parse_range("1,2,4"), (std::vector<double>{1, 2, 4}));
    const auto r = lsq::cli::parse_range("0:0.3:0.05");
    ASSERT_EQ(r.size(), 7u);
    EXPECT_NEAR(r.back(), 0.3, 1e-15);
    EXPECT_EQ(lsq::cli::parse_int_range("0:20:1").size(), 21u);
    EXPECT_THROW(lsq::cli::parse_range("1:0:0.1"), lsq::ValidationError);
    EXPECT_THROW(lsq::cli::parse_range("0:1:0"), lsq::ValidationError);
    EXPECT_THROW(lsq::cli::parse_range("abc"), lsq::ValidationError);
    EXPECT_THROW(lsq::cli::parse_int_range("1.5"), lsq::ValidationError);
}

TEST(Config, JsonRoundTrip) {
    lsq::cli::ExperimentConfig c;
    c.subcommand = "qfi";
    c.state = "thermal";
    c.methods = {"sld-eigen", "fidelity-fd"};
    c.xi = "0:0.9:0.1";
    c.seed = 123456789012345ull;
    c.prior_shape = 2.0;
    c.cutoff = 64;
    c.verify = true;
    nlohmann::json j = c;
    const auto back = j.get<lsq::cli::ExperimentConfig>();
    EXPECT_EQ(nlohmann::json(back), j);
    EXPECT_EQ(back.seed, c.seed);
    EXPECT_EQ(back.methods, c.methods);
    EXPECT_EQ(back.cutoff, std::optional<int>(64));
    EXPECT_FALSE(back.prior_rate.has_value());
}

TEST(Csv, RoundTripIsExact) {
    const std::vector<double> q = {0.1, -1.0 / 3.0, 1e-300, 12345.678901234567};
    EXPECT_EQ(lsq::cli::parse_samples_csv(lsq::cli::format_samples_csv(q)), q);
}

TEST(Csv, SchemaErrors) {
    EXPECT_THROW(lsq::cli::parse_samples_csv("i,x\n0,1\n"), lsq::IoError);
    EXPECT_THROW(lsq::cli::parse_samples_csv("index,q\n0,abc\n"), lsq::IoError);
    EXPECT_THROW(lsq::cli::parse_samples_csv("index,q\n0\n"), lsq::IoError);
    EXPECT_THROW(lsq::cli::read_samples_csv("/nonexistent/lsq/samples.csv"), lsq::IoError);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"qfi", "--state", "banana"}).code, 2);
    EXPECT_EQ(run({"qfi", "--state", "fock", "--d", "-1"}).code, 2);
    EXPECT_EQ(run({"estimate", "--estimator", "mle", "--n", "1", "--in", "/nonexistent/x.csv"}).code, 4);
    EXPECT_EQ(run({"qfi", "--state", "coherent", "--alpha", "1", "--method", "analytic,fidelity-fd", "--verify",
                   "--tolerance", "1e-20"})
                  .code,
              3);
    EXPECT_EQ(run({"qfi", "--state", "coherent", "--alpha", "1", "--method", "analytic,pure-numeric", "--verify"}).code,
              0);
}

TEST(Cli, DocumentedValues) {
    const auto fock = run({"qfi", "--state", "fock", "--n", "3", "--d", "1", "--method", "analytic"});
    ASSERT_EQ(fock.code, 0) << fock.err;
    EXPECT_EQ(cell(fock.out, 1, column(fock.out, "qfi")), "6.5");
    const auto coh = run({"qfi", "--state", "coherent", "--alpha", "0", "--d", "2"});
    ASSERT_EQ(coh.code, 0) << coh.err;
    EXPECT_EQ(cell(coh.out, 1, column(coh.out, "qfi")), "0.125");
}

TEST(Cli, ScanProducesOneRowPerPoint) {
    const auto r = run({"channel", "--type", "damping", "--n", "4", "--gamma", "0:0.3:0.05", "--d", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    const int col = column(r.out, "qfi");
    double previous = 1e300;
    int rows = 0;
    while (std::getline(in, line)) {
        const double v = std::stod(cell(r.out, rows + 1, col));
        EXPECT_LE(v, previous);
        previous = v;
        ++rows;
    }
    EXPECT_EQ(rows, 7);
}

TEST_F(TempDir, SampleThenEstimate) {
    const std::string csv = path("q.csv");
    ASSERT_EQ(run({"sample", "--n", "1", "--d", "1", "--shots", "100", "--seed", "5", "--out", csv}).code, 0);
    const auto q = lsq::cli::read_samples_csv(csv);
    ASSERT_EQ(q.size(), 100u);
    double s = 0.0;
    for (double x : q) {
        s += x * x;
    }
    const std::string report = path("r.json");
    const auto r = run({"estimate", "--estimator", "mle", "--n", "1", "--in", csv, "--report", report});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(report));
    EXPECT_EQ(j.at("schema"), "lsq-report/1");
    EXPECT_EQ(j.at("config").at("subcommand"), "estimate");
    EXPECT_EQ(j.at("results").at("estimate").get<double>(), 3.0 * 100 / (2 * s));
}

TEST_F(TempDir, RepeatedRunsAreByteIdentical) {
    // The report embeds the output path, so both runs write the same file.
    std::string mc[2];
    std::string samples[2];
    for (int i = 0; i < 2; ++i) {
        ASSERT_EQ(run({"mc", "--n", "2", "--d", "1.5", "--shots", "50", "--reps", "4", "--estimator", "mle", "--seed",
                       "9", "--out", path("mc.json")})
                      .code,
                  0);
        ASSERT_EQ(run({"sample", "--n", "2", "--d", "1.5", "--shots", "64", "--seed", "9", "--out", path("s.csv")})
                      .code,
                  0);
        mc[i] = slurp(path("mc.json"));
        samples[i] = slurp(path("s.csv"));
        fs::remove(path("mc.json"));
        fs::remove(path("s.csv"));
    }
    EXPECT_FALSE(mc[0].empty());
    EXPECT_EQ(mc[0], mc[1]);
    EXPECT_EQ(samples[0], samples[1]);
}

TEST_F(TempDir, OutAndReportFiles) {
    const auto r = run({"multimode", "--state", "vacuum-projection", "--n", "0:5:1", "--d", "2", "--out",
                        path("v.csv"), "--report", path("v.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(path("v.csv")), r.out);
    const auto j = nlohmann::json::parse(slurp(path("v.json")));
    EXPECT_TRUE(j.at("versions").contains("eigen"));
    EXPECT_EQ(j.at("results").at("table").size(), 6u);
}

}  // namespace
