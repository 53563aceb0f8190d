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

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "lsq/cli.hpp"
#include "lsq/errors.hpp"

namespace lsq::cli {

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        }
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        f.flush();
        if (!f) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw IoError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw IoError("cannot move output into '" + path.string() + "': " + ec.message());
    }
}

std::string format_samples_csv(const std::vector<double>& samples) {
    std::string out = "index,q\n";
    char buf[64];
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const int len = std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, samples[i]);
        out.append(buf, static_cast<std::size_t>(len));
    }
    return out;
}

std::vector<double> parse_samples_csv(std::string_view text) {
    std::vector<double> samples;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool header = true;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        if (header) {
            if (line != "index,q") {
                throw IoError("sample CSV must start with the header 'index,q'");
            }
            header = false;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
            throw IoError("line " + std::to_string(line_no) + ": expected two columns");
        }
        std::size_t index = 0;
        const auto idx = line.substr(0, comma);
        const auto [p1, e1] = std::from_chars(idx.data(), idx.data() + idx.size(), index);
        if (e1 != std::errc() || p1 != idx.data() + idx.size() || index != samples.size()) {
            throw IoError("line " + std::to_string(line_no) + ": index must be " + std::to_string(samples.size()));
        }
        double q = 0.0;
        const auto val = line.substr(comma + 1);
        const auto [p2, e2] = std::from_chars(val.data(), val.data() + val.size(), q);
        if (e2 != std::errc() || p2 != val.data() + val.size() || !std::isfinite(q)) {
            throw IoError("line " + std::to_string(line_no) + ": q is not a finite number");
        }
        samples.push_back(q);
    }
    if (header) {
        throw IoError("sample CSV is empty");
    }
    if (samples.empty()) {
        throw IoError("sample CSV has no rows");
    }
    return samples;
}

std::vector<double> read_samples_csv(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_samples_csv(buf.str());
}

}  // namespace lsq::cli
