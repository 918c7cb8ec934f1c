// Copyright 2026 The jointbell Authors
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

#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "jointbell/counts.hpp"

namespace jointbell {

/// Settings shared by the command-line drivers. Angles are in degrees.
struct RunConfig {
    std::string state = "singlet";
    double theta_a = 45.0;
    double theta_b = 45.0;
    std::optional<double> mean_total;
    std::uint64_t seed = 0;
    std::vector<double> thetas;  // sweep grid
    std::string out;             // empty means stdout
    std::string format;          // empty means the command's default

    friend bool operator==(const RunConfig &, const RunConfig &) = default;
};

inline std::vector<double> parse_theta_list(std::string_view text, std::size_t line = 0) {
    std::vector<double> out;
    for (auto field : detail::split_commas(text)) {
        if (field.empty()) continue;
        out.push_back(detail::parse_double(field, line, "theta"));
    }
    return out;
}

/// Plain `key = value` lines; `#` comments and blank lines are skipped.
inline RunConfig parse_run_config(const std::string &text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
        const auto key = detail::trim(line.substr(0, eq));
        const auto val = detail::trim(line.substr(eq + 1));
        if (key == "state") {
            cfg.state = std::string(val);
        } else if (key == "theta_a") {
            cfg.theta_a = detail::parse_double(val, line_no, "theta_a");
        } else if (key == "theta_b") {
            cfg.theta_b = detail::parse_double(val, line_no, "theta_b");
        } else if (key == "mean_total") {
            cfg.mean_total = detail::parse_double(val, line_no, "mean_total");
        } else if (key == "seed") {
            cfg.seed = detail::parse_count(val, line_no);
        } else if (key == "thetas") {
            cfg.thetas = parse_theta_list(val, line_no);
        } else if (key == "out") {
            cfg.out = std::string(val);
        } else if (key == "format") {
            cfg.format = std::string(val);
        } else {
            throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
        }
    }
    return cfg;
}

inline std::string to_text(const RunConfig &cfg) {
    std::ostringstream os;
    os << "state = " << cfg.state << '\n';
    os << "theta_a = " << format_double(cfg.theta_a) << '\n';
    os << "theta_b = " << format_double(cfg.theta_b) << '\n';
    if (cfg.mean_total) os << "mean_total = " << format_double(*cfg.mean_total) << '\n';
    os << "seed = " << cfg.seed << '\n';
    if (!cfg.thetas.empty()) {
        os << "thetas = ";
        for (std::size_t i = 0; i < cfg.thetas.size(); ++i) os << (i ? "," : "") << format_double(cfg.thetas[i]);
        os << '\n';
    }
    if (!cfg.out.empty()) os << "out = " << cfg.out << '\n';
    if (!cfg.format.empty()) os << "format = " << cfg.format << '\n';
    return os.str();
}

}  // namespace jointbell
