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

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jointbell/joint_sim.hpp"
#include "jointbell/random.hpp"

namespace jointbell {

/// Coincidence counts of the 16 outcomes over one acquisition window.
struct CountTable {
    std::array<std::uint64_t, Outcome::count> counts{};
    std::optional<double> duration_s;

    std::uint64_t operator[](const Outcome &m) const { return counts[m.index()]; }
    std::uint64_t &operator[](const Outcome &m) { return counts[m.index()]; }

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (auto c : counts) t += c;
        return t;
    }

    friend bool operator==(const CountTable &, const CountTable &) = default;
};

/// Independent Poisson count per outcome with mean p(m) * mean_total.
inline CountTable sample_counts(const OutcomeTable &probs, double mean_total, std::uint64_t seed) {
    if (!(mean_total > 0.0) || !std::isfinite(mean_total)) {
        throw std::domain_error("sample_counts: mean total must be positive");
    }
    Rng rng(seed);
    CountTable table;
    for (std::size_t i = 0; i < Outcome::count; ++i) {
        table.counts[i] = rng.poisson(std::max(0.0, probs[i]) * mean_total);
    }
    return table;
}

inline CountTable sample_counts(const JointDistribution &dist, double mean_total, std::uint64_t seed) {
    return sample_counts(dist.probabilities(), mean_total, seed);
}

/// Relative frequencies with standard errors sqrt(p (1 - p) / total).
struct CountEstimate {
    JointDistribution distribution;
    OutcomeTable std_err;
    std::uint64_t total;
};

inline CountEstimate probabilities_from_counts(const CountTable &table,
                                               double theta_a_deg = std::numeric_limits<double>::quiet_NaN(),
                                               double theta_b_deg = std::numeric_limits<double>::quiet_NaN()) {
    const std::uint64_t total = table.total();
    if (total == 0) throw std::invalid_argument("probabilities_from_counts: all counts are zero");
    const double n = static_cast<double>(total);
    OutcomeTable p{}, se{};
    for (std::size_t i = 0; i < Outcome::count; ++i) {
        const double c = static_cast<double>(table.counts[i]);
        p[i] = c / n;
        se[i] = std::sqrt(p[i] * (1.0 - p[i]) / n);
    }
    return {JointDistribution(p, theta_a_deg, theta_b_deg), se, total};
}

/// Standard errors of the b aggregates for Poisson counts (delta method):
/// se(P(b=+2)) = se(P(b=-2)) = sqrt(P+ P- / N), se(<b>) = 4 se(P+).
struct BAggregateErrors {
    double p_plus;
    double p_minus;
    double mean_b;
};

inline BAggregateErrors aggregate_b_errors(const BAggregate &agg, std::uint64_t total) {
    const double se = std::sqrt(agg.p_plus * agg.p_minus / static_cast<double>(total));
    return {se, se, 4.0 * se};
}

/// Shortest round-trip decimal text of a double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline const char *signed_one(Sign s) { return s == Sign::Plus ? "+1" : "-1"; }

inline constexpr std::string_view kCountTableHeader = "x_a,y_a,x_b,y_b,counts";

/// Writes the count table: header, 16 rows in canonical outcome order,
/// then `# duration_s=<float>` when a duration is known.
inline void write_count_table(std::ostream &out, const CountTable &table) {
    out << kCountTableHeader << '\n';
    for (const auto &m : all_outcomes()) {
        out << signed_one(m.xa) << ',' << signed_one(m.ya) << ',' << signed_one(m.xb) << ',' << signed_one(m.yb) << ','
            << table[m] << '\n';
    }
    if (table.duration_s) out << "# duration_s=" << format_double(*table.duration_s) << '\n';
}

class ParseError : public std::runtime_error {
   public:
    ParseError(std::size_t line, const std::string &what)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

   private:
    std::size_t line_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_commas(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(',', start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline Sign parse_sign(std::string_view field, std::size_t line, const char *column) {
    if (field == "+1" || field == "1") return Sign::Plus;
    if (field == "-1") return Sign::Minus;
    throw ParseError(line, std::string("column ") + column + ": expected +1 or -1, got '" + std::string(field) + "'");
}

inline std::uint64_t parse_count(std::string_view field, std::size_t line) {
    std::uint64_t v = 0;
    const auto *end = field.data() + field.size();
    auto res = std::from_chars(field.data(), end, v);
    if (field.empty() || res.ec != std::errc() || res.ptr != end) {
        throw ParseError(line, "counts: expected a non-negative integer, got '" + std::string(field) + "'");
    }
    return v;
}

inline double parse_double(std::string_view field, std::size_t line, const std::string &what) {
    double v = 0.0;
    if (field.size() > 1 && field.front() == '+') field.remove_prefix(1);
    const auto *end = field.data() + field.size();
    auto res = std::from_chars(field.data(), end, v);
    if (field.empty() || res.ec != std::errc() || res.ptr != end) {
        throw ParseError(line, what + ": expected a number, got '" + std::string(field) + "'");
    }
    return v;
}

}  // namespace detail

/// Parses the count-table format. Every one of the 16 outcomes must appear
/// exactly once; errors name the offending line or the missing outcome.
inline CountTable read_count_table(std::istream &in) {
    CountTable table;
    std::array<std::size_t, Outcome::count> seen_on{};
    std::string raw;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = detail::trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            auto meta = detail::trim(line.substr(1));
            constexpr std::string_view key = "duration_s=";
            if (meta.starts_with(key)) {
                const double d = detail::parse_double(detail::trim(meta.substr(key.size())), line_no, "duration_s");
                if (!(d >= 0.0)) throw ParseError(line_no, "duration_s must be non-negative");
                table.duration_s = d;
            }
            continue;
        }
        if (!header_seen) {
            if (line != kCountTableHeader) {
                throw ParseError(line_no, "expected header '" + std::string(kCountTableHeader) + "'");
            }
            header_seen = true;
            continue;
        }
        const auto fields = detail::split_commas(line);
        if (fields.size() != 5) {
            throw ParseError(line_no, "expected 5 comma-separated fields, got " + std::to_string(fields.size()));
        }
        const Outcome m{detail::parse_sign(fields[0], line_no, "x_a"), detail::parse_sign(fields[1], line_no, "y_a"),
                        detail::parse_sign(fields[2], line_no, "x_b"), detail::parse_sign(fields[3], line_no, "y_b")};
        if (seen_on[m.index()] != 0) {
            throw ParseError(line_no, "duplicate outcome " + m.label() + " (first seen on line " +
                                          std::to_string(seen_on[m.index()]) + ")");
        }
        seen_on[m.index()] = line_no;
        table[m] = detail::parse_count(fields[4], line_no);
    }
    if (!header_seen) throw ParseError(0, "count table is empty (missing header)");
    std::string missing;
    for (const auto &m : all_outcomes()) {
        if (seen_on[m.index()] == 0) missing += (missing.empty() ? "" : " ") + m.label();
    }
    if (!missing.empty()) throw ParseError(0, "missing outcome(s): " + missing);
    return table;
}

inline std::string count_table_to_string(const CountTable &table) {
    std::ostringstream os;
    write_count_table(os, table);
    return os.str();
}

inline CountTable count_table_from_string(const std::string &text) {
    std::istringstream is(text);
    return read_count_table(is);
}

}  // namespace jointbell
