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

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "jointbell/analysis.hpp"
#include "jointbell/counts.hpp"
#include "jointbell/fit.hpp"

namespace jointbell {

/// One (theta, outcome) line of a trade-off sweep. Both sides use the same theta.
struct SweepRow {
    double theta_a;
    double theta_b;
    Outcome outcome;
    double probability;
    std::optional<double> std_err;       // present when sampled
    double p_bflip;
    std::optional<std::uint64_t> counts;  // present when sampled
};

struct SweepOptions {
    std::optional<double> mean_total;  // sample Poisson counts when set
    std::uint64_t seed = 0;
};

/// Seed of sweep point `index`; points are independent of evaluation order.
inline std::uint64_t derived_seed(std::uint64_t seed, std::size_t index) { return seed ^ static_cast<std::uint64_t>(index); }

/// Rows ordered by theta (as given) then canonical outcome.
inline std::vector<SweepRow> run_sweep(const TwoQubitState &state, std::span<const double> thetas,
                                       const SweepOptions &options = {}) {
    if (thetas.empty()) throw std::invalid_argument("sweep: theta list is empty");
    std::vector<SweepRow> rows;
    rows.reserve(thetas.size() * Outcome::count);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const double theta = thetas[i];
        const auto exact = joint_distribution(state, theta, theta);
        std::optional<CountTable> table;
        std::optional<CountEstimate> estimate;
        if (options.mean_total) {
            table = sample_counts(exact, *options.mean_total, derived_seed(options.seed, i));
            if (table->total() == 0) {
                throw std::runtime_error("sweep: sampled zero total counts at theta " + format_double(theta));
            }
            estimate = probabilities_from_counts(*table, theta, theta);
        }
        const auto vis = VisibilityPair::from_theta(theta);
        for (const auto &m : all_outcomes()) {
            SweepRow row{theta, theta, m, exact[m], std::nullopt, pbflip_outcome(m, vis, vis), std::nullopt};
            if (estimate) {
                row.counts = (*table)[m];
                row.probability = estimate->distribution[m];
                row.std_err = estimate->std_err[m.index()];
            }
            rows.push_back(row);
        }
    }
    return rows;
}

/// A fit point that remembers where it came from.
struct LabeledFitPoint {
    double theta;
    Outcome outcome;
    FitPoint point;
};

/// Rows of the four minimal b = +2 outcomes, in sweep order.
inline std::vector<LabeledFitPoint> fit_points_from_sweep(std::span<const SweepRow> rows) {
    const auto minimal = minimal_outcomes();
    std::vector<LabeledFitPoint> out;
    for (const auto &r : rows) {
        if (std::find(minimal.begin(), minimal.end(), r.outcome) == minimal.end()) continue;
        out.push_back({r.theta_a, r.outcome, {r.p_bflip, r.probability, r.std_err}});
    }
    return out;
}

inline std::vector<FitPoint> strip_labels(std::span<const LabeledFitPoint> labeled) {
    std::vector<FitPoint> pts;
    pts.reserve(labeled.size());
    for (const auto &l : labeled) pts.push_back(l.point);
    return pts;
}

inline constexpr std::string_view kSweepHeader = "theta_a,theta_b,x_a,y_a,x_b,y_b,b,probability,std_err,p_bflip,counts";

inline void write_sweep(std::ostream &out, std::span<const SweepRow> rows) {
    out << kSweepHeader << '\n';
    for (const auto &r : rows) {
        out << format_double(r.theta_a) << ',' << format_double(r.theta_b) << ',' << signed_one(r.outcome.xa) << ','
            << signed_one(r.outcome.ya) << ',' << signed_one(r.outcome.xb) << ',' << signed_one(r.outcome.yb) << ','
            << (b_value(r.outcome) > 0 ? "+2" : "-2") << ',' << format_double(r.probability) << ','
            << (r.std_err ? format_double(*r.std_err) : "") << ',' << format_double(r.p_bflip) << ','
            << (r.counts ? std::to_string(*r.counts) : "") << '\n';
    }
}

inline std::vector<SweepRow> read_sweep(std::istream &in) {
    std::vector<SweepRow> rows;
    std::string raw;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != kSweepHeader) throw ParseError(line_no, "expected header '" + std::string(kSweepHeader) + "'");
            header_seen = true;
            continue;
        }
        const auto f = detail::split_commas(line);
        if (f.size() != 11) throw ParseError(line_no, "expected 11 fields, got " + std::to_string(f.size()));
        SweepRow r{detail::parse_double(f[0], line_no, "theta_a"),
                   detail::parse_double(f[1], line_no, "theta_b"),
                   {detail::parse_sign(f[2], line_no, "x_a"), detail::parse_sign(f[3], line_no, "y_a"),
                    detail::parse_sign(f[4], line_no, "x_b"), detail::parse_sign(f[5], line_no, "y_b")},
                   detail::parse_double(f[7], line_no, "probability"),
                   std::nullopt,
                   detail::parse_double(f[9], line_no, "p_bflip"),
                   std::nullopt};
        const int b = static_cast<int>(detail::parse_double(f[6], line_no, "b"));
        if (b != b_value(r.outcome)) throw ParseError(line_no, "b column disagrees with outcome " + r.outcome.label());
        if (!f[8].empty()) r.std_err = detail::parse_double(f[8], line_no, "std_err");
        if (!f[10].empty()) r.counts = detail::parse_count(f[10], line_no);
        rows.push_back(r);
    }
    if (!header_seen) throw ParseError(0, "sweep file is empty (missing header)");
    return rows;
}

}  // namespace jointbell
