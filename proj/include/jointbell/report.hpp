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

#include <cmath>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "jointbell/analysis.hpp"
#include "jointbell/counts.hpp"
#include "jointbell/fit.hpp"
#include "jointbell/sweep.hpp"

namespace jointbell {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json outcome_json(const Outcome &m) {
    return Json{{"x_a", value(m.xa)}, {"y_a", value(m.ya)}, {"x_b", value(m.xb)}, {"y_b", value(m.yb)},
                {"label", m.label()}, {"b", b_value(m)}};
}

inline Json visibility_json(const VisibilityPair &v) {
    return Json{{"vx", v.vx()}, {"vy", v.vy()}, {"radius", v.radius()}};
}

}  // namespace detail

/// Exact distribution report for `simulate`.
inline Json simulate_report(const std::string &state_spec, const TwoQubitState &state, const JointDistribution &dist) {
    const auto vis_a = VisibilityPair::from_theta(dist.theta_a());
    const auto vis_b = VisibilityPair::from_theta(dist.theta_b());
    Json outcomes = Json::array();
    for (const auto &m : all_outcomes()) {
        Json row = detail::outcome_json(m);
        row["probability"] = dist[m];
        row["p_bflip"] = pbflip_outcome(m, vis_a, vis_b);
        outcomes.push_back(row);
    }
    const auto agg = aggregate_b(dist);
    const double bell = bell_expectation(state);
    Json report{{"command", "simulate"},
                {"state", state_spec},
                {"theta_a", dist.theta_a()},
                {"theta_b", dist.theta_b()},
                {"visibilities", {{"a", detail::visibility_json(vis_a)}, {"b", detail::visibility_json(vis_b)}}},
                {"outcomes", outcomes},
                {"aggregate", {{"p_plus", agg.p_plus}, {"p_minus", agg.p_minus}, {"mean_b", agg.mean_b}}},
                {"bell_expectation", bell}};
    report["pbflip_uniform"] = std::abs(bell) > 1e-12 ? Json(pbflip_uniform(agg.mean_b, bell)) : Json(nullptr);
    return report;
}

/// Count-derived report for `analyze`. Every estimate carries its std error.
inline Json analyze_report(const std::string &source, const CountTable &table, double theta_a, double theta_b) {
    const auto est = probabilities_from_counts(table, theta_a, theta_b);
    const auto vis_a = VisibilityPair::from_theta(theta_a);
    const auto vis_b = VisibilityPair::from_theta(theta_b);
    Json outcomes = Json::array();
    for (const auto &m : all_outcomes()) {
        Json row = detail::outcome_json(m);
        row["counts"] = table[m];
        row["probability"] = est.distribution[m];
        row["std_err"] = est.std_err[m.index()];
        row["p_bflip"] = pbflip_outcome(m, vis_a, vis_b);
        outcomes.push_back(row);
    }
    const auto agg = aggregate_b(est.distribution);
    const auto err = aggregate_b_errors(agg, est.total);
    // Assumes the maximal violation <B> = -2 sqrt 2 when converting <b> to a flip probability.
    const double pb = pbflip_uniform(agg.mean_b, -kCirelsonBound);
    Json report{{"command", "analyze"},
                {"source", source},
                {"theta_a", theta_a},
                {"theta_b", theta_b},
                {"total", est.total},
                {"duration_s", table.duration_s ? Json(*table.duration_s) : Json(nullptr)},
                {"visibilities", {{"a", detail::visibility_json(vis_a)}, {"b", detail::visibility_json(vis_b)}}},
                {"outcomes", outcomes},
                {"aggregate",
                 {{"p_plus", agg.p_plus},
                  {"p_plus_std_err", err.p_plus},
                  {"p_minus", agg.p_minus},
                  {"p_minus_std_err", err.p_minus},
                  {"mean_b", agg.mean_b},
                  {"mean_b_std_err", err.mean_b}}},
                {"pbflip_uniform", pb},
                {"pbflip_uniform_std_err", 0.5 * err.mean_b / kCirelsonBound}};
    return report;
}

inline Json fit_result_json(const FitResult &r) {
    using detail::number_or_null;
    return Json{{"slope", r.slope},
                {"slope_std_err", number_or_null(r.slope_std_err)},
                {"intercept", r.intercept},
                {"intercept_std_err", number_or_null(r.intercept_std_err)},
                {"bell_magnitude", r.bell_magnitude()},
                {"bell_magnitude_std_err", number_or_null(r.bell_magnitude_std_err())},
                {"p_int_low", r.p_int_low()},
                {"p_int_low_std_err", number_or_null(r.p_int_low_std_err())},
                {"cirelson_ratio", r.cirelson_ratio()},
                {"cirelson_ratio_std_err", number_or_null(r.cirelson_ratio_std_err())},
                {"chi_squared", r.chi_squared},
                {"points", r.points},
                {"weighted", r.weighted}};
}

inline Json fit_points_json(std::span<const LabeledFitPoint> points) {
    Json arr = Json::array();
    for (const auto &p : points) {
        Json j{{"theta", p.theta}, {"outcome", p.outcome.label()}, {"p_bflip", p.point.p_bflip}, {"p_obs", p.point.p_obs}};
        j["std_err"] = p.point.std_err ? Json(*p.point.std_err) : Json(nullptr);
        arr.push_back(j);
    }
    return arr;
}

inline Json fit_document(std::span<const LabeledFitPoint> points, const FitResult &r) {
    return Json{{"command", "fit"}, {"points", fit_points_json(points)}, {"result", fit_result_json(r)}};
}

inline Outcome parse_outcome_label(const std::string &label) {
    // "(+,+;+,-)"
    if (label.size() != 9 || label[0] != '(' || label[2] != ',' || label[4] != ';' || label[6] != ',' || label[8] != ')') {
        throw std::invalid_argument("bad outcome label '" + label + "'");
    }
    auto sign = [&](char c) {
        if (c == '+') return Sign::Plus;
        if (c == '-') return Sign::Minus;
        throw std::invalid_argument("bad outcome label '" + label + "'");
    };
    return {sign(label[1]), sign(label[3]), sign(label[5]), sign(label[7])};
}

/// Reads the `points` array of a fit document.
inline std::vector<LabeledFitPoint> fit_points_from_json(const Json &doc) {
    if (!doc.contains("points") || !doc["points"].is_array()) {
        throw std::invalid_argument("fit document needs a 'points' array");
    }
    std::vector<LabeledFitPoint> out;
    std::size_t i = 0;
    for (const auto &p : doc["points"]) {
        try {
            LabeledFitPoint lp{p.value("theta", std::nan("")),
                               p.contains("outcome") ? parse_outcome_label(p["outcome"].get<std::string>()) : Outcome{},
                               {p.at("p_bflip").get<double>(), p.at("p_obs").get<double>(), std::nullopt}};
            if (p.contains("std_err") && !p["std_err"].is_null()) lp.point.std_err = p["std_err"].get<double>();
            out.push_back(lp);
        } catch (const nlohmann::json::exception &e) {
            throw std::invalid_argument("fit document point " + std::to_string(i) + ": " + e.what());
        }
        ++i;
    }
    return out;
}

/// Comma-separated form of a simulate/analyze report: one row per outcome,
/// aggregates appended as `# key=value` lines.
inline void write_report_csv(std::ostream &out, const Json &report) {
    const bool has_counts = report["outcomes"].front().contains("counts");
    out << "x_a,y_a,x_b,y_b,b,probability" << (has_counts ? ",std_err,counts" : "") << ",p_bflip\n";
    for (const auto &row : report["outcomes"]) {
        out << (row["x_a"].get<int>() > 0 ? "+1" : "-1") << ',' << (row["y_a"].get<int>() > 0 ? "+1" : "-1") << ','
            << (row["x_b"].get<int>() > 0 ? "+1" : "-1") << ',' << (row["y_b"].get<int>() > 0 ? "+1" : "-1") << ','
            << (row["b"].get<int>() > 0 ? "+2" : "-2") << ',' << format_double(row["probability"].get<double>());
        if (has_counts) out << ',' << format_double(row["std_err"].get<double>()) << ',' << row["counts"].get<std::uint64_t>();
        out << ',' << format_double(row["p_bflip"].get<double>()) << '\n';
    }
    for (const auto &[key, val] : report["aggregate"].items()) out << "# " << key << '=' << format_double(val.get<double>()) << '\n';
}

inline void write_fit_csv(std::ostream &out, std::span<const LabeledFitPoint> points, const FitResult &r) {
    out << "theta,outcome,p_bflip,p_obs,std_err\n";
    for (const auto &p : points) {
        out << format_double(p.theta) << ',' << p.outcome.label() << ',' << format_double(p.point.p_bflip) << ','
            << format_double(p.point.p_obs) << ',' << (p.point.std_err ? format_double(*p.point.std_err) : "") << '\n';
    }
    const Json summary = fit_result_json(r);
    for (const auto &[key, val] : summary.items()) {
        out << "# " << key << '=';
        if (val.is_boolean()) {
            out << (val.get<bool>() ? "true" : "false");
        } else if (val.is_null()) {
            out << "nan";
        } else if (val.is_number_unsigned()) {
            out << val.get<std::uint64_t>();
        } else {
            out << format_double(val.get<double>());
        }
        out << '\n';
    }
}

}  // namespace jointbell
