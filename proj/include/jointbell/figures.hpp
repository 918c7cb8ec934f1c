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
#include <cstdio>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "jointbell/report.hpp"
#include "jointbell/sweep.hpp"

namespace jointbell {

/// Plot-ready data: distributions at fixed trade-offs (6, 7, 8) or the
/// minimal-outcome probabilities against p_bflip with the fitted line (9).
enum class FigureId { EqualUncertainty = 6, HighXResolution = 7, HighYResolution = 8, LinearRelation = 9 };

inline FigureId figure_from_int(int id) {
    if (id < 6 || id > 9) throw std::invalid_argument("unknown figure id " + std::to_string(id) + " (expected 6-9)");
    return static_cast<FigureId>(id);
}

inline std::vector<double> default_figure_thetas(FigureId fig) {
    switch (fig) {
        case FigureId::EqualUncertainty:
            return {45.0};
        case FigureId::HighXResolution:
            return {0.0, 20.0, 40.0};
        case FigureId::HighYResolution:
            return {50.0, 70.0, 90.0};
        case FigureId::LinearRelation:
            break;
    }
    std::vector<double> grid;
    for (int t = 0; t <= 90; t += 10) grid.push_back(t);
    return grid;
}

struct FigureData {
    FigureId id;
    std::vector<SweepRow> rows;
    std::vector<LabeledFitPoint> points;  // figure 9 only
    std::optional<FitResult> fit;         // figure 9 only
};

inline FigureData figure_data(FigureId fig, const TwoQubitState &state, std::span<const double> thetas,
                              const SweepOptions &options) {
    FigureData data{fig, run_sweep(state, thetas, options), {}, std::nullopt};
    if (fig == FigureId::LinearRelation) {
        data.points = fit_points_from_sweep(data.rows);
        const auto pts = strip_labels(data.points);
        data.fit = fit_bell_magnitude(pts);
    }
    return data;
}

inline void write_figure_csv(std::ostream &out, const FigureData &data) {
    if (data.id == FigureId::LinearRelation) {
        write_fit_csv(out, data.points, *data.fit);
    } else {
        write_sweep(out, data.rows);
    }
}

namespace detail {

inline std::string fmt_num(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

inline void bar_chart_svg(std::ostream &out, const FigureData &data) {
    constexpr double kBar = 18.0, kGap = 4.0, kPanelH = 220.0, kMarginL = 50.0, kTop = 40.0, kLabelH = 70.0;
    std::vector<double> thetas;
    for (const auto &r : data.rows) {
        if (thetas.empty() || thetas.back() != r.theta_a) thetas.push_back(r.theta_a);
    }
    double pmax = 0.0;
    for (const auto &r : data.rows) pmax = std::max(pmax, r.probability);
    if (pmax <= 0.0) pmax = 1.0;
    const double panel_w = 16 * (kBar + kGap) + kGap;
    const double width = kMarginL + thetas.size() * (panel_w + 30.0) + 20.0;
    const double height = kTop + kPanelH + kLabelH;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_num(width, 0) << "\" height=\""
        << fmt_num(height, 0) << "\" viewBox=\"0 0 " << fmt_num(width, 0) << ' ' << fmt_num(height, 0) << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t p = 0; p < thetas.size(); ++p) {
        const double x0 = kMarginL + p * (panel_w + 30.0);
        out << "  <g>\n";
        out << "    <text x=\"" << fmt_num(x0 + panel_w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">theta = "
            << fmt_num(thetas[p], 1) << " deg</text>\n";
        out << "    <line x1=\"" << fmt_num(x0) << "\" y1=\"" << fmt_num(kTop + kPanelH) << "\" x2=\"" << fmt_num(x0 + panel_w)
            << "\" y2=\"" << fmt_num(kTop + kPanelH) << "\" stroke=\"black\"/>\n";
        std::size_t k = 0;
        for (const auto &r : data.rows) {
            if (r.theta_a != thetas[p]) continue;
            const double h = std::max(0.0, r.probability) / pmax * kPanelH;
            const double x = x0 + kGap + k * (kBar + kGap);
            const char *fill = b_value(r.outcome) > 0 ? "#e8c547" : "#3a9a5b";
            out << "    <rect x=\"" << fmt_num(x) << "\" y=\"" << fmt_num(kTop + kPanelH - h) << "\" width=\"" << fmt_num(kBar)
                << "\" height=\"" << fmt_num(h) << "\" fill=\"" << fill << "\"><title>" << r.outcome.label()
                << " p=" << format_double(r.probability) << "</title></rect>\n";
            const double tx = x + kBar / 2, ty = kTop + kPanelH + 8;
            out << "    <text x=\"" << fmt_num(tx) << "\" y=\"" << fmt_num(ty) << "\" font-size=\"9\" transform=\"rotate(90 "
                << fmt_num(tx) << ' ' << fmt_num(ty) << ")\">" << r.outcome.label() << "</text>\n";
            ++k;
        }
        out << "  </g>\n";
    }
    out << "</svg>\n";
}

inline void scatter_svg(std::ostream &out, const FigureData &data) {
    constexpr double kW = 520.0, kH = 400.0, kL = 70.0, kR = 20.0, kT = 30.0, kB = 50.0;
    double xmax = 0.0, ymin = 0.0, ymax = 0.0;
    for (const auto &p : data.points) {
        xmax = std::max(xmax, p.point.p_bflip);
        ymax = std::max(ymax, p.point.p_obs);
    }
    const FitResult &fit = *data.fit;
    ymin = std::min(ymin, fit.intercept);
    xmax = std::max(xmax, 1e-6) * 1.05;
    ymax = std::max(ymax, 1e-6) * 1.05;
    auto sx = [&](double x) { return kL + x / xmax * (kW - kL - kR); };
    auto sy = [&](double y) { return kH - kB - (y - ymin) / (ymax - ymin) * (kH - kT - kB); };
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_num(kW, 0) << "\" height=\"" << fmt_num(kH, 0)
        << "\" viewBox=\"0 0 " << fmt_num(kW, 0) << ' ' << fmt_num(kH, 0) << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "  <line x1=\"" << fmt_num(sx(0)) << "\" y1=\"" << fmt_num(sy(0)) << "\" x2=\"" << fmt_num(sx(xmax)) << "\" y2=\""
        << fmt_num(sy(0)) << "\" stroke=\"gray\"/>\n";
    out << "  <line x1=\"" << fmt_num(sx(0)) << "\" y1=\"" << fmt_num(sy(ymin)) << "\" x2=\"" << fmt_num(sx(0)) << "\" y2=\""
        << fmt_num(sy(ymax)) << "\" stroke=\"gray\"/>\n";
    out << "  <text x=\"" << fmt_num(kW / 2) << "\" y=\"" << fmt_num(kH - 12) << "\" text-anchor=\"middle\" font-size=\"13\">p_bflip</text>\n";
    out << "  <text x=\"16\" y=\"" << fmt_num(kH / 2) << "\" font-size=\"13\" transform=\"rotate(-90 16 " << fmt_num(kH / 2)
        << ")\">p(m)</text>\n";
    out << "  <line x1=\"" << fmt_num(sx(0)) << "\" y1=\"" << fmt_num(sy(fit.intercept)) << "\" x2=\"" << fmt_num(sx(xmax))
        << "\" y2=\"" << fmt_num(sy(fit.intercept + fit.slope * xmax)) << "\" stroke=\"#2b5fd9\" stroke-width=\"1.5\"/>\n";
    for (const auto &p : data.points) {
        out << "  <circle cx=\"" << fmt_num(sx(p.point.p_bflip)) << "\" cy=\"" << fmt_num(sy(p.point.p_obs))
            << "\" r=\"3\" fill=\"black\"><title>theta=" << format_double(p.theta) << ' ' << p.outcome.label()
            << "</title></circle>\n";
    }
    out << "  <text x=\"" << fmt_num(kL + 10) << "\" y=\"" << fmt_num(kT) << "\" font-size=\"12\">slope = "
        << fmt_num(fit.slope, 5) << ", |B| = " << fmt_num(fit.bell_magnitude(), 4) << "</text>\n";
    out << "</svg>\n";
}

}  // namespace detail

inline void write_figure_svg(std::ostream &out, const FigureData &data) {
    if (data.id == FigureId::LinearRelation) {
        detail::scatter_svg(out, data);
    } else {
        detail::bar_chart_svg(out, data);
    }
}

}  // namespace jointbell
