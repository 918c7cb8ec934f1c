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
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "jointbell/analysis.hpp"

namespace jointbell {

/// One (p_bflip, observed probability) pair entering the line fit.
struct FitPoint {
    double p_bflip;
    double p_obs;
    std::optional<double> std_err;
};

enum class Weighting {
    Automatic,   // weighted iff every point carries a standard error
    Weighted,    // 1/std_err^2, every point must carry one
    Unweighted,
};

/// Straight line p_obs = intercept + slope * p_bflip and the Bell magnitude it implies.
struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_std_err = 0.0;
    double intercept_std_err = 0.0;
    double chi_squared = 0.0;  // weighted residual sum of squares
    std::size_t points = 0;
    bool weighted = false;

    /// |<B>| = 16 * slope.
    double bell_magnitude() const { return 16.0 * slope; }
    double bell_magnitude_std_err() const { return 16.0 * slope_std_err; }
    /// The zero-error extrapolation equals the intrinsic probability of a b = +2 outcome.
    double p_int_low() const { return intercept; }
    double p_int_low_std_err() const { return intercept_std_err; }
    double cirelson_ratio() const { return bell_magnitude() / kCirelsonBound; }
    double cirelson_ratio_std_err() const { return bell_magnitude_std_err() / kCirelsonBound; }
};

/// Least-squares line through the points.
///
/// Weighted fits take the std errors as absolute, so the parameter errors
/// come straight from (X^T W X)^-1. Unweighted fits scale the covariance by
/// the residual variance; with only two points their errors are NaN.
inline FitResult fit_bell_magnitude(std::span<const FitPoint> points, Weighting weighting = Weighting::Automatic) {
    if (points.size() < 2) throw std::invalid_argument("fit: need at least two points");

    bool all_have_errors = true;
    for (const auto &p : points) all_have_errors = all_have_errors && p.std_err.has_value();
    bool weighted = weighting == Weighting::Weighted || (weighting == Weighting::Automatic && all_have_errors);
    if (weighted && !all_have_errors) throw std::invalid_argument("fit: weighted fit requires a std_err on every point");

    double s = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto &p = points[i];
        if (!std::isfinite(p.p_bflip) || !std::isfinite(p.p_obs)) {
            throw std::invalid_argument("fit: point " + std::to_string(i) + " is not finite");
        }
        double w = 1.0;
        if (weighted) {
            const double se = *p.std_err;
            if (!(se > 0.0) || !std::isfinite(se)) {
                throw std::invalid_argument("fit: point " + std::to_string(i) + " has non-positive std_err");
            }
            w = 1.0 / (se * se);
        }
        s += w;
        sx += w * p.p_bflip;
        sy += w * p.p_obs;
        sxx += w * p.p_bflip * p.p_bflip;
        sxy += w * p.p_bflip * p.p_obs;
    }
    if (!(s > 0.0)) throw std::invalid_argument("fit: all weights are zero");

    // Centered form keeps the determinant well conditioned.
    const double mean_x = sx / s;
    double sxx_c = 0.0;
    for (const auto &p : points) {
        const double w = weighted ? 1.0 / (*p.std_err * *p.std_err) : 1.0;
        sxx_c += w * (p.p_bflip - mean_x) * (p.p_bflip - mean_x);
    }
    const double spread = sxx_c / s;
    if (!(spread > 1e-24 * std::max(1.0, mean_x * mean_x))) {
        throw std::invalid_argument("fit: need at least two distinct p_bflip values");
    }
    const double delta = s * sxx_c;  // = S*Sxx - Sx^2

    FitResult r;
    r.points = points.size();
    r.weighted = weighted;
    r.slope = (s * sxy - sx * sy) / delta;
    r.intercept = (sy - r.slope * sx) / s;

    for (const auto &p : points) {
        const double w = weighted ? 1.0 / (*p.std_err * *p.std_err) : 1.0;
        const double res = p.p_obs - (r.intercept + r.slope * p.p_bflip);
        r.chi_squared += w * res * res;
    }

    double var_slope = s / delta;
    double var_intercept = sxx / delta;
    if (!weighted) {
        const std::size_t dof = points.size() - 2;
        const double sigma2 = dof > 0 ? r.chi_squared / static_cast<double>(dof) : std::numeric_limits<double>::quiet_NaN();
        var_slope *= sigma2;
        var_intercept *= sigma2;
    }
    r.slope_std_err = std::sqrt(var_slope);
    r.intercept_std_err = std::sqrt(var_intercept);
    return r;
}

}  // namespace jointbell
