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
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "jointbell/joint_sim.hpp"

namespace jointbell {

inline constexpr double kCirelsonBound = 2.0 * kSqrt2;

/// Bit-flip model of measurement unsharpness.
///
/// A readout with visibility V reports the intrinsic sign flipped with
/// probability (1 - V)/2, independently for x_A, y_A, x_B and y_B.
struct FlipRates {
    double xa;
    double ya;
    double xb;
    double yb;

    static double rate(double visibility) {
        if (!(visibility >= -1e-12 && visibility <= 1.0 + 1e-12)) {
            throw std::domain_error("flip model needs visibilities in [0, 1], got " + std::to_string(visibility));
        }
        return std::clamp((1.0 - visibility) / 2.0, 0.0, 0.5);
    }

    static FlipRates from_visibilities(const VisibilityPair &a, const VisibilityPair &b) {
        return {rate(a.vx()), rate(a.vy()), rate(b.vx()), rate(b.vy())};
    }

    std::array<double, 4> as_array() const { return {xa, ya, xb, yb}; }
};

namespace detail {

/// Applies a 4-bit flip pattern (bit 3 = x_A ... bit 0 = y_B) to an outcome.
inline Outcome apply_flips(Outcome m, unsigned pattern) {
    if (pattern & 8u) m.xa = flipped(m.xa);
    if (pattern & 4u) m.ya = flipped(m.ya);
    if (pattern & 2u) m.xb = flipped(m.xb);
    if (pattern & 1u) m.yb = flipped(m.yb);
    return m;
}

inline double pattern_probability(const FlipRates &rates, unsigned pattern) {
    const auto r = rates.as_array();
    double p = 1.0;
    for (unsigned bit = 0; bit < 4; ++bit) {
        const bool flip = (pattern >> (3 - bit)) & 1u;
        p *= flip ? r[bit] : 1.0 - r[bit];
    }
    return p;
}

}  // namespace detail

/// Probability that the random flips change the b-value of `m`, summed
/// over all 16 flip patterns.
inline double pbflip_outcome(const Outcome &m, const VisibilityPair &vis_a, const VisibilityPair &vis_b) {
    const FlipRates rates = FlipRates::from_visibilities(vis_a, vis_b);
    const int b = b_value(m);
    double p = 0.0;
    for (unsigned pattern = 0; pattern < 16; ++pattern) {
        if (b_value(detail::apply_flips(m, pattern)) != b) p += detail::pattern_probability(rates, pattern);
    }
    return p;
}

inline double pbflip_outcome(const Outcome &m, double theta_a_deg, double theta_b_deg) {
    return pbflip_outcome(m, VisibilityPair::from_theta(theta_a_deg), VisibilityPair::from_theta(theta_b_deg));
}

/// Closed form for (+,+;+,-) and (-,-;-,+) with equal visibilities on both sides.
inline double pbflip_xbiased_closed_form(double vx, double vy) {
    return 0.25 * (2.0 - vx * vx - 2.0 * vx * vy + vy * vy);
}

/// Closed form for (-,+;+,+) and (+,-;-,-) with equal visibilities on both sides.
inline double pbflip_ybiased_closed_form(double vx, double vy) {
    return 0.25 * (2.0 + vx * vx - 2.0 * vx * vy - vy * vy);
}

/// Outcome-independent flip probability from the ratio <b>/<B>.
inline double pbflip_uniform(double mean_b, double bell_expectation) {
    if (bell_expectation == 0.0 || !std::isfinite(bell_expectation)) {
        throw std::domain_error("pbflip_uniform: Bell expectation must be non-zero");
    }
    return 0.5 * (1.0 - mean_b / bell_expectation);
}

struct IntrinsicProbabilities {
    double high;  // each b = -2 outcome
    double low;   // each b = +2 outcome; negative beyond the classical bound
};

inline IntrinsicProbabilities intrinsic_probs(double bell_magnitude) {
    if (!(bell_magnitude >= 0.0 && bell_magnitude <= kCirelsonBound + 1e-12)) {
        throw std::domain_error("intrinsic_probs: |<B>| must lie in [0, 2 sqrt 2], got " + std::to_string(bell_magnitude));
    }
    return {(1.0 + bell_magnitude / 2.0) / 16.0, (1.0 - bell_magnitude / 2.0) / 16.0};
}

/// Smallest flip probability of a b = +2 outcome compatible with a
/// non-negative observed probability.
inline double cirelson_floor(double bell_magnitude) {
    if (!(bell_magnitude > 0.0) || !std::isfinite(bell_magnitude)) {
        throw std::domain_error("cirelson_floor: |<B>| must be positive");
    }
    return std::max(0.0, (bell_magnitude - 2.0) / (2.0 * bell_magnitude));
}

/// Observed probability of a b = +2 outcome with flip probability p_bflip.
inline double predicted_probability(double bell_magnitude, double p_bflip) {
    return (bell_magnitude * p_bflip - (bell_magnitude - 2.0) / 2.0) / 16.0;
}

/// Intrinsic two-level statistics plus per-outcome flip probabilities.
struct BitFlipModel {
    double p_int_high;
    double p_int_low;
    OutcomeTable p_bflip;

    /// Observed probability of `m` under the b-level mixing rule.
    double probability(const Outcome &m) const {
        const double pb = p_bflip[m.index()];
        return b_value(m) > 0 ? (1.0 - pb) * p_int_low + pb * p_int_high : (1.0 - pb) * p_int_high + pb * p_int_low;
    }
};

inline BitFlipModel bit_flip_model(double bell_magnitude, const VisibilityPair &vis_a, const VisibilityPair &vis_b) {
    const auto ip = intrinsic_probs(bell_magnitude);
    BitFlipModel model{ip.high, ip.low, {}};
    for (const auto &m : all_outcomes()) model.p_bflip[m.index()] = pbflip_outcome(m, vis_a, vis_b);
    return model;
}

/// Convolves intrinsic quasi-probabilities with independent sign flips,
/// P(observed s | intrinsic s') = (1 + V s s')/2 per readout.
inline JointDistribution flip_convolve(const QuasiDistribution &quasi, const VisibilityPair &vis_a,
                                       const VisibilityPair &vis_b) {
    const std::array<double, 4> vis{vis_a.vx(), vis_a.vy(), vis_b.vx(), vis_b.vy()};
    OutcomeTable out{};
    for (const auto &m : all_outcomes()) {
        const std::array<int, 4> s{value(m.xa), value(m.ya), value(m.xb), value(m.yb)};
        double p = 0.0;
        for (const auto &src : all_outcomes()) {
            const std::array<int, 4> t{value(src.xa), value(src.ya), value(src.xb), value(src.yb)};
            double w = 1.0;
            for (std::size_t k = 0; k < 4; ++k) w *= 0.5 * (1.0 + vis[k] * s[k] * t[k]);
            p += w * quasi[src];
        }
        out[m.index()] = p;
    }
    auto theta_of = [](const VisibilityPair &v) { return std::atan2(v.vy(), v.vx()) * 180.0 / kPi; };
    return JointDistribution(out, theta_of(vis_a), theta_of(vis_b));
}

}  // namespace jointbell
