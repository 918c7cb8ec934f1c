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
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "jointbell/matrix.hpp"
#include "jointbell/outcome.hpp"

namespace jointbell {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSqrt2 = std::numbers::sqrt2;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

/// Reduces a polarization orientation into [0, 180).
inline double reduce_polarization_angle(double deg) {
    double r = std::fmod(deg, 180.0);
    if (r < 0.0) r += 180.0;
    if (r >= 180.0) r -= 180.0;
    return r;
}

/// Projector onto linear polarization at `deg` in the (|H>, |V>) basis.
inline Matrix2 polarization_projector(double deg) {
    const double a = deg_to_rad(deg);
    const double c = std::cos(a), s = std::sin(a);
    return Matrix2{c * c, c * s, s * c, s * s};
}

/// A +/-1 polarization observable: +1 eigenstate at `plus_angle`, -1 at plus_angle + 90.
struct PolarizationObservable {
    double plus_angle = 0.0;
    Matrix2 op;

    double minus_angle() const { return reduce_polarization_angle(plus_angle + 90.0); }
};

/// |a><a| - |a+90><a+90|, which equals cos(2a) sigma_z + sin(2a) sigma_x.
inline PolarizationObservable observable_from_angle(double plus_angle_deg) {
    const double alpha = reduce_polarization_angle(plus_angle_deg);
    const double two_a = deg_to_rad(2.0 * alpha);
    const double c = std::cos(two_a), s = std::sin(two_a);
    return {alpha, Matrix2{c, s, s, -c}};
}

/// Eigenstate orientations of the four observables entering the Bell operator.
struct ObservableAngles {
    double x_plus;
    double y_plus;
};

inline ObservableAngles observable_angles(Side side) {
    // B is rotated by 22.5 degrees relative to A for a maximal violation.
    return side == Side::A ? ObservableAngles{0.0, 45.0} : ObservableAngles{22.5, 67.5};
}

inline PolarizationObservable x_observable(Side side) { return observable_from_angle(observable_angles(side).x_plus); }
inline PolarizationObservable y_observable(Side side) { return observable_from_angle(observable_angles(side).y_plus); }

/// Visibilities of the X and Y readouts of a joint measurement.
///
/// Positivity of the POVM requires vx^2 + vy^2 <= 1. Components are signed
/// so that settings outside [0, 90] degrees remain representable.
class VisibilityPair {
   public:
    static constexpr double kTolerance = 1e-12;

    VisibilityPair(double vx, double vy) : vx_(vx), vy_(vy) {
        if (!std::isfinite(vx) || !std::isfinite(vy)) {
            throw std::domain_error("visibilities must be finite");
        }
        if (vx * vx + vy * vy > 1.0 + kTolerance) {
            throw std::domain_error("visibilities violate the uncertainty relation vx^2 + vy^2 <= 1 (vx=" +
                                    std::to_string(vx) + ", vy=" + std::to_string(vy) + ")");
        }
    }

    static VisibilityPair from_theta(double theta_deg) {
        const double t = deg_to_rad(theta_deg);
        return {std::cos(t), std::sin(t)};
    }

    double vx() const { return vx_; }
    double vy() const { return vy_; }
    double radius() const { return std::hypot(vx_, vy_); }

   private:
    double vx_;
    double vy_;
};

/// Trade-off angle theta for one side: V_X = cos(theta), V_Y = sin(theta).
struct MeasurementSetting {
    double theta_deg = 0.0;
    Side side = Side::A;

    VisibilityPair visibilities() const { return VisibilityPair::from_theta(theta_deg); }
};

/// 1/4 (I + x vx X + y vy Y). No positivity check; see build_joint_povm.
inline Matrix2 joint_povm_element(const Matrix2 &x_op, const Matrix2 &y_op, double vx, double vy, LocalOutcome m) {
    Matrix2 e = Matrix2::identity() + x_op * (value(m.x) * vx) + y_op * (value(m.y) * vy);
    return e * 0.25;
}

/// Four-outcome joint measurement of X and Y on one side.
struct JointPovm {
    Side side = Side::A;
    double vx = 1.0;
    double vy = 0.0;
    std::array<Matrix2, 4> elements;  // indexed by LocalOutcome::index()

    const Matrix2 &element(LocalOutcome m) const { return elements[m.index()]; }

    Matrix2 sum() const {
        Matrix2 s;
        for (const auto &e : elements) s += e;
        return s;
    }
};

inline JointPovm build_joint_povm(Side side, const VisibilityPair &vis) {
    JointPovm povm;
    povm.side = side;
    povm.vx = vis.vx();
    povm.vy = vis.vy();
    const Matrix2 x_op = x_observable(side).op;
    const Matrix2 y_op = y_observable(side).op;
    for (std::size_t i = 0; i < 4; ++i) {
        povm.elements[i] = joint_povm_element(x_op, y_op, vis.vx(), vis.vy(), LocalOutcome::from_index(i));
    }
    return povm;
}

inline JointPovm build_joint_povm(const MeasurementSetting &setting) {
    return build_joint_povm(setting.side, setting.visibilities());
}

struct PolarizerSetting {
    double polarizer_deg;          // filter orientation, reduced to [0, 180)
    double half_wave_plate_offset; // signed HWP rotation from the X eigenstate direction
};

/// Filter orientation realizing one outcome of the joint measurement.
///
/// The X eigenstate direction for outcome x is rotated by theta/2 along the
/// shorter arc toward the Y eigenstate direction for outcome y; the half-wave
/// plate turns by half of that.
inline PolarizerSetting polarizer_angles(const MeasurementSetting &setting, LocalOutcome outcome) {
    const auto angles = observable_angles(setting.side);
    const double x_dir = outcome.x == Sign::Plus ? angles.x_plus : angles.x_plus + 90.0;
    const double y_dir = outcome.y == Sign::Plus ? angles.y_plus : angles.y_plus + 90.0;
    // X and Y eigenstate directions are always 45 degrees apart in real space.
    double arc = reduce_polarization_angle(y_dir - x_dir);
    if (arc > 90.0) arc -= 180.0;
    const double direction = arc >= 0.0 ? 1.0 : -1.0;
    const double rotation = direction * setting.theta_deg / 2.0;
    return {reduce_polarization_angle(x_dir + rotation), rotation / 2.0};
}

}  // namespace jointbell
