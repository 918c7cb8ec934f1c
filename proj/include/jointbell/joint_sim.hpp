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
#include <numeric>
#include <stdexcept>
#include <string>

#include "jointbell/outcome.hpp"
#include "jointbell/povm.hpp"
#include "jointbell/state.hpp"

namespace jointbell {

using OutcomeTable = std::array<double, Outcome::count>;

inline double table_sum(const OutcomeTable &t) { return std::accumulate(t.begin(), t.end(), 0.0); }

/// Probabilities of the 16 joint outcomes for settings (theta_a, theta_b).
class JointDistribution {
   public:
    static constexpr double kNegativityTolerance = 1e-12;
    static constexpr double kNormTolerance = 1e-10;

    JointDistribution(const OutcomeTable &probs, double theta_a_deg, double theta_b_deg)
        : probs_(probs), theta_a_(theta_a_deg), theta_b_(theta_b_deg) {
        for (std::size_t i = 0; i < Outcome::count; ++i) {
            if (!std::isfinite(probs_[i]) || probs_[i] < -kNegativityTolerance) {
                throw std::invalid_argument("joint distribution: invalid probability for outcome " +
                                            Outcome::from_index(i).label());
            }
        }
        const double s = table_sum(probs_);
        if (std::abs(s - 1.0) > kNormTolerance) {
            throw std::invalid_argument("joint distribution: probabilities sum to " + std::to_string(s));
        }
    }

    double operator[](const Outcome &m) const { return probs_[m.index()]; }
    const OutcomeTable &probabilities() const { return probs_; }
    double theta_a() const { return theta_a_; }
    double theta_b() const { return theta_b_; }

    /// Probability of a local outcome on one side, summed over the other side.
    double marginal(Side side, LocalOutcome local) const {
        double p = 0.0;
        for (const auto &m : all_outcomes()) {
            if (m.local(side) == local) p += probs_[m.index()];
        }
        return p;
    }

   private:
    OutcomeTable probs_;
    double theta_a_;
    double theta_b_;
};

/// Signed quasi-probabilities over the 16 outcomes; sum to one, may be negative.
class QuasiDistribution {
   public:
    explicit QuasiDistribution(const OutcomeTable &values) : values_(values) {
        const double s = table_sum(values_);
        if (std::abs(s - 1.0) > JointDistribution::kNormTolerance) {
            throw std::invalid_argument("quasi distribution: values sum to " + std::to_string(s));
        }
    }

    double operator[](const Outcome &m) const { return values_[m.index()]; }
    const OutcomeTable &values() const { return values_; }

   private:
    OutcomeTable values_;
};

/// Tr[(E_a (x) E_b) rho] for every outcome, without the positivity check.
inline OutcomeTable outcome_traces(const TwoQubitState &state, const JointPovm &povm_a, const JointPovm &povm_b) {
    OutcomeTable t{};
    for (const auto &m : all_outcomes()) {
        t[m.index()] = state.expectation(kron(povm_a.element(m.a()), povm_b.element(m.b())));
    }
    return t;
}

inline JointDistribution joint_distribution(const TwoQubitState &state, const JointPovm &povm_a, const JointPovm &povm_b,
                                            double theta_a_deg, double theta_b_deg) {
    return JointDistribution(outcome_traces(state, povm_a, povm_b), theta_a_deg, theta_b_deg);
}

inline JointDistribution joint_distribution(const TwoQubitState &state, double theta_a_deg, double theta_b_deg) {
    return joint_distribution(state, build_joint_povm({theta_a_deg, Side::A}), build_joint_povm({theta_b_deg, Side::B}),
                              theta_a_deg, theta_b_deg);
}

/// Trace formula at V_X = V_Y = 1 on both sides. The "elements" are not
/// positive, so the result is a quasi-distribution.
inline QuasiDistribution quasi_distribution(const TwoQubitState &state) {
    JointPovm sharp_a, sharp_b;
    for (Side side : {Side::A, Side::B}) {
        JointPovm &p = side == Side::A ? sharp_a : sharp_b;
        p.side = side;
        p.vx = p.vy = 1.0;
        const Matrix2 x_op = x_observable(side).op;
        const Matrix2 y_op = y_observable(side).op;
        for (std::size_t i = 0; i < 4; ++i) {
            p.elements[i] = joint_povm_element(x_op, y_op, 1.0, 1.0, LocalOutcome::from_index(i));
        }
    }
    return QuasiDistribution(outcome_traces(state, sharp_a, sharp_b));
}

struct BAggregate {
    double p_plus;   // P(b = +2)
    double p_minus;  // P(b = -2)
    double mean_b;
};

inline BAggregate aggregate_b(const OutcomeTable &probs) {
    BAggregate agg{0.0, 0.0, 0.0};
    for (const auto &m : all_outcomes()) {
        (b_value(m) > 0 ? agg.p_plus : agg.p_minus) += probs[m.index()];
    }
    agg.mean_b = 2.0 * agg.p_plus - 2.0 * agg.p_minus;
    return agg;
}

inline BAggregate aggregate_b(const JointDistribution &dist) { return aggregate_b(dist.probabilities()); }

/// State of the other photon after projecting `side` onto linear polarization `proj_angle_deg`.
inline QubitState conditional_state(const TwoQubitState &state, Side side, double proj_angle_deg) {
    constexpr double kMinProbability = 1e-12;
    const Matrix2 proj = polarization_projector(proj_angle_deg);
    const Matrix4 lift = side == Side::A ? kron(proj, Matrix2::identity()) : kron(Matrix2::identity(), proj);
    const Matrix4 projected = lift * state.rho() * lift;
    const double prob = projected.trace().real();
    if (prob <= kMinProbability) {
        throw std::domain_error("conditional state: projection of side " + std::string(side_name(side)) + " onto " +
                                std::to_string(proj_angle_deg) + " deg has zero probability");
    }
    Matrix2 other = side == Side::A ? partial_trace_a(projected) : partial_trace_b(projected);
    other *= Complex(1.0 / prob);
    // Round-off can leave a ~1e-17 anti-Hermitian residue; symmetrize.
    return QubitState((other + other.adjoint()) * 0.5);
}

struct VisibilityEstimate {
    double vx;
    double vy;
    double radius() const { return std::hypot(vx, vy); }
};

/// Mean of one sign readout (x or y) of the joint measurement on a single qubit.
inline double joint_mean(const QubitState &qubit, const JointPovm &povm, bool read_x) {
    double mean = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto m = LocalOutcome::from_index(i);
        mean += value(read_x ? m.x : m.y) * qubit.expectation(povm.elements[i]);
    }
    return mean;
}

/// Joint-measurement visibilities on `side`, each the ratio of the joint
/// mean to the precise expectation on a remotely prepared eigenstate.
///
/// The eigenstate at angle a on `side` is heralded by detecting a + 90 on
/// the other side (anti-correlated source).
inline VisibilityEstimate joint_visibilities(const TwoQubitState &state, double theta_deg, Side side) {
    constexpr double kMinPrecise = 1e-12;
    const Side other = side == Side::A ? Side::B : Side::A;
    const JointPovm povm = build_joint_povm({theta_deg, side});
    const auto angles = observable_angles(side);

    auto ratio = [&](const PolarizationObservable &obs, double herald_angle, bool read_x) {
        const QubitState prepared = conditional_state(state, other, herald_angle);
        const double precise = prepared.expectation(obs.op);
        if (std::abs(precise) < kMinPrecise) {
            throw std::domain_error("joint visibility: precise expectation vanishes for the remotely prepared state");
        }
        return joint_mean(prepared, povm, read_x) / precise;
    };

    return {ratio(x_observable(side), angles.x_plus + 90.0, true), ratio(y_observable(side), angles.y_plus + 90.0, false)};
}

/// (N+- + N-+ - N++ - N--) / total for a parallel-polarization analysis.
inline double interferometer_visibility(double n_plus_minus, double n_minus_plus, double n_plus_plus,
                                        double n_minus_minus) {
    for (double n : {n_plus_minus, n_minus_plus, n_plus_plus, n_minus_minus}) {
        if (!(n >= 0.0)) throw std::invalid_argument("interferometer visibility: counts must be non-negative");
    }
    const double total = n_plus_minus + n_minus_plus + n_plus_plus + n_minus_minus;
    if (total <= 0.0) throw std::invalid_argument("interferometer visibility: all counts are zero");
    return (n_plus_minus + n_minus_plus - n_plus_plus - n_minus_minus) / total;
}

struct ParallelProbabilities {
    double plus_minus;
    double minus_plus;
    double plus_plus;
    double minus_minus;
};

/// Probabilities of the four filter combinations (phi or phi+90 on each side).
inline ParallelProbabilities parallel_polarization_probabilities(const TwoQubitState &state, double phi_deg) {
    const Matrix2 plus = polarization_projector(phi_deg);
    const Matrix2 minus = polarization_projector(phi_deg + 90.0);
    return {state.expectation(kron(plus, minus)), state.expectation(kron(minus, plus)),
            state.expectation(kron(plus, plus)), state.expectation(kron(minus, minus))};
}

}  // namespace jointbell
