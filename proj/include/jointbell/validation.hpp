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
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "jointbell/analysis.hpp"
#include "jointbell/counts.hpp"

// Runtime property suites behind `jointbell validate`.

namespace jointbell {

struct SuiteResult {
    std::string name;
    std::size_t checks = 0;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }

    void check(bool ok, const std::string &what) {
        ++checks;
        // Keep reports short when a suite fails wholesale.
        if (!ok && failures.size() < 20) failures.push_back(what);
    }
};

namespace detail {

inline std::string at(double theta) {
    std::ostringstream os;
    os << "theta=" << theta;
    return os.str();
}

inline std::vector<double> theta_grid(double step) {
    std::vector<double> g;
    for (int i = 0; i * step <= 90.0 + 1e-9; ++i) g.push_back(i * step);
    return g;
}

}  // namespace detail

inline SuiteResult validate_povm() {
    SuiteResult r{"povm positivity and completeness", 0, {}};
    for (double theta : detail::theta_grid(0.5)) {
        for (Side side : {Side::A, Side::B}) {
            const auto povm = build_joint_povm({theta, side});
            for (const auto &e : povm.elements) {
                r.check(e.hermiticity_error() <= 1e-12, "element not Hermitian at " + detail::at(theta));
                r.check(min_eigenvalue(e) >= -1e-12, "negative element at " + detail::at(theta));
            }
            r.check((povm.sum() - Matrix2::identity()).max_abs() <= 1e-12, "elements do not sum to I at " + detail::at(theta));
        }
    }
    return r;
}

inline SuiteResult validate_uncertainty_boundary() {
    SuiteResult r{"uncertainty relation is the positivity boundary", 0, {}};
    Rng rng(20240611);
    for (int i = 0; i < 500; ++i) {
        const double radius = 1.0 + 1e-3 + 0.5 * rng.uniform();
        const double phi = 0.5 * kPi * rng.uniform();
        const double vx = radius * std::cos(phi), vy = radius * std::sin(phi);
        for (Side side : {Side::A, Side::B}) {
            double lowest = 1.0;
            for (std::size_t k = 0; k < 4; ++k) {
                lowest = std::min(lowest, min_eigenvalue(joint_povm_element(x_observable(side).op, y_observable(side).op, vx,
                                                                            vy, LocalOutcome::from_index(k))));
            }
            r.check(lowest < 0.0, "outside the circle but positive");
        }
        bool rejected = false;
        try {
            VisibilityPair(vx, vy);
        } catch (const std::domain_error &) {
            rejected = true;
        }
        r.check(rejected, "VisibilityPair accepted vx^2 + vy^2 > 1");
    }
    return r;
}

inline SuiteResult validate_observables() {
    SuiteResult r{"observable algebra", 0, {}};
    for (Side side : {Side::A, Side::B}) {
        const Matrix2 x = x_observable(side).op, y = y_observable(side).op;
        r.check(anticommutator(x, y).max_abs() < 1e-12, std::string("X and Y do not anticommute on side ") + side_name(side));
        for (const Matrix2 &o : {x, y}) {
            const auto ev = hermitian_eigenvalues(o);
            r.check(std::abs(ev[0] + 1.0) < 1e-12 && std::abs(ev[1] - 1.0) < 1e-12, "eigenvalues are not +/-1");
            r.check(std::abs(o.trace()) < 1e-12, "observable not traceless");
        }
    }
    return r;
}

inline SuiteResult validate_bell_operator() {
    SuiteResult r{"bell operator spectrum", 0, {}};
    const Matrix4 b = bell_operator();
    const auto ev = hermitian_eigenvalues(b);
    r.check(std::abs(ev.front() + kCirelsonBound) < 1e-10, "lowest eigenvalue is not -2 sqrt 2");
    r.check(std::abs(ev.back() - kCirelsonBound) < 1e-10, "highest eigenvalue is not +2 sqrt 2");
    const Matrix4 square = Matrix4::identity() * 4.0 + kron(commutator(x_observable(Side::A).op, y_observable(Side::A).op),
                                                             commutator(x_observable(Side::B).op, y_observable(Side::B).op));
    r.check((b * b - square).max_abs() < 1e-12, "B^2 != 4 I + [X_A, Y_A] (x) [X_B, Y_B]");
    for (double v : {0.0, 0.25, 0.5, 0.9716, 1.0}) {
        r.check(std::abs(bell_expectation(werner_state(v)) + v * kCirelsonBound) < 1e-12, "werner expectation not linear in v");
    }
    return r;
}

inline SuiteResult validate_joint_distribution() {
    SuiteResult r{"joint distribution normalization, positivity, marginals", 0, {}};
    Rng rng(7);
    for (int i = 0; i < 40; ++i) {
        const auto state = random_two_qubit_state(rng);
        const double ta = 90.0 * rng.uniform(), tb = 90.0 * rng.uniform();
        const auto povm_a = build_joint_povm({ta, Side::A});
        const auto t = outcome_traces(state, povm_a, build_joint_povm({tb, Side::B}));
        double lowest = 1.0;
        for (double p : t) lowest = std::min(lowest, p);
        r.check(std::abs(table_sum(t) - 1.0) < 1e-10, "not normalized");
        r.check(lowest >= -1e-12, "negative probability");
        const JointDistribution dist(t, ta, tb);
        const auto reduced = state.reduced(Side::A);
        for (std::size_t k = 0; k < 4; ++k) {
            const auto m = LocalOutcome::from_index(k);
            r.check(std::abs(dist.marginal(Side::A, m) - reduced.expectation(povm_a.element(m))) < 1e-12,
                    "A marginal inconsistent");
        }
    }
    return r;
}

inline SuiteResult validate_equal_uncertainty() {
    SuiteResult r{"theta = 45 degeneracy and visibility scaling", 0, {}};
    const auto singlet = singlet_state();
    const auto dist = joint_distribution(singlet, 45.0, 45.0);
    const double hi = dist[Outcome::from_ints(1, 1, -1, 1)];
    const double lo = dist[Outcome::from_ints(1, 1, 1, 1)];
    for (const auto &m : all_outcomes()) {
        r.check(std::abs(dist[m] - (b_value(m) > 0 ? lo : hi)) < 1e-12, "45 degree probabilities depend on more than b");
    }
    r.check(std::abs(aggregate_b(dist).mean_b - 0.5 * bell_expectation(singlet)) < 1e-12, "<b> != <B>/2 at 45 degrees");

    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        const auto state = random_two_qubit_state(rng);
        const double ta = 90.0 * rng.uniform(), tb = 90.0 * rng.uniform();
        const auto d = joint_distribution(state, ta, tb);
        const auto va = VisibilityPair::from_theta(ta), vb = VisibilityPair::from_theta(tb);
        struct Pair {
            bool a_is_x, b_is_x;
        };
        for (const Pair p : {Pair{true, true}, Pair{true, false}, Pair{false, true}, Pair{false, false}}) {
            double joint = 0.0;
            for (const auto &m : all_outcomes()) {
                joint += value(p.a_is_x ? m.xa : m.ya) * value(p.b_is_x ? m.xb : m.yb) * d[m];
            }
            const Matrix2 oa = p.a_is_x ? x_observable(Side::A).op : y_observable(Side::A).op;
            const Matrix2 ob = p.b_is_x ? x_observable(Side::B).op : y_observable(Side::B).op;
            const double scale = (p.a_is_x ? va.vx() : va.vy()) * (p.b_is_x ? vb.vx() : vb.vy());
            r.check(std::abs(joint - scale * state.expectation(kron(oa, ob))) < 1e-12, "correlation not scaled by V_A V_B");
        }
    }
    return r;
}

inline SuiteResult validate_flip_model() {
    SuiteResult r{"bit-flip decomposition matches the trace formula", 0, {}};
    Rng rng(13);
    const std::vector<double> thetas{0, 20, 40, 45, 50, 70, 90};
    for (int i = 0; i < 30; ++i) {
        const auto state = random_two_qubit_state(rng);
        const auto quasi = quasi_distribution(state);
        for (double theta : thetas) {
            const auto vis = VisibilityPair::from_theta(theta);
            const auto conv = flip_convolve(quasi, vis, vis);
            const auto direct = joint_distribution(state, theta, theta);
            double worst = 0.0;
            for (const auto &m : all_outcomes()) worst = std::max(worst, std::abs(conv[m] - direct[m]));
            r.check(worst < 1e-10, "flip_convolve differs from trace formula at " + detail::at(theta));
        }
    }
    const auto quasi = quasi_distribution(singlet_state());
    const auto ip = intrinsic_probs(kCirelsonBound);
    for (const auto &m : all_outcomes()) {
        r.check(std::abs(quasi[m] - (b_value(m) > 0 ? ip.low : ip.high)) < 1e-12, "singlet quasi-probability mismatch");
    }
    return r;
}

inline SuiteResult validate_error_probabilities() {
    SuiteResult r{"flip probabilities, floor and linear relation", 0, {}};
    const auto minimal = minimal_outcomes();
    const auto singlet = singlet_state();
    const double floor = cirelson_floor(kCirelsonBound);
    for (double theta : detail::theta_grid(0.5)) {
        const auto vis = VisibilityPair::from_theta(theta);
        const double vx = vis.vx(), vy = vis.vy();
        const double xb = pbflip_xbiased_closed_form(vx, vy), yb = pbflip_ybiased_closed_form(vx, vy);
        r.check(std::abs(pbflip_outcome(minimal[0], vis, vis) - xb) < 1e-12, "(+,+;+,-) closed form at " + detail::at(theta));
        r.check(std::abs(pbflip_outcome(minimal[1], vis, vis) - xb) < 1e-12, "(-,-;-,+) closed form at " + detail::at(theta));
        r.check(std::abs(pbflip_outcome(minimal[2], vis, vis) - yb) < 1e-12, "(-,+;+,+) closed form at " + detail::at(theta));
        r.check(std::abs(pbflip_outcome(minimal[3], vis, vis) - yb) < 1e-12, "(+,-;-,-) closed form at " + detail::at(theta));
        const auto dist = joint_distribution(singlet, theta, theta);
        for (const auto &m : minimal) {
            const double pb = pbflip_outcome(m, vis, vis);
            r.check(pb >= floor - 1e-12, "flip probability below the floor at " + detail::at(theta));
            r.check(std::abs(dist[m] - predicted_probability(kCirelsonBound, pb)) < 1e-10,
                    "linear relation broken at " + detail::at(theta));
        }
    }
    r.check(std::abs(predicted_probability(kCirelsonBound, floor)) < 1e-12, "floor does not give zero probability");
    return r;
}

inline SuiteResult validate_monotonic_structure() {
    SuiteResult r{"minimal outcome probability shape", 0, {}};
    const auto singlet = singlet_state();
    const auto xbiased = Outcome::from_ints(1, 1, 1, -1);
    const auto ybiased = Outcome::from_ints(-1, 1, 1, 1);
    double prev_x = 2.0, prev_y = 2.0;
    for (double theta : detail::theta_grid(0.5)) {
        const auto d = joint_distribution(singlet, theta, theta);
        const double px = d[xbiased], py = d[ybiased];
        if (theta > 0.0) {
            if (theta <= 22.5) r.check(px < prev_x, "(+,+;+,-) not decreasing at " + detail::at(theta));
            if (theta > 22.5) r.check(px > prev_x, "(+,+;+,-) not increasing at " + detail::at(theta));
            if (theta <= 67.5) r.check(py < prev_y, "(-,+;+,+) not decreasing at " + detail::at(theta));
            if (theta > 67.5) r.check(py > prev_y, "(-,+;+,+) not increasing at " + detail::at(theta));
        }
        prev_x = px;
        prev_y = py;
    }
    return r;
}

inline SuiteResult validate_visibilities() {
    SuiteResult r{"remote-preparation visibilities on the unit circle", 0, {}};
    const auto singlet = singlet_state();
    const auto werner = werner_state(0.975);
    for (double theta : detail::theta_grid(10.0)) {
        for (Side side : {Side::A, Side::B}) {
            for (const auto *state : {&singlet, &werner}) {
                const auto v = joint_visibilities(*state, theta, side);
                const auto expect = VisibilityPair::from_theta(theta);
                r.check(std::abs(v.vx - expect.vx()) < 1e-10 && std::abs(v.vy - expect.vy()) < 1e-10,
                        "visibility mismatch at " + detail::at(theta));
                r.check(std::abs(v.radius() - 1.0) < 1e-10, "radius != 1 at " + detail::at(theta));
            }
        }
    }
    return r;
}

inline SuiteResult validate_monte_carlo() {
    SuiteResult r{"Poisson sampling recovers the distribution", 0, {}};
    const auto dist = joint_distribution(werner_state(0.975), 20.0, 20.0);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const auto est = probabilities_from_counts(sample_counts(dist, 1e7, seed));
        for (const auto &m : all_outcomes()) {
            const double se = std::sqrt(dist[m] / 1e7);
            r.check(std::abs(est.distribution[m] - dist[m]) < 5.0 * se + 1e-12, "deviation beyond 5 sigma for " + m.label());
        }
        r.check(sample_counts(dist, 1e7, seed) == sample_counts(dist, 1e7, seed), "sampling is not deterministic");
    }
    return r;
}

inline std::vector<SuiteResult> run_validation_suites() {
    return {validate_povm(),          validate_uncertainty_boundary(), validate_observables(),
            validate_bell_operator(), validate_joint_distribution(),   validate_equal_uncertainty(),
            validate_flip_model(),    validate_error_probabilities(),  validate_monotonic_structure(),
            validate_visibilities(),  validate_monte_carlo()};
}

}  // namespace jointbell
