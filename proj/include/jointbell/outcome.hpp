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
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace jointbell {

enum class Side { A, B };

inline const char *side_name(Side side) { return side == Side::A ? "A" : "B"; }

/// A measured sign, +1 or -1.
enum class Sign : std::int8_t { Plus = 1, Minus = -1 };

inline int value(Sign s) { return static_cast<int>(s); }

inline Sign sign_from_int(int v) {
    if (v == 1) return Sign::Plus;
    if (v == -1) return Sign::Minus;
    throw std::invalid_argument("sign must be +1 or -1, got " + std::to_string(v));
}

inline Sign flipped(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }

inline char sign_char(Sign s) { return s == Sign::Plus ? '+' : '-'; }

/// Outcome (x, y) of one local joint measurement.
struct LocalOutcome {
    Sign x = Sign::Plus;
    Sign y = Sign::Plus;

    /// 0..3 in the order (+,+), (+,-), (-,+), (-,-).
    std::size_t index() const { return (x == Sign::Minus ? 2u : 0u) + (y == Sign::Minus ? 1u : 0u); }

    static LocalOutcome from_index(std::size_t i) {
        return {(i & 2u) ? Sign::Minus : Sign::Plus, (i & 1u) ? Sign::Minus : Sign::Plus};
    }

    friend bool operator==(const LocalOutcome &, const LocalOutcome &) = default;
};

/// Outcome (x_A, y_A; x_B, y_B) of the pair of joint measurements.
///
/// Canonical index: the A outcome is the major key, both sides ordered
/// (+,+), (+,-), (-,+), (-,-).
struct Outcome {
    Sign xa = Sign::Plus;
    Sign ya = Sign::Plus;
    Sign xb = Sign::Plus;
    Sign yb = Sign::Plus;

    static constexpr std::size_t count = 16;

    LocalOutcome a() const { return {xa, ya}; }
    LocalOutcome b() const { return {xb, yb}; }
    LocalOutcome local(Side side) const { return side == Side::A ? a() : b(); }

    std::size_t index() const { return 4 * a().index() + b().index(); }

    static Outcome from_index(std::size_t i) {
        if (i >= count) throw std::out_of_range("outcome index out of range");
        const auto la = LocalOutcome::from_index(i / 4);
        const auto lb = LocalOutcome::from_index(i % 4);
        return {la.x, la.y, lb.x, lb.y};
    }

    static Outcome from_ints(int xa, int ya, int xb, int yb) {
        return {sign_from_int(xa), sign_from_int(ya), sign_from_int(xb), sign_from_int(yb)};
    }

    /// "(+,+;+,-)"
    std::string label() const {
        std::string s = "(";
        s += sign_char(xa);
        s += ',';
        s += sign_char(ya);
        s += ';';
        s += sign_char(xb);
        s += ',';
        s += sign_char(yb);
        s += ')';
        return s;
    }

    friend bool operator==(const Outcome &, const Outcome &) = default;
};

inline std::array<Outcome, Outcome::count> all_outcomes() {
    std::array<Outcome, Outcome::count> out{};
    for (std::size_t i = 0; i < Outcome::count; ++i) out[i] = Outcome::from_index(i);
    return out;
}

/// Classical Bell combination of the four signs; always +2 or -2.
inline int b_value(const Outcome &m) {
    const int xa = value(m.xa), ya = value(m.ya), xb = value(m.xb), yb = value(m.yb);
    return xa * xb - xa * yb + ya * xb + ya * yb;
}

/// The four b = +2 outcomes whose probability can be pushed to zero by a
/// suitably biased trade-off: two at high X resolution, two at high Y
/// resolution.
inline std::array<Outcome, 4> minimal_outcomes() {
    return {Outcome::from_ints(+1, +1, +1, -1), Outcome::from_ints(-1, -1, -1, +1),
            Outcome::from_ints(-1, +1, +1, +1), Outcome::from_ints(+1, -1, -1, -1)};
}

}  // namespace jointbell
