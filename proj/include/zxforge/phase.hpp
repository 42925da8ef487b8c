// Copyright 2026 The zxforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace zxforge {

/// Phase in whole degrees, kept in [0, 360).
class Phase {
  public:
    constexpr Phase() = default;
    constexpr Phase(int degrees) : deg_(wrap(degrees)) {}

    [[nodiscard]] constexpr int degrees() const { return deg_; }

    constexpr Phase operator-() const { return Phase(-deg_); }
    constexpr Phase operator+(Phase o) const { return Phase(deg_ + o.deg_); }
    constexpr Phase operator-(Phase o) const { return Phase(deg_ - o.deg_); }
    constexpr Phase &operator+=(Phase o) {
        deg_ = wrap(deg_ + o.deg_);
        return *this;
    }

    constexpr bool operator==(const Phase &) const = default;
    constexpr auto operator<=>(const Phase &) const = default;

    /// True for 0 and 180.
    [[nodiscard]] constexpr bool is_pauli() const { return deg_ % 180 == 0; }
    /// True for 90 and 270.
    [[nodiscard]] constexpr bool is_proper_clifford() const { return deg_ % 180 == 90; }

  private:
    static constexpr int wrap(int d) {
        int r = d % 360;
        return r < 0 ? r + 360 : r;
    }
    int deg_ = 0;
};

inline std::ostream &operator<<(std::ostream &os, Phase p) { return os << p.degrees(); }

/// Spider colour. The numeric value is the sign used by colour guards.
enum class Color : std::int8_t { Z = 1, X = -1 };

constexpr int sign(Color c) { return static_cast<int>(c); }

constexpr Color color_from_sign(int s) {
    if (s == 1) {
        return Color::Z;
    }
    if (s == -1) {
        return Color::X;
    }
    throw std::invalid_argument("colour must be +1 or -1, got " + std::to_string(s));
}

constexpr Color flip(Color c) { return c == Color::Z ? Color::X : Color::Z; }

}  // namespace zxforge
