// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace specflow {

using u128 = unsigned __int128;
using i128 = __int128;

/// A point of the circle T = R/Z stored as a 128-bit binary fraction.
///
/// The raw value r represents r / 2^128. Addition and subtraction wrap
/// modulo 2^128, which is exactly arithmetic modulo 1, so orbits
/// {x + k alpha} accumulate no rounding error at all.
class CirclePoint {
public:
    constexpr CirclePoint() = default;

    static constexpr CirclePoint from_raw(u128 raw) { return CirclePoint(raw); }
    /// Fractional part of x, rounded to the nearest 2^-128 representable below.
    static CirclePoint from_double(double x);
    static CirclePoint from_long_double(long double x);
    /// floor({num / den} * 2^128), exact.
    static CirclePoint from_rational(std::int64_t num, std::int64_t den);
    /// Parses "p/q", or a decimal "0.xxx" / "-1.25" (digits beyond 2^-128 truncated).
    static CirclePoint parse(std::string_view text);

    constexpr u128 raw() const { return raw_; }
    double to_double() const;
    long double to_long_double() const;
    /// 40 significant decimal digits after "0.", enough to round-trip 128 bits.
    std::string to_decimal() const;

    constexpr CirclePoint operator+(CirclePoint o) const { return CirclePoint(raw_ + o.raw_); }
    constexpr CirclePoint operator-(CirclePoint o) const { return CirclePoint(raw_ - o.raw_); }
    constexpr CirclePoint operator-() const { return CirclePoint(u128{0} - raw_); }
    constexpr CirclePoint& operator+=(CirclePoint o) {
        raw_ += o.raw_;
        return *this;
    }
    constexpr CirclePoint& operator-=(CirclePoint o) {
        raw_ -= o.raw_;
        return *this;
    }
    /// k * x mod 1 (exact).
    constexpr CirclePoint times(std::int64_t k) const {
        return CirclePoint(raw_ * static_cast<u128>(static_cast<i128>(k)));
    }

    friend constexpr bool operator==(CirclePoint, CirclePoint) = default;
    friend constexpr auto operator<=>(CirclePoint a, CirclePoint b) { return a.raw_ <=> b.raw_; }

private:
    constexpr explicit CirclePoint(u128 raw) : raw_(raw) {}
    u128 raw_ = 0;
};

/// Length of the positively oriented arc from `from` to `to`, in [0,1).
long double arc_length(CirclePoint from, CirclePoint to);

/// ||a - b||, the circle distance.
long double circle_distance(CirclePoint a, CirclePoint b);

/// ||t|| = min({t}, 1 - {t}) for a real t.
double nearest_int_distance(double t);
long double nearest_int_distance(long double t);

/// Converts a raw 128-bit fraction to long double / double.
long double raw_to_long_double(u128 raw);
double raw_to_double(u128 raw);

/// 2^-80 in raw units; orbit hits this close to an arc endpoint are boundary-critical.
inline constexpr u128 kBoundaryCriticalRaw = u128{1} << 48;

std::string u128_to_string(u128 v);

}  // namespace specflow
