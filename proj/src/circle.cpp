// SPDX-License-Identifier: Apache-2.0
#include "specflow/circle.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>

#include "specflow/errors.hpp"

namespace specflow {

namespace mp = boost::multiprecision;

namespace {

// cpp_int treats a leading 0 as an octal prefix.
mp::cpp_int decimal(std::string_view digits) {
    std::size_t i = digits.find_first_not_of('0');
    if (i == std::string_view::npos) return 0;
    return mp::cpp_int(std::string(digits.substr(i)));
}

mp::cpp_int to_big(u128 v) {
    mp::cpp_int r = static_cast<std::uint64_t>(v >> 64);
    r <<= 64;
    r += static_cast<std::uint64_t>(v);
    return r;
}

u128 from_big(const mp::cpp_int& v) {
    const mp::cpp_int mask = (mp::cpp_int(1) << 64) - 1;
    const auto lo = static_cast<std::uint64_t>(v & mask);
    const auto hi = static_cast<std::uint64_t>((v >> 64) & mask);
    return (static_cast<u128>(hi) << 64) | lo;
}

// floor({num/den} * 2^128) for den > 0.
u128 fraction_raw(mp::cpp_int num, const mp::cpp_int& den) {
    mp::cpp_int r = num % den;
    if (r < 0) r += den;
    return from_big((r << 128) / den);
}

}  // namespace

long double raw_to_long_double(u128 raw) {
    const auto hi = static_cast<std::uint64_t>(raw >> 64);
    const auto lo = static_cast<std::uint64_t>(raw);
    return std::ldexp(static_cast<long double>(hi), -64) + std::ldexp(static_cast<long double>(lo), -128);
}

double raw_to_double(u128 raw) { return static_cast<double>(raw_to_long_double(raw)); }

CirclePoint CirclePoint::from_long_double(long double x) {
    if (!std::isfinite(x)) throw ValidationError("circle point must be finite");
    if (x < 0) return -from_long_double(-x);
    long double frac = x - std::floor(x);
    long double scaled = std::ldexp(frac, 64);
    long double hi = std::floor(scaled);
    long double lo = std::floor(std::ldexp(scaled - hi, 64));
    if (hi >= 18446744073709551616.0L) return CirclePoint(0);
    return CirclePoint((static_cast<u128>(static_cast<std::uint64_t>(hi)) << 64) |
                       static_cast<std::uint64_t>(lo));
}

CirclePoint CirclePoint::from_double(double x) { return from_long_double(static_cast<long double>(x)); }

CirclePoint CirclePoint::from_rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw ValidationError("rational circle point with zero denominator");
    mp::cpp_int n = num, d = den;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    return CirclePoint(fraction_raw(n, d));
}

CirclePoint CirclePoint::parse(std::string_view text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw ValidationError("empty circle point");

    auto parse_int = [&](std::string_view t) {
        if (t.empty()) throw ValidationError("bad circle point '" + s + "'");
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) throw ValidationError("bad circle point '" + s + "'");
        for (std::size_t k = i; k < t.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(t[k])))
                throw ValidationError("bad circle point '" + s + "'");
        mp::cpp_int v = decimal(t.substr(i));
        return t[0] == '-' ? mp::cpp_int(-v) : v;
    };

    if (auto slash = s.find('/'); slash != std::string::npos) {
        mp::cpp_int num = parse_int(std::string_view(s).substr(0, slash));
        mp::cpp_int den = parse_int(std::string_view(s).substr(slash + 1));
        if (den == 0) throw ValidationError("rational circle point with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        return CirclePoint(fraction_raw(num, den));
    }

    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
    }
    std::string digits;
    std::size_t frac_digits = 0;
    bool seen_point = false;
    for (; i < s.size(); ++i) {
        char ch = s[i];
        if (ch == '.' && !seen_point) {
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            digits.push_back(ch);
            if (seen_point) ++frac_digits;
        } else {
            throw ValidationError("bad circle point '" + s + "'");
        }
    }
    if (digits.empty()) throw ValidationError("bad circle point '" + s + "'");
    mp::cpp_int num = decimal(digits);
    if (neg) num = -num;
    mp::cpp_int den = mp::pow(mp::cpp_int(10), static_cast<unsigned>(frac_digits));
    return CirclePoint(fraction_raw(num, den));
}

double CirclePoint::to_double() const { return raw_to_double(raw_); }
long double CirclePoint::to_long_double() const { return raw_to_long_double(raw_); }

std::string CirclePoint::to_decimal() const {
    // Digits of (raw + 1/2) / 2^128 truncated to 40 places; parse() floors back to raw.
    mp::cpp_int n = ((to_big(raw_) * 2 + 1) * mp::pow(mp::cpp_int(10), 40)) >> 129;
    std::string d = n.str();
    if (d.size() < 40) d.insert(0, 40 - d.size(), '0');
    return "0." + d;
}

long double arc_length(CirclePoint from, CirclePoint to) { return raw_to_long_double((to - from).raw()); }

long double circle_distance(CirclePoint a, CirclePoint b) {
    u128 d = (a - b).raw();
    u128 e = u128{0} - d;
    return raw_to_long_double(d < e ? d : e);
}

double nearest_int_distance(double t) {
    double f = t - std::floor(t);
    return std::min(f, 1.0 - f);
}

long double nearest_int_distance(long double t) {
    long double f = t - std::floor(t);
    return std::min(f, 1.0L - f);
}

std::string u128_to_string(u128 v) { return to_big(v).str(); }

}  // namespace specflow
