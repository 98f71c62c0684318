// SPDX-License-Identifier: Apache-2.0
#include "specflow/continued_fraction.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "specflow/errors.hpp"

namespace specflow {

namespace mp = boost::multiprecision;

namespace {

BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;  // truncates toward zero
    if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
    return q;
}

BigInt abs_big(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

BigInt isqrt(const BigInt& v) { return mp::sqrt(v); }

bool is_square(const BigInt& v) {
    if (v < 0) return false;
    BigInt s = isqrt(v);
    return s * s == v;
}

// floor((P + sqrt(D)) / Q) for non-square D.
BigInt floor_state(const BigInt& p, const BigInt& d, const BigInt& q) {
    BigInt s = isqrt(d);
    if (q > 0) return floor_div(p + s, q);
    return -floor_div(p + s, -q) - 1;
}

u128 to_u128(const BigInt& v) {
    const BigInt mask = (BigInt(1) << 64) - 1;
    auto lo = static_cast<std::uint64_t>(v & mask);
    auto hi = static_cast<std::uint64_t>((v >> 64) & mask);
    return (static_cast<u128>(hi) << 64) | lo;
}

BigInt from_u128(u128 v) {
    BigInt r = static_cast<std::uint64_t>(v >> 64);
    r <<= 64;
    r += static_cast<std::uint64_t>(v);
    return r;
}

std::uint64_t checked_quotient(const BigInt& a) {
    if (a <= 0 || a > BigInt(std::numeric_limits<std::uint64_t>::max()))
        throw PrecisionError("partial quotient does not fit 64 bits");
    return static_cast<std::uint64_t>(a);
}

// Tokenizer for the small surd grammar: sum of terms [+-] int | [+-] [int*] sqrt(int),
// optionally parenthesised and divided by an integer.
struct SurdParser {
    std::string s;
    std::size_t i = 0;
    BigInt rational = 0;
    BigInt coeff = 0;
    BigInt radicand = 0;
    bool has_sqrt = false;

    [[noreturn]] void fail() const { throw ValidationError("cannot parse quadratic irrational '" + s + "'"); }
    bool peek(char c) const { return i < s.size() && s[i] == c; }
    bool eat(std::string_view t) {
        if (s.compare(i, t.size(), t) == 0) {
            i += t.size();
            return true;
        }
        return false;
    }
    BigInt integer() {
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j == i) fail();
        std::size_t k = i;
        while (k + 1 < j && s[k] == '0') ++k;  // cpp_int reads a leading 0 as octal
        BigInt v(s.substr(k, j - k));
        i = j;
        return v;
    }
    void sqrt_term(const BigInt& k) {
        if (!eat("sqrt(")) fail();
        BigInt b = integer();
        if (!eat(")")) fail();
        if (has_sqrt && b != radicand) fail();
        has_sqrt = true;
        radicand = b;
        coeff += k;
    }
    void term(bool first) {
        int sign = 1;
        if (peek('+') || peek('-')) {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (!first) {
            fail();
        }
        if (s.compare(i, 5, "sqrt(") == 0) {
            sqrt_term(BigInt(sign));
            return;
        }
        BigInt v = integer();
        if (eat("*")) {
            sqrt_term(sign * v);
        } else {
            rational += sign * v;
        }
    }
    void sum() {
        term(true);
        while (i < s.size() && (peek('+') || peek('-'))) term(false);
    }
};

}  // namespace

// ---------------------------------------------------------------- QuadraticIrrational

QuadraticIrrational::QuadraticIrrational(BigInt p, BigInt d, BigInt q)
    : p_(std::move(p)), d_(std::move(d)), q_(std::move(q)) {}

QuadraticIrrational QuadraticIrrational::from_parts(const BigInt& a, const BigInt& k, const BigInt& b,
                                                    const BigInt& c) {
    if (c == 0) throw ValidationError("quadratic irrational with zero denominator");
    if (k == 0) throw ValidationError("quadratic irrational without a surd is rational");
    if (b <= 0) throw ValidationError("radicand must be positive");
    if (is_square(b)) throw ValidationError("radicand " + b.str() + " is a perfect square: value is rational");
    // (a + k sqrt b)/c = (a|c| + sgn(k) sqrt(b k^2 c^2)) / (c|c|) up to the surd sign.
    BigInt ac = abs_big(c);
    BigInt d = b * k * k * c * c;
    BigInt p = a * ac;
    BigInt q = c * ac;
    if (k < 0) {
        p = -p;
        q = -q;
    }
    // Remove the integer part: x - n = (P - nQ + sqrt D)/Q.
    BigInt n = floor_state(p, d, q);
    p -= n * q;
    // Divide out common factors f of (P, Q) with f^2 | D while keeping Q | D - P^2.
    for (BigInt f = 2; f <= 1000000; ++f) {
        if (f > mp::gcd(abs_big(p), abs_big(q))) break;
        while (p % f == 0 && q % f == 0 && d % (f * f) == 0 &&
               ((d / (f * f) - (p / f) * (p / f)) % (q / f)) == 0) {
            p /= f;
            q /= f;
            d /= f * f;
        }
    }
    return QuadraticIrrational(p, d, q);
}

QuadraticIrrational QuadraticIrrational::parse(std::string_view text) {
    SurdParser ps;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) ps.s.push_back(ch);
    if (ps.s.empty()) ps.fail();
    BigInt den = 1;
    if (ps.peek('(')) {
        ++ps.i;
        ps.sum();
        if (!ps.eat(")")) ps.fail();
    } else {
        ps.sum();
    }
    if (ps.eat("/")) {
        int sign = 1;
        if (ps.peek('-') || ps.peek('+')) {
            sign = ps.s[ps.i] == '-' ? -1 : 1;
            ++ps.i;
        }
        den = sign * ps.integer();
    }
    if (ps.i != ps.s.size()) ps.fail();
    if (!ps.has_sqrt || ps.coeff == 0) throw ValidationError("'" + ps.s + "' has no irrational part");
    return from_parts(ps.rational, ps.coeff, ps.radicand, den);
}

std::string QuadraticIrrational::text() const {
    // value = (P + sqrt D)/Q; pull the square part out of D.
    BigInt k = 1, b = d_;
    for (BigInt f = 2; f * f <= b && f < 100000; ++f) {
        BigInt f2 = f * f;
        while (b % f2 == 0) {
            b /= f2;
            k *= f;
        }
    }
    BigInt a = p_, c = q_;
    if (c < 0) {
        a = -a;
        c = -c;
        k = -k;
    }
    BigInt g = mp::gcd(mp::gcd(abs_big(a), abs_big(k)), c);
    a /= g;
    k /= g;
    c /= g;
    std::string out = "(" + a.str();
    out += k < 0 ? "-" : "+";
    BigInt ak = abs_big(k);
    if (ak != 1) out += ak.str() + "*";
    out += "sqrt(" + b.str() + "))/" + c.str();
    return out;
}

u128 QuadraticIrrational::fixed_point() const {
    BigInt s = isqrt(d_ << 256);
    BigInt num = (p_ << 128) + s;
    BigInt v = q_ > 0 ? floor_div(num, q_) : BigInt(-floor_div(num, -q_) - 1);
    return to_u128(v);
}

long double QuadraticIrrational::approx() const { return raw_to_long_double(fixed_point()); }

// ---------------------------------------------------------------- ContinuedFraction

ContinuedFraction ContinuedFraction::expand(const QuadraticIrrational& alpha, int depth, int precision_bits) {
    if (depth < 1) throw ValidationError("continued fraction depth must be >= 1");
    if (precision_bits < 32 || precision_bits > 128)
        throw ValidationError("precision bits must lie in [32, 128]");
    ContinuedFraction cf;
    cf.source_ = alpha;
    cf.precision_bits_ = precision_bits;

    const BigInt& d = alpha.D();
    // x_1 = 1/alpha = (-P0 + sqrt D) / ((D - P0^2)/Q0)
    BigInt p = -alpha.P();
    BigInt q = (d - alpha.P() * alpha.P()) / alpha.Q();

    std::map<std::pair<BigInt, BigInt>, int> seen;
    std::vector<std::uint64_t> all;
    constexpr int kPeriodSearchCap = 200000;
    while (true) {
        int index = static_cast<int>(all.size()) + 1;  // 1-based index of the quotient at this state
        auto [it, inserted] = seen.try_emplace({p, q}, index);
        if (!inserted) {
            cf.preperiod_ = it->second - 1;
            cf.period_ = index - it->second;
            break;
        }
        if (index > kPeriodSearchCap) break;
        BigInt a = floor_state(p, d, q);
        all.push_back(checked_quotient(a));
        p = a * q - p;
        q = (d - p * p) / q;
    }
    if (cf.period_ > 0) {
        cf.period_quotients_.assign(all.begin() + cf.preperiod_, all.begin() + cf.preperiod_ + cf.period_);
        std::uint64_t sup = *std::max_element(all.begin(), all.end());
        cf.c_ = static_cast<int>(std::min<std::uint64_t>(sup, 1u << 30)) + 1;
        cf.quotients_.reserve(depth);
        for (int n = 1; n <= depth; ++n) cf.quotients_.push_back(cf.quotient_from_period(n, all));
    } else {
        if (static_cast<int>(all.size()) < depth) throw PrecisionError("quotient materialization cap reached");
        cf.quotients_.assign(all.begin(), all.begin() + depth);
        std::uint64_t sup = *std::max_element(cf.quotients_.begin(), cf.quotients_.end());
        cf.c_ = static_cast<int>(std::min<std::uint64_t>(sup, 1u << 30)) + 1;
    }

    u128 raw = alpha.fixed_point();
    if (precision_bits < 128) raw &= ~((u128{1} << (128 - precision_bits)) - 1);
    cf.alpha_ = CirclePoint::from_raw(raw);
    cf.alpha_approx_ = raw_to_long_double(raw);
    cf.build_convergents();
    return cf;
}

std::uint64_t ContinuedFraction::quotient_from_period(int n, const std::vector<std::uint64_t>& head) const {
    if (n <= static_cast<int>(head.size()) && n <= preperiod_ + period_) return head[n - 1];
    int offset = (n - 1 - preperiod_) % period_;
    return period_quotients_[offset];
}

ContinuedFraction ContinuedFraction::from_double(double alpha, int depth) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("low-precision alpha must lie in (0,1)");
    if (depth < 1) throw ValidationError("continued fraction depth must be >= 1");
    ContinuedFraction cf;
    cf.low_precision_ = true;
    cf.precision_bits_ = 53;
    int exp = 0;
    double mant = std::frexp(alpha, &exp);
    BigInt num = static_cast<std::int64_t>(std::ldexp(mant, 53));
    BigInt den = BigInt(1) << (53 - exp);
    // alpha = num/den; expand 1/alpha = den/num ... while convergents stay trustworthy.
    BigInt a_num = den, a_den = num;
    BigInt q_prev = 0, q_cur = 1;
    const BigInt trust = BigInt(1) << 26;
    while (static_cast<int>(cf.quotients_.size()) < depth && a_den != 0) {
        BigInt a = a_num / a_den;
        BigInt q_next = a * q_cur + q_prev;
        if (q_next > trust) break;
        cf.quotients_.push_back(checked_quotient(a));
        BigInt r = a_num - a * a_den;
        a_num = a_den;
        a_den = r;
        q_prev = q_cur;
        q_cur = q_next;
    }
    if (cf.quotients_.empty()) throw PrecisionError("double alpha determines no partial quotient");
    std::uint64_t sup = *std::max_element(cf.quotients_.begin(), cf.quotients_.end());
    cf.c_ = static_cast<int>(std::min<std::uint64_t>(sup, 1u << 30)) + 1;
    cf.alpha_ = CirclePoint::from_double(alpha);
    cf.alpha_approx_ = alpha;
    cf.build_convergents();
    return cf;
}

void ContinuedFraction::build_convergents() {
    const int n = depth();
    p_.assign(n + 1, 0);
    q_.assign(n + 1, 0);
    p_[0] = 0;
    q_[0] = 1;
    BigInt p_prev = 1, q_prev = 0;  // index -1
    for (int k = 1; k <= n; ++k) {
        BigInt a = quotients_[k - 1];
        p_[k] = a * p_[k - 1] + p_prev;
        q_[k] = a * q_[k - 1] + q_prev;
        p_prev = p_[k - 1];
        q_prev = q_[k - 1];
    }
}

std::uint64_t ContinuedFraction::quotient(int n) const {
    if (n < 1) throw ValidationError("partial quotients are indexed from 1");
    if (n <= depth()) return quotients_[n - 1];
    if (period_ == 0) throw PrecisionError("quotient index beyond materialized depth");
    return period_quotients_[(n - 1 - preperiod_) % period_];
}

const BigInt& ContinuedFraction::p(int n) const {
    if (n < 0 || n > depth()) throw PrecisionError("convergent index " + std::to_string(n) + " beyond depth");
    return p_[n];
}

const BigInt& ContinuedFraction::q(int n) const {
    if (n < 0 || n > depth()) throw PrecisionError("convergent index " + std::to_string(n) + " beyond depth");
    return q_[n];
}

std::uint64_t ContinuedFraction::q_u64(int n) const {
    const BigInt& v = q(n);
    if (v > BigInt(std::numeric_limits<std::int64_t>::max())) throw PrecisionError("q_n exceeds 2^63");
    return static_cast<std::uint64_t>(v);
}

std::optional<int> ContinuedFraction::first_index_q_above(std::uint64_t bound) const {
    for (int n = 0; n <= depth(); ++n)
        if (q_[n] > bound) return n;
    return std::nullopt;
}

SandwichCheck ContinuedFraction::sandwich(int n) const {
    if (n < 0 || n + 1 > depth()) throw PrecisionError("sandwich check needs q_{n+1}");
    // alpha lies in [A, A + w] / 2^128 where w is the truncation width.
    BigInt a_lo, a_hi;
    if (source_) {
        a_lo = from_u128(source_->fixed_point());
        a_hi = a_lo + 1;
    } else {
        a_lo = from_u128(alpha_.raw());
        a_hi = a_lo + (BigInt(1) << (128 - 53));
    }
    const BigInt one = BigInt(1) << 128;
    const BigInt& pn = p_[n];
    const BigInt& qn = q_[n];
    const BigInt& qn1 = q_[n + 1];
    // e(a) = a*q_n - p_n*2^128, so alpha - p/q = e / (q_n 2^128).
    BigInt e_lo = a_lo * qn - pn * one;
    BigInt e_hi = a_hi * qn - pn * one;
    SandwichCheck out;
    if ((e_lo > 0) == (e_hi > 0) && e_lo != 0 && e_hi != 0) {
        BigInt min_abs = std::min(abs_big(e_lo), abs_big(e_hi));
        BigInt max_abs = std::max(abs_big(e_lo), abs_big(e_hi));
        out.lower = 2 * qn1 * min_abs > one;
        out.upper = qn1 * max_abs < one;
    }
    return out;
}

long double ContinuedFraction::distance_qn_alpha(int n) const {
    std::uint64_t qn = q_u64(n);
    return circle_distance(alpha_.times(static_cast<std::int64_t>(qn)), CirclePoint{});
}

// ---------------------------------------------------------------- three-gap geometry

long double GapPartition::length(std::size_t i) const {
    return gaps.at(i) == 0 ? 1.0L : raw_to_long_double(gaps[i]);
}

long double GapPartition::total_length() const {
    long double s = 0;
    for (std::size_t i = 0; i < gaps.size(); ++i) s += length(i);
    return s;
}

namespace {

std::vector<u128> distinct_classes(const std::vector<u128>& sorted, u128 tolerance) {
    std::vector<u128> out;
    for (u128 g : sorted)
        if (out.empty() || g - out.back() > tolerance) out.push_back(g);
    return out;
}

}  // namespace

GapPartition three_gap_partition(const ContinuedFraction& alpha, std::size_t k, u128 tolerance) {
    if (k < 1) throw ValidationError("three-gap partition needs k >= 1");
    const CirclePoint step = -alpha.alpha();
    std::vector<u128> pts(k);
    CirclePoint x{};
    for (std::size_t j = 0; j < k; ++j) {
        pts[j] = x.raw();
        x += step;
    }
    std::sort(pts.begin(), pts.end());
    GapPartition out;
    out.k = k;
    out.gaps.resize(k);
    for (std::size_t j = 0; j + 1 < k; ++j) out.gaps[j] = pts[j + 1] - pts[j];
    out.gaps[k - 1] = pts[0] - pts[k - 1];  // wraps; 0 when k = 1 (full circle)
    std::sort(out.gaps.begin(), out.gaps.end(), [](u128 a, u128 b) {
        // raw 0 is the full circle and sorts last
        if (a == 0) return false;
        if (b == 0) return true;
        return a < b;
    });
    out.distinct = (k == 1) ? std::vector<u128>{0} : distinct_classes(out.gaps, tolerance);
    return out;
}

GapConstants estimate_gap_constants(const ContinuedFraction& alpha, std::size_t k_max) {
    if (k_max < 2) throw ValidationError("gap constants need k_max >= 2");
    std::set<u128> points{0};
    std::multiset<u128> gaps;  // k = 1: full circle, handled separately
    long double c1 = 1.0L, c2 = 1.0L;
    const CirclePoint step = -alpha.alpha();
    CirclePoint x = step;
    for (std::size_t k = 2; k <= k_max; ++k, x += step) {
        const u128 v = x.raw();
        auto next = points.upper_bound(v);
        u128 succ = next == points.end() ? *points.begin() : *next;
        u128 pred = next == points.begin() ? *points.rbegin() : *std::prev(next);
        if (k > 2) gaps.erase(gaps.find(succ - pred));
        gaps.insert(v - pred);
        gaps.insert(succ - v);
        points.insert(v);
        const long double kk = static_cast<long double>(k);
        c2 = std::min(c2, kk * raw_to_long_double(*gaps.begin()));
        c1 = std::max(c1, kk * raw_to_long_double(*gaps.rbegin()));
    }
    GapConstants out;
    out.c1 = std::nextafter(c1, std::numeric_limits<long double>::infinity());
    out.c2 = c2;
    out.k_max = k_max;
    return out;
}

}  // namespace specflow
