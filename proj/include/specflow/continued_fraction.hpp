// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "specflow/circle.hpp"

namespace specflow {

using BigInt = boost::multiprecision::cpp_int;

/// A real quadratic irrational reduced into (0,1).
///
/// Stored in the canonical CF state form (P + sqrt(D)) / Q with D > 0 not a
/// perfect square and Q | D - P^2. The sign of Q carries the sign of the
/// surd, so both (a + sqrt b)/c and (a - sqrt b)/c are representable.
class QuadraticIrrational {
public:
    /// Parses "(a+sqrt(b))/c", "(a-sqrt(b))/c", "(a+k*sqrt(b))/c", "sqrt(b)-a", ...
    static QuadraticIrrational parse(std::string_view text);
    /// (a + k sqrt(b)) / c, then reduced mod 1.
    static QuadraticIrrational from_parts(const BigInt& a, const BigInt& k, const BigInt& b, const BigInt& c);

    const BigInt& P() const { return p_; }
    const BigInt& D() const { return d_; }
    const BigInt& Q() const { return q_; }

    /// Canonical text "(a+sqrt(b))/c" with b squarefree and gcd(a,k,c) = 1.
    std::string text() const;
    long double approx() const;
    /// floor(value * 2^128), exact.
    u128 fixed_point() const;

    friend bool operator==(const QuadraticIrrational&, const QuadraticIrrational&) = default;

private:
    QuadraticIrrational(BigInt p, BigInt d, BigInt q);
    BigInt p_, d_, q_;
};

/// Result of the two-sided approximation check 1/(2 q_n q_{n+1}) < |alpha - p_n/q_n| < 1/(q_n q_{n+1}).
struct SandwichCheck {
    bool lower = false;
    bool upper = false;
    bool ok() const { return lower && upper; }
};

/// alpha = [0; a_1, a_2, ...] with exact convergents p_n / q_n, n = 0..depth.
///
/// q_0 = 1, q_1 = a_1, q_{n+1} = a_{n+1} q_n + q_{n-1}; likewise p_0 = 0, p_1 = 1.
class ContinuedFraction {
public:
    /// Expands a quadratic irrational. precision_bits in [32, 128] truncates
    /// the fixed-point alpha used for orbit arithmetic.
    static ContinuedFraction expand(const QuadraticIrrational& alpha, int depth, int precision_bits = 128);
    /// A plain double alpha. Quotients stop where the double stops determining
    /// them, and the result is flagged low_precision.
    static ContinuedFraction from_double(double alpha, int depth);

    int depth() const { return static_cast<int>(quotients_.size()); }
    const std::vector<std::uint64_t>& quotients() const { return quotients_; }
    /// a_n for 1 <= n <= depth, or beyond depth once periodicity is known.
    std::uint64_t quotient(int n) const;

    const BigInt& p(int n) const;
    const BigInt& q(int n) const;
    /// q_n as an integer count; throws PrecisionError past depth or past 2^63.
    std::uint64_t q_u64(int n) const;
    /// Smallest n with q_n > bound, or nullopt past the materialized depth.
    std::optional<int> first_index_q_above(std::uint64_t bound) const;

    /// C = sup a_n + 1: exact over the period when periodic, else over the window.
    int C() const { return c_; }
    bool periodic() const { return period_ > 0; }
    int preperiod() const { return preperiod_; }
    int period() const { return period_; }

    CirclePoint alpha() const { return alpha_; }
    long double alpha_approx() const { return alpha_approx_; }
    bool low_precision() const { return low_precision_; }
    int precision_bits() const { return precision_bits_; }
    const std::optional<QuadraticIrrational>& source() const { return source_; }

    /// Exact rational check of the approximation sandwich at index n (0 <= n < depth).
    SandwichCheck sandwich(int n) const;
    /// ||q_n alpha|| at working precision.
    long double distance_qn_alpha(int n) const;

private:
    void build_convergents();
    std::uint64_t quotient_from_period(int n, const std::vector<std::uint64_t>& head) const;

    std::vector<std::uint64_t> quotients_;
    std::vector<std::uint64_t> period_quotients_;
    std::vector<BigInt> p_, q_;
    int preperiod_ = 0;
    int period_ = 0;
    int c_ = 1;
    CirclePoint alpha_;
    long double alpha_approx_ = 0;
    bool low_precision_ = false;
    int precision_bits_ = 128;
    std::optional<QuadraticIrrational> source_;
};

/// Raw-unit tolerance used to decide that two gap lengths coincide (1e-24).
inline constexpr u128 kGapDistinctTolerance = static_cast<u128>(340282366920938ULL);

/// The partition of T by {0, -alpha, ..., -(k-1) alpha}.
struct GapPartition {
    std::size_t k = 0;
    std::vector<u128> gaps;      ///< ascending; raw 0 stands for the full circle (k = 1)
    std::vector<u128> distinct;  ///< representative of each tolerance class, ascending
    long double length(std::size_t i) const;
    long double min_length() const { return length(0); }
    long double max_length() const { return length(gaps.size() - 1); }
    long double total_length() const;
};

GapPartition three_gap_partition(const ContinuedFraction& alpha, std::size_t k,
                                 u128 tolerance = kGapDistinctTolerance);

struct GapConstants {
    long double c1 = 0;  ///< strict upper constant: k * max gap < c1 for all k <= k_max
    long double c2 = 0;  ///< lower constant: k * min gap >= c2 for all k <= k_max
    std::size_t k_max = 0;
};

/// Empirical constants of the k-point gap bounds, by incremental insertion.
GapConstants estimate_gap_constants(const ContinuedFraction& alpha, std::size_t k_max);

}  // namespace specflow
