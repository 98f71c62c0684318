// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "specflow/continued_fraction.hpp"
#include "specflow/roof.hpp"

namespace specflow {

inline constexpr std::int64_t kBirkhoffCap = 1'000'000;

/// Neumaier summation with a running a-priori error bound.
class CompensatedSum {
public:
    void add(double v);
    double value() const { return sum_ + comp_; }
    /// Bound on |value() - exact sum of the added doubles|.
    double error_bound() const;
    std::int64_t count() const { return n_; }

private:
    double sum_ = 0, comp_ = 0, abs_ = 0;
    std::int64_t n_ = 0;
};

/// Per-evaluation rounding bound of f, used to widen Birkhoff-sum error bounds.
double evaluation_error(const RoofFunction& f);

/// Cached cocycle values f^(n)(x) for n in a contiguous range around 0.
///
/// f^(0) = 0, f^(n) = sum_{k<n} f(x + k alpha) for n > 0 and
/// f^(n) = -sum_{n<=k<0} f(x + k alpha) for n < 0. Not shareable across threads.
class BirkhoffLedger {
public:
    BirkhoffLedger(const RoofFunction& f, CirclePoint alpha, CirclePoint x, std::int64_t cap = kBirkhoffCap);

    double sum(std::int64_t n);
    /// Rounding bound for sum(n).
    double error_bound(std::int64_t n);
    CirclePoint position(std::int64_t n) const { return x_ + alpha_.times(n); }
    CirclePoint x() const { return x_; }
    std::int64_t cached_min() const { return -static_cast<std::int64_t>(neg_.size()) + 1; }
    std::int64_t cached_max() const { return static_cast<std::int64_t>(pos_.size()) - 1; }

private:
    struct Entry {
        double value;
        double error;
    };
    void extend_to(std::int64_t n);
    const Entry& entry(std::int64_t n);

    const RoofFunction* f_;
    CirclePoint alpha_, x_;
    std::int64_t cap_;
    double eval_err_;
    std::vector<Entry> pos_;  ///< pos_[n] = f^(n), n >= 0
    std::vector<Entry> neg_;  ///< neg_[k] = f^(-k), k >= 0
    CompensatedSum pos_acc_, neg_acc_;
    CirclePoint pos_next_, neg_next_;
};

/// f^(n)(x). Throws PrecisionError if |n| exceeds cap.
double birkhoff_sum(const RoofFunction& f, const ContinuedFraction& alpha, CirclePoint x, std::int64_t n,
                    std::int64_t cap = kBirkhoffCap);

struct SpecialFlowPoint {
    CirclePoint x;
    double s = 0;
};

/// Validates 0 <= s < f(x).
SpecialFlowPoint make_flow_point(const RoofFunction& f, CirclePoint x, double s);

/// T_t^f(pt) = (T^n x, s + t - f^(n)(x)) with f^(n)(x) <= s + t < f^(n+1)(x).
SpecialFlowPoint flow_map(const RoofFunction& f, const ContinuedFraction& alpha, SpecialFlowPoint pt, double t,
                          std::int64_t cap = kBirkhoffCap);

struct DenjoyKoksma {
    std::uint64_t q = 0;
    double residual = 0;   ///< |f^(q)(x) - q * integral f|
    double variation = 0;  ///< exact Var f
    double error_bound = 0;
    bool within() const { return residual <= variation + error_bound; }
};

DenjoyKoksma denjoy_koksma_residual(const RoofFunction& f, const ContinuedFraction& alpha, CirclePoint x, int n_index);

struct HitCount {
    std::int64_t count = 0;
    bool boundary_critical = false;
};

/// #{0 <= j < n : {beta - j alpha} in (x, y]} on the positively oriented arc from x.
HitCount jump_hit_count(CirclePoint alpha, CirclePoint beta, CirclePoint x, CirclePoint y, std::int64_t n);

struct DriftIdentity {
    double lhs = 0;          ///< f^(n)(y) - f^(n)(x)
    double linear_term = 0;  ///< n S |arc(x, y)|
    double dbar = 0;         ///< sum_i m_i d_i
    std::vector<std::int64_t> hits;
    bool boundary_critical = false;
    double tolerance = 0;
};

/// Both sides of the jump-count identity for a roof with ac = 0. Throws
/// ConsistencyError when they disagree beyond the tracked tolerance.
DriftIdentity drift_identity(const RoofFunction& f_pl, const ContinuedFraction& alpha, CirclePoint x, CirclePoint y,
                             std::int64_t n);

/// Sampled sup over 0 <= n < q_{s+1} and ||y - x|| < 1/q_s of |ac^(n)(y) - ac^(n)(x)|.
double ac_equicontinuity_scan(const ACComponent& ac, const ContinuedFraction& alpha, int s, int samples);

}  // namespace specflow
