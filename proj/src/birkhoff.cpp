// SPDX-License-Identifier: Apache-2.0
#include "specflow/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specflow/errors.hpp"

namespace specflow {

namespace {

constexpr double kUnit = std::numeric_limits<double>::epsilon() / 2;

void check_cap(std::int64_t n, std::int64_t cap) {
    if (n > cap || n < -cap)
        throw PrecisionError("Birkhoff index " + std::to_string(n) + " exceeds the cap; achievable |n| <= " +
                             std::to_string(cap));
}

}  // namespace

void CompensatedSum::add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
        comp_ += (sum_ - t) + v;
    else
        comp_ += (v - t) + sum_;
    sum_ = t;
    abs_ += std::abs(v);
    ++n_;
}

double CompensatedSum::error_bound() const {
    const double n = static_cast<double>(n_);
    return 2.0 * kUnit * std::abs(value()) + 4.0 * n * kUnit * kUnit * abs_;
}

double evaluation_error(const RoofFunction& f) {
    const double scale = std::abs(f.constant()) + f.abs_jump_sum() +
                         std::max(std::abs(f.lower_bound()), std::abs(f.upper_bound()));
    return 2.0 * kUnit * static_cast<double>(f.jump_count() + 4) * scale;
}

// ------------------------------------------------------------------- ledger

BirkhoffLedger::BirkhoffLedger(const RoofFunction& f, CirclePoint alpha, CirclePoint x, std::int64_t cap)
    : f_(&f), alpha_(alpha), x_(x), cap_(cap), eval_err_(evaluation_error(f)) {
    pos_.push_back({0.0, 0.0});
    neg_.push_back({0.0, 0.0});
    pos_next_ = x;
    neg_next_ = x - alpha;
}

void BirkhoffLedger::extend_to(std::int64_t n) {
    check_cap(n, cap_);
    if (n >= 0) {
        while (static_cast<std::int64_t>(pos_.size()) <= n) {
            pos_acc_.add(f_->evaluate(pos_next_));
            pos_next_ += alpha_;
            pos_.push_back({pos_acc_.value(), pos_acc_.error_bound() + pos_acc_.count() * eval_err_});
        }
    } else {
        while (static_cast<std::int64_t>(neg_.size()) <= -n) {
            neg_acc_.add(f_->evaluate(neg_next_));
            neg_next_ -= alpha_;
            neg_.push_back({-neg_acc_.value(), neg_acc_.error_bound() + neg_acc_.count() * eval_err_});
        }
    }
}

const BirkhoffLedger::Entry& BirkhoffLedger::entry(std::int64_t n) {
    extend_to(n);
    return n >= 0 ? pos_[static_cast<std::size_t>(n)] : neg_[static_cast<std::size_t>(-n)];
}

double BirkhoffLedger::sum(std::int64_t n) { return entry(n).value; }
double BirkhoffLedger::error_bound(std::int64_t n) { return entry(n).error; }

double birkhoff_sum(const RoofFunction& f, const ContinuedFraction& alpha, CirclePoint x, std::int64_t n,
                    std::int64_t cap) {
    check_cap(n, cap);
    if (n == 0) return 0.0;
    CompensatedSum acc;
    if (n > 0) {
        CirclePoint p = x;
        for (std::int64_t k = 0; k < n; ++k, p += alpha.alpha()) acc.add(f.evaluate(p));
        return acc.value();
    }
    CirclePoint p = x - alpha.alpha();
    for (std::int64_t k = 0; k < -n; ++k, p -= alpha.alpha()) acc.add(f.evaluate(p));
    return -acc.value();
}

// --------------------------------------------------------------------- flow

SpecialFlowPoint make_flow_point(const RoofFunction& f, CirclePoint x, double s) {
    if (!(s >= 0.0) || !(s < f.evaluate(x)))
        throw ValidationError("flow point height must satisfy 0 <= s < f(x)");
    return {x, s};
}

SpecialFlowPoint flow_map(const RoofFunction& f, const ContinuedFraction& alpha, SpecialFlowPoint pt, double t,
                          std::int64_t cap) {
    f.require_positive("flow_map");
    if (!std::isfinite(t) || std::abs(t) > static_cast<double>(cap) * f.lower_bound())
        throw PrecisionError("flow time " + std::to_string(t) + " exceeds cap * m = " +
                             std::to_string(static_cast<double>(cap) * f.lower_bound()));
    if (t == 0.0) return pt;
    BirkhoffLedger lg(f, alpha.alpha(), pt.x, cap);
    const double target = pt.s + t;
    std::int64_t n = 0;
    if (target >= 0.0) {
        while (lg.sum(n + 1) <= target) ++n;
    } else {
        while (lg.sum(n) > target) --n;
    }
    return {lg.position(n), target - lg.sum(n)};
}

// ---------------------------------------------------------- Denjoy-Koksma

DenjoyKoksma denjoy_koksma_residual(const RoofFunction& f, const ContinuedFraction& alpha, CirclePoint x,
                                    int n_index) {
    DenjoyKoksma out;
    out.q = alpha.q_u64(n_index);
    check_cap(static_cast<std::int64_t>(out.q), kBirkhoffCap);
    CompensatedSum acc;
    CirclePoint p = x;
    for (std::uint64_t k = 0; k < out.q; ++k, p += alpha.alpha()) acc.add(f.evaluate(p));
    const double mean = f.integral();
    const double q = static_cast<double>(out.q);
    out.residual = std::abs(acc.value() - q * mean);
    out.variation = f.variation();
    out.error_bound = acc.error_bound() + q * evaluation_error(f) + 4.0 * kUnit * q * std::abs(mean);
    return out;
}

// ----------------------------------------------------------- hit counting

HitCount jump_hit_count(CirclePoint alpha, CirclePoint beta, CirclePoint x, CirclePoint y, std::int64_t n) {
    if (x == y) throw ValidationError("jump_hit_count needs x != y");
    HitCount out;
    const u128 span = (y - x).raw();
    CirclePoint p = beta;
    for (std::int64_t j = 0; j < n; ++j, p -= alpha) {
        const u128 off = (p - x).raw();
        if (off != 0 && off <= span) ++out.count;
        const u128 to_y = off > span ? off - span : span - off;
        if (off < kBoundaryCriticalRaw || u128{0} - off < kBoundaryCriticalRaw || to_y < kBoundaryCriticalRaw)
            out.boundary_critical = true;
    }
    return out;
}

DriftIdentity drift_identity(const RoofFunction& f_pl, const ContinuedFraction& alpha, CirclePoint x, CirclePoint y,
                             std::int64_t n) {
    if (!f_pl.ac().is_zero()) throw ValidationError("drift identity needs a roof with ac = 0");
    if (x == y) throw ValidationError("drift identity needs x != y");
    check_cap(n, kBirkhoffCap);
    DriftIdentity out;
    if (n <= 0) return out;

    CompensatedSum lhs;
    CirclePoint px = x, py = y;
    for (std::int64_t k = 0; k < n; ++k, px += alpha.alpha(), py += alpha.alpha())
        lhs.add(f_pl.evaluate(py) - f_pl.evaluate(px));
    out.lhs = lhs.value();
    out.linear_term = static_cast<double>(static_cast<long double>(n) * f_pl.S() * arc_length(x, y));

    long double dbar = 0;
    for (const auto& j : f_pl.jumps()) {
        HitCount h = jump_hit_count(alpha.alpha(), j.beta, x, y, n);
        out.hits.push_back(h.count);
        out.boundary_critical = out.boundary_critical || h.boundary_critical;
        dbar += static_cast<long double>(h.count) * j.d;
    }
    out.dbar = static_cast<double>(dbar);
    out.tolerance = 1e-9 + lhs.error_bound() + 2.0 * static_cast<double>(n) * evaluation_error(f_pl);
    if (!out.boundary_critical && std::abs(out.lhs - (out.linear_term - out.dbar)) > out.tolerance)
        throw ConsistencyError("drift identity violated: lhs " + std::to_string(out.lhs) + ", linear - dbar " +
                               std::to_string(out.linear_term - out.dbar));
    return out;
}

double ac_equicontinuity_scan(const ACComponent& ac, const ContinuedFraction& alpha, int s, int samples) {
    if (ac.is_zero() || samples <= 0) return 0.0;
    const std::uint64_t qs = alpha.q_u64(s);
    const std::uint64_t qs1 = alpha.q_u64(s + 1);
    const CirclePoint a = alpha.alpha();
    constexpr int kOffsets = 4;
    double best = 0.0;
#pragma omp parallel for reduction(max : best) schedule(static)
    for (int i = 0; i < samples; ++i) {
        const CirclePoint x = CirclePoint::from_rational(2 * i + 1, 2 * static_cast<std::int64_t>(samples));
        for (int k = -kOffsets; k <= kOffsets; ++k) {
            if (k == 0) continue;
            const double h = k * (1.0 - 1e-9) / (kOffsets * static_cast<double>(qs));
            CirclePoint px = x, py = x + CirclePoint::from_double(h);
            double diff = 0.0;
            for (std::uint64_t n = 1; n < qs1; ++n, px += a, py += a) {
                diff += ac.value(py.to_double()) - ac.value(px.to_double());
                best = std::max(best, std::abs(diff));
            }
        }
    }
    return best;
}

}  // namespace specflow
