// SPDX-License-Identifier: Apache-2.0
#include "specflow/jump_combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specflow/errors.hpp"

namespace specflow {

double theta_denominator(int C, std::size_t j) {
    const double b = 2.0 * C + 1.0;
    return b * (std::pow(b, static_cast<double>(j)) + 1.0);
}

double theta_radius(double abs_s, int C, std::size_t j, double theta) {
    return abs_s / ((2.0 + theta) * theta_denominator(C, j));
}

std::optional<ThetaResult> theta_condition(const RoofFunction& f, int C) {
    if (C < 1) throw ValidationError("C must be >= 1");
    const double s_eff = std::abs(f.S()) - f.tail_bound();
    if (!(s_eff > 0)) return std::nullopt;
    for (std::size_t j = 1; j <= f.jump_count(); ++j) {
        const double den = theta_denominator(C, j);
        if (!std::isfinite(den)) break;
        const double tail = f.tail_after(j);
        double theta = tail == 0.0 ? kThetaMax : s_eff / (tail * den) - 2.0;
        if (theta > 0) return ThetaResult{j, std::min(theta, kThetaMax), tail};
    }
    return std::nullopt;
}

JumpSumSet jump_sum_set_D(const RoofFunction& f, int C, std::size_t j, double theta) {
    if (C < 1) throw ValidationError("C must be >= 1");
    if (j < 1 || j > f.jump_count()) throw ValidationError("truncation index outside the materialized jumps");
    const double size = std::pow(2.0 * C + 1.0, static_cast<double>(j));
    if (size > static_cast<double>(kJumpSumEnumerationCap))
        throw ValidationError("(2C+1)^j = " + std::to_string(size) + " exceeds the enumeration cap " +
                              std::to_string(kJumpSumEnumerationCap) + "; use a coarser truncation j");

    const double tol = 1e-12 * std::max(1.0, 2.0 * C * f.abs_jump_sum());
    std::vector<double> values{0.0};
    for (std::size_t i = 0; i < j; ++i) {
        const double d = f.jumps()[i].d;
        std::vector<double> next;
        next.reserve(values.size() * (2 * C + 1));
        for (int m = 0; m <= 2 * C; ++m)
            for (double v : values) next.push_back(v + m * d);
        std::sort(next.begin(), next.end());
        values.clear();
        for (double v : next)
            if (values.empty() || v - values.back() > tol) values.push_back(v);
    }
    JumpSumSet out;
    out.values = std::move(values);
    out.j = j;
    out.C = C;
    out.xi = theta_radius(std::abs(f.S()), C, j, theta);
    out.radius = std::max(out.xi, 2.0 * C * f.tail_after(j));
    return out;
}

DriftWindow drift_window(const RoofFunction& f, int C) {
    auto th = theta_condition(f, C);
    if (!th) throw HypothesisError("the tail condition on the jumps fails for every materialized truncation");
    DriftWindow w;
    w.theta = *th;
    w.set = jump_sum_set_D(f, C, th->j, th->theta);
    const double abs_s = std::abs(f.S());

    std::vector<double> pts{0.0, abs_s};
    for (double a : w.set.values)
        for (double v : {a, -a})
            if (v > 0.0 && v < abs_s) pts.push_back(v);
    std::sort(pts.begin(), pts.end());

    double best = -1;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double len = pts[i + 1] - pts[i];
        if (len > best * (1.0 + 1e-12)) {
            best = len;
            w.gap_lo = pts[i];
            w.gap_hi = pts[i + 1];
        }
    }
    w.p = 0.5 * (w.gap_lo + w.gap_hi);
    const double half = 0.5 * best;
    const double theta = th->theta;
    const double cap =
        0.99 * abs_s * theta / (2.0 * (2.0 + theta) * (std::pow(2.0 * C + 1.0, static_cast<double>(th->j)) + 1.0));
    w.eta = std::min(cap, 0.99 * (half - w.set.radius));
    if (!(w.eta > 0))
        throw HypothesisError("no drift window: largest gap " + std::to_string(best) + " is within the covering radius");

    for (double a : w.set.values)
        for (double v : {a, -a})
            if (std::abs(v - w.p) <= w.eta + w.set.radius)
                throw ConsistencyError("drift window contains an element of A u -A");
    return w;
}

StabilityCertificate perturbation_stability(const RoofFunction& f, const RoofFunction& g, int C) {
    StabilityCertificate c;
    auto th = theta_condition(f, C);
    if (!th) {
        c.reason = "f fails the tail condition";
        return c;
    }
    c.j = th->j;
    c.theta_f = th->theta;
    c.eta_g = (c.theta_f + 7.0) / c.theta_f * (1.0 + 1e-9);
    c.var_g = g.variation();
    const double abs_s = std::abs(f.S());
    c.bound = std::min(abs_s / ((2.0 + c.eta_g) * theta_denominator(C, c.j)), std::abs(f.jumps()[c.j - 1].d));
    c.admissible = c.var_g <= c.bound;
    if (!c.admissible) {
        c.reason = "Var g exceeds the admissible bound";
        return c;
    }
    c.theta = 0.5 / (4.0 + c.theta_f + c.eta_g);
    const RoofFunction h = f + g;
    const double s_eff = std::abs(h.S()) - h.tail_bound();
    c.reverified = h.jump_count() >= c.j && s_eff > 0 &&
                   h.tail_after(c.j) <= s_eff / ((2.0 + c.theta) * theta_denominator(C, c.j));
    if (!c.reverified) c.reason = "f + g fails the tail condition at (j_f, theta_{f+g})";
    return c;
}

namespace {

std::vector<std::int64_t> primes(std::size_t count) {
    std::vector<std::int64_t> out;
    for (std::int64_t n = 2; out.size() < count; ++n) {
        bool prime = true;
        for (std::int64_t p : out) {
            if (p * p > n) break;
            if (n % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) out.push_back(n);
    }
    return out;
}

// beta_a - beta_b in Z + Z alpha, tested for |n| <= depth in exact raw arithmetic.
bool collides(CirclePoint a, CirclePoint b, CirclePoint alpha, int depth) {
    CirclePoint diff = a - b;
    for (int n = -depth; n <= depth; ++n)
        if (diff == alpha.times(n)) return true;
    return false;
}

}  // namespace

NoncohomologousExample build_noncohomologous_example(const ContinuedFraction& alpha, double base, int terms,
                                                     const std::vector<double>& eps_grid, double constant) {
    if (!(base > 0)) throw ValidationError("non-cohomologous example needs a positive base jump");
    if (terms < 1 || terms > 30) throw ValidationError("non-cohomologous example supports 1..30 materialized terms");
    constexpr int kCheckDepth = 1000;

    NoncohomologousExample out;
    std::vector<Jump> jumps;
    auto candidates = primes(static_cast<std::size_t>(terms) * 4);
    std::size_t next = 0;
    for (int i = 1; i <= terms; ++i) {
        for (;;) {
            if (next >= candidates.size()) throw PrecisionError("ran out of rational jump positions");
            std::int64_t p = candidates[next++];
            Jump j = Jump::at_rational(1, p, base * std::ldexp(1.0, -i * i));
            bool clash = false;
            for (const auto& k : jumps)
                if (collides(j.beta, k.beta, alpha.alpha(), kCheckDepth)) {
                    clash = true;
                    break;
                }
            if (clash) {
                out.substitutions.push_back("1/" + std::to_string(p) + " collides with Z + Z alpha; skipped");
                continue;
            }
            jumps.push_back(std::move(j));
            break;
        }
    }
    const double tail = 2.0 * base * std::ldexp(1.0, -(terms + 1) * (terms + 1));
    out.f = RoofFunction(constant, std::move(jumps), {}, tail);

    for (double eps : eps_grid) {
        NoncohomologousExample::Row row{eps, 0, 0, 0};
        for (std::size_t n = 1; n <= out.f.jump_count(); ++n) {
            double t = out.f.tail_after(n);
            double rhs = eps * std::abs(out.f.jumps()[n - 1].d);
            if (t <= rhs) {
                row = {eps, n, t, rhs};
                break;
            }
        }
        out.coh_table.push_back(row);
    }
    return out;
}

}  // namespace specflow
