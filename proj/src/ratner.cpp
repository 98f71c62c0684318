// SPDX-License-Identifier: Apache-2.0
#include "specflow/ratner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specflow/birkhoff.hpp"
#include "specflow/errors.hpp"
#include "specflow/philox.hpp"

namespace specflow {

std::size_t compute_m_eps(const RoofFunction& f, double epsilon, int C) {
    if (!(epsilon > 0)) throw ValidationError("epsilon must be positive");
    if (C < 1) throw ValidationError("C must be >= 1");
    const double threshold = epsilon / (4.0 * (2.0 * C + 1.0));
    if (!(f.tail_bound() < threshold))
        throw PrecisionError("truncation insufficient for this epsilon: certified tail " +
                             std::to_string(f.tail_bound()) + " >= " + std::to_string(threshold));
    for (std::size_t m = 1; m <= f.jump_count(); ++m)
        if (f.tail_after(m) < threshold) return m;
    // Only reachable without materialized jumps, where the tail bound alone qualifies.
    return 1;
}

double compute_kappa(double epsilon, std::size_t m_eps, int C, double p) {
    if (!(epsilon > 0) || m_eps == 0 || C < 1 || !(p > 0))
        throw ValidationError("kappa needs epsilon, m_eps, C and p positive");
    const double c = static_cast<double>(C);
    return std::min(epsilon / (2.0 * p * c), 1.0 / (c * c)) / (static_cast<double>(m_eps) * (2.0 * c + 1.0));
}

DeltaChoice compute_delta(double p, double S, const ContinuedFraction& alpha, double kappa, std::int64_t N,
                          int s_min) {
    if (!(p > 0) || S == 0 || !(kappa > 0)) throw ValidationError("delta needs p > 0, S != 0, kappa > 0");
    if (N < 0) throw ValidationError("N must be non-negative");
    const long double k = std::min(static_cast<long double>(kappa), 1.0L);
    for (int s = std::max(s_min, 0); s + 1 <= alpha.depth(); ++s) {
        if (k * static_cast<long double>(alpha.q_u64(s)) > static_cast<long double>(N))
            return {static_cast<double>(static_cast<long double>(p) /
                                        (std::abs(static_cast<long double>(S)) * alpha.q_u64(s + 1))),
                    s};
    }
    throw PrecisionError("delta needs q_s > " + std::to_string(static_cast<double>(N / k)) + " with s >= " +
                         std::to_string(s_min) + "; materialized depth " + std::to_string(alpha.depth()) +
                         " is insufficient");
}

int scale_select(CirclePoint x, CirclePoint y, double p, double S, const ContinuedFraction& alpha) {
    const long double d = circle_distance(x, y);
    if (d == 0) throw ValidationError("scale selection needs x != y");
    const long double ratio = static_cast<long double>(p) / std::abs(static_cast<long double>(S));
    if (d > ratio) throw ValidationError("||x - y|| exceeds p / |S|");
    for (int s = 0; s + 1 <= alpha.depth(); ++s) {
        const long double lo = ratio / alpha.q_u64(s + 1);
        const long double hi = ratio / alpha.q_u64(s);
        if (lo < d && d <= hi) return s;
    }
    throw PrecisionError("||x - y|| is below p / (|S| q_depth); expand the continued fraction further");
}

int equicontinuity_threshold(const ACComponent& ac, const ContinuedFraction& alpha, double epsilon, int samples) {
    if (ac.is_zero()) return 1;
    for (int s = 1; s + 1 <= alpha.depth() && alpha.q_u64(s + 1) <= 100'000; ++s)
        if (ac_equicontinuity_scan(ac, alpha, s, samples) < epsilon / 4.0) return s;
    throw PrecisionError("ac equicontinuity scan never fell below eps/4 for q_{s+1} <= 1e5");
}

RatnerParams make_ratner_params(const RoofFunction& f, const ContinuedFraction& alpha, double epsilon,
                                std::int64_t N, int equicontinuity_samples) {
    if (!f.in_U())
        throw HypothesisError("roof is outside U: S = " + std::to_string(f.S()) + ", certified tail " +
                              std::to_string(f.tail_bound()));
    f.require_positive("ratner verification");
    RatnerParams r;
    r.epsilon = epsilon;
    r.N = N;
    r.C = alpha.C();
    r.S = f.S();
    r.window = drift_window(f, r.C);
    r.p = r.window.p;
    r.eta = r.window.eta;
    r.m_eps = compute_m_eps(f, epsilon, r.C);
    r.kappa = compute_kappa(epsilon, r.m_eps, r.C, r.p);
    r.s_min = equicontinuity_threshold(f.ac(), alpha, epsilon, equicontinuity_samples);
    auto dc = compute_delta(r.p, r.S, alpha, r.kappa, N, r.s_min);
    r.delta = dc.delta;
    r.s0 = dc.s0;
    return r;
}

std::vector<double> drift_trace(const RoofFunction& f, CirclePoint alpha, CirclePoint x, CirclePoint y,
                                std::int64_t n_max) {
    if (n_max < 0 || n_max > kBirkhoffCap)
        throw PrecisionError("drift trace length " + std::to_string(n_max) + " exceeds the Birkhoff cap");
    std::vector<double> g(static_cast<std::size_t>(n_max) + 1, 0.0);
    CompensatedSum acc;
    for (std::int64_t k = 0; k < n_max; ++k, x += alpha, y += alpha) {
        acc.add(f.evaluate(y) - f.evaluate(x));
        g[static_cast<std::size_t>(k) + 1] = acc.value();
    }
    return g;
}

double hit_fraction(const std::vector<double>& g, std::int64_t M, std::int64_t L, double rho, double epsilon) {
    if (M < 0 || L < 0 || static_cast<std::size_t>(M + L) >= g.size())
        throw ValidationError("hit fraction window outside the trace");
    std::int64_t hits = 0;
    for (std::int64_t n = M; n <= M + L; ++n)
        if (std::abs(g[static_cast<std::size_t>(n)] - rho) < epsilon) ++hits;
    return static_cast<double>(hits) / static_cast<double>(L + 1);
}

DriftReport find_drift_interval(const RoofFunction& f, const ContinuedFraction& alpha, CirclePoint x, CirclePoint y,
                                const RatnerParams& params) {
    const long double dist = circle_distance(x, y);
    if (dist == 0) throw ValidationError("drift interval needs x != y");
    if (!(dist < params.delta))
        throw ValidationError("||x - y|| = " + std::to_string(static_cast<double>(dist)) + " is not below delta = " +
                              std::to_string(params.delta));
    DriftReport r;
    if (arc_length(x, y) > 0.5L) {
        std::swap(x, y);
        r.swapped = true;
    }
    r.s = scale_select(x, y, params.p, params.S, alpha);
    const auto qs = static_cast<std::int64_t>(alpha.q_u64(r.s));
    const auto qs1 = static_cast<std::int64_t>(alpha.q_u64(r.s + 1));
    const CirclePoint a = alpha.alpha();

    const std::vector<double> g = drift_trace(f, a, x, y, qs1);

    // dbar[n] = sum_i m_i(n) d_i with m_i(n) = #{0 <= j < n : {beta_i - j alpha} in (x, y]}.
    std::vector<long double> dbar(static_cast<std::size_t>(qs1) + 1, 0.0L);
    const u128 span = (y - x).raw();
    for (const auto& jump : f.jumps()) {
        CirclePoint pt = jump.beta;
        long double acc = 0;
        for (std::int64_t j = 0; j < qs1; ++j, pt -= a) {
            const u128 off = (pt - x).raw();
            if (off != 0 && off <= span) acc += jump.d;
            const u128 to_y = off > span ? off - span : span - off;
            if (off < kBoundaryCriticalRaw || u128{0} - off < kBoundaryCriticalRaw || to_y < kBoundaryCriticalRaw)
                r.boundary_critical = true;
            dbar[static_cast<std::size_t>(j) + 1] += acc;
        }
    }
    const double sgn = params.S > 0 ? 1.0 : -1.0;
    const double eps = params.epsilon;
    auto rho_at = [&](std::int64_t n) { return sgn * params.p - static_cast<double>(dbar[static_cast<std::size_t>(n)]); };
    auto inside = [&](std::int64_t n, double rho) { return std::abs(g[static_cast<std::size_t>(n)] - rho) < eps; };

    std::int64_t best_M = -1, best_L = -1, run_start = -1, run_end = -1;
    for (std::int64_t M = qs; M <= qs1; ++M) {
        const double rho = rho_at(M);
        if (!inside(M, rho)) continue;
        if (M <= run_end && dbar[static_cast<std::size_t>(M)] == dbar[static_cast<std::size_t>(run_start)]) continue;
        std::int64_t E = M;
        while (E + 1 <= qs1 && inside(E + 1, rho)) ++E;
        run_start = M;
        run_end = E;
        if (E - M > best_L) {
            best_L = E - M;
            best_M = M;
        }
    }

    if (best_M < 0) {
        r.M = qs;
        r.L = 0;
        r.rho = rho_at(qs);
        r.dbar_at_M = static_cast<double>(dbar[static_cast<std::size_t>(qs)]);
        r.diagnostic = "no n in [q_s, q_{s+1}] has |g(n) - rho_n| < eps";
    } else {
        r.M = best_M;
        r.L = best_L;
        r.rho = rho_at(best_M);
        r.dbar_at_M = static_cast<double>(dbar[static_cast<std::size_t>(best_M)]);
        r.hit_fraction = hit_fraction(g, r.M, r.L, r.rho, eps);
        if (r.L == 0) r.diagnostic = "longest qualifying run is a single index";
    }
    r.kappa_achieved = r.M > 0 ? static_cast<double>(r.L) / static_cast<double>(r.M) : 0.0;
    r.rho_distance = std::numeric_limits<double>::infinity();
    for (double v : params.window.set.values)
        r.rho_distance = std::min(r.rho_distance, std::abs(r.rho - (sgn * params.p - v)));
    if (r.boundary_critical && r.diagnostic.empty()) r.diagnostic = "pair is boundary-critical";
    return r;
}

std::string ContractCheck::failures() const {
    std::string out;
    auto add = [&](bool ok, const char* what) {
        if (ok) return;
        if (!out.empty()) out += ", ";
        out += what;
    };
    add(kappa_ok, "L/M < kappa");
    add(M_ok, "M < N");
    add(L_ok, "L < N");
    add(rho_ok, "rho outside (sgn S) p - A");
    add(hits_ok, "hit fraction <= 1 - eps");
    return out;
}

ContractCheck check_contract(const DriftReport& r, const RatnerParams& params) {
    ContractCheck c;
    c.kappa_ok = r.kappa_achieved >= params.kappa;
    c.M_ok = r.M >= params.N;
    c.L_ok = r.L >= params.N;
    c.rho_ok = r.rho_distance <= params.window.set.radius + kRhoTolerance;
    c.hits_ok = r.hit_fraction > 1.0 - params.epsilon;
    return c;
}

RatnerPopulation ratner_population_experiment(const RoofFunction& f, const ContinuedFraction& alpha, double epsilon,
                                              std::int64_t N, std::size_t trials, std::uint64_t seed) {
    RatnerPopulation out;
    out.seed = seed;
    out.params = make_ratner_params(f, alpha, epsilon, N);
    out.trials.resize(trials);
    const Philox4x32 rng(seed);
    const RatnerParams& params = out.params;

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(trials); ++i) {
        RatnerTrial& t = out.trials[static_cast<std::size_t>(i)];
        t.index = static_cast<std::uint64_t>(i);
        const auto w = rng.words(2 * t.index);
        u128 raw = 0;
        for (auto word : w) raw = (raw << 32) | word;
        t.x = CirclePoint::from_raw(raw);
        t.distance = params.delta * (rng.uniform(2 * t.index + 1) + 0x1p-54);
        t.y = t.x + CirclePoint::from_double(t.distance);
        try {
            t.report = find_drift_interval(f, alpha, t.x, t.y, params);
            if (t.report.boundary_critical) {
                t.reason = "boundary-critical pair";
            } else if (!t.report.found()) {
                t.reason = t.report.diagnostic;
            } else {
                t.success = true;
                auto c = check_contract(t.report, params);
                if (!c.all()) {
                    t.falsification = true;
                    t.reason = c.failures();
                }
            }
        } catch (const Error& e) {
            t.reason = e.what();
        }
    }

    for (const auto& t : out.trials) {
        out.successes += t.success ? 1 : 0;
        out.falsifications += t.falsification ? 1 : 0;
    }
    if (trials > 0) out.success_fraction = static_cast<double>(out.successes) / static_cast<double>(trials);
    return out;
}

}  // namespace specflow
