// SPDX-License-Identifier: Apache-2.0
#include "specflow/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "specflow/birkhoff.hpp"
#include "specflow/errors.hpp"
#include "specflow/kernels.hpp"
#include "specflow/polynomial.hpp"

namespace specflow {

namespace {

constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;

GaussRule compute_rule(int n) {
    GaussRule g;
    g.nodes.resize(static_cast<std::size_t>(n));
    g.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
        long double dp = 0;
        for (int it = 0; it < 100; ++it) {
            long double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            const long double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-19L) break;
        }
        // Recompute the derivative at the converged node for the weight.
        long double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
            long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        g.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        g.weights[static_cast<std::size_t>(n - 1 - i)] = 2 / ((1 - x * x) * dp * dp);
    }
    return g;
}

// sup |ac'| from the endpoints of each piece and the roots of ac''.
double derivative_sup(const ACComponent& ac) {
    double best = 0;
    for (std::size_t k = 0; k < ac.piece_count(); ++k) {
        const auto d1 = poly::derivative(ac.coefficients()[k]);
        const double h = ac.breakpoints()[k + 1] - ac.breakpoints()[k];
        best = std::max({best, std::abs(poly::eval(d1, 0.0)), std::abs(poly::eval(d1, h))});
        for (double u : poly::roots_in(poly::derivative(d1), 0.0, h)) best = std::max(best, std::abs(poly::eval(d1, u)));
    }
    return best;
}

long double cocycle(const RoofFunction& f, CirclePoint alpha, CirclePoint x, std::int64_t q) {
    long double s = 0;
    for (std::int64_t k = 0; k < q; ++k, x += alpha) s += f.evaluate(x);
    return s;
}

std::complex<long double> cell_rule(const RoofFunction& f, CirclePoint alpha, std::int64_t q, long double r,
                                    CirclePoint a, long double w, const GaussRule& g) {
    std::complex<long double> acc = 0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const CirclePoint x = a + CirclePoint::from_long_double(w * (1 + g.nodes[i]) / 2);
        long double phase = r * cocycle(f, alpha, x, q);
        phase -= std::floor(phase);
        acc += g.weights[i] * std::polar(1.0L, kTwoPi * phase);
    }
    return acc * (w / 2);
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw ValidationError("Gauss rule order must be >= 1");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussRule>(compute_rule(n));
    return *slot;
}

OscillatoryIntegral oscillatory_integral(const RoofFunction& f, const ContinuedFraction& alpha, double r,
                                         std::int64_t q, double tolerance) {
    if (q < 1) throw ValidationError("oscillatory integral needs q >= 1");
    if (r == 0 || !std::isfinite(r)) throw ValidationError("oscillatory integral needs a finite r != 0");
    if (q > kBirkhoffCap) throw PrecisionError("q exceeds the Birkhoff cap");

    const CirclePoint a = alpha.alpha();
    std::vector<u128> pts;
    for (const auto& b : f.breakpoints()) {
        CirclePoint p = b;
        for (std::int64_t k = 0; k < q; ++k, p -= a) pts.push_back(p.raw());
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const double slope = static_cast<double>(q) * (std::abs(f.S()) + derivative_sup(f.ac()));
    const auto cells = static_cast<std::int64_t>(pts.size());
    std::vector<std::complex<long double>> vals(pts.size());
    std::vector<double> errs(pts.size());
    std::vector<int> orders(pts.size());

#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < cells; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const u128 lo = pts[idx];
        const u128 hi = idx + 1 < pts.size() ? pts[idx + 1] : u128{0};
        const long double w = cells == 1 ? 1.0L : raw_to_long_double(hi - lo);
        const int n = std::max(4, static_cast<int>(std::ceil(kTwoPi * std::abs(r) * slope * w)) + 4);
        const auto coarse = cell_rule(f, a, q, r, CirclePoint::from_raw(lo), w, gauss_legendre(n));
        const auto fine = cell_rule(f, a, q, r, CirclePoint::from_raw(lo), w, gauss_legendre(n + 8));
        vals[idx] = fine;
        errs[idx] = static_cast<double>(std::abs(fine - coarse));
        orders[idx] = n + 8;
    }

    OscillatoryIntegral out;
    out.cells = pts.size();
    std::complex<long double> total = 0;
    double quad = 0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        total += vals[i];
        quad += errs[i];
        out.max_order = std::max(out.max_order, orders[i]);
        if (errs[i] > errs[worst]) worst = i;
    }
    out.value = {static_cast<double>(total.real()), static_cast<double>(total.imag())};
    out.error_bound = quad + static_cast<double>(kTwoPi) * std::abs(r) * static_cast<double>(q) * evaluation_error(f) +
                      1e-15 * static_cast<double>(pts.size());
    if (out.error_bound > tolerance)
        throw PrecisionError("estimated quadrature error " + std::to_string(out.error_bound) + " exceeds " +
                             std::to_string(tolerance) + "; cell " + std::to_string(worst) + " of " +
                             std::to_string(pts.size()) + " needs order above " + std::to_string(orders[worst]));
    return out;
}

bool MixingReport::all_within() const {
    return std::all_of(grid.begin(), grid.end(), [](const MixingPoint& p) { return p.within(); });
}

MixingReport weak_mixing_bound_check(const RoofFunction& f, const RoofFunction& g_vn, const ContinuedFraction& alpha,
                                     const std::vector<double>& r_list, const std::vector<std::int64_t>& q_list) {
    if (g_vn.jump_count() == 0 || g_vn.tail_bound() != 0)
        throw ValidationError("g_vn must have finitely many jumps and at least one");
    const RoofFunction F = decompose(f).pl;
    const RoofFunction G = decompose(g_vn).pl;
    const RoofFunction h = F - G;

    MixingReport rep;
    rep.K = G.jump_count();
    rep.S = G.S();
    rep.var_h = h.variation();
    const double abs_s = std::abs(rep.S);
    if (!(rep.var_h < abs_s))
        throw ValidationError("Var(f - g_vn) = " + std::to_string(rep.var_h) + " is not below |S(g_vn)| = " +
                              std::to_string(abs_s));
    rep.var_h_over_S = rep.var_h / abs_s;
    rep.var_g_prime = G.ac().derivative_variation();
    rep.bound_c = rep.var_h_over_S + 0.5 * (1.0 - rep.var_h_over_S);
    const double pi = std::numbers::pi;

    for (double r : r_list)
        for (std::int64_t q : q_list) {
            MixingPoint pt;
            pt.r = r;
            pt.q = q;
            auto I = oscillatory_integral(F, alpha, r, q);
            pt.magnitude = std::abs(I.value);
            pt.quad_error = I.error_bound;
            pt.bound = static_cast<double>(rep.K) / (pi * std::abs(r) * abs_s) + rep.var_h_over_S +
                       rep.var_g_prime / (2 * pi * std::abs(r) * abs_s * abs_s * static_cast<double>(q)) +
                       pt.quad_error;
            rep.grid.push_back(pt);
        }

    std::vector<double> rs;
    for (double r : r_list) rs.push_back(std::abs(r));
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    for (auto it = rs.rbegin(); it != rs.rend(); ++it) {
        bool below = true;
        for (const auto& p : rep.grid)
            if (std::abs(p.r) == *it && !(p.magnitude < rep.bound_c)) below = false;
        if (!below) break;
        rep.r0 = *it;
    }
    return rep;
}

JWindow rigidity_window(const RoofFunction& f, double t, double eps) {
    const double m = f.lower_bound(), M = f.upper_bound();
    JWindow w;
    w.lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor((t - eps) / M)));
    w.hi = std::max<std::int64_t>(w.lo, static_cast<std::int64_t>(std::ceil((t + eps) / m)));
    return w;
}

namespace {

void check_rigidity_inputs(const RoofFunction& f, double t_min, double eps) {
    f.require_positive("rigidity statistics");
    if (!(eps > 0) || !(eps < f.lower_bound())) throw ValidationError("rigidity needs 0 < eps < inf f");
    if (!(t_min > 2 * eps)) throw ValidationError("rigidity needs t > 2 eps");
}

}  // namespace

double rigidity_statistic(const RoofFunction& f, const ContinuedFraction& alpha, double t, double eps,
                          std::size_t grid_n) {
    check_rigidity_inputs(f, t, eps);
    if (grid_n == 0) throw ValidationError("rigidity grid must be non-empty");
    const auto w = rigidity_window(f, t, eps);
    const auto counts = omp::rigidity_counts(f, alpha.alpha(), midpoint_grid(grid_n), {t}, eps, w.hi);
    return static_cast<double>(counts[0]) / static_cast<double>(grid_n);
}

RigidityProfile partial_rigidity_scan(const RoofFunction& f, const ContinuedFraction& alpha, double eps, double t_min,
                                      double t_max, std::size_t steps, std::size_t grid_n, CirclePoint x0) {
    check_rigidity_inputs(f, t_min, eps);
    if (!(t_max >= t_min)) throw ValidationError("rigidity scan needs t_max >= t_min");
    if (grid_n == 0) throw ValidationError("rigidity grid must be non-empty");

    std::vector<std::pair<double, bool>> ts;
    for (std::size_t k = 0; k <= steps; ++k)
        ts.emplace_back(steps == 0 ? t_min : t_min + (t_max - t_min) * static_cast<double>(k) / steps, false);
    for (int n = 0; n <= alpha.depth(); ++n) {
        const auto q = alpha.q_u64(n);
        if (static_cast<double>(q) * f.lower_bound() > t_max) break;
        const double v = birkhoff_sum(f, alpha, x0, static_cast<std::int64_t>(q));
        if (v >= t_min && v <= t_max) ts.emplace_back(v, true);
    }
    std::stable_sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    RigidityProfile prof;
    prof.epsilon = eps;
    prof.grid_n = grid_n;
    for (const auto& [t, inj] : ts) {
        prof.times.push_back(t);
        prof.injected.push_back(inj);
        prof.j_window.push_back(rigidity_window(f, t, eps));
    }
    const auto counts =
        omp::rigidity_counts(f, alpha.alpha(), midpoint_grid(grid_n), prof.times, eps, rigidity_window(f, t_max, eps).hi);
    prof.sup = -1;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        prof.mass.push_back(static_cast<double>(counts[i]) / static_cast<double>(grid_n));
        if (prof.mass.back() > prof.sup) {
            prof.sup = prof.mass.back();
            prof.argmax = prof.times[i];
        }
    }
    return prof;
}

EtaTable eta_condition_check(const RoofFunction& f, double C1, double C2, const std::vector<double>& eps_grid) {
    if (!(C1 > 0) || !(C2 > 0)) throw ValidationError("gap constants must be positive");
    if (!f.in_U()) throw HypothesisError("eta condition needs a roof in U");
    EtaTable tab;
    for (double eps : eps_grid) {
        if (!(eps > 0)) throw ValidationError("eps grid entries must be positive");
        EtaRow row;
        row.epsilon = eps;
        const double threshold = eps / (C2 / C1 + 1.0);
        for (std::size_t m = 0; m <= f.jump_count(); ++m)
            if (f.tail_after(m) < threshold) {
                row.eta = m;
                row.product = static_cast<double>(m) * eps;
                break;
            }
        if (!row.eta) tab.truncation_insufficient = true;
        tab.rows.push_back(row);
    }

    // Trend heuristic: the product at the smallest eps is at most a quarter of the largest product.
    double smallest_eps = std::numeric_limits<double>::infinity(), at_smallest = 0, largest = 0;
    std::size_t valid = 0;
    for (const auto& row : tab.rows) {
        if (!row.eta) continue;
        ++valid;
        largest = std::max(largest, row.product);
        if (row.epsilon < smallest_eps) {
            smallest_eps = row.epsilon;
            at_smallest = row.product;
        }
    }
    tab.trends_to_zero = valid >= 2 && at_smallest <= 0.25 * largest;
    return tab;
}

Histogram birkhoff_distribution_along_qn(const RoofFunction& h, const ContinuedFraction& alpha, int n_index,
                                         std::size_t samples, double tau, double bin_width) {
    if (samples == 0) throw ValidationError("distribution needs samples >= 1");
    if (!(tau > 0) || !(bin_width > 0)) throw ValidationError("tau and bin width must be positive");
    Histogram out;
    out.n_index = n_index;
    out.q = alpha.q_u64(n_index);
    if (out.q > static_cast<std::uint64_t>(kBirkhoffCap)) throw PrecisionError("q_n exceeds the Birkhoff cap");
    out.samples = samples;
    out.bin_width = bin_width;
    out.tau = tau;
    const auto vals = omp::birkhoff_batch(h, alpha.alpha(), midpoint_grid(samples), static_cast<std::int64_t>(out.q));
    out.min = *std::min_element(vals.begin(), vals.end());
    out.max = *std::max_element(vals.begin(), vals.end());
    out.first_left = std::floor(out.min / bin_width) * bin_width;
    const auto bins = static_cast<std::size_t>(std::floor((out.max - out.first_left) / bin_width)) + 1;
    std::vector<std::size_t> counts(bins, 0);
    std::size_t inside = 0;
    for (double v : vals) {
        auto b = static_cast<std::size_t>(std::floor((v - out.first_left) / bin_width));
        ++counts[std::min(b, bins - 1)];
        if (std::abs(v) < tau) ++inside;
    }
    const double n = static_cast<double>(samples);
    for (auto c : counts) out.mass.push_back(static_cast<double>(c) / n);
    out.mass_inside = static_cast<double>(inside) / n;
    return out;
}

}  // namespace specflow
