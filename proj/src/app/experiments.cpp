// SPDX-License-Identifier: Apache-2.0
#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "specflow/app/scenario.hpp"
#include "specflow/birkhoff.hpp"
#include "specflow/errors.hpp"
#include "specflow/jump_combinatorics.hpp"
#include "specflow/mixing.hpp"
#include "specflow/philox.hpp"
#include "specflow/ratner.hpp"

namespace specflow::app::detail {

namespace {

std::string str(double v) { return format_double(v); }
std::string str(std::int64_t v) { return std::to_string(v); }
std::string str(std::uint64_t v) { return std::to_string(v); }
std::string str(bool v) { return v ? "1" : "0"; }

CirclePoint point_from_words(const std::array<std::uint32_t, 4>& w) {
    u128 raw = 0;
    for (auto word : w) raw = (raw << 32) | word;
    return CirclePoint::from_raw(raw);
}

json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

int required_depth(const json& scenario) {
    const int depth = scenario.value("depth", kDefaultDepth);
    if (scenario.at("experiment") == "cf") return std::max(depth, scenario.at("params").at("rows").get<int>() + 1);
    return depth;
}

json run_cf(Context& ctx) {
    const auto& a = ctx.alpha;
    const int rows = ctx.params.at("rows").get<int>();
    json out_rows = json::array();
    Csv csv({"n", "a", "p", "q", "distance_qn_alpha", "sandwich_lower", "sandwich_upper"});
    for (int n = 0; n < rows; ++n) {
        const std::uint64_t an = n == 0 ? 0 : a.quotient(n);
        const double dist = static_cast<double>(a.distance_qn_alpha(n));
        json row = {{"n", n},       {"a", an}, {"p", a.p(n).str()}, {"q", a.q(n).str()}, {"distance_qn_alpha", dist},
                    {"sandwich_lower", nullptr}, {"sandwich_upper", nullptr}};
        std::string lower = "", upper = "";
        if (n + 1 <= a.depth()) {
            auto sw = a.sandwich(n);
            row["sandwich_lower"] = sw.lower;
            row["sandwich_upper"] = sw.upper;
            lower = str(sw.lower);
            upper = str(sw.upper);
            if (!sw.ok()) ctx.event("cf_sandwich", "approximation sandwich fails at n = " + std::to_string(n));
        }
        csv.row({std::to_string(n), str(an), a.p(n).str(), a.q(n).str(), str(dist), lower, upper});
        out_rows.push_back(std::move(row));
    }
    ctx.add_csv("cf.csv", csv);
    std::string text = a.source() ? a.source()->text() : std::string();
    return {{"alpha", text},
            {"alpha_decimal", a.alpha().to_decimal()},
            {"C", a.C()},
            {"periodic", a.periodic()},
            {"preperiod", a.preperiod()},
            {"period", a.period()},
            {"low_precision", a.low_precision()},
            {"rows", std::move(out_rows)}};
}

json run_gaps(Context& ctx) {
    const auto k_max = ctx.params.at("k_max").get<std::size_t>();
    std::vector<std::size_t> ks;
    if (ctx.params.contains("k_list")) {
        ks = ctx.params.at("k_list").get<std::vector<std::size_t>>();
    } else {
        for (std::size_t k = 1; k <= std::min<std::size_t>(k_max, 10); ++k) ks.push_back(k);
        if (k_max > 10) ks.push_back(k_max);
    }
    const GapConstants gc = estimate_gap_constants(ctx.alpha, std::max<std::size_t>(k_max, 2));
    json parts = json::array();
    Csv csv({"k", "distinct", "min", "max", "total"});
    for (std::size_t k : ks) {
        if (k > k_max) throw ValidationError("k_list entry " + std::to_string(k) + " exceeds k_max");
        const GapPartition gp = three_gap_partition(ctx.alpha, k);
        json lengths = json::array();
        for (u128 raw : gp.distinct) lengths.push_back(raw == 0 ? 1.0 : raw_to_double(raw));
        const double mn = static_cast<double>(gp.min_length()), mx = static_cast<double>(gp.max_length());
        const double total = static_cast<double>(gp.total_length());
        ctx.error(std::abs(total - 1.0));
        if (gp.distinct.size() > 3)
            ctx.event("three_gap", std::to_string(gp.distinct.size()) + " distinct gaps at k = " + std::to_string(k));
        parts.push_back({{"k", k},
                         {"distinct", gp.distinct.size()},
                         {"lengths", std::move(lengths)},
                         {"min", mn},
                         {"max", mx},
                         {"total", total}});
        csv.row({std::to_string(k), std::to_string(gp.distinct.size()), str(mn), str(mx), str(total)});
    }
    ctx.add_csv("gaps.csv", csv);
    return {{"C1", static_cast<double>(gc.c1)},
            {"C2", static_cast<double>(gc.c2)},
            {"k_max", k_max},
            {"partitions", std::move(parts)}};
}

json run_birkhoff(Context& ctx) {
    const auto ns = ctx.params.at("n_list").get<std::vector<std::int64_t>>();
    json rows = json::array();
    Csv csv({"x", "n", "value", "error_bound"});
    for (const auto& p : ctx.params.at("points")) {
        const CirclePoint x = CirclePoint::parse(p.get<std::string>());
        BirkhoffLedger ledger(ctx.f, ctx.alpha.alpha(), x);
        for (std::int64_t n : ns) {
            const double v = ledger.sum(n);
            const double e = ledger.error_bound(n);
            ctx.error(e);
            rows.push_back({{"x", x.to_decimal()}, {"n", n}, {"value", v}});
            csv.row({x.to_decimal(), str(n), str(v), str(e)});
        }
    }
    ctx.add_csv("birkhoff.csv", csv);
    return {{"rows", std::move(rows)}};
}

json run_dk(Context& ctx) {
    const int max_index = ctx.params.at("max_index").get<int>();
    const auto samples = ctx.params.at("samples").get<std::uint64_t>();
    if (max_index > ctx.alpha.depth()) throw PrecisionError("max_index exceeds the continued fraction depth");
    const Philox4x32 rng(ctx.seed);
    std::vector<CirclePoint> xs(samples);
    for (std::uint64_t i = 0; i < samples; ++i) xs[i] = point_from_words(rng.words(i));

    std::vector<DenjoyKoksma> all(samples * static_cast<std::size_t>(max_index + 1));
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(samples); ++i) {
        try {
            for (int n = 0; n <= max_index; ++n)
                all[static_cast<std::size_t>(i) * (max_index + 1) + n] =
                    denjoy_koksma_residual(ctx.f, ctx.alpha, xs[i], n);
        } catch (...) {
#pragma omp critical(specflow_dk_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    json rows = json::array();
    std::int64_t violations = 0;
    Csv csv({"sample", "x", "n", "q", "residual", "variation", "error_bound", "within"});
    for (int n = 0; n <= max_index; ++n) {
        double worst = 0, err = 0;
        bool within = true;
        std::uint64_t q = 0;
        for (std::uint64_t i = 0; i < samples; ++i) {
            const auto& r = all[i * (max_index + 1) + n];
            q = r.q;
            worst = std::max(worst, r.residual);
            err = std::max(err, r.error_bound);
            if (!r.within()) {
                within = false;
                ++violations;
                ctx.event("denjoy_koksma", "residual " + str(r.residual) + " exceeds Var f = " + str(r.variation) +
                                               " at n = " + std::to_string(n) + ", x = " + xs[i].to_decimal());
            }
        }
        ctx.error(err);
        rows.push_back({{"n", n}, {"q", q}, {"max_residual", worst}, {"error_bound", err}, {"within", within}});
    }
    for (std::uint64_t i = 0; i < samples; ++i)
        for (int n = 0; n <= max_index; ++n) {
            const auto& r = all[i * (max_index + 1) + n];
            csv.row({str(i), xs[i].to_decimal(), std::to_string(n), str(r.q), str(r.residual), str(r.variation),
                     str(r.error_bound), str(r.within())});
        }
    ctx.add_csv("dk_residuals.csv", csv);
    return {{"variation", ctx.f.variation()},
            {"integral", ctx.f.integral()},
            {"samples", samples},
            {"violations", violations},
            {"rows", std::move(rows)}};
}

json run_ratner(Context& ctx) {
    const double eps = ctx.params.at("epsilon").get<double>();
    const auto N = ctx.params.at("N").get<std::int64_t>();
    const auto trials = ctx.params.at("trials").get<std::size_t>();
    const RatnerPopulation pop = ratner_population_experiment(ctx.f, ctx.alpha, eps, N, trials, ctx.seed);
    const RatnerParams& p = pop.params;

    json pairs = json::array();
    Csv csv({"index", "x", "y", "distance", "s", "M", "L", "rho", "hit_fraction", "kappa_achieved", "rho_distance",
             "boundary_critical", "success", "falsification"});
    for (const auto& t : pop.trials) {
        const auto& r = t.report;
        if (t.falsification)
            ctx.event("ratner_contract", "pair " + std::to_string(t.index) + ": " + t.reason);
        pairs.push_back({{"index", t.index},
                         {"x", t.x.to_decimal()},
                         {"y", t.y.to_decimal()},
                         {"distance", t.distance},
                         {"s", r.s},
                         {"M", r.M},
                         {"L", r.L},
                         {"rho", r.rho},
                         {"hit_fraction", r.hit_fraction},
                         {"kappa_achieved", r.kappa_achieved},
                         {"rho_distance", r.rho_distance},
                         {"boundary_critical", r.boundary_critical},
                         {"success", t.success},
                         {"falsification", t.falsification},
                         {"reason", t.reason}});
        csv.row({str(t.index), t.x.to_decimal(), t.y.to_decimal(), str(t.distance), std::to_string(r.s), str(r.M),
                 str(r.L), str(r.rho), str(r.hit_fraction), str(r.kappa_achieved), str(r.rho_distance),
                 str(r.boundary_critical), str(t.success), str(t.falsification)});
    }
    ctx.add_csv("ratner_pairs.csv", csv);
    json params = {{"epsilon", p.epsilon}, {"N", p.N},         {"m_eps", p.m_eps},
                   {"kappa", p.kappa},     {"delta", p.delta}, {"p", p.p},
                   {"eta", p.eta},         {"C", p.C},         {"s0", p.s0},
                   {"s_min", p.s_min},     {"S", p.S},         {"xi", p.window.set.xi},
                   {"radius", p.window.set.radius}, {"j", p.window.theta.j}, {"theta", p.window.theta.theta}};
    return {{"params", std::move(params)},
            {"trials", pop.trials.size()},
            {"successes", pop.successes},
            {"falsifications", pop.falsifications},
            {"success_fraction", nullable(pop.success_fraction)},
            {"pairs", std::move(pairs)}};
}

json run_mixing(Context& ctx) {
    const RoofFunction g = roof_from_json(ctx.params.at("g_vn"), ctx.alpha);
    const auto r_list = ctx.params.at("r_list").get<std::vector<double>>();
    std::vector<std::int64_t> q_list;
    for (int n : ctx.params.at("q_indices").get<std::vector<int>>())
        q_list.push_back(static_cast<std::int64_t>(ctx.alpha.q_u64(n)));
    const MixingReport rep = weak_mixing_bound_check(ctx.f, g, ctx.alpha, r_list, q_list);

    json grid = json::array();
    Csv csv({"r", "q", "magnitude", "quad_error", "bound", "within"});
    for (const auto& pt : rep.grid) {
        ctx.error(pt.quad_error);
        if (!pt.within())
            ctx.event("mixing_bound", "|I| = " + str(pt.magnitude) + " exceeds bound " + str(pt.bound) +
                                          " at r = " + str(pt.r) + ", q = " + std::to_string(pt.q));
        grid.push_back({{"r", pt.r},
                        {"q", pt.q},
                        {"magnitude", pt.magnitude},
                        {"quad_error", pt.quad_error},
                        {"bound", pt.bound},
                        {"within", pt.within()}});
        csv.row({str(pt.r), str(pt.q), str(pt.magnitude), str(pt.quad_error), str(pt.bound), str(pt.within())});
    }
    ctx.add_csv("mixing.csv", csv);
    return {{"K", rep.K},
            {"S", rep.S},
            {"var_h", rep.var_h},
            {"var_h_over_S", rep.var_h_over_S},
            {"var_g_prime", rep.var_g_prime},
            {"bound_c", rep.bound_c},
            {"r0", nullable(rep.r0)},
            {"all_within", rep.all_within()},
            {"grid", std::move(grid)}};
}

json run_rigidity(Context& ctx) {
    const auto& pr = ctx.params;
    const double eps = pr.at("epsilon").get<double>();
    const double threshold = pr.value("threshold", 0.9);
    const CirclePoint x0 = CirclePoint::parse(pr.value("x0", std::string("1/2")));
    const RigidityProfile prof =
        partial_rigidity_scan(ctx.f, ctx.alpha, eps, pr.at("t_min").get<double>(), pr.at("t_max").get<double>(),
                              pr.at("steps").get<std::size_t>(), pr.at("grid_n").get<std::size_t>(), x0);

    const GapConstants gc = estimate_gap_constants(ctx.alpha, 500);
    std::vector<double> eps_grid;
    for (int k = 0; k < 8; ++k) eps_grid.push_back(std::ldexp(eps, -k));
    const EtaTable eta = eta_condition_check(ctx.f, static_cast<double>(gc.c1), static_cast<double>(gc.c2), eps_grid);
    json eta_rows = json::array();
    for (const auto& r : eta.rows)
        eta_rows.push_back({{"epsilon", r.epsilon},
                            {"eta", r.eta ? json(*r.eta) : json(nullptr)},
                            {"product", r.product}});

    json profile = json::array();
    Csv csv({"t", "mass", "j_lo", "j_hi", "injected"});
    for (std::size_t i = 0; i < prof.times.size(); ++i) {
        profile.push_back({{"t", prof.times[i]},
                           {"mass", prof.mass[i]},
                           {"j_lo", prof.j_window[i].lo},
                           {"j_hi", prof.j_window[i].hi},
                           {"injected", static_cast<bool>(prof.injected[i])}});
        csv.row({str(prof.times[i]), str(prof.mass[i]), str(prof.j_window[i].lo), str(prof.j_window[i].hi),
                 str(static_cast<bool>(prof.injected[i]))});
    }
    ctx.add_csv("rigidity_profile.csv", csv);
    const bool below = prof.sup <= threshold;
    if (eta.trends_to_zero && !below)
        ctx.event("partial_rigidity", "rigidity mass " + str(prof.sup) + " at t = " + str(prof.argmax) +
                                          " exceeds threshold " + str(threshold));
    return {{"epsilon", eps},
            {"grid_n", prof.grid_n},
            {"threshold", threshold},
            {"sup", prof.sup},
            {"argmax", prof.argmax},
            {"below_threshold", below},
            {"eta",
             {{"C1", static_cast<double>(gc.c1)},
              {"C2", static_cast<double>(gc.c2)},
              {"truncation_insufficient", eta.truncation_insufficient},
              {"trends_to_zero", eta.trends_to_zero},
              {"rows", std::move(eta_rows)}}},
            {"profile", std::move(profile)}};
}

json run_distribution(Context& ctx) {
    const auto& pr = ctx.params;
    const double tau = pr.at("tau").get<double>();
    const double bin = pr.value("bin_width", default_bin_width(tau));
    const auto samples = pr.at("samples").get<std::size_t>();
    RoofFunction h = ctx.f;
    if (pr.contains("von_neumann_n")) h = von_neumann_approx(ctx.f, pr.at("von_neumann_n").get<int>()).fn;
    const double integral = h.integral();
    if (pr.value("recenter", true)) h = h.with_constant(h.constant() - integral);

    json hists = json::array();
    double zeta = 1.0;
    Csv summary({"n", "q", "mass_inside", "mass_outside", "min", "max"});
    for (int n : pr.at("n_indices").get<std::vector<int>>()) {
        const Histogram hg = birkhoff_distribution_along_qn(h, ctx.alpha, n, samples, tau, bin);
        const double outside = 1.0 - hg.mass_inside;
        zeta = std::min(zeta, outside);
        hists.push_back({{"n", n},
                         {"q", hg.q},
                         {"samples", hg.samples},
                         {"bin_width", hg.bin_width},
                         {"first_left", hg.first_left},
                         {"mass_inside", hg.mass_inside},
                         {"mass_outside", outside},
                         {"min", hg.min},
                         {"max", hg.max},
                         {"mass", hg.mass}});
        summary.row({std::to_string(n), str(hg.q), str(hg.mass_inside), str(outside), str(hg.min), str(hg.max)});
        Csv bins({"left", "center", "mass"});
        for (std::size_t b = 0; b < hg.mass.size(); ++b) {
            const double left = hg.first_left + static_cast<double>(b) * hg.bin_width;
            bins.row({str(left), str(left + 0.5 * hg.bin_width), str(hg.mass[b])});
        }
        ctx.add_csv("distribution_n" + std::to_string(n) + ".csv", bins);
    }
    ctx.add_csv("distribution.csv", summary);
    return {{"tau", tau},
            {"integral", integral},
            {"jumps_used", h.jump_count()},
            {"zeta", zeta},
            {"histograms", std::move(hists)}};
}

namespace {

// A few random jumps and, on odd trials, a tent, scaled to Var = target.
RoofFunction random_perturbation(const Philox4x32& rng, std::uint64_t trial, double target) {
    const std::uint64_t base = trial * 16;
    const int count = 1 + static_cast<int>(rng.words(base)[0] % 3);
    std::vector<Jump> jumps;
    for (int m = 0; m < count; ++m)
        jumps.push_back(Jump::at(point_from_words(rng.words(base + 1 + m)), 2.0 * rng.uniform(base + 4 + m) - 1.0));
    ACComponent ac;
    if (trial % 2 == 1)
        ac = ACComponent::tent(rng.uniform(base + 8) - 0.5, 0.1 + 0.8 * rng.uniform(base + 9), 0.1);
    RoofFunction g(0.0, std::move(jumps), std::move(ac));
    return g.scaled(target / g.variation());
}

}  // namespace

json run_stability(Context& ctx) {
    const int C = ctx.alpha.C();
    const StabilityCertificate zero = perturbation_stability(ctx.f, RoofFunction::constant_roof(0.0), C);
    if (zero.j == 0) throw HypothesisError("perturbation stability: " + zero.reason);

    json certs = json::array();
    std::int64_t admitted = 0, rejected = 0, unverified = 0;
    Csv csv({"label", "admissible", "reverified", "independent_check", "var_g", "bound", "j", "theta_f", "theta"});
    auto record = [&](const std::string& label, const RoofFunction& g, std::optional<bool> expected) {
        const StabilityCertificate c = perturbation_stability(ctx.f, g, C);
        std::optional<bool> independent;
        if (c.admissible) {
            ++admitted;
            const RoofFunction h = ctx.f + g;
            const auto th = theta_condition(h, C);
            independent = th.has_value() && th->j <= c.j;
            if (!c.reverified) ++unverified;
            if (!c.reverified || !*independent)
                ctx.event("perturbation_stability", label + ": admissible perturbation not re-verified (" +
                                                        c.reason + ")");
        } else {
            ++rejected;
        }
        certs.push_back({{"label", label},
                         {"expected_admissible", expected ? json(*expected) : json(nullptr)},
                         {"admissible", c.admissible},
                         {"reverified", c.reverified},
                         {"independent_check", independent ? json(*independent) : json(nullptr)},
                         {"var_g", c.var_g},
                         {"bound", c.bound},
                         {"j", c.j},
                         {"theta_f", c.theta_f},
                         {"theta", c.theta},
                         {"reason", c.reason}});
        csv.row({label, str(c.admissible), str(c.reverified), independent ? str(*independent) : "", str(c.var_g),
                 str(c.bound), str(static_cast<std::uint64_t>(c.j)), str(c.theta_f), str(c.theta)});
    };

    if (ctx.params.contains("g")) record("g", roof_from_json(ctx.params.at("g"), ctx.alpha), std::nullopt);
    const Philox4x32 rng(ctx.seed, 1);
    const auto n_adm = ctx.params.value("random_admissible", std::uint64_t{0});
    const auto n_inadm = ctx.params.value("random_inadmissible", std::uint64_t{0});
    for (std::uint64_t i = 0; i < n_adm; ++i) {
        const double u = 0.05 + 0.9 * rng.uniform(i * 16 + 12);
        record("admissible_" + std::to_string(i), random_perturbation(rng, i, u * zero.bound), true);
    }
    for (std::uint64_t i = 0; i < n_inadm; ++i) {
        const std::uint64_t t = n_adm + i;
        const double u = 1.5 + 18.5 * rng.uniform(t * 16 + 12);
        record("inadmissible_" + std::to_string(i), random_perturbation(rng, t, u * zero.bound), false);
    }
    ctx.add_csv("stability.csv", csv);
    return {{"C", C},
            {"admissible_count", admitted},
            {"rejected_count", rejected},
            {"unverified_count", unverified},
            {"certificates", std::move(certs)}};
}

}  // namespace specflow::app::detail
