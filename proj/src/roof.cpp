// SPDX-License-Identifier: Apache-2.0
#include "specflow/roof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>

#include "specflow/errors.hpp"
#include "specflow/polynomial.hpp"

namespace specflow {

namespace {

constexpr double kContinuityTolerance = 1e-9;

// Breakpoints of the monotone pieces of p on [0, h]: 0, roots of p' in (0,h), h.
std::vector<double> monotone_knots(const std::vector<double>& p, double h) {
    std::vector<double> knots{0.0};
    for (double r : poly::roots_in(poly::derivative(p), 0.0, h)) knots.push_back(r);
    knots.push_back(h);
    return knots;
}

double monotone_variation(const std::vector<double>& p, double h) {
    auto knots = monotone_knots(p, h);
    double v = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        v += std::abs(poly::eval(p, knots[i + 1]) - poly::eval(p, knots[i]));
    return v;
}

}  // namespace

// ---------------------------------------------------------------- ACComponent

ACComponent::ACComponent(std::vector<double> breakpoints, std::vector<std::vector<double>> coefficients)
    : breakpoints_(std::move(breakpoints)), coefficients_(std::move(coefficients)) {
    if (coefficients_.empty() && breakpoints_.size() <= 2) {
        breakpoints_.clear();
        return;
    }
    if (breakpoints_.size() != coefficients_.size() + 1)
        throw ValidationError("ac component needs one more breakpoint than pieces");
    if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0)
        throw ValidationError("ac breakpoints must start at 0 and end at 1");
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
        if (!(breakpoints_[i] < breakpoints_[i + 1]))
            throw ValidationError("ac breakpoints must be strictly increasing");
    double scale = 1.0;
    for (auto& c : coefficients_) {
        if (c.empty()) c.push_back(0.0);
        for (double v : c) {
            if (!std::isfinite(v)) throw ValidationError("ac coefficient is not finite");
            scale = std::max(scale, std::abs(v));
        }
    }
    double defect = continuity_defect();
    if (defect > kContinuityTolerance * scale)
        throw ValidationError("ac component is not continuous on the circle (defect " + std::to_string(defect) + ")");
}

ACComponent ACComponent::sine_like(double amplitude, int k) {
    if (k < 1) throw ValidationError("sine_like frequency must be >= 1");
    const int nodes = 8 * k;
    const double w = 2.0 * std::numbers::pi * k;
    std::vector<double> bp(nodes + 1), v(nodes + 1), m(nodes + 1);
    for (int j = 0; j <= nodes; ++j) {
        bp[j] = static_cast<double>(j) / nodes;
        v[j] = amplitude * std::sin(w * bp[j]);
        m[j] = amplitude * w * std::cos(w * bp[j]);
    }
    v[nodes] = v[0];
    m[nodes] = m[0];
    bp[nodes] = 1.0;
    std::vector<std::vector<double>> coeffs(nodes);
    for (int j = 0; j < nodes; ++j) {
        double hj = bp[j + 1] - bp[j];
        double slope = (v[j + 1] - v[j]) / hj;
        double c2 = (3.0 * slope - 2.0 * m[j] - m[j + 1]) / hj;
        double c3 = (m[j] + m[j + 1] - 2.0 * slope) / (hj * hj);
        coeffs[j] = {v[j], m[j], c2, c3};
    }
    return ACComponent(std::move(bp), std::move(coeffs)).minus_mean();
}

ACComponent ACComponent::tent(double amplitude, double center, double half_width) {
    const double lo = center - half_width, hi = center + half_width;
    if (!(half_width > 0) || lo < 0.0 || hi > 1.0)
        throw ValidationError("tent support must lie inside [0,1]");
    std::vector<double> bp{0.0};
    std::vector<std::vector<double>> coeffs;
    const double slope = amplitude / half_width;
    if (lo > 0.0) {
        bp.push_back(lo);
        coeffs.push_back({0.0});
    }
    bp.push_back(center);
    coeffs.push_back({0.0, slope});
    if (hi < 1.0) bp.push_back(hi);
    coeffs.push_back({amplitude, -slope});
    if (hi < 1.0) {
        bp.push_back(1.0);
        coeffs.push_back({0.0});
    } else {
        bp.push_back(1.0);
    }
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    return ACComponent(std::move(bp), std::move(coeffs)).minus_mean();
}

std::size_t ACComponent::piece_of(double x) const {
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    std::size_t k = it == breakpoints_.begin() ? 0 : static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    return std::min(k, coefficients_.size() - 1);
}

double ACComponent::value(double x) const {
    if (is_zero()) return 0.0;
    std::size_t k = piece_of(x);
    return poly::eval(coefficients_[k], x - breakpoints_[k]);
}

double ACComponent::derivative(double x) const {
    if (is_zero()) return 0.0;
    std::size_t k = piece_of(x);
    return poly::eval(poly::derivative(coefficients_[k]), x - breakpoints_[k]);
}

double ACComponent::mean() const { return integral(0.0, 1.0); }

double ACComponent::integral(double a, double b) const {
    if (is_zero() || !(a < b)) return 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < coefficients_.size(); ++k) {
        double lo = std::max(a, breakpoints_[k]), hi = std::min(b, breakpoints_[k + 1]);
        if (!(lo < hi)) continue;
        auto anti = poly::antiderivative(coefficients_[k]);
        total += poly::eval(anti, hi - breakpoints_[k]) - poly::eval(anti, lo - breakpoints_[k]);
    }
    return total;
}

double ACComponent::derivative_l1() const {
    double v = 0.0;
    for (std::size_t k = 0; k < coefficients_.size(); ++k)
        v += monotone_variation(coefficients_[k], breakpoints_[k + 1] - breakpoints_[k]);
    return v;
}

double ACComponent::variation_with_slope(double slope) const {
    if (is_zero()) return std::abs(slope);
    double v = 0.0;
    for (std::size_t k = 0; k < coefficients_.size(); ++k) {
        auto p = poly::add(coefficients_[k], std::vector<double>{0.0, slope});
        v += monotone_variation(p, breakpoints_[k + 1] - breakpoints_[k]);
    }
    return v;
}

double ACComponent::derivative_variation() const {
    if (is_zero()) return 0.0;
    double v = 0.0;
    const std::size_t n = coefficients_.size();
    for (std::size_t k = 0; k < n; ++k) {
        auto d = poly::derivative(coefficients_[k]);
        double h = breakpoints_[k + 1] - breakpoints_[k];
        v += monotone_variation(d, h);
        auto next = poly::derivative(coefficients_[(k + 1) % n]);
        v += std::abs(poly::eval(d, h) - poly::eval(next, 0.0));
    }
    return v;
}

double ACComponent::continuity_defect() const {
    double defect = 0.0;
    const std::size_t n = coefficients_.size();
    for (std::size_t k = 0; k < n; ++k) {
        double end = poly::eval(coefficients_[k], breakpoints_[k + 1] - breakpoints_[k]);
        double start = poly::eval(coefficients_[(k + 1) % n], 0.0);
        defect = std::max(defect, std::abs(end - start));
    }
    return defect;
}

ACComponent ACComponent::operator+(const ACComponent& other) const {
    if (is_zero()) return other;
    if (other.is_zero()) return *this;
    std::vector<double> bp;
    std::merge(breakpoints_.begin(), breakpoints_.end(), other.breakpoints_.begin(), other.breakpoints_.end(),
               std::back_inserter(bp));
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    std::vector<std::vector<double>> coeffs;
    coeffs.reserve(bp.size() - 1);
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        double mid = 0.5 * (bp[i] + bp[i + 1]);
        std::size_t ka = piece_of(mid), kb = other.piece_of(mid);
        auto pa = poly::taylor_shift(coefficients_[ka], bp[i] - breakpoints_[ka]);
        auto pb = poly::taylor_shift(other.coefficients_[kb], bp[i] - other.breakpoints_[kb]);
        coeffs.push_back(poly::add(pa, pb));
    }
    return ACComponent(std::move(bp), std::move(coeffs));
}

ACComponent ACComponent::scaled(double s) const {
    if (is_zero() || s == 0.0) return {};
    ACComponent out = *this;
    for (auto& c : out.coefficients_) c = poly::scale(c, s);
    return out;
}

ACComponent ACComponent::plus_constant(double c) const {
    if (c == 0.0) return *this;
    if (is_zero()) return ACComponent({0.0, 1.0}, {{c}});
    ACComponent out = *this;
    for (auto& p : out.coefficients_) p[0] += c;
    return out;
}

// ----------------------------------------------------------------------- Jump

Jump Jump::at_rational(std::int64_t num, std::int64_t den, double d) {
    if (den == 0) throw ValidationError("jump position with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    num %= den;
    if (num < 0) num += den;
    Jump j;
    j.beta = CirclePoint::from_rational(num, den);
    j.d = d;
    j.beta_text = std::to_string(num) + "/" + std::to_string(den);
    j.rational = std::make_pair(num, den);
    return j;
}

Jump Jump::at(CirclePoint beta, double d) {
    Jump j;
    j.beta = beta;
    j.d = d;
    return j;
}

// --------------------------------------------------------------- RoofFunction

RoofFunction::RoofFunction(double constant, std::vector<Jump> jumps, ACComponent ac, double tail_bound)
    : constant_(constant), jumps_(std::move(jumps)), ac_(std::move(ac)), tail_bound_(tail_bound) {
    if (!std::isfinite(constant_)) throw ValidationError("roof constant is not finite");
    if (!(tail_bound_ >= 0.0) || !std::isfinite(tail_bound_))
        throw ValidationError("tail_bound must be a finite non-negative number");
    for (const auto& j : jumps_)
        if (!std::isfinite(j.d) || j.d == 0.0) throw ValidationError("jump sizes must be finite and non-zero");

    std::vector<u128> raws;
    raws.reserve(jumps_.size());
    for (const auto& j : jumps_) raws.push_back(j.beta.raw());
    std::sort(raws.begin(), raws.end());
    if (std::adjacent_find(raws.begin(), raws.end()) != raws.end())
        throw ValidationError("jump positions must be pairwise distinct");

    std::stable_sort(jumps_.begin(), jumps_.end(),
                     [](const Jump& a, const Jump& b) { return std::abs(a.d) > std::abs(b.d); });

    long double s = 0, a = 0;
    suffix_abs_.assign(jumps_.size() + 1, 0.0);
    for (std::size_t i = jumps_.size(); i-- > 0;) {
        a += std::abs(static_cast<long double>(jumps_[i].d));
        suffix_abs_[i] = static_cast<double>(a);
    }
    for (const auto& j : jumps_) s += j.d;
    s_ = static_cast<double>(s);
    abs_sum_ = static_cast<double>(a);
    compute_bounds();
}

double RoofFunction::tail_after(std::size_t j) const {
    if (j >= jumps_.size()) return tail_bound_;
    return suffix_abs_[j] + tail_bound_;
}

double RoofFunction::sawtooth(CirclePoint x) const {
    long double acc = 0;
    for (const auto& j : jumps_) acc += static_cast<long double>(j.d) * raw_to_long_double((x - j.beta).raw());
    return static_cast<double>(acc);
}

double RoofFunction::evaluate(CirclePoint x) const {
    long double acc = constant_;
    for (const auto& j : jumps_) acc += static_cast<long double>(j.d) * raw_to_long_double((x - j.beta).raw());
    if (!ac_.is_zero()) acc += ac_.value(x.to_double());
    return static_cast<double>(acc);
}

double RoofFunction::evaluate(CirclePoint x, double tolerance) const {
    if (tail_bound_ > tolerance)
        throw PrecisionError("evaluation tolerance " + std::to_string(tolerance) +
                             " is below the truncation tail; achievable tolerance is " + std::to_string(tail_bound_));
    return evaluate(x);
}

double RoofFunction::left_limit(CirclePoint x) const {
    long double acc = constant_;
    for (const auto& j : jumps_) {
        u128 r = (x - j.beta).raw();
        acc += static_cast<long double>(j.d) * (r == 0 ? 1.0L : raw_to_long_double(r));
    }
    if (!ac_.is_zero()) acc += ac_.value(x.to_double());
    return static_cast<double>(acc);
}

void RoofFunction::require_positive(const std::string& what) const {
    if (!(lower_ > 0.0))
        throw HypothesisError(what + ": roof function is not bounded away from zero (certified lower bound " +
                              std::to_string(lower_) + ")");
}

std::vector<CirclePoint> RoofFunction::breakpoints() const {
    std::vector<CirclePoint> pts{CirclePoint{}};
    for (const auto& j : jumps_) pts.push_back(j.beta);
    const auto& bp = ac_.breakpoints();
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) pts.push_back(CirclePoint::from_double(bp[i]));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

void RoofFunction::compute_bounds() {
    const auto pts = breakpoints();
    std::map<u128, double> jump_at;
    for (const auto& j : jumps_) jump_at[j.beta.raw()] += j.d;

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    long double v = evaluate(pts[0]);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (k % 256 == 0) v = evaluate(pts[k]);
        const CirclePoint a = pts[k];
        const CirclePoint b = k + 1 < pts.size() ? pts[k + 1] : CirclePoint{};
        const long double len = k + 1 < pts.size() ? arc_length(a, b) : 1.0L - a.to_long_double();
        const double ad = a.to_double();
        lo = std::min(lo, static_cast<double>(v));
        hi = std::max(hi, static_cast<double>(v));

        long double end = v + static_cast<long double>(s_) * len;
        if (!ac_.is_zero()) {
            const double bd = ad + static_cast<double>(len);
            const std::size_t piece = ac_.piece_of(ad + 0.5 * static_cast<double>(len));
            const auto& bp = ac_.breakpoints();
            auto p = poly::taylor_shift(ac_.coefficients()[piece], ad - bp[piece]);
            const double base = p[0];
            p[0] = 0.0;
            if (p.size() < 2) p.resize(2, 0.0);
            p[1] += s_;
            for (double u : poly::roots_in(poly::derivative(p), 0.0, static_cast<double>(len))) {
                double w = static_cast<double>(v + poly::eval(p, u));
                lo = std::min(lo, w);
                hi = std::max(hi, w);
            }
            end += ac_.value(std::min(bd, 1.0)) - base;
        }
        lo = std::min(lo, static_cast<double>(end));
        hi = std::max(hi, static_cast<double>(end));
        auto it = jump_at.find(b.raw());
        v = end - (it != jump_at.end() ? it->second : 0.0);
    }
    lower_ = lo - tail_bound_;
    upper_ = hi + tail_bound_;
}

double RoofFunction::variation() const {
    return abs_sum_ + ac_.variation_with_slope(s_) + 2.0 * tail_bound_;
}

double RoofFunction::variation_formula() const {
    return abs_sum_ + ac_.derivative_l1() + 2.0 * std::abs(s_) + 2.0 * tail_bound_;
}

double RoofFunction::integral() const { return constant_ + 0.5 * s_ + ac_.mean(); }

RoofFunction RoofFunction::operator+(const RoofFunction& other) const {
    std::map<u128, Jump> merged;
    for (const auto* src : {&jumps_, &other.jumps_})
        for (const auto& j : *src) {
            auto [it, inserted] = merged.try_emplace(j.beta.raw(), j);
            if (!inserted) it->second.d += j.d;
        }
    std::vector<Jump> js;
    for (auto& [raw, j] : merged)
        if (j.d != 0.0) js.push_back(std::move(j));
    return RoofFunction(constant_ + other.constant_, std::move(js), ac_ + other.ac_, tail_bound_ + other.tail_bound_);
}

RoofFunction RoofFunction::scaled(double s) const {
    if (s == 0.0) return constant_roof(0.0);
    std::vector<Jump> js = jumps_;
    for (auto& j : js) j.d *= s;
    return RoofFunction(constant_ * s, std::move(js), ac_.scaled(s), tail_bound_ * std::abs(s));
}

RoofFunction RoofFunction::with_constant(double c) const { return RoofFunction(c, jumps_, ac_, tail_bound_); }

RoofFunction RoofFunction::truncated(std::size_t keep) const {
    if (keep >= jumps_.size()) return *this;
    std::vector<Jump> js(jumps_.begin(), jumps_.begin() + static_cast<std::ptrdiff_t>(keep));
    return RoofFunction(constant_, std::move(js), ac_, tail_after(keep));
}

// ------------------------------------------------------------------ operations

Decomposition decompose(const RoofFunction& f) {
    const double mean = f.ac().mean();
    ACComponent ac = f.ac().is_zero() ? ACComponent{} : f.ac().minus_mean();
    return {std::move(ac), RoofFunction(f.constant() + mean, f.jumps(), {}, f.tail_bound())};
}

VonNeumannApprox von_neumann_approx(const RoofFunction& f, int n) {
    if (n < 1) throw ValidationError("von Neumann approximation index must be >= 1");
    if (!f.in_U()) throw HypothesisError("von Neumann approximation needs S != 0");
    const double target = 1.0 / (3.0 * n);
    for (std::size_t j = 0; j <= f.jump_count(); ++j) {
        double tail = f.tail_after(j);
        if (tail < target) {
            std::vector<Jump> kept(f.jumps().begin(), f.jumps().begin() + static_cast<std::ptrdiff_t>(j));
            return {RoofFunction(f.constant(), std::move(kept), f.ac(), 0.0), j, tail};
        }
    }
    throw PrecisionError("tail_bound " + std::to_string(f.tail_bound()) + " is too coarse for n = " +
                         std::to_string(n) + "; materialize more jumps");
}

DerivativeIntegral interval_derivative_integral(const RoofFunction& f, CirclePoint a, CirclePoint b) {
    const bool full = a == b;
    const long double len = full ? 1.0L : arc_length(a, b);
    const u128 span = (b - a).raw();

    DerivativeIntegral out;
    long double dens = static_cast<long double>(f.S()) * len;
    if (!f.ac().is_zero() && !full) dens += f.ac().value(b.to_double()) - f.ac().value(a.to_double());
    out.via_density = static_cast<double>(dens);

    long double ends = static_cast<long double>(f.left_limit(b)) - f.evaluate(a);
    for (const auto& j : f.jumps()) {
        u128 off = (j.beta - a).raw();
        bool interior = full ? off != 0 : (off != 0 && off < span);
        if (interior) ends += j.d;
    }
    out.via_endpoints = static_cast<double>(ends);
    out.tolerance = 1e-10 * (1.0 + std::abs(f.constant()) + f.abs_jump_sum() + std::abs(f.upper_bound()));
    if (std::abs(out.via_density - out.via_endpoints) > out.tolerance)
        throw ConsistencyError("derivative integral routes disagree: " + std::to_string(out.via_density) + " vs " +
                               std::to_string(out.via_endpoints));
    return out;
}

}  // namespace specflow
