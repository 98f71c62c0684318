// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specflow/circle.hpp"

namespace specflow {

/// Continuous piecewise-polynomial function on the circle.
///
/// Piece k lives on [t_k, t_{k+1}) with 0 = t_0 < ... < t_m = 1 and is stored
/// in the local variable u = x - t_k. The zero function has no pieces.
class ACComponent {
public:
    ACComponent() = default;
    ACComponent(std::vector<double> breakpoints, std::vector<std::vector<double>> coefficients);

    /// C^1 cubic Hermite interpolant of amplitude * sin(2 pi k x) on 8k nodes, shifted to zero mean.
    static ACComponent sine_like(double amplitude, int k);
    /// Continuous tent of height `amplitude` over [center - half_width, center + half_width], shifted to zero mean.
    static ACComponent tent(double amplitude, double center, double half_width);

    bool is_zero() const { return coefficients_.empty(); }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<std::vector<double>>& coefficients() const { return coefficients_; }
    std::size_t piece_count() const { return coefficients_.size(); }
    /// Index of the piece containing x in [0,1).
    std::size_t piece_of(double x) const;

    double value(double x) const;
    double derivative(double x) const;
    double mean() const;
    /// Integral over [a, b] with 0 <= a <= b <= 1.
    double integral(double a, double b) const;
    /// ||ac'||_{L^1}.
    double derivative_l1() const;
    /// Integral of |slope + ac'| over [0,1).
    double variation_with_slope(double slope) const;
    /// Var(ac') on the circle, counting jumps of ac' at breakpoints and at 0.
    double derivative_variation() const;
    /// Largest mismatch of one-sided values at breakpoints (continuity defect).
    double continuity_defect() const;

    ACComponent operator+(const ACComponent& other) const;
    ACComponent scaled(double s) const;
    ACComponent plus_constant(double c) const;
    ACComponent minus_mean() const { return plus_constant(-mean()); }

private:
    std::vector<double> breakpoints_;
    std::vector<std::vector<double>> coefficients_;
};

/// One sawtooth term d * {x - beta}. The circle jump of the roof at beta is -d.
struct Jump {
    CirclePoint beta;
    double d = 0;
    /// Exact source text of beta ("p/q" or decimal) when known; empty otherwise.
    std::string beta_text;
    /// beta as a reduced fraction num/den when it is rational and known.
    std::optional<std::pair<std::int64_t, std::int64_t>> rational;

    static Jump at_rational(std::int64_t num, std::int64_t den, double d);
    static Jump at(CirclePoint beta, double d);
    std::string beta_string() const { return beta_text.empty() ? beta.to_decimal() : beta_text; }
};

/// f(x) = c + sum_i d_i {x - beta_i} + ac(x), with sum_{omitted} |d_i| <= tail_bound.
///
/// Jumps are kept ordered by non-increasing |d_i| (stable). The sawtooth is
/// right-continuous: {0} = 0, so f(beta_i) is the value just after the jump.
class RoofFunction {
public:
    RoofFunction() = default;
    RoofFunction(double constant, std::vector<Jump> jumps, ACComponent ac = {}, double tail_bound = 0.0);

    static RoofFunction constant_roof(double c) { return RoofFunction(c, {}); }

    double constant() const { return constant_; }
    const std::vector<Jump>& jumps() const { return jumps_; }
    std::size_t jump_count() const { return jumps_.size(); }
    const ACComponent& ac() const { return ac_; }
    double tail_bound() const { return tail_bound_; }

    /// S = sum d_i over the materialized jumps.
    double S() const { return s_; }
    double abs_jump_sum() const { return abs_sum_; }
    /// sum_{i > j} |d_i| + tail_bound (1-based j; j = 0 is the whole sum).
    double tail_after(std::size_t j) const;
    bool in_U() const { return s_ != 0.0 && std::abs(s_) > tail_bound_; }

    double operator()(CirclePoint x) const { return evaluate(x); }
    double evaluate(CirclePoint x) const;
    /// Throws PrecisionError when tail_bound exceeds tolerance.
    double evaluate(CirclePoint x, double tolerance) const;
    double left_limit(CirclePoint x) const;
    /// Sum of the sawtooth part only (no constant, no ac).
    double sawtooth(CirclePoint x) const;

    /// Certified bounds m <= f <= M including +-tail_bound.
    double lower_bound() const { return lower_; }
    double upper_bound() const { return upper_; }
    bool positive() const { return lower_ > 0.0; }
    /// Throws HypothesisError unless lower_bound() > 0.
    void require_positive(const std::string& what) const;

    /// Exact total variation of the materialized function plus 2 * tail_bound.
    double variation() const;
    /// sum |d_i| + ||ac'||_{L^1} + 2|S|, which dominates variation().
    double variation_formula() const;
    /// Integral over the circle.
    double integral() const;

    /// Jump positions and ac breakpoints as sorted distinct circle points, 0 included.
    std::vector<CirclePoint> breakpoints() const;

    RoofFunction operator+(const RoofFunction& other) const;
    RoofFunction operator-(const RoofFunction& other) const { return *this + other.scaled(-1.0); }
    RoofFunction scaled(double s) const;
    RoofFunction with_constant(double c) const;
    RoofFunction truncated(std::size_t keep) const;

private:
    void compute_bounds();

    double constant_ = 0;
    std::vector<Jump> jumps_;
    ACComponent ac_;
    double tail_bound_ = 0;
    double s_ = 0;
    double abs_sum_ = 0;
    std::vector<double> suffix_abs_;  ///< suffix_abs_[j] = sum_{i >= j} |d_i| (0-based)
    double lower_ = 0;
    double upper_ = 0;
};

struct Decomposition {
    ACComponent ac;   ///< zero-mean absolutely continuous part
    RoofFunction pl;  ///< c' + sum d_i {x - beta_i}, with ac = 0
};

Decomposition decompose(const RoofFunction& f);

/// Keeps the j_n largest jumps with tail < 1/(3n); f - f_n is the omitted sawtooth.
struct VonNeumannApprox {
    RoofFunction fn;
    std::size_t kept = 0;
    double omitted = 0;  ///< sum of omitted |d_i| including tail_bound
};
VonNeumannApprox von_neumann_approx(const RoofFunction& f, int n);

/// Integral of f' over the arc from a to b (a == b is the full circle), by two routes.
struct DerivativeIntegral {
    double via_density = 0;    ///< ac(b) - ac(a) + S * |arc|
    double via_endpoints = 0;  ///< f(b-) - f(a+) - sum of interior circle jumps
    double tolerance = 0;
};
DerivativeIntegral interval_derivative_integral(const RoofFunction& f, CirclePoint a, CirclePoint b);

}  // namespace specflow
