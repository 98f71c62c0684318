// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "specflow/continued_fraction.hpp"
#include "specflow/roof.hpp"

namespace specflow {

struct GaussRule {
    std::vector<long double> nodes;  ///< on [-1, 1], ascending
    std::vector<long double> weights;
};

/// n-point Gauss-Legendre rule, cached. Thread-safe.
const GaussRule& gauss_legendre(int n);

struct OscillatoryIntegral {
    std::complex<double> value;
    double error_bound = 0;
    std::size_t cells = 0;
    int max_order = 0;
};

/// Integral over [0,1) of exp(2 pi i r f^(q)(x)), per cell of f^(q) with a Gauss rule of order
/// max(4, ceil(2 pi |r| * slope * width) + 4). Throws PrecisionError above `tolerance`.
OscillatoryIntegral oscillatory_integral(const RoofFunction& f, const ContinuedFraction& alpha, double r,
                                         std::int64_t q, double tolerance = 1e-8);

struct MixingPoint {
    double r = 0;
    std::int64_t q = 0;
    double magnitude = 0;
    double quad_error = 0;
    double bound = 0;  ///< K/(pi|r|S) + Var(h)/S + Var(g')/(2 pi |r| S^2 q) + quad_error
    bool within() const { return magnitude <= bound; }
};

struct MixingReport {
    std::vector<MixingPoint> grid;
    std::size_t K = 0;
    double S = 0;  ///< S(g_vn)
    double var_h = 0;
    double var_h_over_S = 0;
    double var_g_prime = 0;
    double bound_c = 0;       ///< Var(h)/S plus half the remaining room below 1
    std::optional<double> r0;  ///< smallest listed r from which every max_q |I| < bound_c
    bool all_within() const;
};

/// Reduces f and g_vn to their piecewise linear parts, sets h = f - g_vn and checks the
/// three-term bound at every grid point. Throws ValidationError unless Var(h) < |S(g_vn)|.
MixingReport weak_mixing_bound_check(const RoofFunction& f, const RoofFunction& g_vn, const ContinuedFraction& alpha,
                                     const std::vector<double>& r_list, const std::vector<std::int64_t>& q_list);

struct JWindow {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

/// Integers j with (t - eps)/M_f < j < (t + eps)/m_f, widened by one on each side.
JWindow rigidity_window(const RoofFunction& f, double t, double eps);

/// Fraction of the midpoint grid with |f^(j)(x) - t| < eps for some j >= 1.
double rigidity_statistic(const RoofFunction& f, const ContinuedFraction& alpha, double t, double eps,
                          std::size_t grid_n);

struct RigidityProfile {
    double epsilon = 0;
    std::size_t grid_n = 0;
    std::vector<double> times;
    std::vector<double> mass;
    std::vector<JWindow> j_window;
    std::vector<bool> injected;  ///< t is a Birkhoff value f^(q_n)(x0)
    double sup = 0;
    double argmax = 0;
};

/// Linear grid of steps + 1 times in [t_min, t_max] plus the values f^(q_n)(x0) inside it.
RigidityProfile partial_rigidity_scan(const RoofFunction& f, const ContinuedFraction& alpha, double eps, double t_min,
                                      double t_max, std::size_t steps, std::size_t grid_n = 20000,
                                      CirclePoint x0 = CirclePoint::from_rational(1, 2));

struct EtaRow {
    double epsilon = 0;
    std::optional<std::size_t> eta;  ///< empty when the certified tail is too coarse
    double product = 0;              ///< eta * epsilon
};

struct EtaTable {
    std::vector<EtaRow> rows;
    bool truncation_insufficient = false;
    bool trends_to_zero = false;
};

/// Smallest eta(eps) with sum_{i>eta} |d_i| + tail_bound < eps / (C2/C1 + 1).
EtaTable eta_condition_check(const RoofFunction& f, double C1, double C2, const std::vector<double>& eps_grid);

struct Histogram {
    int n_index = 0;
    std::uint64_t q = 0;
    std::size_t samples = 0;
    double bin_width = 0;
    double first_left = 0;
    std::vector<double> mass;
    double tau = 0;
    double mass_inside = 0;  ///< fraction with |h^(q)(x)| < tau
    double min = 0, max = 0;
};

inline double default_bin_width(double eps) { return eps / 4 < 0.01 ? eps / 4 : 0.01; }

/// Empirical law of h^(q_n)(x) over `samples` midpoints.
Histogram birkhoff_distribution_along_qn(const RoofFunction& h, const ContinuedFraction& alpha, int n_index,
                                         std::size_t samples, double tau, double bin_width = 0.01);

}  // namespace specflow
