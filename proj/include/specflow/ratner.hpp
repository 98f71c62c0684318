// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specflow/continued_fraction.hpp"
#include "specflow/jump_combinatorics.hpp"
#include "specflow/roof.hpp"

namespace specflow {

/// Tolerance added to the covering radius when testing rho against (sgn S) p - A.
inline constexpr double kRhoTolerance = 1e-8;

struct RatnerParams {
    double epsilon = 0;
    std::int64_t N = 0;
    std::size_t m_eps = 0;
    double kappa = 0;
    double delta = 0;
    double p = 0;
    double eta = 0;
    int C = 0;
    int s0 = 0;
    int s_min = 1;
    double S = 0;
    DriftWindow window;  ///< carries A, xi and the covering radius
};

/// Smallest m >= 1 with sum_{i>m} |d_i| + tail_bound < eps / (4(2C+1)).
std::size_t compute_m_eps(const RoofFunction& f, double epsilon, int C);

double compute_kappa(double epsilon, std::size_t m_eps, int C, double p);

struct DeltaChoice {
    double delta = 0;
    int s0 = 0;
};

/// Smallest s0 >= s_min with min(kappa, 1) q_{s0} > N, and delta = p / (|S| q_{s0+1}).
DeltaChoice compute_delta(double p, double S, const ContinuedFraction& alpha, double kappa, std::int64_t N,
                          int s_min = 1);

/// The unique s with p / (|S| q_{s+1}) < ||x - y|| <= p / (|S| q_s).
int scale_select(CirclePoint x, CirclePoint y, double p, double S, const ContinuedFraction& alpha);

/// Smallest s >= 1 whose equicontinuity scan of the ac part falls below eps / 4.
int equicontinuity_threshold(const ACComponent& ac, const ContinuedFraction& alpha, double epsilon,
                             int samples = 16);

/// All constants for one (f, alpha, eps, N). Throws HypothesisError outside the class
/// or when the tail condition fails.
RatnerParams make_ratner_params(const RoofFunction& f, const ContinuedFraction& alpha, double epsilon,
                                std::int64_t N, int equicontinuity_samples = 16);

struct DriftReport {
    int s = 0;
    std::int64_t M = 0;
    std::int64_t L = 0;
    double rho = 0;
    double hit_fraction = 0;
    double kappa_achieved = 0;
    double dbar_at_M = 0;
    double rho_distance = 0;  ///< distance from rho to the nearest (sgn S) p - a
    bool swapped = false;     ///< x and y were exchanged so that y = x + ||x - y||
    bool boundary_critical = false;
    std::string diagnostic;
    bool found() const { return L > 0; }
};

/// Longest J = [M, M+L] in [q_s, q_{s+1}] with |g(n) - rho| < eps for rho = (sgn S) p - dbar_M,
/// where g(n) = f^(n)(y) - f^(n)(x).
DriftReport find_drift_interval(const RoofFunction& f, const ContinuedFraction& alpha, CirclePoint x, CirclePoint y,
                                const RatnerParams& params);

/// g(n) for 0 <= n <= n_max, summed as compensated differences.
std::vector<double> drift_trace(const RoofFunction& f, CirclePoint alpha, CirclePoint x, CirclePoint y,
                                std::int64_t n_max);

/// Fraction of n in [M, M+L] with |g(n) - rho| < eps.
double hit_fraction(const std::vector<double>& g, std::int64_t M, std::int64_t L, double rho, double epsilon);

struct ContractCheck {
    bool kappa_ok = false, M_ok = false, L_ok = false, rho_ok = false, hits_ok = false;
    bool all() const { return kappa_ok && M_ok && L_ok && rho_ok && hits_ok; }
    std::string failures() const;
};

ContractCheck check_contract(const DriftReport& r, const RatnerParams& params);

struct RatnerTrial {
    std::uint64_t index = 0;
    CirclePoint x, y;
    double distance = 0;
    DriftReport report;
    bool success = false;
    bool falsification = false;
    std::string reason;  ///< set for exceptional pairs and falsification events
};

struct RatnerPopulation {
    RatnerParams params;
    std::uint64_t seed = 0;
    std::vector<RatnerTrial> trials;
    std::size_t successes = 0;
    std::size_t falsifications = 0;
    std::optional<double> success_fraction;  ///< empty when no trials ran
};

/// Seeded pairs (x, x + d) with d uniform in (0, delta); trials run in parallel and
/// are stored by index.
RatnerPopulation ratner_population_experiment(const RoofFunction& f, const ContinuedFraction& alpha, double epsilon,
                                              std::int64_t N, std::size_t trials, std::uint64_t seed);

}  // namespace specflow
