// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specflow/continued_fraction.hpp"
#include "specflow/roof.hpp"

namespace specflow {

inline constexpr double kThetaMax = 1e3;
inline constexpr std::size_t kJumpSumEnumerationCap = 10'000'000;

/// (2C+1)((2C+1)^j + 1), the denominator shared by the tail conditions.
double theta_denominator(int C, std::size_t j);

struct ThetaResult {
    std::size_t j = 0;
    double theta = 0;
    double tail = 0;  ///< sum_{i>j} |d_i| + tail_bound
};

/// Smallest j (and largest theta <= kThetaMax) with
/// tail_j <= |S| / ((2+theta)(2C+1)((2C+1)^j+1)), or nullopt.
std::optional<ThetaResult> theta_condition(const RoofFunction& f, int C);

/// |S| / ((2+theta)(2C+1)((2C+1)^j+1)).
double theta_radius(double abs_s, int C, std::size_t j, double theta);

struct JumpSumSet {
    std::vector<double> values;  ///< A = {sum_{i<=j} m_i d_i : 0 <= m_i <= 2C}, ascending, deduplicated
    double xi = 0;               ///< theta radius for (j, theta)
    double radius = 0;           ///< covering radius: D lies in A + (-radius, radius)
    std::size_t j = 0;
    int C = 0;
};

/// Enumerates A for the first j jumps. Throws ValidationError past kJumpSumEnumerationCap.
JumpSumSet jump_sum_set_D(const RoofFunction& f, int C, std::size_t j, double theta);

struct DriftWindow {
    double p = 0;
    double eta = 0;
    double gap_lo = 0, gap_hi = 0;  ///< the chosen gap of (A u -A) in (0, |S|)
    ThetaResult theta;
    JumpSumSet set;
};

/// Midpoint p of a largest gap of (A u -A) inside (0, |S|) and a half-width eta
/// with (p - eta - radius, p + eta + radius) free of A u -A.
DriftWindow drift_window(const RoofFunction& f, int C);

struct StabilityCertificate {
    bool admissible = false;
    double var_g = 0;
    double bound = 0;  ///< min{|S(f)| / ((2+eta_g)(2C+1)((2C+1)^{j_f}+1)), |d_{j_f}|}
    double eta_g = 0;
    std::size_t j = 0;
    double theta_f = 0;
    double theta = 0;  ///< theta_{f+g}
    bool reverified = false;
    std::string reason;
};

/// Admissibility of the perturbation f + g and a certificate (theta_{f+g}, j_f).
StabilityCertificate perturbation_stability(const RoofFunction& f, const RoofFunction& g, int C);

struct NoncohomologousExample {
    RoofFunction f;
    struct Row {
        double epsilon;
        std::size_t n_eps;  ///< smallest N with sum_{i>N} d_i <= eps * d_N
        double tail;
        double rhs;
    };
    std::vector<Row> coh_table;
    std::vector<std::string> substitutions;
};

/// d_i = base * 2^{-i^2} at beta_i = 1/p_i (p_i the i-th prime), i <= terms, with the
/// remaining tail certified. Positions are checked against Z + Z alpha.
NoncohomologousExample build_noncohomologous_example(const ContinuedFraction& alpha, double base, int terms,
                                                     const std::vector<double>& eps_grid, double constant = 1.0);

}  // namespace specflow
