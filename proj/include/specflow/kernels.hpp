// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "specflow/circle.hpp"
#include "specflow/roof.hpp"

namespace specflow {

/// x_i = (2i + 1) / (2 count), i < count.
std::vector<CirclePoint> midpoint_grid(std::size_t count);

/// Birkhoff values and rigidity hit counts. Both namespaces return identical results;
/// the omp variants split work by sample index and merge in index order.
namespace serial {

/// f^(n)(x_i) for every sample, n >= 0.
std::vector<double> birkhoff_batch(const RoofFunction& f, CirclePoint alpha, const std::vector<CirclePoint>& xs,
                                   std::int64_t n);

/// counts[t] = #{i : exists 1 <= j <= j_max with |f^(j)(x_i) - times[t]| < eps}. Needs f > 0.
std::vector<std::int64_t> rigidity_counts(const RoofFunction& f, CirclePoint alpha,
                                          const std::vector<CirclePoint>& xs, const std::vector<double>& times,
                                          double eps, std::int64_t j_max);

}  // namespace serial

namespace omp {

std::vector<double> birkhoff_batch(const RoofFunction& f, CirclePoint alpha, const std::vector<CirclePoint>& xs,
                                   std::int64_t n);

std::vector<std::int64_t> rigidity_counts(const RoofFunction& f, CirclePoint alpha,
                                          const std::vector<CirclePoint>& xs, const std::vector<double>& times,
                                          double eps, std::int64_t j_max);

}  // namespace omp

}  // namespace specflow
