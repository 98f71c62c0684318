// SPDX-License-Identifier: Apache-2.0
#include "specflow/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "specflow/birkhoff.hpp"

namespace specflow {

namespace {

double one_sum(const RoofFunction& f, CirclePoint alpha, CirclePoint x, std::int64_t n) {
    CompensatedSum acc;
    for (std::int64_t k = 0; k < n; ++k, x += alpha) acc.add(f.evaluate(x));
    return acc.value();
}

// Adds to counts[t] when some f^(j)(x), 1 <= j <= j_max, lies within eps of times[t].
// The sums increase in j because f > 0, so each time is a binary search.
void one_point_hits(const RoofFunction& f, CirclePoint alpha, CirclePoint x, const std::vector<double>& times,
                    double eps, std::int64_t j_max, std::vector<double>& sums, std::vector<std::int64_t>& counts) {
    sums.clear();
    CompensatedSum acc;
    for (std::int64_t j = 1; j <= j_max; ++j, x += alpha) {
        acc.add(f.evaluate(x));
        sums.push_back(acc.value());
    }
    for (std::size_t t = 0; t < times.size(); ++t) {
        auto it = std::upper_bound(sums.begin(), sums.end(), times[t] - eps);
        if (it != sums.end() && *it < times[t] + eps) ++counts[t];
    }
}

}  // namespace

std::vector<CirclePoint> midpoint_grid(std::size_t count) {
    std::vector<CirclePoint> xs;
    xs.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        xs.push_back(CirclePoint::from_rational(static_cast<std::int64_t>(2 * i + 1), static_cast<std::int64_t>(2 * count)));
    return xs;
}

namespace serial {

std::vector<double> birkhoff_batch(const RoofFunction& f, CirclePoint alpha, const std::vector<CirclePoint>& xs,
                                   std::int64_t n) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = one_sum(f, alpha, xs[i], n);
    return out;
}

std::vector<std::int64_t> rigidity_counts(const RoofFunction& f, CirclePoint alpha,
                                          const std::vector<CirclePoint>& xs, const std::vector<double>& times,
                                          double eps, std::int64_t j_max) {
    std::vector<std::int64_t> counts(times.size(), 0);
    std::vector<double> sums;
    for (const auto& x : xs) one_point_hits(f, alpha, x, times, eps, j_max, sums, counts);
    return counts;
}

}  // namespace serial

namespace omp {

std::vector<double> birkhoff_batch(const RoofFunction& f, CirclePoint alpha, const std::vector<CirclePoint>& xs,
                                   std::int64_t n) {
    std::vector<double> out(xs.size());
    const auto count = static_cast<std::int64_t>(xs.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = one_sum(f, alpha, xs[static_cast<std::size_t>(i)], n);
    return out;
}

std::vector<std::int64_t> rigidity_counts(const RoofFunction& f, CirclePoint alpha,
                                          const std::vector<CirclePoint>& xs, const std::vector<double>& times,
                                          double eps, std::int64_t j_max) {
    std::vector<std::int64_t> counts(times.size(), 0);
    const auto count = static_cast<std::int64_t>(xs.size());
#pragma omp parallel
    {
        std::vector<std::int64_t> local(times.size(), 0);
        std::vector<double> sums;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < count; ++i)
            one_point_hits(f, alpha, xs[static_cast<std::size_t>(i)], times, eps, j_max, sums, local);
        // Integer sums commute, so the merge order does not affect the result.
#pragma omp critical
        for (std::size_t t = 0; t < times.size(); ++t) counts[t] += local[t];
    }
    return counts;
}

}  // namespace omp

}  // namespace specflow
