// SPDX-License-Identifier: Apache-2.0
#include "specflow/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace specflow::poly {

double eval(std::span<const double> c, double u) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = std::fma(acc, u, c[i]);
    return acc;
}

std::vector<double> derivative(std::span<const double> c) {
    if (c.size() <= 1) return {0.0};
    std::vector<double> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
    return d;
}

std::vector<double> antiderivative(std::span<const double> c) {
    std::vector<double> a(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) a[i + 1] = c[i] / static_cast<double>(i + 1);
    return a;
}

std::vector<double> taylor_shift(std::span<const double> c, double shift) {
    // Horner-style synthetic division, O(n^2).
    std::vector<double> out(c.begin(), c.end());
    const std::size_t n = out.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = n - 1; j > i; --j) out[j - 1] += shift * out[j];
    return out;
}

std::vector<double> add(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

std::vector<double> scale(std::span<const double> c, double s) {
    std::vector<double> out(c.begin(), c.end());
    for (double& v : out) v *= s;
    return out;
}

int degree(std::span<const double> c) {
    for (std::size_t i = c.size(); i-- > 0;)
        if (c[i] != 0.0) return static_cast<int>(i);
    return -1;
}

std::vector<double> roots_in(std::span<const double> c, double lo, double hi) {
    const int deg = degree(c);
    if (deg <= 0 || !(lo < hi)) return {};
    if (deg == 1) {
        double r = -c[0] / c[1];
        if (r > lo && r < hi) return {r};
        return {};
    }
    std::vector<double> knots{lo};
    for (double r : roots_in(derivative(c), lo, hi)) knots.push_back(r);
    knots.push_back(hi);

    std::vector<double> roots;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        double a = knots[k], b = knots[k + 1];
        double fa = eval(c, a), fb = eval(c, b);
        if (fa == 0.0) {
            if (a > lo && (roots.empty() || roots.back() != a)) roots.push_back(a);
            continue;
        }
        if (fb == 0.0 || (fa < 0) == (fb < 0)) continue;
        for (int it = 0; it < 200 && b - a > 0; ++it) {
            double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;
            double fm = eval(c, m);
            if (fm == 0.0) {
                a = b = m;
                break;
            }
            if ((fm < 0) == (fa < 0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        roots.push_back(0.5 * (a + b));
    }
    return roots;
}

}  // namespace specflow::poly
