// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace specflow::poly {

// Dense polynomials c[0] + c[1] u + c[2] u^2 + ... in a local variable u.

double eval(std::span<const double> c, double u);
std::vector<double> derivative(std::span<const double> c);
std::vector<double> antiderivative(std::span<const double> c);
/// q(v) = p(v + shift).
std::vector<double> taylor_shift(std::span<const double> c, double shift);
std::vector<double> add(std::span<const double> a, std::span<const double> b);
std::vector<double> scale(std::span<const double> c, double s);
int degree(std::span<const double> c);

/// Real roots of p inside (lo, hi), ascending. Isolated through the roots of p'
/// (monotone pieces) and refined by bisection.
std::vector<double> roots_in(std::span<const double> c, double lo, double hi);

}  // namespace specflow::poly
