#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "copoly2d/weights.hpp"

namespace copoly2d {

/// Gauss rule for one variable, weights normalized to sum to 1.
struct Rule1d {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// exp(-x^2) on the real line.
Rule1d gauss_hermite(int order);
/// x^a exp(-x) on (0, inf).
Rule1d gauss_laguerre(int order, double a);
/// (1-x)^a (1+x)^b on (-1, 1).
Rule1d gauss_jacobi(int order, double a, double b);

/// Two-dimensional rule for the normalized weight rho / mu_00. Weights sum to 1.
struct QuadRule {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> weights;
  int order = 0;
  // Set for product domains; moments are then formed from the two factors so
  // that odd moments of symmetric factors cancel exactly.
  std::optional<std::pair<Rule1d, Rule1d>> tensor;

  size_t size() const { return weights.size(); }
};

/// Tensor Gauss rule (order nodes per variable) on product domains and a
/// Duffy-collapsed tensor rule x = u, y = v (1 - u) on the triangle. Exact for
/// total degree <= 2 order - 1 up to rounding. Throws InvalidParameter when
/// order < 1.
QuadRule make_quadrature(const WeightFamily& f, int order);

/// sum_k w_k x_k^i y_k^j.
double quad_moment(const QuadRule& q, int i, int j);

}  // namespace copoly2d
