#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "copoly2d/matpoly.hpp"
#include "copoly2d/polycore.hpp"

namespace copoly2d {

/// Support of the weight. The parameters fix the classical weight on it:
///   plane                 exp(-x^2 - y^2)                              (no params)
///   quadrant              x^a y^b exp(-x - y)                          (a, b)
///   halfplane_x_quadrant  exp(-x^2) y^a exp(-y), x real, y > 0         (a)
///   square                (1-x)^a (1+x)^b (1-y)^c (1+y)^d on [-1,1]^2  (a, b, c, d)
///   triangle              x^a y^b (1-x-y)^c on the unit simplex        (a, b, c)
enum class DomainType { kPlane, kQuadrant, kHalfplaneXQuadrant, kSquare, kTriangle };

struct Domain {
  DomainType type = DomainType::kPlane;
  std::vector<Rational> params;
};

std::string_view domain_name(DomainType t);
DomainType parse_domain(std::string_view name);  // throws LoadError
int domain_param_count(DomainType t);

/// Normalized moment oracle mu_{ij} / mu_{00}.
using MomentFn = std::function<Rational(int, int)>;

/// A weight given through its Pearson data. rho itself is never formed; the
/// logarithmic gradient (d/dx rho / rho, d/dy rho / rho) stands in for it.
struct WeightFamily {
  std::string name;
  PolyMatrix phi = PolyMatrix(2, 2);
  Poly psi1;
  Poly psi2;
  RatFn log_grad_x;
  RatFn log_grad_y;
  Domain domain;
  MomentFn moment_fn;        // empty when no exact oracle is known
  int moment_max_degree = -1;  // -1 means unbounded
  bool boundary_assumed = true;

  bool has_exact_moments(int degree = 0) const {
    return static_cast<bool>(moment_fn) && (moment_max_degree < 0 || degree <= moment_max_degree);
  }
};

/// Built-in families by name. params follow the domain's parameter order.
/// Throws UnknownFamily or InvalidParameter (parameters must exceed -1).
WeightFamily builtin(std::string_view name, const std::vector<Rational>& params = {});

struct BuiltinInfo {
  std::string name;
  std::string signature;
  std::vector<Rational> default_params;
  std::string description;
};
const std::vector<BuiltinInfo>& builtin_catalog();

/// div(rho Phi) = rho (psi1, psi2) after division by rho, column by column.
bool check_pearson(const WeightFamily& f);

/// phi11 dPhi/dx + phi21 dPhi/dy = Phi grad(phi11, phi21) and the same with
/// the second column, where grad(p, q) = [[p_x, q_x], [p_y, q_y]].
bool check_phi_conditions(const WeightFamily& f);

/// grad(p, q) as defined above.
PolyMatrix grad_pair(const Poly& p, const Poly& q);

/// The 2x2 constant matrix (D1, D2): column i holds the x and y coefficients of psi_i.
PolyMatrix d_matrix(const WeightFamily& f);

/// Normalized moment; throws OracleUnavailable without an exact oracle.
Rational moments(const WeightFamily& f, int i, int j);

/// Throws LoadError on asymmetric Phi, degree bounds, det(D1, D2) == 0,
/// bad domain parameters or a moment table with mu_00 != 1.
void validate_family(const WeightFamily& f);

}  // namespace copoly2d
