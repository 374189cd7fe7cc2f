#include "copoly2d/weights.hpp"

#include <utility>

#include "copoly2d/errors.hpp"

namespace copoly2d {

namespace {

const Poly kX = Poly::x();
const Poly kY = Poly::y();

Rational rising(const Rational& a, int k) {
  Rational r = 1;
  for (int t = 0; t < k; ++t) r *= a + t;
  return r;
}

Rational binom(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

// E[x^i] for exp(-x^2) on the line.
Rational hermite_moment(int i) {
  if (i % 2) return 0;
  Rational r = 1;
  for (int k = 1; k < i; k += 2) r *= Rational(k, 2);
  return r;
}

// E[x^i] for (1-x)^a (1+x)^b on [-1,1]: x = 2t - 1 with t ~ Beta(b+1, a+1).
Rational jacobi_moment(int i, const Rational& a, const Rational& b) {
  Rational sum = 0;
  for (int k = 0; k <= i; ++k) {
    Rational t = binom(i, k) * rising(b + 1, k) / rising(a + b + 2, k);
    for (int p = 0; p < k; ++p) t *= 2;
    sum += (i - k) % 2 ? Rational(-t) : t;
  }
  return sum;
}

// Term c / factor contributing to one component of the log-gradient.
struct LogTerm {
  Rational cx;
  Rational cy;
  Poly factor;
};

// Builds (px + sum cx/f, py + sum cy/f) over the common denominator formed by
// the factors that actually occur.
std::pair<RatFn, RatFn> log_gradient(const Poly& px, const Poly& py, const std::vector<LogTerm>& terms) {
  std::vector<LogTerm> used;
  for (const auto& t : terms) {
    if (t.cx != 0 || t.cy != 0) used.push_back(t);
  }
  Poly den = 1;
  for (const auto& t : used) den = den * t.factor;
  Poly nx = px * den;
  Poly ny = py * den;
  for (size_t k = 0; k < used.size(); ++k) {
    Poly rest = 1;
    for (size_t l = 0; l < used.size(); ++l) {
      if (l != k) rest = rest * used[l].factor;
    }
    nx += used[k].cx * rest;
    ny += used[k].cy * rest;
  }
  return {RatFn(nx, den), RatFn(ny, den)};
}

void require_params(std::string_view name, const std::vector<Rational>& params, size_t count) {
  if (params.size() != count) {
    throw InvalidParameter(std::string(name) + " expects " + std::to_string(count) + " parameter(s), got " +
                           std::to_string(params.size()));
  }
  for (const auto& p : params) {
    if (p <= -1) throw InvalidParameter(std::string(name) + ": parameters must exceed -1, got " + p.get_str());
  }
}

WeightFamily make_hermite() {
  WeightFamily f;
  f.name = "product_hermite";
  f.phi = PolyMatrix::identity(2);
  f.psi1 = Rational(-2) * kX;
  f.psi2 = Rational(-2) * kY;
  f.log_grad_x = RatFn(f.psi1);
  f.log_grad_y = RatFn(f.psi2);
  f.domain = {DomainType::kPlane, {}};
  f.moment_fn = [](int i, int j) -> Rational { return hermite_moment(i) * hermite_moment(j); };
  return f;
}

WeightFamily make_laguerre(const Rational& a, const Rational& b) {
  WeightFamily f;
  f.name = "product_laguerre";
  f.phi = PolyMatrix::diag({kX, kY});
  f.psi1 = Poly(a + 1) - kX;
  f.psi2 = Poly(b + 1) - kY;
  std::tie(f.log_grad_x, f.log_grad_y) = log_gradient(-1, -1, {{a, 0, kX}, {0, b, kY}});
  f.domain = {DomainType::kQuadrant, {a, b}};
  f.moment_fn = [a, b](int i, int j) -> Rational { return rising(a + 1, i) * rising(b + 1, j); };
  return f;
}

// Phi = diag(1/2, y) rather than diag(1, y): the x and y slopes of psi must
// coincide for the gradient systems to satisfy the level-m equations.
WeightFamily make_hermite_laguerre(const Rational& a) {
  WeightFamily f;
  f.name = "hermite_laguerre";
  f.phi = PolyMatrix::diag({Poly(Rational(1, 2)), kY});
  f.psi1 = -kX;
  f.psi2 = Poly(a + 1) - kY;
  std::tie(f.log_grad_x, f.log_grad_y) = log_gradient(Rational(-2) * kX, -1, {{0, a, kY}});
  f.domain = {DomainType::kHalfplaneXQuadrant, {a}};
  f.moment_fn = [a](int i, int j) -> Rational { return hermite_moment(i) * rising(a + 1, j); };
  return f;
}

// The y factor is scaled by c2 so that both psi slopes equal -(a+b+2).
WeightFamily make_jacobi(const Rational& a, const Rational& b, const Rational& c, const Rational& d) {
  WeightFamily f;
  f.name = "product_jacobi";
  const Rational c2 = (a + b + 2) / (c + d + 2);
  f.phi = PolyMatrix::diag({1 - kX * kX, c2 * (1 - kY * kY)});
  f.psi1 = Poly(b - a) - (a + b + 2) * kX;
  f.psi2 = c2 * (Poly(d - c) - (c + d + 2) * kY);
  std::tie(f.log_grad_x, f.log_grad_y) = log_gradient(
      0, 0, {{-a, 0, 1 - kX}, {b, 0, 1 + kX}, {0, -c, 1 - kY}, {0, d, 1 + kY}});
  f.domain = {DomainType::kSquare, {a, b, c, d}};
  f.moment_fn = [a, b, c, d](int i, int j) -> Rational { return jacobi_moment(i, a, b) * jacobi_moment(j, c, d); };
  return f;
}

WeightFamily make_triangle(const Rational& a, const Rational& b, const Rational& c) {
  WeightFamily f;
  f.name = "triangle";
  const Poly xy = kX * kY;
  f.phi = PolyMatrix(2, 2);
  f.phi(0, 0) = kX - kX * kX;
  f.phi(0, 1) = -xy;
  f.phi(1, 0) = -xy;
  f.phi(1, 1) = kY - kY * kY;
  const Rational s = a + b + c + 3;
  f.psi1 = Poly(a + 1) - s * kX;
  f.psi2 = Poly(b + 1) - s * kY;
  std::tie(f.log_grad_x, f.log_grad_y) =
      log_gradient(0, 0, {{a, 0, kX}, {0, b, kY}, {-c, -c, 1 - kX - kY}});
  f.domain = {DomainType::kTriangle, {a, b, c}};
  f.moment_fn = [a, b, s](int i, int j) -> Rational { return rising(a + 1, i) * rising(b + 1, j) / rising(s, i + j); };
  return f;
}

}  // namespace

std::string_view domain_name(DomainType t) {
  switch (t) {
    case DomainType::kPlane: return "plane";
    case DomainType::kQuadrant: return "quadrant";
    case DomainType::kHalfplaneXQuadrant: return "halfplane_x_quadrant";
    case DomainType::kSquare: return "square";
    case DomainType::kTriangle: return "triangle";
  }
  return "?";
}

DomainType parse_domain(std::string_view name) {
  for (auto t : {DomainType::kPlane, DomainType::kQuadrant, DomainType::kHalfplaneXQuadrant, DomainType::kSquare,
                 DomainType::kTriangle}) {
    if (domain_name(t) == name) return t;
  }
  throw LoadError("unknown domain '" + std::string(name) + "'");
}

int domain_param_count(DomainType t) {
  switch (t) {
    case DomainType::kPlane: return 0;
    case DomainType::kQuadrant: return 2;
    case DomainType::kHalfplaneXQuadrant: return 1;
    case DomainType::kSquare: return 4;
    case DomainType::kTriangle: return 3;
  }
  return 0;
}

const std::vector<BuiltinInfo>& builtin_catalog() {
  static const std::vector<BuiltinInfo> catalog = {
      {"product_hermite", "product_hermite", {}, "exp(-x^2-y^2) on the plane"},
      {"product_laguerre", "product_laguerre(a,b)", {0, 0}, "x^a y^b exp(-x-y) on the open quadrant"},
      {"hermite_laguerre", "hermite_laguerre(a)", {0}, "exp(-x^2) y^a exp(-y) on R x (0,inf)"},
      {"product_jacobi", "product_jacobi(a,b,c,d)", {0, 0, 0, 0},
       "(1-x)^a (1+x)^b (1-y)^c (1+y)^d on the square [-1,1]^2"},
      {"triangle", "triangle(a,b,c)", {0, 0, 0}, "x^a y^b (1-x-y)^c on the simplex x,y > 0, x+y < 1"},
  };
  return catalog;
}

WeightFamily builtin(std::string_view name, const std::vector<Rational>& params) {
  const BuiltinInfo* info = nullptr;
  for (const auto& b : builtin_catalog()) {
    if (b.name == name) info = &b;
  }
  if (!info) throw UnknownFamily("unknown family '" + std::string(name) + "'");
  const std::vector<Rational>& p = params.empty() ? info->default_params : params;
  require_params(name, p, info->default_params.size());

  WeightFamily f;
  if (name == "product_hermite") {
    f = make_hermite();
  } else if (name == "product_laguerre") {
    f = make_laguerre(p[0], p[1]);
  } else if (name == "hermite_laguerre") {
    f = make_hermite_laguerre(p[0]);
  } else if (name == "product_jacobi") {
    f = make_jacobi(p[0], p[1], p[2], p[3]);
  } else {
    f = make_triangle(p[0], p[1], p[2]);
  }
  if (!check_pearson(f)) throw std::logic_error("built-in family " + f.name + " violates its Pearson equation");
  return f;
}

bool check_pearson(const WeightFamily& f) {
  const PolyMatrix& phi = f.phi;
  for (int j = 0; j < 2; ++j) {
    RatFn lhs = RatFn(phi(0, j)) * f.log_grad_x + RatFn(phi(1, j)) * f.log_grad_y +
                RatFn(phi(0, j).dx() + phi(1, j).dy());
    if (!(lhs == RatFn(j == 0 ? f.psi1 : f.psi2))) return false;
  }
  return true;
}

PolyMatrix grad_pair(const Poly& p, const Poly& q) {
  PolyMatrix g(2, 2);
  g(0, 0) = p.dx();
  g(0, 1) = q.dx();
  g(1, 0) = p.dy();
  g(1, 1) = q.dy();
  return g;
}

bool check_phi_conditions(const WeightFamily& f) {
  const PolyMatrix& phi = f.phi;
  for (int j = 0; j < 2; ++j) {
    const Poly& p = phi(0, j);
    const Poly& q = phi(1, j);
    if (!(p * phi.dx() + q * phi.dy() == phi * grad_pair(p, q))) return false;
  }
  return true;
}

PolyMatrix d_matrix(const WeightFamily& f) {
  return PolyMatrix{{f.psi1.coeff(1, 0), f.psi2.coeff(1, 0)}, {f.psi1.coeff(0, 1), f.psi2.coeff(0, 1)}};
}

Rational moments(const WeightFamily& f, int i, int j) {
  if (!f.has_exact_moments(i + j)) {
    throw OracleUnavailable("no exact moment of degree " + std::to_string(i + j) + " for " + f.name);
  }
  return f.moment_fn(i, j);
}

void validate_family(const WeightFamily& f) {
  if (f.phi.rows() != 2 || f.phi.cols() != 2) throw LoadError("phi must be 2x2");
  if (!(f.phi(0, 1) == f.phi(1, 0))) throw LoadError("phi is not symmetric");
  if (f.phi.degree() > 2) throw LoadError("phi has degree above 2");
  if (f.psi1.degree() > 1 || f.psi2.degree() > 1) throw LoadError("psi has degree above 1");
  if (exact_det(d_matrix(f)) == 0) throw LoadError("det(D1, D2) is zero");
  if (static_cast<int>(f.domain.params.size()) != domain_param_count(f.domain.type)) {
    throw LoadError("domain '" + std::string(domain_name(f.domain.type)) + "' expects " +
                    std::to_string(domain_param_count(f.domain.type)) + " parameter(s)");
  }
  for (const auto& p : f.domain.params) {
    if (p <= -1) throw LoadError("domain parameters must exceed -1");
  }
  if (f.moment_fn && f.moment_fn(0, 0) != 1) throw LoadError("moment table must have mu_00 = 1");
}

}  // namespace copoly2d
