#include "copoly2d/quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "copoly2d/errors.hpp"

namespace copoly2d {

namespace {

using Real = long double;

// Golub-Welsch: eigenpairs of the symmetric Jacobi matrix of the monic
// recurrence p_{k+1} = (x - a_k) p_k - b_k^2 p_{k-1}.
Rule1d golub_welsch(const std::vector<Real>& a, const std::vector<Real>& b) {
  const int n = static_cast<int>(a.size());
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> j = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    j(k, k) = a[k];
    if (k + 1 < n) {
      j(k, k + 1) = b[k + 1];
      j(k + 1, k) = b[k + 1];
    }
  }
  Eigen::SelfAdjointEigenSolver<decltype(j)> es(j);
  std::vector<std::pair<Real, Real>> pts(n);
  Real total = 0;
  for (int k = 0; k < n; ++k) {
    Real v = es.eigenvectors()(0, k);
    pts[k] = {es.eigenvalues()(k), v * v};
    total += v * v;
  }
  std::sort(pts.begin(), pts.end());
  Rule1d r;
  for (const auto& [x, w] : pts) {
    r.nodes.push_back(static_cast<double>(x));
    r.weights.push_back(static_cast<double>(w / total));
  }
  return r;
}

// Mirror a rule for an even weight so odd moments cancel exactly.
void symmetrize(Rule1d& r) {
  const size_t n = r.nodes.size();
  for (size_t k = 0; k < n / 2; ++k) {
    const size_t l = n - 1 - k;
    const double x = 0.5 * (r.nodes[l] - r.nodes[k]);
    const double w = 0.5 * (r.weights[l] + r.weights[k]);
    r.nodes[k] = -x;
    r.nodes[l] = x;
    r.weights[k] = w;
    r.weights[l] = w;
  }
  if (n % 2) r.nodes[n / 2] = 0.0;
}

void require_order(int order) {
  if (order < 1) throw InvalidParameter("quadrature order must be at least 1");
}

}  // namespace

Rule1d gauss_hermite(int order) {
  require_order(order);
  std::vector<Real> a(order, 0), b(order, 0);
  for (int k = 1; k < order; ++k) b[k] = std::sqrt(static_cast<Real>(k) / 2);
  Rule1d r = golub_welsch(a, b);
  symmetrize(r);
  return r;
}

Rule1d gauss_laguerre(int order, double alpha) {
  require_order(order);
  if (alpha <= -1) throw InvalidParameter("Laguerre parameter must exceed -1");
  const Real al = alpha;
  std::vector<Real> a(order), b(order, 0);
  for (int k = 0; k < order; ++k) a[k] = 2 * k + al + 1;
  for (int k = 1; k < order; ++k) b[k] = std::sqrt(k * (k + al));
  return golub_welsch(a, b);
}

Rule1d gauss_jacobi(int order, double alpha, double beta) {
  require_order(order);
  if (alpha <= -1 || beta <= -1) throw InvalidParameter("Jacobi parameters must exceed -1");
  const Real al = alpha, be = beta, s = al + be;
  std::vector<Real> a(order), b(order, 0);
  for (int k = 0; k < order; ++k) {
    if (k == 0) {
      a[k] = (be - al) / (s + 2);
    } else {
      a[k] = (be * be - al * al) / ((2 * k + s) * (2 * k + s + 2));
    }
  }
  for (int k = 1; k < order; ++k) {
    Real b2;
    if (k == 1) {
      b2 = 4 * (1 + al) * (1 + be) / ((2 + s) * (2 + s) * (3 + s));
    } else {
      const Real t = 2 * k + s;
      b2 = 4 * k * (k + al) * (k + be) * (k + s) / (t * t * (t + 1) * (t - 1));
    }
    b[k] = std::sqrt(b2);
  }
  Rule1d r = golub_welsch(a, b);
  if (alpha == beta) symmetrize(r);
  return r;
}

QuadRule make_quadrature(const WeightFamily& f, int order) {
  require_order(order);
  std::vector<double> p;
  for (const auto& q : f.domain.params) p.push_back(q.get_d());
  if (static_cast<int>(p.size()) != domain_param_count(f.domain.type)) {
    throw InvalidParameter("domain parameter count mismatch for quadrature");
  }

  Rule1d rx, ry;
  switch (f.domain.type) {
    case DomainType::kPlane:
      rx = ry = gauss_hermite(order);
      break;
    case DomainType::kQuadrant:
      rx = gauss_laguerre(order, p[0]);
      ry = gauss_laguerre(order, p[1]);
      break;
    case DomainType::kHalfplaneXQuadrant:
      rx = gauss_hermite(order);
      ry = gauss_laguerre(order, p[0]);
      break;
    case DomainType::kSquare:
      rx = gauss_jacobi(order, p[0], p[1]);
      ry = gauss_jacobi(order, p[2], p[3]);
      break;
    case DomainType::kTriangle: {
      // x^a y^b (1-x-y)^c dx dy = u^a (1-u)^{b+c+1} v^b (1-v)^c du dv.
      // On [0,1], t^a (1-t)^e is the Jacobi weight (1-s)^e (1+s)^a with t = (1+s)/2.
      Rule1d ru = gauss_jacobi(order, p[1] + p[2] + 1, p[0]);
      Rule1d rv = gauss_jacobi(order, p[2], p[1]);
      QuadRule q;
      q.order = order;
      for (size_t i = 0; i < ru.nodes.size(); ++i) {
        const double u = 0.5 * (1 + ru.nodes[i]);
        for (size_t j = 0; j < rv.nodes.size(); ++j) {
          const double v = 0.5 * (1 + rv.nodes[j]);
          q.xs.push_back(u);
          q.ys.push_back(v * (1 - u));
          q.weights.push_back(ru.weights[i] * rv.weights[j]);
        }
      }
      return q;
    }
  }
  QuadRule q;
  q.order = order;
  for (size_t i = 0; i < rx.nodes.size(); ++i)
    for (size_t j = 0; j < ry.nodes.size(); ++j) {
      q.xs.push_back(rx.nodes[i]);
      q.ys.push_back(ry.nodes[j]);
      q.weights.push_back(rx.weights[i] * ry.weights[j]);
    }
  q.tensor = std::make_pair(std::move(rx), std::move(ry));
  return q;
}

namespace {

// Mirrored nodes are added in pairs first so symmetric rules give exact zeros.
double moment_1d(const Rule1d& r, int i) {
  auto term = [&](size_t k) {
    double t = r.weights[k];
    for (int e = 0; e < i; ++e) t *= r.nodes[k];
    return t;
  };
  const size_t n = r.nodes.size();
  double sum = n % 2 ? term(n / 2) : 0.0;
  for (size_t k = 0; k < n / 2; ++k) sum += term(k) + term(n - 1 - k);
  return sum;
}

}  // namespace

double quad_moment(const QuadRule& q, int i, int j) {
  if (q.tensor) return moment_1d(q.tensor->first, i) * moment_1d(q.tensor->second, j);
  double sum = 0.0;
  for (size_t k = 0; k < q.size(); ++k) {
    double t = q.weights[k];
    for (int e = 0; e < i; ++e) t *= q.xs[k];
    for (int e = 0; e < j; ++e) t *= q.ys[k];
    sum += t;
  }
  return sum;
}

}  // namespace copoly2d
