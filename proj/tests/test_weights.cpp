#include <gtest/gtest.h>

#include <cmath>

#include "copoly2d/errors.hpp"
#include "copoly2d/family_io.hpp"
#include "copoly2d/quadrature.hpp"
#include "copoly2d/weights.hpp"

using namespace copoly2d;

namespace {

Poly P(const char* s) { return Poly::parse(s); }

std::vector<WeightFamily> all_builtins() {
  return {builtin("product_hermite"),
          builtin("product_laguerre", {0, 0}),
          builtin("product_laguerre", {1, 2}),
          builtin("hermite_laguerre", {0}),
          builtin("hermite_laguerre", {Rational(3, 2)}),
          builtin("product_jacobi", {0, 0, 0, 0}),
          builtin("product_jacobi", {Rational(1, 2), Rational(-1, 2), 2, 1}),
          builtin("triangle", {0, 0, 0}),
          builtin("triangle", {1, 1, 1}),
          builtin("triangle", {Rational(1, 2), 0, 2})};
}

// Dirichlet integral ratio computed with floating Gamma functions.
double dirichlet(int i, int j, double a, double b, double c) {
  auto lg = [](double v) { return std::lgamma(v); };
  double num = lg(a + i + 1) + lg(b + j + 1) + lg(c + 1) - lg(a + b + c + i + j + 3);
  double den = lg(a + 1) + lg(b + 1) + lg(c + 1) - lg(a + b + c + 3);
  return std::exp(num - den);
}

}  // namespace

TEST(Builtins, PearsonPhiConditionsAndDeterminant) {
  for (const auto& f : all_builtins()) {
    EXPECT_TRUE(check_pearson(f)) << f.name;
    EXPECT_TRUE(check_phi_conditions(f)) << f.name;
    EXPECT_NE(exact_det(d_matrix(f)), 0) << f.name;
    EXPECT_NO_THROW(validate_family(f)) << f.name;
    EXPECT_EQ(moments(f, 0, 0), 1) << f.name;
  }
}

TEST(Builtins, HermiteData) {
  auto f = builtin("product_hermite");
  EXPECT_EQ(f.phi, PolyMatrix::identity(2));
  EXPECT_EQ(f.psi1, P("-2*x"));
  EXPECT_TRUE(f.log_grad_x == RatFn(P("-2*x")));
  EXPECT_EQ(exact_det(d_matrix(f)), 4);
}

TEST(Builtins, LaguerreAndJacobiData) {
  auto l = builtin("product_laguerre", {0, 0});
  EXPECT_EQ(l.phi, PolyMatrix::diag({P("x"), P("y")}));
  EXPECT_EQ(l.psi1, P("1 - x"));
  EXPECT_EQ(l.psi2, P("1 - y"));
  auto j = builtin("product_jacobi", {0, 0, 0, 0});
  EXPECT_EQ(j.phi, PolyMatrix::diag({P("1 - x^2"), P("1 - y^2")}));
  EXPECT_EQ(j.psi1, P("-2*x"));
  EXPECT_EQ(j.psi2, P("-2*y"));
  auto t = builtin("triangle", {0, 0, 0});
  EXPECT_EQ(t.phi(0, 1), P("-x*y"));
  EXPECT_EQ(t.psi1.degree(), 1);
}

TEST(Builtins, Errors) {
  EXPECT_THROW(builtin("legendre"), UnknownFamily);
  EXPECT_THROW(builtin("product_laguerre", {-1, 0}), InvalidParameter);
  EXPECT_THROW(builtin("triangle", {0, 0}), InvalidParameter);
}

TEST(Pearson, PerturbedPsiFails) {
  auto f = builtin("product_hermite");
  f.psi1 = P("-2*x + 1");
  EXPECT_FALSE(check_pearson(f));
}

TEST(PhiConditions, HandExpandedCases) {
  auto f = builtin("product_hermite");
  EXPECT_TRUE(check_phi_conditions(f));
  f.phi = PolyMatrix::diag({P("x"), P("y")});
  EXPECT_TRUE(check_phi_conditions(f));
  f.phi = PolyMatrix{{1, 0}, {0, 1}};
  f.phi(0, 1) = P("x");
  f.phi(1, 0) = P("x");
  // phi11 dPhi/dx = [[0,1],[1,0]] while Phi grad(1, x) = [[0,1],[0,x]].
  EXPECT_FALSE(check_phi_conditions(f));
}

TEST(Moments, ClosedForms) {
  auto h = builtin("product_hermite");
  EXPECT_EQ(moments(h, 1, 0), 0);
  EXPECT_EQ(moments(h, 2, 0), Rational(1, 2));
  EXPECT_EQ(moments(h, 4, 2), Rational(3, 8));
  auto t = builtin("triangle", {0, 0, 0});
  EXPECT_EQ(moments(t, 1, 0), Rational(1, 3));
  auto j = builtin("product_jacobi", {0, 0, 0, 0});
  EXPECT_EQ(moments(j, 2, 0), Rational(1, 3));
  EXPECT_EQ(moments(j, 3, 2), 0);
  auto l = builtin("product_laguerre", {1, 2});
  EXPECT_EQ(moments(l, 2, 1), 6 * 3);
}

TEST(Moments, HermiteAgainstOneDimensionalQuadrature) {
  auto r = gauss_hermite(12);
  double m2 = 0;
  for (size_t k = 0; k < r.nodes.size(); ++k) m2 += r.weights[k] * r.nodes[k] * r.nodes[k];
  EXPECT_NEAR(m2, 0.5, 1e-14);
}

TEST(Moments, TriangleAgainstDirichletGamma) {
  auto t = builtin("triangle", {1, 1, 1});
  for (int i = 0; i <= 5; ++i)
    for (int j = 0; i + j <= 6; ++j)
      EXPECT_NEAR(moments(t, i, j).get_d(), dirichlet(i, j, 1, 1, 1), 1e-13);
}

TEST(Moments, UnavailableWithoutOracle) {
  auto f = builtin("product_hermite");
  f.moment_fn = nullptr;
  EXPECT_THROW(moments(f, 0, 0), OracleUnavailable);
}

TEST(Quadrature, NodeCountAndHermiteMoment) {
  auto q = make_quadrature(builtin("product_hermite"), 10);
  EXPECT_EQ(q.size(), 100u);
  EXPECT_NEAR(quad_moment(q, 4, 2), 0.75 * 0.5, 1e-12);
  EXPECT_THROW(make_quadrature(builtin("product_hermite"), 0), InvalidParameter);
}

TEST(Quadrature, OrderOneIntegratesConstants) {
  for (const auto& f : all_builtins()) EXPECT_NEAR(quad_moment(make_quadrature(f, 1), 0, 0), 1.0, 1e-15) << f.name;
}

TEST(Quadrature, AgreesWithExactMomentsUpToDegree) {
  const int order = 8;
  for (const auto& f : all_builtins()) {
    auto q = make_quadrature(f, order);
    for (int d = 0; d <= 2 * order - 1; ++d)
      for (int j = 0; j <= d; ++j) {
        const double exact = moments(f, d - j, j).get_d();
        EXPECT_LE(std::abs(quad_moment(q, d - j, j) - exact), 1e-12 * std::max(1.0, std::abs(exact)))
            << f.name << " (" << d - j << "," << j << ")";
      }
  }
}

TEST(Quadrature, TriangleDirichletSpecExample) {
  auto q = make_quadrature(builtin("triangle", {1, 1, 1}), 8);
  EXPECT_NEAR(quad_moment(q, 2, 1), dirichlet(2, 1, 1, 1, 1), 1e-12);
}

TEST(FamilyIo, RoundTripKeepsEverything) {
  for (const auto& f : all_builtins()) {
    auto doc = family_to_json(f, 10);
    auto g = family_from_json(doc);
    EXPECT_EQ(g.name, f.name);
    EXPECT_EQ(g.phi, f.phi);
    EXPECT_EQ(g.psi1, f.psi1);
    EXPECT_EQ(g.psi2, f.psi2);
    EXPECT_TRUE(g.log_grad_x == f.log_grad_x);
    EXPECT_TRUE(g.log_grad_y == f.log_grad_y);
    EXPECT_EQ(g.domain.params, f.domain.params);
    EXPECT_EQ(g.moment_max_degree, 10);
    EXPECT_EQ(moments(g, 3, 4), moments(f, 3, 4));
    EXPECT_THROW(moments(g, 6, 5), OracleUnavailable);
    EXPECT_EQ(family_to_json(g, 10), doc);
  }
}

TEST(FamilyIo, RejectsInvalidDocuments) {
  auto doc = family_to_json(builtin("product_hermite"), 4);
  auto asym = doc;
  asym["phi"][0][1] = "x";
  EXPECT_THROW(family_from_json(asym), LoadError);
  auto cubic = doc;
  cubic["phi"][0][0] = "1 + x^3";
  EXPECT_THROW(family_from_json(cubic), LoadError);
  auto degenerate = doc;
  degenerate["psi2"] = "-2*x";
  EXPECT_THROW(family_from_json(degenerate), LoadError);
  auto unnormalized = doc;
  unnormalized["moments"]["entries"][0][2] = "2";
  EXPECT_THROW(family_from_json(unnormalized), LoadError);
  auto missing = doc;
  missing.erase("psi1");
  EXPECT_THROW(family_from_json(missing), LoadError);
  auto bad_domain = doc;
  bad_domain["domain"]["type"] = "disk";
  EXPECT_THROW(family_from_json(bad_domain), LoadError);
  auto bad_poly = doc;
  bad_poly["psi1"] = "-2*x +";
  EXPECT_THROW(family_from_json(bad_poly), LoadError);
  EXPECT_THROW(load_family_file("/nonexistent/family.json"), LoadError);
}
