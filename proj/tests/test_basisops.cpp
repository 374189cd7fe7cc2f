#include <gtest/gtest.h>

#include "copoly2d/basisops.hpp"

using namespace copoly2d;

namespace {

Poly P(const char* s) { return Poly::parse(s); }

}  // namespace

TEST(XVec, SmallDegrees) {
  EXPECT_EQ(x_vec(0), PolyMatrix::scalar(1));
  PolyMatrix x1(2, 1);
  x1(0, 0) = P("x");
  x1(1, 0) = P("y");
  EXPECT_EQ(x_vec(1), x1);
  auto x3 = x_vec(3);
  ASSERT_EQ(x3.rows(), 4);
  EXPECT_EQ(x3(0, 0), P("x^3"));
  EXPECT_EQ(x3(1, 0), P("x^2*y"));
  EXPECT_EQ(x3(2, 0), P("x*y^2"));
  EXPECT_EQ(x3(3, 0), P("y^3"));
  EXPECT_EQ(x_vec(-1).rows(), 0);
}

TEST(LMat, MultiplicationByVariables) {
  EXPECT_EQ(l_mat(0, 1), (PolyMatrix{{1, 0}}));
  EXPECT_EQ(l_mat(1, 2), (PolyMatrix{{0, 1, 0}, {0, 0, 1}}));
  for (int n = 0; n <= 4; ++n) {
    EXPECT_EQ(P("x") * x_vec(n), l_mat(n, 1) * x_vec(n + 1));
    EXPECT_EQ(P("y") * x_vec(n), l_mat(n, 2) * x_vec(n + 1));
  }
}

TEST(NMat, DifferentiationOfMonomials) {
  EXPECT_EQ(n_mat(2, 1), (PolyMatrix{{2, 0, 0}, {0, 1, 0}}));
  EXPECT_EQ(n_mat(2, 2), (PolyMatrix{{0, 1, 0}, {0, 0, 2}}));
  EXPECT_EQ(n_mat(0, 1).rows(), 0);
  EXPECT_EQ(n_mat(0, 1).cols(), 1);
  for (int n = 1; n <= 5; ++n) {
    PolyMatrix xn = x_vec(n);
    // Termwise differentiation as the oracle.
    PolyMatrix dx(n + 1, 1), dy(n + 1, 1);
    for (int k = 0; k <= n; ++k) {
      dx(k, 0) = Poly::monomial(n - k, n - k - 1 < 0 ? 0 : n - k - 1, k);
      dy(k, 0) = Poly::monomial(k, n - k, k - 1 < 0 ? 0 : k - 1);
    }
    EXPECT_EQ(n_mat(n, 1).transpose() * x_vec(n - 1), dx);
    EXPECT_EQ(n_mat(n, 2).transpose() * x_vec(n - 1), dy);
  }
}

TEST(Stacked, Shapes) {
  auto s1 = stacked(1);
  EXPECT_EQ(s1.l.rows(), 4);
  EXPECT_EQ(s1.l.cols(), 3);
  EXPECT_EQ(s1.n, PolyMatrix::identity(2));
  auto s0 = stacked(0);
  EXPECT_EQ(s0.n.rows(), 0);
  EXPECT_EQ(s0.n.cols(), 1);
  for (int n = 0; n <= 5; ++n) {
    EXPECT_EQ(stacked(n).l.rows(), 2 * (n + 1));
    EXPECT_EQ(stacked(n).n.cols(), n + 1);
  }
}

TEST(Starred, BlocksAreKroneckerOfProducts) {
  auto s = starred(1, 0);
  EXPECT_EQ(s.l.rows(), 3);
  EXPECT_EQ(s.l.cols(), 3);
  EXPECT_EQ(s.l, vstack({l_mat(0, 1) * l_mat(1, 1), l_mat(0, 2) * l_mat(1, 1), l_mat(0, 2) * l_mat(1, 2)}));

  auto z = starred(0, 0);
  EXPECT_EQ(z.l.rows(), 0);
  EXPECT_TRUE(z.n.is_zero());

  auto s2 = starred(2, 1);
  PolyMatrix i2 = PolyMatrix::identity(2);
  const int h = 2 * 2;
  EXPECT_EQ(s2.l.block(0, 0, h, 8), kron(i2, l_mat(1, 1) * l_mat(2, 1)));
  EXPECT_EQ(s2.l.block(h, 0, h, 8), kron(i2, l_mat(1, 2) * l_mat(2, 1)));
  EXPECT_EQ(s2.l.block(2 * h, 0, h, 8), kron(i2, l_mat(1, 2) * l_mat(2, 2)));
  EXPECT_EQ(s2.n, vstack({kron(i2, n_mat(1, 1) * n_mat(2, 1)), kron(i2, n_mat(1, 2) * n_mat(2, 1)),
                          kron(i2, n_mat(1, 2) * n_mat(2, 2))}));
}

TEST(Prop1, SpecExamples) {
  EXPECT_TRUE(prop1_identity_check(1, 0, Prop1Identity::kE12a));
  EXPECT_TRUE(prop1_identity_check(2, 1, Prop1Identity::kE13c));
  EXPECT_TRUE(prop1_identity_check(3, 2, Prop1Identity::kE12e, 42));
}

TEST(Prop1, AllIdentitiesOnGrid) {
  for (int n = 0; n <= 4; ++n)
    for (int m = 0; m <= 2; ++m)
      for (auto which : kAllProp1) {
        EXPECT_TRUE(prop1_identity_check(n, m, which, 1000 + n * 10 + m))
            << prop1_name(which) << " n=" << n << " m=" << m;
      }
}

TEST(Prop1, E13cDirectDifferentiation) {
  // d^2/dxdy of I_2 (x) X_2^t is a constant 2x6 matrix with ones at the xy slots.
  auto lhs = eye_kron(1, x_vec(2).transpose()).dx().dy();
  PolyMatrix expected(2, 6);
  expected(0, 1) = Poly(1);
  expected(1, 4) = Poly(1);
  EXPECT_EQ(lhs, expected);
}
