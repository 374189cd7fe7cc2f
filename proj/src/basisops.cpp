#include "copoly2d/basisops.hpp"

#include <algorithm>
#include <random>

#include "copoly2d/errors.hpp"

namespace copoly2d {

PolyMatrix x_vec(int n) {
  if (n < 0) return PolyMatrix(0, 1);
  PolyMatrix v(n + 1, 1);
  for (int k = 0; k <= n; ++k) v(k, 0) = Poly::monomial(1, n - k, k);
  return v;
}

PolyMatrix l_mat(int n, int which) {
  if (which != 1 && which != 2) throw ShapeMismatch("l_mat: which must be 1 or 2");
  if (n < 0) return PolyMatrix(0, std::max(n + 2, 0));
  PolyMatrix l(n + 1, n + 2);
  // x shifts nothing, y shifts one column to the right.
  const int shift = which == 1 ? 0 : 1;
  for (int k = 0; k <= n; ++k) l(k, k + shift) = Poly(1);
  return l;
}

PolyMatrix n_mat(int n, int which) {
  if (which != 1 && which != 2) throw ShapeMismatch("n_mat: which must be 1 or 2");
  if (n <= 0) return PolyMatrix(0, std::max(n + 1, 0));
  PolyMatrix d(n, n + 1);
  for (int k = 0; k < n; ++k) {
    if (which == 1) {
      d(k, k) = Poly(n - k);
    } else {
      d(k, k + 1) = Poly(k + 1);
    }
  }
  return d;
}

PolyMatrix eye_kron(int m, const PolyMatrix& a) { return kron(PolyMatrix::identity(1 << m), a); }

StackedPair stacked(int n) {
  return {vstack({l_mat(n, 1), l_mat(n, 2)}), vstack({n_mat(n, 1), n_mat(n, 2)})};
}

StackedPair stacked_m(int n, int m) {
  return {vstack({eye_kron(m, l_mat(n, 1)), eye_kron(m, l_mat(n, 2))}),
          vstack({eye_kron(m, n_mat(n, 1)), eye_kron(m, n_mat(n, 2))})};
}

StackedPair starred(int n, int m) {
  auto lp = [&](int i, int j) { return eye_kron(m, l_mat(n - 1, i) * l_mat(n, j)); };
  auto np = [&](int i, int j) { return eye_kron(m, n_mat(n - 1, i) * n_mat(n, j)); };
  return {vstack({lp(1, 1), lp(2, 1), lp(2, 2)}), vstack({np(1, 1), np(2, 1), np(2, 2)})};
}

std::string_view prop1_name(Prop1Identity which) {
  switch (which) {
    case Prop1Identity::kE12a: return "e12a";
    case Prop1Identity::kE12b: return "e12b";
    case Prop1Identity::kE12c: return "e12c";
    case Prop1Identity::kE12d: return "e12d";
    case Prop1Identity::kE12e: return "e12e";
    case Prop1Identity::kE13a: return "e13a";
    case Prop1Identity::kE13b: return "e13b";
    case Prop1Identity::kE13c: return "e13c";
    case Prop1Identity::kE13d: return "e13d";
  }
  return "?";
}

PolyMatrix random_rational_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 4);
  PolyMatrix a(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      Rational q(num(rng), den(rng));
      q.canonicalize();
      a(r, c) = Poly(q);
    }
  return a;
}

bool prop1_identity_check(int n, int m, Prop1Identity which, std::uint64_t seed) {
  const PolyMatrix xn = eye_kron(m, x_vec(n).transpose());
  auto basis = [&](int k) { return eye_kron(m, x_vec(k).transpose()); };
  auto lt = [](int k, int i) { return l_mat(k, i).transpose(); };
  const Poly x = Poly::x();
  const Poly y = Poly::y();

  switch (which) {
    case Prop1Identity::kE12a:
      return x * xn == basis(n + 1) * eye_kron(m, lt(n, 1)) &&
             y * xn == basis(n + 1) * eye_kron(m, lt(n, 2));
    case Prop1Identity::kE12b:
      return x * x * xn == basis(n + 2) * eye_kron(m, lt(n + 1, 1) * lt(n, 1));
    case Prop1Identity::kE12c:
      return x * y * xn == basis(n + 2) * eye_kron(m, lt(n + 1, 1) * lt(n, 2));
    case Prop1Identity::kE12d:
      return y * y * xn == basis(n + 2) * eye_kron(m, lt(n + 1, 2) * lt(n, 2));
    case Prop1Identity::kE12e: {
      const int h = 1 << m;
      const PolyMatrix a = random_rational_matrix(2 * h, h, seed);
      const PolyMatrix lhs = eye_kron(m, x_vec(1).transpose()) * a * xn;
      const PolyMatrix rhs = basis(n + 1) * eye_kron(m, stacked(n).l.transpose()) *
                             kron(a, PolyMatrix::identity(n + 1));
      return lhs == rhs;
    }
    case Prop1Identity::kE13a:
      return xn.dx() == basis(n - 1) * eye_kron(m, n_mat(n, 1)) &&
             xn.dy() == basis(n - 1) * eye_kron(m, n_mat(n, 2));
    case Prop1Identity::kE13b:
      return xn.dx().dx() == basis(n - 2) * eye_kron(m, n_mat(n - 1, 1) * n_mat(n, 1));
    case Prop1Identity::kE13c:
      return xn.dx().dy() == basis(n - 2) * eye_kron(m, n_mat(n - 1, 1) * n_mat(n, 2));
    case Prop1Identity::kE13d:
      return xn.dy().dy() == basis(n - 2) * eye_kron(m, n_mat(n - 1, 2) * n_mat(n, 2));
  }
  return false;
}

}  // namespace copoly2d
