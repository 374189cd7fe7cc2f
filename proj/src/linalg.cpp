#include <vector>

#include "copoly2d/errors.hpp"
#include "copoly2d/matpoly.hpp"

namespace copoly2d {

namespace {

using RatRows = std::vector<std::vector<Rational>>;

RatRows to_rational(const PolyMatrix& a, const char* what) {
  RatRows out(a.rows(), std::vector<Rational>(a.cols()));
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) {
      const Poly& p = a(r, c);
      if (!p.is_constant()) throw ShapeMismatch(std::string(what) + ": matrix is not constant");
      out[r][c] = p.constant();
    }
  }
  return out;
}

// Gauss-Jordan elimination restricted to the first `ncols` columns; the
// remaining columns ride along. Returns pivot columns in row order.
std::vector<int> reduce(RatRows& m, int ncols, int* swaps = nullptr, Rational* pivot_product = nullptr) {
  std::vector<int> pivots;
  const int nrows = static_cast<int>(m.size());
  int row = 0;
  if (swaps) *swaps = 0;
  if (pivot_product) *pivot_product = 1;
  for (int col = 0; col < ncols && row < nrows; ++col) {
    int p = row;
    while (p < nrows && m[p][col] == 0) ++p;
    if (p == nrows) continue;
    if (p != row) {
      std::swap(m[p], m[row]);
      if (swaps) ++*swaps;
    }
    const Rational piv = m[row][col];
    if (pivot_product) *pivot_product *= piv;
    for (auto& v : m[row]) v /= piv;
    for (int r = 0; r < nrows; ++r) {
      if (r == row || m[r][col] == 0) continue;
      const Rational f = m[r][col];
      for (size_t c = col; c < m[r].size(); ++c) {
        if (m[row][c] != 0) m[r][c] -= f * m[row][c];
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

RatRows augment(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.rows() != b.rows()) throw ShapeMismatch("solve: row counts of a and b differ");
  RatRows m = to_rational(a, "solve");
  RatRows rhs = to_rational(b, "solve");
  for (size_t r = 0; r < m.size(); ++r) m[r].insert(m[r].end(), rhs[r].begin(), rhs[r].end());
  return m;
}

PolyMatrix solution(const RatRows& m, int n, int nrhs) {
  PolyMatrix x(n, nrhs);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < nrhs; ++c) x(r, c) = Poly(m[r][n + c]);
  return x;
}

}  // namespace

PolyMatrix rat_solve(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.rows() != a.cols()) throw ShapeMismatch("rat_solve needs a square matrix");
  RatRows m = augment(a, b);
  auto pivots = reduce(m, a.cols());
  if (static_cast<int>(pivots.size()) < a.cols()) throw SingularMatrix("rat_solve: matrix is singular");
  return solution(m, a.cols(), b.cols());
}

PolyMatrix rat_solve_full_rank(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.rows() < a.cols()) throw ShapeMismatch("rat_solve_full_rank needs rows >= cols");
  RatRows m = augment(a, b);
  auto pivots = reduce(m, a.cols());
  if (static_cast<int>(pivots.size()) < a.cols()) {
    throw SingularMatrix("rat_solve_full_rank: rank " + std::to_string(pivots.size()) + " < " +
                         std::to_string(a.cols()));
  }
  for (int r = a.cols(); r < a.rows(); ++r) {
    for (int c = 0; c < b.cols(); ++c) {
      if (m[r][a.cols() + c] != 0) throw InconsistentSystem("right-hand side outside the column space");
    }
  }
  return solution(m, a.cols(), b.cols());
}

Rational exact_det(const PolyMatrix& a) {
  if (a.rows() != a.cols()) throw ShapeMismatch("determinant of a non-square matrix");
  RatRows m = to_rational(a, "exact_det");
  int swaps = 0;
  Rational prod;
  auto pivots = reduce(m, a.cols(), &swaps, &prod);
  if (static_cast<int>(pivots.size()) < a.cols()) return 0;
  return swaps % 2 ? Rational(-prod) : prod;
}

int exact_rank(const PolyMatrix& a) {
  RatRows m = to_rational(a, "exact_rank");
  return static_cast<int>(reduce(m, a.cols()).size());
}

PolyMatrix exact_inverse(const PolyMatrix& a) { return rat_solve(a, PolyMatrix::identity(a.rows())); }

}  // namespace copoly2d
