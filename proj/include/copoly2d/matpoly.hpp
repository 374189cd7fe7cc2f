#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "copoly2d/polycore.hpp"

namespace copoly2d {

/// Dense row-major matrix of bivariate polynomials.
///
/// Constant matrices are simply PolyMatrix values of degree <= 0; there is
/// no separate scalar matrix type.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(int rows, int cols);
  /// Row-major literal of rational constants.
  PolyMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static PolyMatrix identity(int n);
  static PolyMatrix zeros(int rows, int cols) { return PolyMatrix(rows, cols); }
  static PolyMatrix scalar(const Poly& p);
  static PolyMatrix diag(const std::vector<Poly>& entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Poly& operator()(int r, int c) { return entries_[static_cast<size_t>(r) * cols_ + c]; }
  const Poly& operator()(int r, int c) const { return entries_[static_cast<size_t>(r) * cols_ + c]; }
  const std::vector<Poly>& entries() const { return entries_; }

  /// Max entry degree; kZeroDegree when every entry is zero.
  int degree() const;
  bool is_constant() const { return degree() <= 0; }
  bool is_zero() const;

  PolyMatrix transpose() const;
  PolyMatrix block(int r0, int c0, int nrows, int ncols) const;
  void set_block(int r0, int c0, const PolyMatrix& b);

  PolyMatrix dx() const;
  PolyMatrix dy() const;

  /// Entrywise constant term.
  PolyMatrix constant_part() const;

  PolyMatrix& operator+=(const PolyMatrix& b);
  PolyMatrix& operator-=(const PolyMatrix& b);
  friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) { return a += b; }
  friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) { return a -= b; }
  PolyMatrix operator-() const;
  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix operator*(const Poly& s, const PolyMatrix& a);
  friend PolyMatrix operator*(const PolyMatrix& a, const Poly& s) { return s * a; }

  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

  std::string to_string() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Poly> entries_;
};

PolyMatrix vstack(const std::vector<PolyMatrix>& parts);
PolyMatrix hstack(const std::vector<PolyMatrix>& parts);
PolyMatrix block_diag(const std::vector<PolyMatrix>& parts);

/// Kronecker product: block (i, j) equals a(i, j) * b.
PolyMatrix kron(const PolyMatrix& a, const PolyMatrix& b);

/// A^{(x)m} = A (x) A^{(x)(m-1)}, A^{(x)0} = [1].
PolyMatrix kron_power(const PolyMatrix& a, int m);

/// Entrywise partial derivatives of a matrix, kept as the two halves of
/// the stacked gradient.
struct GradPair {
  PolyMatrix top;     // d/dx block
  PolyMatrix bottom;  // d/dy block

  PolyMatrix stacked() const { return vstack({top, bottom}); }
};

GradPair grad(const PolyMatrix& a);
/// div(top; bottom) = d/dx top + d/dy bottom.
PolyMatrix div(const GradPair& g);
/// Splits a matrix with an even row count into halves and applies div.
PolyMatrix div_stacked(const PolyMatrix& a);
/// Stacked gradient [d/dx A; d/dy A].
PolyMatrix grad_stacked(const PolyMatrix& a);

/// d/dx (a (x) b) through the product rule d/dx a (x) b + a (x) d/dx b.
PolyMatrix kron_dx(const PolyMatrix& a, const PolyMatrix& b);

/// True iff (AC)(x)(BD) == (A(x)B)(C(x)D) exactly. Throws ShapeMismatch
/// when AC or BD is undefined.
bool mixed_product_check(const PolyMatrix& a, const PolyMatrix& b, const PolyMatrix& c,
                         const PolyMatrix& d);

// ---------------------------------------------------------------------------
// Exact linear algebra on constant matrices (fraction-free elimination).

/// Solves a * x = b for square a. Throws SingularMatrix when det(a) == 0.
PolyMatrix rat_solve(const PolyMatrix& a, const PolyMatrix& b);

/// Solves a * x = b for a full-column-rank a with rows >= cols.
/// Throws SingularMatrix on rank deficiency, InconsistentSystem when b is
/// not in the column space of a.
PolyMatrix rat_solve_full_rank(const PolyMatrix& a, const PolyMatrix& b);

Rational exact_det(const PolyMatrix& a);
int exact_rank(const PolyMatrix& a);
PolyMatrix exact_inverse(const PolyMatrix& a);

}  // namespace copoly2d
