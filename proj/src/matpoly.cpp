#include "copoly2d/matpoly.hpp"

#include <algorithm>
#include <sstream>

#include "copoly2d/errors.hpp"

namespace copoly2d {

PolyMatrix::PolyMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows) * cols) {
  if (rows < 0 || cols < 0) throw ShapeMismatch("negative matrix dimension");
}

PolyMatrix::PolyMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) throw ShapeMismatch("ragged matrix literal");
    for (const auto& v : r) entries_.emplace_back(v);
  }
}

PolyMatrix PolyMatrix::identity(int n) {
  PolyMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Poly(1);
  return m;
}

PolyMatrix PolyMatrix::scalar(const Poly& p) {
  PolyMatrix m(1, 1);
  m(0, 0) = p;
  return m;
}

PolyMatrix PolyMatrix::diag(const std::vector<Poly>& entries) {
  const int n = static_cast<int>(entries.size());
  PolyMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = entries[i];
  return m;
}

int PolyMatrix::degree() const {
  int d = kZeroDegree;
  for (const auto& p : entries_) d = std::max(d, p.degree());
  return d;
}

bool PolyMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Poly& p) { return p.is_zero(); });
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

PolyMatrix PolyMatrix::block(int r0, int c0, int nrows, int ncols) const {
  if (r0 < 0 || c0 < 0 || r0 + nrows > rows_ || c0 + ncols > cols_) {
    throw ShapeMismatch("block out of range");
  }
  PolyMatrix b(nrows, ncols);
  for (int r = 0; r < nrows; ++r)
    for (int c = 0; c < ncols; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
  return b;
}

void PolyMatrix::set_block(int r0, int c0, const PolyMatrix& b) {
  if (r0 < 0 || c0 < 0 || r0 + b.rows() > rows_ || c0 + b.cols() > cols_) {
    throw ShapeMismatch("set_block out of range");
  }
  for (int r = 0; r < b.rows(); ++r)
    for (int c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
}

PolyMatrix PolyMatrix::dx() const {
  PolyMatrix out(rows_, cols_);
  for (size_t k = 0; k < entries_.size(); ++k) out.entries_[k] = entries_[k].dx();
  return out;
}

PolyMatrix PolyMatrix::dy() const {
  PolyMatrix out(rows_, cols_);
  for (size_t k = 0; k < entries_.size(); ++k) out.entries_[k] = entries_[k].dy();
  return out;
}

PolyMatrix PolyMatrix::constant_part() const {
  PolyMatrix out(rows_, cols_);
  for (size_t k = 0; k < entries_.size(); ++k) out.entries_[k] = Poly(entries_[k].constant());
  return out;
}

PolyMatrix& PolyMatrix::operator+=(const PolyMatrix& b) {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw ShapeMismatch("matrix sum shape mismatch");
  for (size_t k = 0; k < entries_.size(); ++k) entries_[k] += b.entries_[k];
  return *this;
}

PolyMatrix& PolyMatrix::operator-=(const PolyMatrix& b) {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw ShapeMismatch("matrix difference shape mismatch");
  for (size_t k = 0; k < entries_.size(); ++k) entries_[k] -= b.entries_[k];
  return *this;
}

PolyMatrix PolyMatrix::operator-() const {
  PolyMatrix out(rows_, cols_);
  for (size_t k = 0; k < entries_.size(); ++k) out.entries_[k] = -entries_[k];
  return out;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols_ != b.rows_) {
    throw ShapeMismatch("product of " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) +
                        " and " + std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
  }
  PolyMatrix out(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int k = 0; k < a.cols_; ++k) {
      const Poly& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < b.cols_; ++j) {
        const Poly& bkj = b(k, j);
        if (!bkj.is_zero()) out(i, j).add_product(aik, bkj);
      }
    }
  }
  return out;
}

PolyMatrix operator*(const Poly& s, const PolyMatrix& a) {
  PolyMatrix out(a.rows_, a.cols_);
  if (s.is_zero()) return out;
  for (size_t k = 0; k < a.entries_.size(); ++k) {
    if (!a.entries_[k].is_zero()) out.entries_[k] = s * a.entries_[k];
  }
  return out;
}

std::string PolyMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (int r = 0; r < rows_; ++r) {
    if (r) os << "; ";
    for (int c = 0; c < cols_; ++c) {
      if (c) os << ", ";
      os << (*this)(r, c).to_string();
    }
  }
  os << ']';
  return os.str();
}

PolyMatrix vstack(const std::vector<PolyMatrix>& parts) {
  if (parts.empty()) return {};
  const int cols = parts.front().cols();
  int rows = 0;
  for (const auto& p : parts) {
    if (p.cols() != cols) throw ShapeMismatch("vstack column mismatch");
    rows += p.rows();
  }
  PolyMatrix out(rows, cols);
  int r0 = 0;
  for (const auto& p : parts) {
    out.set_block(r0, 0, p);
    r0 += p.rows();
  }
  return out;
}

PolyMatrix hstack(const std::vector<PolyMatrix>& parts) {
  if (parts.empty()) return {};
  const int rows = parts.front().rows();
  int cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw ShapeMismatch("hstack row mismatch");
    cols += p.cols();
  }
  PolyMatrix out(rows, cols);
  int c0 = 0;
  for (const auto& p : parts) {
    out.set_block(0, c0, p);
    c0 += p.cols();
  }
  return out;
}

PolyMatrix block_diag(const std::vector<PolyMatrix>& parts) {
  int rows = 0, cols = 0;
  for (const auto& p : parts) {
    rows += p.rows();
    cols += p.cols();
  }
  PolyMatrix out(rows, cols);
  int r0 = 0, c0 = 0;
  for (const auto& p : parts) {
    out.set_block(r0, c0, p);
    r0 += p.rows();
    c0 += p.cols();
  }
  return out;
}

PolyMatrix kron(const PolyMatrix& a, const PolyMatrix& b) {
  PolyMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      const Poly& aij = a(i, j);
      if (aij.is_zero()) continue;
      for (int r = 0; r < b.rows(); ++r)
        for (int c = 0; c < b.cols(); ++c) {
          if (!b(r, c).is_zero()) out(i * b.rows() + r, j * b.cols() + c) = aij * b(r, c);
        }
    }
  }
  return out;
}

PolyMatrix kron_power(const PolyMatrix& a, int m) {
  if (a.rows() != a.cols()) throw ShapeMismatch("kron_power needs a square matrix");
  if (m < 0) throw ShapeMismatch("negative Kronecker power");
  PolyMatrix out = PolyMatrix::identity(1);
  for (int k = 0; k < m; ++k) out = kron(a, out);
  return out;
}

GradPair grad(const PolyMatrix& a) { return GradPair{a.dx(), a.dy()}; }

PolyMatrix div(const GradPair& g) {
  if (g.top.rows() != g.bottom.rows() || g.top.cols() != g.bottom.cols()) {
    throw ShapeMismatch("divergence halves differ in shape");
  }
  return g.top.dx() + g.bottom.dy();
}

PolyMatrix div_stacked(const PolyMatrix& a) {
  if (a.rows() % 2 != 0) throw ShapeMismatch("divergence needs an even row count");
  const int h = a.rows() / 2;
  return div(GradPair{a.block(0, 0, h, a.cols()), a.block(h, 0, h, a.cols())});
}

PolyMatrix grad_stacked(const PolyMatrix& a) { return vstack({a.dx(), a.dy()}); }

PolyMatrix kron_dx(const PolyMatrix& a, const PolyMatrix& b) {
  return kron(a.dx(), b) + kron(a, b.dx());
}

bool mixed_product_check(const PolyMatrix& a, const PolyMatrix& b, const PolyMatrix& c,
                         const PolyMatrix& d) {
  if (a.cols() != c.rows() || b.cols() != d.rows()) {
    throw ShapeMismatch("mixed product: AC or BD undefined");
  }
  return kron(a * c, b * d) == kron(a, b) * kron(c, d);
}

}  // namespace copoly2d
