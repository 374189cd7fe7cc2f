#pragma once

#include <gmpxx.h>

#include <compare>
#include <limits>
#include <map>
#include <string>
#include <string_view>

namespace copoly2d {

using Rational = mpq_class;

/// Parses "p", "p/q" or a finite decimal such as "-0.125" into an exact rational.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

/// Exponent pair (i, j) of the monomial x^i y^j.
///
/// Ordered by total degree first, then by descending power of x, so that
/// iterating a degree block visits x^n, x^{n-1}y, ..., y^n (the order of X_n).
struct Exponent {
  int i = 0;
  int j = 0;

  int degree() const { return i + j; }

  friend bool operator==(const Exponent&, const Exponent&) = default;
  friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
    if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    return b.i <=> a.i;
  }
};

/// Degree reported for the zero polynomial.
inline constexpr int kZeroDegree = std::numeric_limits<int>::min();

/// Sparse bivariate polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
class Poly {
 public:
  using TermMap = std::map<Exponent, Rational>;

  Poly() = default;
  Poly(const Rational& constant);  // NOLINT: implicit scalar promotion is intended
  Poly(long constant) : Poly(Rational(constant)) {}  // NOLINT
  Poly(int constant) : Poly(Rational(constant)) {}   // NOLINT

  static Poly monomial(const Rational& c, int i, int j);
  static Poly x() { return monomial(1, 1, 0); }
  static Poly y() { return monomial(1, 0, 1); }

  /// Parses the literal format "c*x^i*y^j + ..." (whitespace-insensitive).
  static Poly parse(std::string_view text);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return degree() <= 0; }

  /// Total degree; kZeroDegree for the zero polynomial.
  int degree() const;

  Rational coeff(int i, int j) const;
  /// Constant term.
  Rational constant() const { return coeff(0, 0); }

  /// Homogeneous part of the given total degree.
  Poly homogeneous_part(int d) const;

  Poly dx() const;
  Poly dy() const;

  Rational eval(const Rational& x0, const Rational& y0) const;
  double eval(double x0, double y0) const;

  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  Poly& operator*=(const Rational& s);

  /// this += s * a * b without materializing the product.
  void add_product(const Poly& a, const Poly& b);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
  Poly operator-() const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

  std::string to_string() const;

 private:
  void add_term(const Exponent& e, const Rational& c);

  TermMap terms_;
};

inline Poly poly_add(const Poly& a, const Poly& b) { return a + b; }
inline Poly poly_mul(const Poly& a, const Poly& b) { return a * b; }
inline Poly poly_dx(const Poly& p) { return p.dx(); }
inline Poly poly_dy(const Poly& p) { return p.dy(); }

/// Quotient of two polynomials, kept unreduced.
///
/// Equality is decided by cross-multiplication, never by a normal form.
class RatFn {
 public:
  RatFn() : num_(0), den_(1) {}
  RatFn(Poly num);  // NOLINT
  RatFn(Poly num, Poly den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  RatFn dx() const;
  RatFn dy() const;

  friend RatFn operator+(const RatFn& a, const RatFn& b);
  friend RatFn operator-(const RatFn& a, const RatFn& b);
  friend RatFn operator*(const RatFn& a, const RatFn& b);
  RatFn operator-() const { return RatFn(-num_, den_); }

  friend bool operator==(const RatFn& a, const RatFn& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
  }

  std::string to_string() const;

 private:
  Poly num_;
  Poly den_;
};

inline RatFn ratfn_add(const RatFn& a, const RatFn& b) { return a + b; }
inline RatFn ratfn_mul(const RatFn& a, const RatFn& b) { return a * b; }
inline bool ratfn_eq(const RatFn& a, const RatFn& b) { return a == b; }

}  // namespace copoly2d
