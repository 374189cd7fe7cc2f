#include "copoly2d/polycore.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "copoly2d/errors.hpp"

namespace copoly2d {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw ParseError("empty rational literal");
  bool negative = false;
  std::string_view body(s);
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto p = body.substr(0, slash);
    auto q = body.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q)) throw ParseError("bad rational literal '" + s + "'");
    mpz_class den(std::string(q), 10);
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    value = Rational(mpz_class(std::string(p), 10), den);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto ip = body.substr(0, dot);
    auto fp = body.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp))) {
      throw ParseError("bad decimal literal '" + s + "'");
    }
    mpz_class num(std::string(ip.empty() ? "0" : ip) + std::string(fp), 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
    value = Rational(num, den);
  } else {
    if (!all_digits(body)) throw ParseError("bad rational literal '" + s + "'");
    value = Rational(mpz_class(std::string(body), 10));
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) { return q.get_str(); }

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(const Rational& constant) {
  if (constant != 0) terms_.emplace(Exponent{0, 0}, constant);
}

Poly Poly::monomial(const Rational& c, int i, int j) {
  Poly p;
  if (c != 0) p.terms_.emplace(Exponent{i, j}, c);
  return p;
}

int Poly::degree() const {
  if (terms_.empty()) return kZeroDegree;
  return terms_.rbegin()->first.degree();
}

Rational Poly::coeff(int i, int j) const {
  auto it = terms_.find(Exponent{i, j});
  return it == terms_.end() ? Rational(0) : it->second;
}

Poly Poly::homogeneous_part(int d) const {
  Poly out;
  for (const auto& [e, c] : terms_) {
    if (e.degree() == d) out.terms_.emplace(e, c);
  }
  return out;
}

void Poly::add_term(const Exponent& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly Poly::dx() const {
  Poly out;
  for (const auto& [e, c] : terms_) {
    if (e.i > 0) out.terms_.emplace(Exponent{e.i - 1, e.j}, c * e.i);
  }
  return out;
}

Poly Poly::dy() const {
  Poly out;
  for (const auto& [e, c] : terms_) {
    if (e.j > 0) out.terms_.emplace(Exponent{e.i, e.j - 1}, c * e.j);
  }
  return out;
}

Rational Poly::eval(const Rational& x0, const Rational& y0) const {
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (int k = 0; k < e.i; ++k) t *= x0;
    for (int k = 0; k < e.j; ++k) t *= y0;
    sum += t;
  }
  return sum;
}

double Poly::eval(double x0, double y0) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c.get_d();
    for (int k = 0; k < e.i; ++k) t *= x0;
    for (int k = 0; k < e.j; ++k) t *= y0;
    sum += t;
  }
  return sum;
}

Poly& Poly::operator+=(const Poly& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Poly& Poly::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
  } else {
    for (auto& [e, c] : terms_) c *= s;
  }
  return *this;
}

void Poly::add_product(const Poly& a, const Poly& b) {
  Rational t;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      t = ca * cb;
      add_term(Exponent{ea.i + eb.i, ea.j + eb.j}, t);
    }
  }
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  out.add_product(a, b);
  return out;
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    if (mag != 1 || (e.i == 0 && e.j == 0)) {
      os << mag.get_str();
      wrote = true;
    }
    auto factor = [&](char v, int k) {
      if (k == 0) return;
      if (wrote) os << '*';
      os << v;
      if (k > 1) os << '^' << k;
      wrote = true;
    };
    factor('x', e.i);
    factor('y', e.j);
  }
  return os.str();
}

namespace {

// Recursive-descent parser for sums of c*x^i*y^j products.
class PolyParser {
 public:
  explicit PolyParser(std::string_view text) {
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) src_.push_back(c);
    }
  }

  Poly parse() {
    if (src_.empty()) throw ParseError("empty polynomial literal");
    Poly result;
    bool first = true;
    while (pos_ < src_.size()) {
      Rational sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      result += parse_term() * sign;
      first = false;
    }
    return result;
  }

 private:
  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in '" + src_ + "'");
  }

  Poly parse_term() {
    Poly term = parse_factor();
    while (peek() == '*') {
      ++pos_;
      term = term * parse_factor();
    }
    return term;
  }

  int parse_exponent() {
    if (peek() != '^') return 1;
    ++pos_;
    size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected exponent");
    return std::stoi(src_.substr(start, pos_ - start));
  }

  Poly parse_factor() {
    char c = peek();
    if (c == 'x' || c == 'y') {
      ++pos_;
      int k = parse_exponent();
      return c == 'x' ? Poly::monomial(1, k, 0) : Poly::monomial(1, 0, k);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == '/') ++pos_;
      return Poly(parse_rational(src_.substr(start, pos_ - start)));
    }
    if (c == '(') {
      ++pos_;
      size_t depth = 1;
      size_t start = pos_;
      while (pos_ < src_.size() && depth > 0) {
        if (src_[pos_] == '(') ++depth;
        if (src_[pos_] == ')') --depth;
        ++pos_;
      }
      if (depth != 0) fail("unbalanced parenthesis");
      return PolyParser(src_.substr(start, pos_ - start - 1)).parse();
    }
    fail("unexpected character");
  }

  std::string src_;
  size_t pos_ = 0;
};

}  // namespace

Poly Poly::parse(std::string_view text) { return PolyParser(text).parse(); }

// ---------------------------------------------------------------------------
// RatFn

RatFn::RatFn(Poly num) : num_(std::move(num)), den_(1) {}

RatFn::RatFn(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw DivisionByZeroPolynomial("rational function with zero denominator");
}

RatFn RatFn::dx() const { return RatFn(num_.dx() * den_ - num_ * den_.dx(), den_ * den_); }

RatFn RatFn::dy() const { return RatFn(num_.dy() * den_ - num_ * den_.dy(), den_ * den_); }

RatFn operator+(const RatFn& a, const RatFn& b) {
  if (a.den_ == b.den_) return RatFn(a.num_ + b.num_, a.den_);
  return RatFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFn operator-(const RatFn& a, const RatFn& b) { return a + (-b); }

RatFn operator*(const RatFn& a, const RatFn& b) { return RatFn(a.num_ * b.num_, a.den_ * b.den_); }

std::string RatFn::to_string() const {
  if (den_ == Poly(1)) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

}  // namespace copoly2d
