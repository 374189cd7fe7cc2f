#pragma once

#include <Eigen/Dense>
#include <vector>

#include "copoly2d/matpoly.hpp"
#include "copoly2d/quadrature.hpp"
#include "copoly2d/weights.hpp"

namespace copoly2d {

enum class Mode { kExact, kNumeric };

std::string_view mode_name(Mode m);

/// Integrates polynomial matrices entrywise against the normalized weight.
///
/// Exact mode sums oracle moments; numeric mode sums quadrature moments of the
/// given order. Moments up to degree_hint are tabulated up front.
class Integrator {
 public:
  Integrator(const WeightFamily& f, Mode mode, int quad_order = 20, int degree_hint = 16);

  Mode mode() const { return mode_; }
  int quad_order() const { return quad_order_; }

  /// Exact integral; throws OracleUnavailable in numeric mode or past the oracle's range.
  Rational integrate(const Poly& p) const;
  PolyMatrix integrate(const PolyMatrix& a) const;

  /// Floating integral in either mode (exact values are rounded).
  double integrate_d(const Poly& p) const;
  Eigen::MatrixXd integrate_d(const PolyMatrix& a) const;

  /// int a^t w b (w optional) by evaluating the factors at the quadrature
  /// nodes, which avoids the cancellation of summing monomial moments.
  /// Numeric mode only.
  Eigen::MatrixXd integrate_nodes(const PolyMatrix& a, const PolyMatrix& w, const PolyMatrix& b) const;

 private:
  Rational exact_moment(int i, int j) const;
  double numeric_moment(int i, int j) const;

  Mode mode_;
  int quad_order_;
  MomentFn moment_fn_;
  int moment_max_degree_;
  std::vector<std::vector<Rational>> exact_table_;  // [degree][j]
  QuadRule rule_;
  std::vector<std::vector<double>> numeric_table_;
};

/// Monic vector orthogonal polynomials P_0..P_nmax of the family, with their
/// gradient systems Q_{n,m} = grad^{(m)} P_{n+m}^t for all n + m <= nmax.
class OrthoSystem {
 public:
  /// Block Gram-Schmidt on X_n against P_0..P_{n-1} with exact moments.
  /// Throws SingularGram when some S_k = int P_k P_k^t is singular and
  /// OracleUnavailable without exact moments.
  static OrthoSystem build_monic(const WeightFamily& f, int nmax);

  /// Same construction from explicit column vectors (used for negative controls).
  static OrthoSystem from_vectors(std::vector<PolyMatrix> pvecs);

  int nmax() const { return static_cast<int>(pvecs_.size()) - 1; }
  const PolyMatrix& p(int n) const { return pvecs_.at(n); }
  /// S_n = int P_n P_n^t rho / mu_00 (empty for from_vectors systems).
  const PolyMatrix& gram(int n) const { return grams_.at(n); }
  bool has_grams() const { return !grams_.empty(); }

  /// Q_{n,m}: shape 2^m x (n+m+1). Requires n + m <= nmax.
  const PolyMatrix& q(int n, int m) const;

 private:
  void build_gradients();

  std::vector<PolyMatrix> pvecs_;
  std::vector<PolyMatrix> grams_;
  // qs_[total][m] = grad^{(m)} P_total^t, i.e. Q_{total-m, m}.
  std::vector<std::vector<PolyMatrix>> qs_;
};

/// Leading coefficient G_{n,m,n} of Q_{n,m} = (I_{2^m} (x) X_n^t) G_{n,m,n} + lower terms,
/// by the recurrence through N_{n+1,1}, N_{n+1,2}. Shape 2^m (n+1) x (n+m+1).
PolyMatrix g_lead(int n, int m);

/// Reads the same leading block off a matrix polynomial with 2^m rows whose
/// entries have degree <= n.
PolyMatrix leading_block(const PolyMatrix& q, int n);

/// int a^t w b rho / mu_00 with w an optional polynomial weight factor.
PolyMatrix inner_exact(const Integrator& in, const PolyMatrix& a, const PolyMatrix& w, const PolyMatrix& b);
Eigen::MatrixXd inner_numeric(const Integrator& in, const PolyMatrix& a, const PolyMatrix& w,
                              const PolyMatrix& b);

/// Converts a constant PolyMatrix to doubles.
Eigen::MatrixXd to_dense(const PolyMatrix& a);

}  // namespace copoly2d
