#include "copoly2d/orthosys.hpp"

#include <algorithm>
#include <optional>
#include <tuple>

#include "copoly2d/basisops.hpp"
#include "copoly2d/errors.hpp"

namespace copoly2d {

std::string_view mode_name(Mode m) { return m == Mode::kExact ? "exact" : "numeric"; }

// ---------------------------------------------------------------------------
// Integrator

Integrator::Integrator(const WeightFamily& f, Mode mode, int quad_order, int degree_hint)
    : mode_(mode), quad_order_(quad_order), moment_fn_(f.moment_fn), moment_max_degree_(f.moment_max_degree) {
  if (mode == Mode::kExact) {
    if (!moment_fn_) throw OracleUnavailable("family " + f.name + " has no exact moment oracle");
    int top = degree_hint;
    if (moment_max_degree_ >= 0) top = std::min(top, moment_max_degree_);
    for (int d = 0; d <= top; ++d) {
      std::vector<Rational> row;
      for (int j = 0; j <= d; ++j) row.push_back(moment_fn_(d - j, j));
      exact_table_.push_back(std::move(row));
    }
  } else {
    rule_ = make_quadrature(f, quad_order);
    for (int d = 0; d <= std::max(degree_hint, 2 * quad_order - 1); ++d) {
      std::vector<double> row;
      for (int j = 0; j <= d; ++j) row.push_back(quad_moment(rule_, d - j, j));
      numeric_table_.push_back(std::move(row));
    }
  }
}

Rational Integrator::exact_moment(int i, int j) const {
  const int d = i + j;
  if (d < static_cast<int>(exact_table_.size())) return exact_table_[d][j];
  if (mode_ != Mode::kExact || !moment_fn_ || (moment_max_degree_ >= 0 && d > moment_max_degree_)) {
    throw OracleUnavailable("exact moment of degree " + std::to_string(d) + " unavailable");
  }
  return moment_fn_(i, j);
}

double Integrator::numeric_moment(int i, int j) const {
  const int d = i + j;
  if (d < static_cast<int>(numeric_table_.size())) return numeric_table_[d][j];
  return quad_moment(rule_, i, j);
}

Rational Integrator::integrate(const Poly& p) const {
  if (mode_ != Mode::kExact) throw OracleUnavailable("exact integral requested in numeric mode");
  Rational sum = 0;
  for (const auto& [e, c] : p.terms()) sum += c * exact_moment(e.i, e.j);
  return sum;
}

PolyMatrix Integrator::integrate(const PolyMatrix& a) const {
  PolyMatrix out(a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) out(r, c) = Poly(integrate(a(r, c)));
  return out;
}

double Integrator::integrate_d(const Poly& p) const {
  if (mode_ == Mode::kExact) return integrate(p).get_d();
  double sum = 0;
  for (const auto& [e, c] : p.terms()) sum += c.get_d() * numeric_moment(e.i, e.j);
  return sum;
}

Eigen::MatrixXd Integrator::integrate_d(const PolyMatrix& a) const {
  Eigen::MatrixXd out(a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) out(r, c) = integrate_d(a(r, c));
  return out;
}

namespace {

// Floating copy of a polynomial matrix for repeated evaluation.
struct NodeMatrix {
  int rows = 0;
  int cols = 0;
  int degree = 0;
  std::vector<std::vector<std::tuple<int, int, double>>> entries;

  explicit NodeMatrix(const PolyMatrix& a) : rows(a.rows()), cols(a.cols()) {
    for (const auto& p : a.entries()) {
      std::vector<std::tuple<int, int, double>> t;
      for (const auto& [e, c] : p.terms()) {
        t.emplace_back(e.i, e.j, c.get_d());
        degree = std::max(degree, e.degree());
      }
      entries.push_back(std::move(t));
    }
  }

  Eigen::MatrixXd eval(const std::vector<double>& xp, const std::vector<double>& yp) const {
    Eigen::MatrixXd out(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        double sum = 0.0;
        for (const auto& [i, j, v] : entries[static_cast<size_t>(r) * cols + c]) sum += v * xp[i] * yp[j];
        out(r, c) = sum;
      }
    return out;
  }
};

}  // namespace

Eigen::MatrixXd Integrator::integrate_nodes(const PolyMatrix& a, const PolyMatrix& w, const PolyMatrix& b) const {
  if (mode_ != Mode::kNumeric) throw OracleUnavailable("node evaluation needs numeric mode");
  const NodeMatrix na(a.transpose());
  const NodeMatrix nb(b);
  const std::optional<NodeMatrix> nw = w.empty() ? std::nullopt : std::optional<NodeMatrix>(NodeMatrix(w));
  const int deg = std::max({na.degree, nb.degree, nw ? nw->degree : 0});
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.cols(), b.cols());
  std::vector<double> xp(deg + 1), yp(deg + 1);
  for (size_t k = 0; k < rule_.size(); ++k) {
    xp[0] = yp[0] = 1.0;
    for (int d = 1; d <= deg; ++d) {
      xp[d] = xp[d - 1] * rule_.xs[k];
      yp[d] = yp[d - 1] * rule_.ys[k];
    }
    const Eigen::MatrixXd left = na.eval(xp, yp);
    out += rule_.weights[k] * (nw ? Eigen::MatrixXd(left * nw->eval(xp, yp)) : left) * nb.eval(xp, yp);
  }
  return out;
}

PolyMatrix inner_exact(const Integrator& in, const PolyMatrix& a, const PolyMatrix& w, const PolyMatrix& b) {
  const PolyMatrix at = a.transpose();
  return in.integrate(w.empty() ? at * b : at * w * b);
}

Eigen::MatrixXd inner_numeric(const Integrator& in, const PolyMatrix& a, const PolyMatrix& w,
                              const PolyMatrix& b) {
  if (in.mode() == Mode::kNumeric) return in.integrate_nodes(a, w, b);
  const PolyMatrix at = a.transpose();
  return in.integrate_d(w.empty() ? at * b : at * w * b);
}

Eigen::MatrixXd to_dense(const PolyMatrix& a) {
  Eigen::MatrixXd out(a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) {
      if (!a(r, c).is_constant()) throw ShapeMismatch("to_dense: matrix is not constant");
      out(r, c) = a(r, c).constant().get_d();
    }
  return out;
}

// ---------------------------------------------------------------------------
// OrthoSystem

OrthoSystem OrthoSystem::build_monic(const WeightFamily& f, int nmax) {
  if (nmax < 0) throw InvalidParameter("nmax must be non-negative");
  Integrator in(f, Mode::kExact, 0, 2 * nmax);
  OrthoSystem s;
  for (int n = 0; n <= nmax; ++n) {
    const PolyMatrix xn = x_vec(n);
    PolyMatrix pn = xn;
    for (int k = 0; k < n; ++k) {
      // Coefficient C with int (X_n - C P_k) P_k^t = 0.
      const PolyMatrix proj = in.integrate(xn * s.pvecs_[k].transpose());
      const PolyMatrix c = rat_solve(s.grams_[k], proj.transpose()).transpose();
      pn -= c * s.pvecs_[k];
    }
    PolyMatrix gram = in.integrate(pn * pn.transpose());
    if (exact_det(gram) == 0) {
      throw SingularGram("moment Gram block of degree " + std::to_string(n) + " is singular");
    }
    s.pvecs_.push_back(std::move(pn));
    s.grams_.push_back(std::move(gram));
  }
  s.build_gradients();
  return s;
}

OrthoSystem OrthoSystem::from_vectors(std::vector<PolyMatrix> pvecs) {
  OrthoSystem s;
  s.pvecs_ = std::move(pvecs);
  s.build_gradients();
  return s;
}

void OrthoSystem::build_gradients() {
  qs_.clear();
  for (const auto& pn : pvecs_) {
    std::vector<PolyMatrix> levels{pn.transpose()};
    for (int m = 1; m <= pn.rows() - 1; ++m) levels.push_back(grad_stacked(levels.back()));
    qs_.push_back(std::move(levels));
  }
}

const PolyMatrix& OrthoSystem::q(int n, int m) const {
  if (n < 0 || m < 0 || n + m > nmax()) {
    throw InvalidParameter("Q_{" + std::to_string(n) + "," + std::to_string(m) + "} needs degree " +
                           std::to_string(n + m) + " > nmax " + std::to_string(nmax()));
  }
  return qs_[n + m][m];
}

PolyMatrix g_lead(int n, int m) {
  if (m == 0) return PolyMatrix::identity(n + 1);
  const PolyMatrix next = g_lead(n + 1, m - 1);
  return block_diag({eye_kron(m - 1, n_mat(n + 1, 1)), eye_kron(m - 1, n_mat(n + 1, 2))}) *
         vstack({next, next});
}

PolyMatrix leading_block(const PolyMatrix& q, int n) {
  PolyMatrix g(q.rows() * (n + 1), q.cols());
  for (int r = 0; r < q.rows(); ++r)
    for (int c = 0; c < q.cols(); ++c)
      for (int j = 0; j <= n; ++j) g(r * (n + 1) + j, c) = Poly(q(r, c).coeff(n - j, j));
  return g;
}

}  // namespace copoly2d
