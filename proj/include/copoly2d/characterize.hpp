#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "copoly2d/matpoly.hpp"
#include "copoly2d/orthosys.hpp"
#include "copoly2d/weights.hpp"

namespace copoly2d {

enum class Property { kA, kB, kC, kD, kE, kPhiConditions, kLemma1, kLemma2, kProp1 };
enum class Status { kPass, kFail, kSkipped };

std::string_view property_name(Property p);
std::string_view status_name(Status s);

struct PropertyReport {
  Property property = Property::kA;
  std::string family;
  int n = 0;
  int m = 0;
  Status status = Status::kSkipped;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string mode = "exact";
  std::string notes;
};

// ---------------------------------------------------------------------------
// psi^{(m)} tower

/// psi_i^{(m)} = (I_{2^m} (x) X^t) D_i^{(m)} + E_i^{(m)}.
struct PsiLevel {
  PolyMatrix psi1;  // 2^m x 2^m, degree <= 1
  PolyMatrix psi2;
  PolyMatrix d1;    // 2^{m+1} x 2^m
  PolyMatrix d2;
  PolyMatrix e1;    // 2^m x 2^m
  PolyMatrix e2;
};

struct PsiTower {
  std::vector<PsiLevel> levels;
  const PsiLevel& at(int m) const { return levels.at(m); }
};

/// Splits a degree <= 1 matrix polynomial into (D, E) as above.
std::pair<PolyMatrix, PolyMatrix> split_linear(const PolyMatrix& psi);

/// Builds levels 0..mmax from psi^{(m)} = I_2 (x) psi^{(m-1)} + grad(phi column) (x) I.
PsiTower psi_tower(const WeightFamily& f, int mmax);

/// Closed form: D^{(m+1)} = H^{(m)} + I_2 (x) D^{(m)}, E^{(m+1)} = K^{(m)} + I_2 (x) E^{(m)},
/// with H built from N_{2,k} A_i blocks and K from N_{1,k} B_i blocks.
std::vector<PsiLevel> psi_closed_form(const WeightFamily& f, int mmax);

/// True iff the recurrence and closed form agree at every level 0..mmax.
bool lemma2_check(const WeightFamily& f, int mmax);

/// det(I_m (x) D1, I_m (x) D2) == (-1)^{floor(m/2)} det(D1, D2)^m.
bool lemma1_check(const PolyMatrix& d1, const PolyMatrix& d2, int m);

// ---------------------------------------------------------------------------
// Pieces of the rho-free calculus

/// The level-m Pearson identity div(rho Phi^{(x)(m+1)}) = rho Phi^{(x)m} (psi1^{(m)}, psi2^{(m)}),
/// checked after division by rho. Returns the max |coefficient| of the difference
/// (0 when it holds).
double level_pearson_residual(const WeightFamily& f, const PsiTower& tower, int m);

/// Numerator of div(rho M) / rho over the common log-gradient denominator delta:
/// returns (N, delta) with div(rho M) / rho = N / delta.
std::pair<PolyMatrix, Poly> rho_div(const WeightFamily& f, const PolyMatrix& m);

// ---------------------------------------------------------------------------
// Lambda

/// Second-order operator applied to Q:
/// phi11 Q_xx + 2 phi12 Q_xy + phi22 Q_yy + psi1^{(m)} Q_x + psi2^{(m)} Q_y.
PolyMatrix apply_operator(const WeightFamily& f, const PsiLevel& level, const PolyMatrix& q);

/// Solves Q Lambda = -operator(Q) for a constant Lambda by matching monomial
/// coefficients. Throws NoConstantSolution when no constant solution exists.
PolyMatrix lambda_via_operator(const WeightFamily& f, const PsiLevel& level, const PolyMatrix& q);
/// Lambda_{n+m,m} for Q_{n,m} of the system.
PolyMatrix lambda_via_operator(const WeightFamily& f, const OrthoSystem& sys, const PsiTower& tower, int n, int m);

/// Lambda_{n+m,m} keyed by (n+m, m), the index pair of the PDE for Q_{n,m}.
struct LambdaSet {
  std::map<std::pair<int, int>, PolyMatrix> entries;
  const PolyMatrix& at(int total, int m) const { return entries.at({total, m}); }
  bool contains(int total, int m) const { return entries.count({total, m}) != 0; }
};

/// Operator-path Lambda for every total degree 1..max_total and m <= min(mmax, total - 1).
/// Pairs without a constant solution are left out.
LambdaSet lambda_set(const WeightFamily& f, const OrthoSystem& sys, const PsiTower& tower, int max_total, int mmax);

struct LambdaFormula {
  PolyMatrix t_primary;    // second term (I_{2^m} (x) L_{n-1}^t)((D1,D2) (x) I_n) N_n^{(m)}
  PolyMatrix t_alternate;  // second term (L_{n-1}^{(m)})^t((D1,D2) (x) I_n) N_n^{(m)}
  std::optional<PolyMatrix> lambda_primary;    // solution of G Lambda = -T G
  std::optional<PolyMatrix> lambda_alternate;
  bool primary_composes = true;  // false only on a shape mismatch
  bool alternate_composes = true;
  std::string notes;
};

/// T_n^{(m)} in both printed variants and the Lambda each one implies.
LambdaFormula lambda_via_formula(const WeightFamily& f, const PsiLevel& level, int n, int m);

// ---------------------------------------------------------------------------
// Rodrigues

struct RodriguesResult {
  bool levels_hold = false;   // every level identity is exact
  int sign = 0;               // s with P_n^t = s div^n(rho Phi^{(x)n} C) Lambda^{-1}... / rho; 0 if neither
  std::string notes;
};

/// Reconstructs P_n^t from grad^{(n)} P_n^t and Lambda_{n,n-1} ... Lambda_{n,0}
/// through n nested divergences and reports which overall sign reproduces P_n.
RodriguesResult rodrigues_reconstruct(const WeightFamily& f, const OrthoSystem& sys, const PsiTower& tower, int n);

// ---------------------------------------------------------------------------
// Property checkers

PropertyReport check_a(const WeightFamily& f);
PropertyReport check_phi(const WeightFamily& f);
PropertyReport check_b(const WeightFamily& f, const OrthoSystem& sys, const PsiTower& tower,
                       const Integrator& in, int n, int m);
PropertyReport check_c(const WeightFamily& f, const OrthoSystem& sys, const PsiTower& tower, int n, int m);
PropertyReport check_d(const WeightFamily& f, const OrthoSystem& sys, const PsiTower& tower, int n,
                       bool reconstruct = false);
PropertyReport check_e(const WeightFamily& f, const OrthoSystem& sys, const Integrator& in, int n, int m);

/// Structure-relation coefficients A_k of (Phi (x) I_{2^m}) Q_{n-1,m+1} over I_2 (x) Q_{k,m}, k = 0..n+1.
std::vector<PolyMatrix> structure_coefficients(const WeightFamily& f, const OrthoSystem& sys,
                                               const Integrator& in, int n, int m);

struct VerifyOptions {
  int nmax = 4;
  int mmax = 2;
  Mode mode = Mode::kExact;
  int quad_order = 20;
  std::uint64_t seed = 0;
  bool run_a = true;
  bool run_b = true;
  bool run_c = true;
  bool run_d = true;
  bool run_e = true;
  bool run_aux = true;  // phi conditions, basis identities, determinant identity, psi-tower closed form
  int threads = 1;
};

/// Runs every selected check over the (n, m) grid. Never throws: failures to
/// build the system or integrate become failing reports with notes.
std::vector<PropertyReport> verify_all(const WeightFamily& f, const VerifyOptions& opt);

}  // namespace copoly2d
