#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "copoly2d/matpoly.hpp"

namespace copoly2d {

/// Monomial column X_n = (x^n, x^{n-1}y, ..., y^n)^t. Negative n gives the
/// empty 0x1 column so that derivative identities stay well-typed at n = 0.
PolyMatrix x_vec(int n);

/// Multiplication matrices: x X_n = L_{n,1} X_{n+1}, y X_n = L_{n,2} X_{n+1}.
/// Shape (n+1) x (n+2); empty for negative n.
PolyMatrix l_mat(int n, int which);

/// Differentiation matrices: d/dx X_n = N_{n,1}^t X_{n-1}, d/dy X_n = N_{n,2}^t X_{n-1}.
/// Shape n x (n+1); n_mat(0, .) is the 0x1 empty matrix.
PolyMatrix n_mat(int n, int which);

/// I_{2^m} (x) a.
PolyMatrix eye_kron(int m, const PolyMatrix& a);

struct StackedPair {
  PolyMatrix l;
  PolyMatrix n;
};

/// L_n = [L_{n,1}; L_{n,2}] and N_n = [N_{n,1}; N_{n,2}].
StackedPair stacked(int n);

/// L_n^{(m)} = [I (x) L_{n,1}; I (x) L_{n,2}] and the N analogue.
StackedPair stacked_m(int n, int m);

/// Three-block stacks of I_{2^m} (x) L_{n-1,i} L_{n,j} for (i,j) = (1,1), (2,1),
/// (2,2), and the same for N. Empty (zero-row) for n = 0.
StackedPair starred(int n, int m);

enum class Prop1Identity { kE12a, kE12b, kE12c, kE12d, kE12e, kE13a, kE13b, kE13c, kE13d };

inline constexpr std::array<Prop1Identity, 9> kAllProp1 = {
    Prop1Identity::kE12a, Prop1Identity::kE12b, Prop1Identity::kE12c,
    Prop1Identity::kE12d, Prop1Identity::kE12e, Prop1Identity::kE13a,
    Prop1Identity::kE13b, Prop1Identity::kE13c, Prop1Identity::kE13d};

std::string_view prop1_name(Prop1Identity which);

/// Random rational matrix with entries p/q, |p| <= 9, 1 <= q <= 4.
PolyMatrix random_rational_matrix(int rows, int cols, std::uint64_t seed);

/// Checks one of the basis identities for I_{2^m} (x) X_n^t: multiplication by
/// x, y, x^2, xy, y^2, by (I (x) X^t) A for a random A of shape 2^{m+1} x 2^m,
/// and first/second partial derivatives. e12a and e13a cover both variables.
bool prop1_identity_check(int n, int m, Prop1Identity which, std::uint64_t seed = 0);

}  // namespace copoly2d
