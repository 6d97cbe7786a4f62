#pragma once
#include <array>

#include "cmc4/poly.hpp"

namespace cmc4 {

// Tangent vector in the moving frame e_1..e_4 with rational-function
// coefficients; component of e_i sits at index i-1.
struct VectorExpr {
  std::array<FracPoly, 4> comp;

  static VectorExpr zero();
  static VectorExpr basis(int i);  // 1-based
  bool is_zero() const;
};

VectorExpr v_add(const VectorExpr& a, const VectorExpr& b);
VectorExpr v_sub(const VectorExpr& a, const VectorExpr& b);
VectorExpr v_scale(const FracPoly& s, const VectorExpr& a);
bool v_equal(const VectorExpr& a, const VectorExpr& b);

// Principal curvature along e_i: lambda_1 = -(mu2 + mu3 + mu4)/3 (the
// traced shape operator pinned to -2H), lambda_i = mu_i for i >= 2.
const FracPoly& principal(int i);

// Derivation e_1 on scalars: mu_i' = (mu_i - lambda_1) w_i,
// w_i' = w_i^2 + lambda_1 mu_i + c, a' = Da, c' = 0. Any other variable
// raises MissingRule. e_j for j >= 2 kills every scalar.
FracPoly frame_e1(const Poly& p);
FracPoly frame_e1(const FracPoly& f);

// Connection table nabla_{e_i} e_j: flat along e_1; nabla_{e_i} e_1 =
// -w_i e_i and nabla_{e_i} e_i = w_i e_1 for i >= 2; the remaining
// components are the skew pair products a (mu_i - mu_j)(mu_i - mu_k).
const VectorExpr& nabla(int i, int j);

// Covariant derivative along e_i of a vector field written in the frame.
VectorExpr covariant(int i, const VectorExpr& v);

// R(e_i, e_j) e_k with [e_i, e_j] expanded as nabla_i e_j - nabla_j e_i.
VectorExpr curvature(int i, int j, int k);

// curvature(i,j,k) minus (c + lambda_i lambda_j)(delta_jk E_i -
// delta_ik E_j); vanishing is the Gauss equation of the ambient form.
VectorExpr gauss_residual(int i, int j, int k);

// (nabla_i A) e_j - (nabla_j A) e_i; vanishing is the Codazzi equation.
VectorExpr codazzi_residual(int i, int j);

// The unique value of var annihilating v: components mentioning var must be
// linear in it (NotLinear) and agree on the root (Inconsistent); var-free
// components must already vanish (Inconsistent); VariableAbsent when no
// component mentions var.
FracPoly solve_unknown(const VectorExpr& v, int var);

// Rewrite a polynomial symmetric in mu2, mu3, mu4 through the elementary
// symmetric functions y1, y2, y3 (NotSymmetric otherwise). Integer
// denominators can appear: mu2^2 + mu3^2 + mu4^2 = y1^2 - 2 y2.
FracPoly sym_reduce(const Poly& p);

}  // namespace cmc4
