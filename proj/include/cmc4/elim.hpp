#pragma once
#include <optional>
#include <utility>
#include <vector>

#include "cmc4/diffalg.hpp"
#include "cmc4/poly.hpp"

namespace cmc4 {

enum class ElimMethod { LinearSolve, SylvesterBareiss, SubresultantPRS };

// Unique root in v of a polynomial of degree one in v (NotLinear otherwise).
FracPoly solve_linear(const Poly& p, int v);

// True resultant with exact sign: fraction-free Gaussian elimination of the
// Sylvester matrix, falling back to the subresultant PRS when a pivot column
// vanishes. Both inputs need positive degree in v (VariableAbsent).
Poly resultant(const Poly& p, const Poly& q, int v);

// Subresultant polynomial remainder sequence (may differ from the true
// resultant by sign). Same precondition as resultant().
Poly resultant_prs(const Poly& p, const Poly& q, int v);

// Largest m with factor^m dividing p, and the cofactor p / factor^m.
// Units and the zero polynomial report multiplicity 0.
std::pair<Poly, int> remove_factor(const Poly& p, const Poly& factor);

struct ElimOptions {
  // When set: strip the table's declared factors from the eliminant and use
  // its multiplicative set to vouch for inverted cofactors.
  const DerivationTable* table = nullptr;
  // Abort with CapExceeded once any intermediate polynomial exceeds this many
  // terms (0 disables). Counts terms only, so runs are reproducible.
  long long term_cap = 0;
};

struct ElimResult {
  Poly eliminated;  // primitive, positive leading coefficient
  ElimMethod method = ElimMethod::LinearSolve;
  // Declared factors stripped from the eliminant, with multiplicities,
  // in the table's declaration order.
  std::vector<std::pair<Poly, int>> removed_factors;
  // Predicted weight of the raw eliminant when both inputs are homogeneous:
  // deg_v(q) wt(p) + deg_v(p) wt(q) - wt(v) deg_v(p) deg_v(q).
  std::optional<long long> weight;
  // Whether every cofactor inverted along the way (the leading coefficient
  // of a degree-one input) lies in the declared multiplicative set.
  bool denominator_declared = true;
};

// Eliminate v between p and q: a v-free input passes through, a degree-one
// input is solved and substituted, otherwise the resultant is taken. The
// eliminant lies in the ideal generated by p and q; ZeroPolynomial if it
// vanishes, VariableAbsent if neither input contains v.
ElimResult eliminate(const Poly& p, const Poly& q, int v,
                     const ElimOptions& opt = {});

}  // namespace cmc4
