#pragma once
#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmc4/error.hpp"

namespace cmc4 {

using Int = mpz_class;

// Variable registry: names plus integral weights for the graded structure.
// Instances must outlive every Poly built over them; polynomials from
// different tables never mix (RegistryMismatch).
class VarTable {
public:
  VarTable(std::vector<std::string> names, std::vector<int> weights);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int v) const { return names_[v]; }
  int weight(int v) const { return weights_[v]; }
  int index_of(const std::string& name) const;  // -1 if absent

  // The fixed 26-variable table used by the whole verification pipeline.
  static const VarTable& registry();

private:
  std::vector<std::string> names_;
  std::vector<int> weights_;
};

using Monomial = std::vector<unsigned>;

// Graded-lex compare: total degree first; ties lexicographic with the
// earlier registry variable more significant and the larger exponent
// greater. Returns -1/0/+1.
int mono_cmp(const Monomial& a, const Monomial& b);

// Sparse multivariate polynomial with integer coefficients. Terms are kept
// sorted ascending under mono_cmp with no zero coefficients, so iteration
// order, rendering, and leading-term access are all deterministic.
class Poly {
public:
  using Term = std::pair<Monomial, Int>;

  Poly() : vt_(nullptr) {}

  static Poly zero(const VarTable& vt);
  static Poly constant(const VarTable& vt, Int v);
  static Poly variable(const VarTable& vt, int var, unsigned exp = 1);
  static Poly from_terms(const VarTable& vt, std::vector<Term> terms);

  const VarTable& table() const;
  bool is_zero() const { return terms_.empty(); }
  int term_count() const { return static_cast<int>(terms_.size()); }
  const std::vector<Term>& terms() const { return terms_; }

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Int& k) const;
  Poly pow(unsigned e) const;
  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  int degree(int var) const;   // -1 for the zero polynomial
  int total_degree() const;    // -1 for the zero polynomial
  bool contains(int var) const { return degree(var) > 0; }

  Poly coeff_in(int var, int k) const;
  Poly partial(int var) const;
  Poly substitute(int var, const Poly& value) const;
  Int eval(const std::vector<Int>& point) const;

  // p = content * primitive with the primitive part's leading coefficient
  // positive; content carries the sign. ZeroPolynomial on 0.
  std::pair<Int, Poly> content_primitive() const;
  Poly primitive_part() const { return content_primitive().second; }

  // Common weight of all terms under the table's grading, or nullopt if the
  // terms disagree. The zero polynomial reports weight 0.
  std::optional<long long> weight() const;

  Poly exact_div(const Poly& d) const;  // NotDivisible if remainder nonzero
  bool divisible_by(const Poly& d) const;

  const Term& leading_term() const;  // ZeroPolynomial on 0
  const Int& leading_coeff() const { return leading_term().second; }

private:
  const VarTable* vt_;
  std::vector<Term> terms_;

  void check_same(const Poly& o) const;
  void check_var(int var) const;
};

// Total order on polynomials over one table (for deterministic sorting).
int poly_cmp(const Poly& a, const Poly& b);

// Quotient of polynomials. Denominator nonzero, sign-normalized so its
// leading coefficient is positive; common integer content and common
// monomial factors are cancelled (no general polynomial gcd).
struct FracPoly {
  Poly num, den;

  static FracPoly of(Poly n);
  static FracPoly of(Poly n, Poly d);  // ZeroPolynomial if d == 0
  bool is_zero() const { return num.is_zero(); }
};

FracPoly fp_neg(const FracPoly& a);
FracPoly fp_add(const FracPoly& a, const FracPoly& b);
FracPoly fp_sub(const FracPoly& a, const FracPoly& b);
FracPoly fp_mul(const FracPoly& a, const FracPoly& b);
FracPoly fp_mul(const FracPoly& a, const Poly& b);
bool fp_equal(const FracPoly& a, const FracPoly& b);  // cross-multiplied

}  // namespace cmc4
