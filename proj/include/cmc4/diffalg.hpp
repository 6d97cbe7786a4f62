#pragma once
#include <vector>

#include "cmc4/poly.hpp"

namespace cmc4 {

enum class Regime { Section3, CaseA, CaseB };

// Rules for applying the derivation e1 to registry variables within one
// regime. Variables without a rule poison any derivation that touches them
// (MissingRule); zero rules mark genuine constants.
class DerivationTable {
public:
  static const DerivationTable& section3();
  static const DerivationTable& caseA();
  static const DerivationTable& caseB();

  Regime regime() const { return regime_; }
  int weight_shift() const { return shift_; }
  bool has_rule(int var) const;
  const FracPoly& rule(int var) const;  // MissingRule if absent

  // Generators of the regime's multiplicative set of quantities known to be
  // nonvanishing on the zero locus (integer constants are always allowed).
  const std::vector<Poly>& declared() const { return declared_; }

private:
  DerivationTable(Regime r, int shift);
  Regime regime_;
  int shift_;
  std::vector<int> has_;        // per-variable flag
  std::vector<FracPoly> rules_;
  std::vector<Poly> declared_;
  friend struct TableBuilder;
};

// Chain rule: sum over variables of partial(p, v) * rule(v).
FracPoly derive(const DerivationTable& t, const Poly& p);
// Quotient rule on top of the chain rule.
FracPoly derive(const DerivationTable& t, const FracPoly& f);
// Primitive part of the derivative's numerator; sound as an identity on the
// zero locus because the discarded denominator lies in the declared
// multiplicative set.
Poly derive_on_locus(const DerivationTable& t, const Poly& p);

// Whether den factors (by repeated exact division) into declared generators
// times an integer.
bool denominator_declared(const DerivationTable& t, const Poly& den);

// Locus constants for Case A: y2 and y3 expressed through c, kap, tau, y1.
const FracPoly& caseA_y2();
const FracPoly& caseA_y3();

}  // namespace cmc4
