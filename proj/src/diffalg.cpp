#include "cmc4/diffalg.hpp"

#include <string>
#include <utility>

#include "cmc4/error.hpp"
#include "cmc4/exprio.hpp"

namespace cmc4 {

namespace {
const VarTable& reg() { return VarTable::registry(); }
}  // namespace

DerivationTable::DerivationTable(Regime r, int shift)
    : regime_(r), shift_(shift), has_(reg().size(), 0), rules_(reg().size()) {}

bool DerivationTable::has_rule(int var) const {
  return var >= 0 && var < (int)has_.size() && has_[var] != 0;
}

const FracPoly& DerivationTable::rule(int var) const {
  if (!has_rule(var))
    throw Error(Errc::MissingRule,
                "no derivation rule for " + reg().name(var));
  return rules_[var];
}

struct TableBuilder {
  DerivationTable t;

  explicit TableBuilder(Regime r, int shift) : t(r, shift) {}

  TableBuilder& rule(const std::string& var, const std::string& num,
                     const std::string& den = "1") {
    int i = reg().index_of(var);
    t.has_[i] = 1;
    t.rules_[i] = FracPoly::of(parse(num), parse(den));
    return *this;
  }
  TableBuilder& declare(const std::string& gen) {
    t.declared_.push_back(parse(gen));
    return *this;
  }
};

const DerivationTable& DerivationTable::section3() {
  static const DerivationTable t = [] {
    TableBuilder b(Regime::Section3, 1);
    b.rule("c", "0");
    b.rule("lam", "lam1").rule("lam1", "lam2").rule("lam2", "lam3");
    b.rule("lam3", "lam4").rule("lam4", "lam5");
    b.rule("T", "T1").rule("T1", "T2").rule("T2", "T3").rule("T3", "T4");
    b.declare("lam").declare("lam1");
    return std::move(b.t);
  }();
  return t;
}

const DerivationTable& DerivationTable::caseA() {
  static const DerivationTable t = [] {
    TableBuilder b(Regime::CaseA, 1);
    b.rule("c", "0");
    b.rule("kap", "-kap^2*y1 + 3*kap*tau - y1", "3");
    b.rule("tau", "3*c - kap*tau*y1 + 3*tau^2", "3");
    b.rule("y1",
           "18*c*kap + 4*kap^3*y1^2 + 18*kap^2*tau*y1 + 18*kap*tau^2"
           " + 4*kap*y1^2 + 6*tau*y1",
           "3*kap^2 + 3");
    b.rule("y2", "5*kap*y1*y2 - 9*kap*y3 + 2*tau*y1^2 + 6*tau*y2", "3");
    b.rule("y3", "6*kap*y1*y3 + tau*y1*y2 + 9*tau*y3", "3");
    b.declare("kap^2 + 1").declare("kap").declare("y1");
    return std::move(b.t);
  }();
  return t;
}

const DerivationTable& DerivationTable::caseB() {
  static const DerivationTable t = [] {
    TableBuilder b(Regime::CaseB, 4);
    b.rule("c", "0");
    b.rule("y1", "6*c^2*y1 + 5*c*y1*y2 - 9*c*y3 + 4*y1^2*y3 - 6*y2*y3");
    b.rule("y2",
           "2*c^2*y1^2 + 6*c^2*y2 + c*y1^2*y2 + 6*c*y2^2 - 3*c*y1*y3"
           " + 5*y1*y2*y3 - 9*y3^2");
    b.rule("y3", "c^2*y1*y2 + 9*c^2*y3 + 2*c*y1^2*y3 + 6*c*y2*y3 + 6*y1*y3^2");
    b.declare("c").declare("c*y1 - 3*y3").declare("c^3 - c*y1*y3 - 2*y3^2");
    return std::move(b.t);
  }();
  return t;
}

FracPoly derive(const DerivationTable& t, const Poly& p) {
  FracPoly out = FracPoly::of(Poly::zero(p.table()));
  for (int v = 0; v < p.table().size(); ++v) {
    if (p.degree(v) < 1) continue;
    const FracPoly& r = t.rule(v);
    if (r.is_zero()) continue;
    out = fp_add(out, fp_mul(r, p.partial(v)));
  }
  return out;
}

FracPoly derive(const DerivationTable& t, const FracPoly& f) {
  FracPoly dn = derive(t, f.num);
  FracPoly dd = derive(t, f.den);
  // (n/d)' = (n'd - nd') / d^2
  FracPoly top = fp_sub(fp_mul(dn, f.den), fp_mul(dd, f.num));
  return fp_mul(top, FracPoly::of(Poly::constant(f.num.table(), 1),
                                  f.den * f.den));
}

Poly derive_on_locus(const DerivationTable& t, const Poly& p) {
  FracPoly d = derive(t, p);
  if (!denominator_declared(t, d.den))
    throw Error(Errc::Inconsistent,
                "derivation denominator outside the declared set: " +
                    render(d.den));
  if (d.num.is_zero()) return d.num;
  return d.num.primitive_part();
}

bool denominator_declared(const DerivationTable& t, const Poly& den) {
  if (den.is_zero()) throw Error(Errc::ZeroPolynomial, "zero denominator");
  Poly rest = den.primitive_part();
  bool progressed = true;
  while (progressed && rest.total_degree() > 0) {
    progressed = false;
    for (const Poly& g : t.declared()) {
      if (g.total_degree() < 1) continue;
      if (rest.divisible_by(g)) {
        rest = rest.exact_div(g);
        progressed = true;
        break;
      }
    }
  }
  return rest.total_degree() == 0;
}

const FracPoly& caseA_y2() {
  static const FracPoly f =
      FracPoly::of(parse("-3*c - 2*kap*tau*y1 - 3*tau^2"), parse("kap^2 + 1"));
  return f;
}

const FracPoly& caseA_y3() {
  static const FracPoly f = FracPoly::of(
      parse("-c*kap^2*y1 + 6*c*kap*tau - c*y1 + 3*kap^2*tau^2*y1"
            " + 6*kap*tau^3 - tau^2*y1"),
      parse("3*kap^4 + 6*kap^2 + 3"));
  return f;
}

}  // namespace cmc4
