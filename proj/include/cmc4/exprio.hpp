#pragma once
#include <string>
#include <unordered_map>
#include <vector>

#include "cmc4/poly.hpp"

namespace cmc4 {

// Grammar (whitespace insignificant, integer literals unbounded):
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := base ('^' nonneg-int)?
//   base   := integer | identifier | '(' expr ')'
// Identifiers must name registry variables (UnknownVariable otherwise).
Poly parse(const std::string& text, const VarTable& vt = VarTable::registry());

// Deterministic canonical text: terms emitted ascending under mono_cmp,
// explicit '*', '^' powers; parse(render(p)) == p.
std::string render(const Poly& p);

// Same term order, variable names mapped back to the source symbols
// (lam -> \lambda, lam1 -> \lambda', kap -> \kappa, ...).
std::string render_latex(const Poly& p);

struct Fixture {
  std::string id;
  Poly expr;
  std::string note;
  int line = 0;
};

class FixtureFile {
public:
  const std::vector<Fixture>& entries() const { return entries_; }
  const Fixture* find(const std::string& id) const;
  const Fixture& at(const std::string& id) const;  // Error if absent
  void add(Fixture f);                             // DuplicateId

private:
  std::vector<Fixture> entries_;
  std::unordered_map<std::string, size_t> index_;
};

// Line-oriented fixture format: "id: expression [# note]"; blank lines and
// full-line '#' comments are ignored.
FixtureFile load_fixtures(const std::string& path, const VarTable& vt = VarTable::registry());

}  // namespace cmc4
