#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "cmc4/elim.hpp"
#include "cmc4/exprio.hpp"

using namespace cmc4;

namespace {

const VarTable& R() { return VarTable::registry(); }

std::string fixtures_dir() {
  const char* env = std::getenv("CMC4_FIXTURES");
  return env ? env : "fixtures";
}

// Random coefficient in one variable; optionally forced nonzero.
Poly rand_coeff(std::mt19937& rng, int var, bool nonzero) {
  std::uniform_int_distribution<int> co(-5, 5), dg(0, 2);
  std::vector<Poly::Term> ts;
  int n = 1 + (int)(rng() % 3);
  for (int i = 0; i < n; ++i) {
    Monomial m(R().size(), 0);
    m[var] = dg(rng);
    ts.emplace_back(std::move(m), co(rng));
  }
  Poly p = Poly::from_terms(R(), std::move(ts));
  if (nonzero && p.is_zero()) return Poly::constant(R(), 1);
  return p;
}

// Random polynomial of exact degree d in v with coefficients in var2.
Poly rand_in(std::mt19937& rng, int v, int var2, int d) {
  Poly out = Poly::zero(R());
  for (int k = 0; k < d; ++k)
    out = out + rand_coeff(rng, var2, false) * Poly::variable(R(), v, k);
  return out + rand_coeff(rng, var2, true) * Poly::variable(R(), v, d);
}

// Homogeneous polynomial of even weight w in lam (wt 1) and T1 (wt 2) with
// both extreme terms anchored, so no lam factor is shared.
Poly rand_homog(std::mt19937& rng, int w) {
  std::uniform_int_distribution<int> co(-5, 5);
  std::vector<Poly::Term> ts;
  for (int b = 0; 2 * b <= w; ++b) {
    int cv = co(rng);
    if (b == 0 || 2 * b == w)
      while (cv == 0) cv = co(rng);
    if (cv == 0) continue;
    Monomial m(R().size(), 0);
    m[R().index_of("T1")] = b;
    m[R().index_of("lam")] = w - 2 * b;
    ts.emplace_back(std::move(m), cv);
  }
  return Poly::from_terms(R(), std::move(ts));
}

}  // namespace

TEST_CASE("solve_linear") {
  int T1 = R().index_of("T1");
  FracPoly s = solve_linear(parse("2*lam*T1 - 6*c"), T1);
  CHECK(fp_equal(s, FracPoly::of(parse("3*c"), parse("lam"))));
  CHECK(fp_equal(solve_linear(parse("T1 + c"), T1),
                 FracPoly::of(parse("-c"))));
  CHECK_THROWS_AS(solve_linear(parse("T1^2 - c"), T1), Error);
  CHECK_THROWS_AS(solve_linear(parse("lam - c"), T1), Error);
  try {
    solve_linear(parse("lam"), T1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotLinear);
  }
}

TEST_CASE("resultant on known values") {
  int lam = R().index_of("lam");
  CHECK(resultant(parse("T*lam + T1"), parse("T2*lam + T3"), lam) ==
        parse("T*T3 - T1*T2"));
  CHECK(resultant(parse("lam^2 - 1"), parse("lam - 2"), lam) == parse("3"));
  CHECK(resultant(parse("lam - 2"), parse("lam^2 - 1"), lam) == parse("3"));
  // Shared factors kill the resultant; a fully zero pivot column falls back
  // to the PRS backend.
  CHECK(resultant(parse("(lam - c)*(lam + c)"), parse("(lam - c)*(lam + T)"),
                  lam)
            .is_zero());
  CHECK(resultant(parse("lam^2"), parse("lam^3"), lam).is_zero());
  // Swap antisymmetry for odd degree products.
  Poly p = parse("lam^3 + c"), q = parse("lam - T");
  CHECK(resultant(p, q, lam) == -resultant(q, p, lam));
  CHECK(resultant_prs(parse("lam^2 - 1"), parse("lam - 2"), lam) ==
        parse("3"));
  CHECK_THROWS_AS(resultant(parse("c"), parse("lam - c"), lam), Error);
  try {
    resultant(parse("lam"), parse("c + T"), lam);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::VariableAbsent);
  }
}

TEST_CASE("backends agree up to sign") {
  std::mt19937 rng(20260815);
  int lam = R().index_of("lam"), T = R().index_of("T");
  std::uniform_int_distribution<int> dd(2, 4);
  int checked = 0;
  for (int it = 0; it < 100; ++it) {
    Poly p = rand_in(rng, lam, T, dd(rng));
    Poly q = rand_in(rng, lam, T, dd(rng));
    Poly r1 = resultant(p, q, lam);
    Poly r2 = resultant_prs(p, q, lam);
    CHECK((r1 == r2 || r1 == -r2));
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("specialization commutes") {
  std::mt19937 rng(31);
  int lam = R().index_of("lam"), T = R().index_of("T");
  std::uniform_int_distribution<int> dd(2, 3), pt(-4, 4);
  int checked = 0;
  for (int it = 0; it < 400 && checked < 100; ++it) {
    Poly p = rand_in(rng, lam, T, dd(rng));
    Poly q = rand_in(rng, lam, T, dd(rng));
    Poly t0 = Poly::constant(R(), pt(rng));
    // Degree must survive the specialization for the diagram to commute.
    if (p.coeff_in(lam, p.degree(lam)).substitute(T, t0).is_zero()) continue;
    if (q.coeff_in(lam, q.degree(lam)).substitute(T, t0).is_zero()) continue;
    Poly sym = resultant(p, q, lam).substitute(T, t0);
    Poly dir = resultant(p.substitute(T, t0), q.substitute(T, t0), lam);
    CHECK(sym == dir);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("weight formula predicts homogeneous eliminants") {
  std::mt19937 rng(8);
  int lam = R().index_of("lam");
  std::uniform_int_distribution<int> ww(3, 5);
  int checked = 0;
  for (int it = 0; it < 200 && checked < 60; ++it) {
    Poly p = rand_homog(rng, 2 * ww(rng));
    Poly q = rand_homog(rng, 2 * ww(rng));
    ElimResult e;
    try {
      e = eliminate(p, q, lam);
    } catch (const Error&) {
      continue;  // accidental shared factor
    }
    REQUIRE(e.weight.has_value());
    long long dp = p.degree(lam), dq = q.degree(lam);
    CHECK(*e.weight == dq * *p.weight() + dp * *q.weight() - dp * dq);
    REQUIRE(e.eliminated.weight().has_value());
    CHECK(*e.eliminated.weight() == *e.weight);
    ++checked;
  }
  CHECK(checked == 60);
}

TEST_CASE("eliminate dispatch") {
  int T1 = R().index_of("T1");
  try {
    eliminate(parse("lam"), parse("c"), T1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::VariableAbsent);
  }
  // A v-free input passes through, made primitive.
  auto e1 = eliminate(parse("6*lam^2 - 9*c"), parse("T1^2 + lam"), T1);
  CHECK(e1.eliminated == parse("2*lam^2 - 3*c"));
  CHECK(e1.method == ElimMethod::LinearSolve);
  REQUIRE(e1.weight.has_value());
  CHECK(*e1.weight == 2);
  auto e2 = eliminate(parse("T1^2 + lam"), parse("6*lam^2 - 9*c"), T1);
  CHECK(e2.eliminated == parse("2*lam^2 - 3*c"));
  // The degree-one path agrees with the true resultant.
  Poly p = parse("lam*T1 - c"), q = parse("T1^3 - lam*T1 + T");
  auto e3 = eliminate(p, q, T1);
  CHECK(e3.method == ElimMethod::LinearSolve);
  CHECK(e3.eliminated == resultant(p, q, T1).primitive_part());
  auto e4 = eliminate(q, p, T1);
  CHECK(e4.eliminated == e3.eliminated);
  // Quadratic against quadratic goes through the Sylvester matrix.
  auto e5 = eliminate(parse("T1^2 - lam"), parse("T1^2 - c"), T1);
  CHECK(e5.method == ElimMethod::SylvesterBareiss);
  CHECK(e5.eliminated == parse("lam^2 - 2*c*lam + c^2"));
  // A shared factor leaves nothing.
  try {
    eliminate(parse("(T1 - c)*(T1 + c)"), parse("(T1 - c)*(T1 + lam)"), T1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroPolynomial);
  }
}

TEST_CASE("inverted cofactors are vouched for") {
  int T1 = R().index_of("T1");
  ElimOptions s3;
  s3.table = &DerivationTable::section3();
  auto e1 = eliminate(parse("lam*T1 - c"), parse("T1^2 - T"), T1, s3);
  CHECK(e1.denominator_declared);
  auto e2 = eliminate(parse("T*T1 - c"), parse("T1^2 - lam"), T1, s3);
  CHECK(!e2.denominator_declared);
  auto e3 = eliminate(parse("3*T1 - c"), parse("T1^2 - lam"), T1);
  CHECK(e3.denominator_declared);
  auto e4 = eliminate(parse("lam*T1 - c"), parse("T1^2 - T"), T1);
  CHECK(!e4.denominator_declared);  // no table to vouch for lam
  CHECK(e4.eliminated == e1.eliminated);
}

TEST_CASE("remove_factor") {
  Poly p = parse("lam^2*(T + c)^3");
  auto [c1, m1] = remove_factor(p, parse("lam"));
  CHECK(m1 == 2);
  CHECK(c1 == parse("(T + c)^3"));
  auto [c2, m2] = remove_factor(p, parse("T + c"));
  CHECK(m2 == 3);
  CHECK(c2 == parse("lam^2"));
  auto [c3, m3] = remove_factor(p, parse("T - c"));
  CHECK(m3 == 0);
  CHECK(c3 == p);
  auto [c4, m4] = remove_factor(parse("4*lam"), parse("2"));
  CHECK(m4 == 2);
  CHECK(c4 == parse("lam"));
  auto [c5, m5] = remove_factor(p, parse("-1"));
  CHECK(m5 == 0);
  CHECK(c5 == p);
  CHECK_THROWS_AS(remove_factor(p, Poly::zero(R())), Error);
}

TEST_CASE("ladder eliminations reproduce displayed relations") {
  FixtureFile fx = load_fixtures(fixtures_dir() + "/section3.fix");
  ElimOptions opt;
  opt.table = &DerivationTable::section3();
  int T3 = R().index_of("T3"), T2 = R().index_of("T2");
  int T1 = R().index_of("T1"), lam2 = R().index_of("lam2");

  auto e32 = eliminate(fx.at("3.28").expr, fx.at("3.31").expr, T3, opt);
  CHECK(e32.eliminated == fx.at("3.32").expr.primitive_part());
  CHECK(e32.removed_factors.empty());

  auto e34 = eliminate(fx.at("3.28").expr, fx.at("3.33").expr, T3, opt);
  CHECK(e34.eliminated == fx.at("3.34").expr.primitive_part());

  auto e35 = eliminate(fx.at("3.32").expr, fx.at("3.34").expr, T2, opt);
  CHECK(e35.eliminated == fx.at("3.35").expr.primitive_part());
  REQUIRE(e35.removed_factors.size() == 1);
  CHECK(e35.removed_factors[0].first == parse("lam"));
  CHECK(e35.removed_factors[0].second == 1);

  auto e39 = eliminate(fx.at("3.36").expr, fx.at("3.38").expr, lam2, opt);
  CHECK(e39.eliminated == fx.at("3.39").expr.primitive_part());
  REQUIRE(e39.removed_factors.size() == 1);
  CHECK(e39.removed_factors[0].first == parse("lam"));

  auto e42 = eliminate(fx.at("3.32").expr, fx.at("3.41").expr, T2, opt);
  CHECK(e42.eliminated == fx.at("3.42").expr.primitive_part());

  auto e43 = eliminate(fx.at("3.35").expr, fx.at("3.42").expr, T1, opt);
  CHECK(e43.eliminated == fx.at("3.43").expr.primitive_part());
  REQUIRE(e43.removed_factors.size() == 1);
  CHECK(e43.removed_factors[0].first == parse("lam"));

  // Repeat run gives the identical object: the pipeline is deterministic.
  auto again = eliminate(fx.at("3.35").expr, fx.at("3.42").expr, T1, opt);
  CHECK(render(again.eliminated) == render(e43.eliminated));
  CHECK(again.method == e43.method);
}

TEST_CASE("even inputs square the resultant") {
  std::mt19937 rng(77);
  int u = R().index_of("u"), kap = R().index_of("kap");
  int c = R().index_of("c");
  std::uniform_int_distribution<int> dd(1, 3);
  int checked = 0;
  for (int it = 0; it < 60 && checked < 20; ++it) {
    Poly F = rand_in(rng, u, c, dd(rng));
    Poly G = rand_in(rng, u, c, dd(rng));
    Poly f = F.substitute(u, parse("kap^2"));
    Poly g = G.substitute(u, parse("kap^2"));
    if (f.degree(kap) < 1 || g.degree(kap) < 1) continue;
    Poly ru = resultant(F, G, u);
    Poly rk = resultant(f, g, kap);
    Poly sq = ru * ru;
    CHECK((rk == sq || rk == -sq));
    ++checked;
  }
  CHECK(checked == 20);
}

TEST_CASE("term caps abort deterministically") {
  int lam = R().index_of("lam");
  ElimOptions capped;
  capped.term_cap = 3;
  Poly p = parse("(c + T)*lam^3 + (c^2 + T^2)*lam^2 + (c + 2*T)*lam + c*T + 1");
  Poly q = parse("(T - c)*lam^3 + (c*T + 3)*lam^2 + (c - 5*T)*lam + c^2 + T");
  try {
    eliminate(p, q, lam, capped);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CapExceeded);
  }
  // Uncapped, the same elimination goes through.
  CHECK(!eliminate(p, q, lam).eliminated.is_zero());
}
