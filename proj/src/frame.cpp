#include "cmc4/frame.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "cmc4/error.hpp"
#include "cmc4/exprio.hpp"

namespace cmc4 {

namespace {

const VarTable& reg() { return VarTable::registry(); }

FracPoly fp_zero() { return FracPoly::of(Poly::zero(reg())); }
FracPoly fp_one() { return FracPoly::of(Poly::constant(reg(), 1)); }

int vi(const char* name) { return reg().index_of(name); }

void check_index(int i) {
  if (i < 1 || i > 4)
    throw Error(Errc::VariableAbsent,
                "frame index out of range: " + std::to_string(i));
}

// e_1 rules per variable; disengaged entries poison the derivation.
const std::vector<std::optional<FracPoly>>& e1_rules() {
  static const std::vector<std::optional<FracPoly>> rules = [] {
    std::vector<std::optional<FracPoly>> r(reg().size());
    r[vi("c")] = fp_zero();
    r[vi("a")] = FracPoly::of(parse("Da"));
    const char* mu[3] = {"mu2", "mu3", "mu4"};
    const char* w[3] = {"w2", "w3", "w4"};
    Poly three = Poly::constant(reg(), 3);
    Poly sum = parse("mu2 + mu3 + mu4");
    for (int i = 0; i < 3; ++i) {
      Poly mi = parse(mu[i]), wi = parse(w[i]);
      // (mu_i - lambda_1) w_i = (3 mu_i + sum) w_i / 3
      r[vi(mu[i])] = FracPoly::of((mi * three + sum) * wi, three);
      // w_i^2 + lambda_1 mu_i + c = (3 w_i^2 - sum*mu_i + 3c) / 3
      r[vi(w[i])] =
          FracPoly::of(wi * wi * three - sum * mi + parse("3*c"), three);
    }
    return r;
  }();
  return rules;
}

}  // namespace

VectorExpr VectorExpr::zero() {
  VectorExpr v;
  for (auto& f : v.comp) f = fp_zero();
  return v;
}

VectorExpr VectorExpr::basis(int i) {
  check_index(i);
  VectorExpr v = zero();
  v.comp[i - 1] = fp_one();
  return v;
}

bool VectorExpr::is_zero() const {
  for (const auto& f : comp)
    if (!f.is_zero()) return false;
  return true;
}

VectorExpr v_add(const VectorExpr& a, const VectorExpr& b) {
  VectorExpr out;
  for (int i = 0; i < 4; ++i) out.comp[i] = fp_add(a.comp[i], b.comp[i]);
  return out;
}

VectorExpr v_sub(const VectorExpr& a, const VectorExpr& b) {
  VectorExpr out;
  for (int i = 0; i < 4; ++i) out.comp[i] = fp_sub(a.comp[i], b.comp[i]);
  return out;
}

VectorExpr v_scale(const FracPoly& s, const VectorExpr& a) {
  VectorExpr out;
  for (int i = 0; i < 4; ++i) out.comp[i] = fp_mul(s, a.comp[i]);
  return out;
}

bool v_equal(const VectorExpr& a, const VectorExpr& b) {
  for (int i = 0; i < 4; ++i)
    if (!fp_equal(a.comp[i], b.comp[i])) return false;
  return true;
}

const FracPoly& principal(int i) {
  check_index(i);
  static const std::array<FracPoly, 4> lam = {
      FracPoly::of(parse("-mu2 - mu3 - mu4"), Poly::constant(reg(), 3)),
      FracPoly::of(parse("mu2")), FracPoly::of(parse("mu3")),
      FracPoly::of(parse("mu4"))};
  return lam[i - 1];
}

FracPoly frame_e1(const Poly& p) {
  const auto& rules = e1_rules();
  FracPoly out = fp_zero();
  for (int v = 0; v < p.table().size(); ++v) {
    if (p.degree(v) < 1) continue;
    if (v >= (int)rules.size() || !rules[v])
      throw Error(Errc::MissingRule, "no e_1 rule for " + p.table().name(v));
    if (rules[v]->is_zero()) continue;
    out = fp_add(out, fp_mul(*rules[v], p.partial(v)));
  }
  return out;
}

FracPoly frame_e1(const FracPoly& f) {
  FracPoly top = fp_sub(fp_mul(frame_e1(f.num), f.den),
                        fp_mul(frame_e1(f.den), f.num));
  return fp_mul(top, FracPoly::of(Poly::constant(reg(), 1), f.den * f.den));
}

const VectorExpr& nabla(int i, int j) {
  check_index(i);
  check_index(j);
  static const std::array<std::array<VectorExpr, 4>, 4> table = [] {
    std::array<std::array<VectorExpr, 4>, 4> t;
    for (int i = 1; i <= 4; ++i)
      for (int j = 1; j <= 4; ++j) t[i - 1][j - 1] = VectorExpr::zero();
    auto skew = [](const char* p, const char* q, const char* r) {
      return FracPoly::of(parse(std::string("a*(") + p + " - " + q + ")*(" +
                                p + " - " + r + ")"));
    };
    FracPoly om234 = skew("mu2", "mu3", "mu4");
    FracPoly om342 = skew("mu3", "mu4", "mu2");
    FracPoly om423 = skew("mu4", "mu2", "mu3");
    for (int i = 2; i <= 4; ++i) {
      FracPoly wi = FracPoly::of(parse("w" + std::to_string(i)));
      t[i - 1][0].comp[i - 1] = fp_neg(wi);  // nabla_i e_1 = -w_i e_i
      t[i - 1][i - 1].comp[0] = wi;          // nabla_i e_i = w_i e_1
    }
    t[1][2].comp[3] = om234;          // nabla_2 e_3 = om234 e_4
    t[1][3].comp[2] = fp_neg(om234);  // nabla_2 e_4 = -om234 e_3
    t[2][3].comp[1] = om342;          // nabla_3 e_4 = om342 e_2
    t[2][1].comp[3] = fp_neg(om342);  // nabla_3 e_2 = -om342 e_4
    t[3][1].comp[2] = om423;          // nabla_4 e_2 = om423 e_3
    t[3][2].comp[1] = fp_neg(om423);  // nabla_4 e_3 = -om423 e_2
    return t;
  }();
  return table[i - 1][j - 1];
}

VectorExpr covariant(int i, const VectorExpr& v) {
  check_index(i);
  VectorExpr out = VectorExpr::zero();
  for (int l = 1; l <= 4; ++l) {
    if (i == 1)
      out.comp[l - 1] = fp_add(out.comp[l - 1], frame_e1(v.comp[l - 1]));
    if (!v.comp[l - 1].is_zero())
      out = v_add(out, v_scale(v.comp[l - 1], nabla(i, l)));
  }
  return out;
}

namespace {

// nabla_X e_k for X given in frame components (tensorial in X).
VectorExpr nabla_along(const VectorExpr& x, int k) {
  VectorExpr out = VectorExpr::zero();
  for (int l = 1; l <= 4; ++l)
    if (!x.comp[l - 1].is_zero())
      out = v_add(out, v_scale(x.comp[l - 1], nabla(l, k)));
  return out;
}

// Shape operator applied componentwise: A e_i = lambda_i e_i.
VectorExpr shape(const VectorExpr& v) {
  VectorExpr out = VectorExpr::zero();
  for (int l = 1; l <= 4; ++l)
    out.comp[l - 1] = fp_mul(principal(l), v.comp[l - 1]);
  return out;
}

}  // namespace

VectorExpr curvature(int i, int j, int k) {
  check_index(k);
  VectorExpr first = covariant(i, nabla(j, k));
  VectorExpr second = covariant(j, nabla(i, k));
  VectorExpr bracket = v_sub(nabla(i, j), nabla(j, i));
  return v_sub(v_sub(first, second), nabla_along(bracket, k));
}

VectorExpr gauss_residual(int i, int j, int k) {
  VectorExpr rhs = VectorExpr::zero();
  FracPoly sec = fp_add(FracPoly::of(parse("c")),
                        fp_mul(principal(i), principal(j)));
  if (j == k) rhs.comp[i - 1] = fp_add(rhs.comp[i - 1], sec);
  if (i == k) rhs.comp[j - 1] = fp_sub(rhs.comp[j - 1], sec);
  return v_sub(curvature(i, j, k), rhs);
}

VectorExpr codazzi_residual(int i, int j) {
  // (nabla_i A) e_j = nabla_i (A e_j) - A (nabla_i e_j)
  auto half = [](int a, int b) {
    VectorExpr aeb = v_scale(principal(b), VectorExpr::basis(b));
    return v_sub(covariant(a, aeb), shape(nabla(a, b)));
  };
  return v_sub(half(i, j), half(j, i));
}

FracPoly solve_unknown(const VectorExpr& v, int var) {
  bool found = false;
  FracPoly sol = fp_zero();
  for (const FracPoly& f : v.comp) {
    if (f.den.contains(var))
      throw Error(Errc::NotLinear,
                  "unknown appears in a denominator of " + reg().name(var));
    int d = f.num.degree(var);
    if (d < 1) {
      if (!f.is_zero())
        throw Error(Errc::Inconsistent,
                    "component without " + reg().name(var) +
                        " is already nonzero");
      continue;
    }
    if (d > 1)
      throw Error(Errc::NotLinear, "component has degree " +
                                       std::to_string(d) + " in " +
                                       reg().name(var));
    FracPoly root =
        FracPoly::of(-f.num.coeff_in(var, 0), f.num.coeff_in(var, 1));
    if (found && !fp_equal(root, sol))
      throw Error(Errc::Inconsistent,
                  "components disagree on " + reg().name(var));
    sol = root;
    found = true;
  }
  if (!found)
    throw Error(Errc::VariableAbsent,
                "no component mentions " + reg().name(var));
  return sol;
}

namespace {

Poly swap_vars(const Poly& p, int u, int v) {
  std::vector<Poly::Term> ts = p.terms();
  for (auto& t : ts) std::swap(t.first[u], t.first[v]);
  return Poly::from_terms(p.table(), std::move(ts));
}

FracPoly fp_pow(const FracPoly& f, unsigned n) {
  return FracPoly::of(f.num.pow(n), f.den.pow(n));
}

}  // namespace

FracPoly sym_reduce(const Poly& p) {
  const int m[3] = {vi("mu2"), vi("mu3"), vi("mu4")};
  if (swap_vars(p, m[0], m[1]) != p || swap_vars(p, m[1], m[2]) != p)
    throw Error(Errc::NotSymmetric, "not symmetric in mu2, mu3, mu4");

  Poly e1p = parse("mu2 + mu3 + mu4");
  Poly e2p = parse("mu2*mu3 + mu2*mu4 + mu3*mu4");
  Poly e3p = parse("mu2*mu3*mu4");
  // y1, y2, y3 name the elementary symmetric functions of mu2, mu3, mu4.
  FracPoly ys[3] = {FracPoly::of(parse("y1")), FracPoly::of(parse("y2")),
                    FracPoly::of(parse("y3"))};

  Poly rem = p;
  FracPoly acc = fp_zero();
  while (true) {
    // Lexicographically largest mu-exponent triple present.
    bool has_mu = false;
    std::array<unsigned, 3> lead = {0, 0, 0};
    for (const auto& t : rem.terms()) {
      std::array<unsigned, 3> e = {t.first[m[0]], t.first[m[1]],
                                   t.first[m[2]]};
      if (e == std::array<unsigned, 3>{0, 0, 0}) continue;
      if (!has_mu || e > lead) lead = e;
      has_mu = true;
    }
    if (!has_mu) break;
    if (!(lead[0] >= lead[1] && lead[1] >= lead[2]))
      throw Error(Errc::NotSymmetric, "not symmetric in mu2, mu3, mu4");
    // Coefficient of that mu-monomial (a polynomial in the other variables).
    std::vector<Poly::Term> cts;
    for (const auto& t : rem.terms()) {
      if (t.first[m[0]] == lead[0] && t.first[m[1]] == lead[1] &&
          t.first[m[2]] == lead[2]) {
        Poly::Term u = t;
        u.first[m[0]] = u.first[m[1]] = u.first[m[2]] = 0;
        cts.push_back(std::move(u));
      }
    }
    Poly coeff = Poly::from_terms(reg(), std::move(cts));
    unsigned k1 = lead[0] - lead[1], k2 = lead[1] - lead[2], k3 = lead[2];
    rem = rem - coeff * e1p.pow(k1) * e2p.pow(k2) * e3p.pow(k3);
    acc = fp_add(acc, fp_mul(fp_mul(fp_pow(ys[0], k1), fp_pow(ys[1], k2)),
                             fp_mul(fp_pow(ys[2], k3), coeff)));
  }
  return fp_add(acc, FracPoly::of(rem));
}

}  // namespace cmc4
