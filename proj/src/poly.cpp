#include "cmc4/poly.hpp"

#include <algorithm>
#include <map>

namespace cmc4 {

VarTable::VarTable(std::vector<std::string> names, std::vector<int> weights)
    : names_(std::move(names)), weights_(std::move(weights)) {
  if (names_.size() != weights_.size() || names_.empty())
    throw Error(Errc::RegistryMismatch, "VarTable: names/weights size mismatch");
}

int VarTable::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (names_[i] == name) return i;
  return -1;
}

const VarTable& VarTable::registry() {
  static const VarTable t(
      {"c",  "lam", "lam1", "lam2", "lam3", "lam4", "lam5", "T",   "T1",
       "T2", "T3",  "T4",   "kap",  "tau",  "y1",   "y2",   "y3",  "a",
       "w2", "w3",  "w4",   "mu2",  "mu3",  "mu4",  "Da",   "u"},
      {2, 1, 2, 3, 4, 5, 6, 1, 2, 3, 4, 5, 0, 1, 1, 2, 3, -1, 1, 1, 1, 1, 1, 1, 0, 0});
  return t;
}

int mono_cmp(const Monomial& a, const Monomial& b) {
  unsigned ta = 0, tb = 0;
  for (unsigned e : a) ta += e;
  for (unsigned e : b) tb += e;
  if (ta != tb) return ta < tb ? -1 : 1;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

void Poly::check_same(const Poly& o) const {
  if (vt_ != o.vt_)
    throw Error(Errc::RegistryMismatch, "operation on polynomials over different registries");
}

void Poly::check_var(int var) const {
  if (!vt_ || var < 0 || var >= vt_->size())
    throw Error(Errc::RegistryMismatch, "variable index out of range");
}

const VarTable& Poly::table() const {
  if (!vt_) throw Error(Errc::RegistryMismatch, "polynomial has no registry");
  return *vt_;
}

Poly Poly::zero(const VarTable& vt) {
  Poly p;
  p.vt_ = &vt;
  return p;
}

Poly Poly::constant(const VarTable& vt, Int v) {
  Poly p = zero(vt);
  if (v != 0) p.terms_.emplace_back(Monomial(vt.size(), 0), std::move(v));
  return p;
}

Poly Poly::variable(const VarTable& vt, int var, unsigned exp) {
  Poly p = zero(vt);
  p.check_var(var);
  if (exp == 0) return constant(vt, 1);
  Monomial m(vt.size(), 0);
  m[var] = exp;
  p.terms_.emplace_back(std::move(m), 1);
  return p;
}

Poly Poly::from_terms(const VarTable& vt, std::vector<Term> terms) {
  for (auto& [m, c] : terms)
    if (static_cast<int>(m.size()) != vt.size())
      throw Error(Errc::RegistryMismatch, "monomial width mismatch");
  std::sort(terms.begin(), terms.end(),
            [](const Term& x, const Term& y) { return mono_cmp(x.first, y.first) < 0; });
  Poly p = zero(vt);
  for (auto& [m, c] : terms) {
    if (c == 0) continue;
    if (!p.terms_.empty() && mono_cmp(p.terms_.back().first, m) == 0) {
      p.terms_.back().second += c;
      if (p.terms_.back().second == 0) p.terms_.pop_back();
    } else {
      p.terms_.emplace_back(std::move(m), std::move(c));
    }
  }
  return p;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  check_same(o);
  Poly r = zero(*vt_);
  r.terms_.reserve(terms_.size() + o.terms_.size());
  size_t i = 0, j = 0;
  while (i < terms_.size() && j < o.terms_.size()) {
    int c = mono_cmp(terms_[i].first, o.terms_[j].first);
    if (c < 0) {
      r.terms_.push_back(terms_[i++]);
    } else if (c > 0) {
      r.terms_.push_back(o.terms_[j++]);
    } else {
      Int s = terms_[i].second + o.terms_[j].second;
      if (s != 0) r.terms_.emplace_back(terms_[i].first, std::move(s));
      ++i, ++j;
    }
  }
  for (; i < terms_.size(); ++i) r.terms_.push_back(terms_[i]);
  for (; j < o.terms_.size(); ++j) r.terms_.push_back(o.terms_[j]);
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  check_same(o);
  Poly r = zero(*vt_);
  if (terms_.empty() || o.terms_.empty()) return r;
  std::vector<Term> acc;
  acc.reserve(terms_.size() * o.terms_.size());
  const int n = vt_->size();
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m(n);
      for (int k = 0; k < n; ++k) m[k] = ma[k] + mb[k];
      acc.emplace_back(std::move(m), ca * cb);
    }
  return from_terms(*vt_, std::move(acc));
}

Poly Poly::operator*(const Int& k) const {
  if (k == 0) return zero(*vt_);
  Poly r = *this;
  for (auto& [m, c] : r.terms_) c *= k;
  return r;
}

Poly Poly::pow(unsigned e) const {
  Poly r = constant(table(), 1);
  Poly b = *this;
  while (e) {
    if (e & 1u) r = r * b;
    e >>= 1u;
    if (e) b = b * b;
  }
  return r;
}

bool Poly::operator==(const Poly& o) const {
  check_same(o);
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].second != o.terms_[i].second ||
        mono_cmp(terms_[i].first, o.terms_[i].first) != 0)
      return false;
  return true;
}

int Poly::degree(int var) const {
  check_var(var);
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m[var]));
  return d;
}

int Poly::total_degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    int t = 0;
    for (unsigned e : m) t += static_cast<int>(e);
    d = std::max(d, t);
  }
  return d;
}

Poly Poly::coeff_in(int var, int k) const {
  check_var(var);
  Poly r = zero(*vt_);
  std::vector<Term> acc;
  for (const auto& [m, c] : terms_)
    if (static_cast<int>(m[var]) == k) {
      Monomial n = m;
      n[var] = 0;
      acc.emplace_back(std::move(n), c);
    }
  return from_terms(*vt_, std::move(acc));
}

Poly Poly::partial(int var) const {
  check_var(var);
  std::vector<Term> acc;
  for (const auto& [m, c] : terms_)
    if (m[var] > 0) {
      Monomial n = m;
      n[var] -= 1;
      acc.emplace_back(std::move(n), c * static_cast<long>(m[var]));
    }
  return from_terms(*vt_, std::move(acc));
}

Poly Poly::substitute(int var, const Poly& value) const {
  check_var(var);
  check_same(value);
  int d = degree(var);
  if (d <= 0) return *this;
  // Horner in var.
  Poly r = coeff_in(var, d);
  for (int k = d - 1; k >= 0; --k) r = r * value + coeff_in(var, k);
  return r;
}

Int Poly::eval(const std::vector<Int>& point) const {
  if (static_cast<int>(point.size()) != table().size())
    throw Error(Errc::RegistryMismatch, "eval: point width mismatch");
  Int total = 0;
  for (const auto& [m, c] : terms_) {
    Int t = c;
    for (size_t v = 0; v < point.size(); ++v)
      for (unsigned e = 0; e < m[v]; ++e) t *= point[v];
    total += t;
  }
  return total;
}

std::pair<Int, Poly> Poly::content_primitive() const {
  if (terms_.empty()) throw Error(Errc::ZeroPolynomial, "content_primitive of zero");
  Int g = 0;
  for (const auto& [m, c] : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  bool neg = terms_.back().second < 0;  // leading term sign
  if (neg) g = -g;
  Poly p = *this;
  for (auto& [m, c] : p.terms_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  return {std::move(g), std::move(p)};
}

std::optional<long long> Poly::weight() const {
  if (terms_.empty()) return 0;
  const VarTable& vt = table();
  std::optional<long long> w;
  for (const auto& [m, c] : terms_) {
    long long s = 0;
    for (int v = 0; v < vt.size(); ++v) s += static_cast<long long>(m[v]) * vt.weight(v);
    if (!w)
      w = s;
    else if (*w != s)
      return std::nullopt;
  }
  return w;
}

namespace {
struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return mono_cmp(a, b) < 0; }
};
}  // namespace

Poly Poly::exact_div(const Poly& d) const {
  check_same(d);
  if (d.is_zero()) throw Error(Errc::ZeroPolynomial, "division by zero polynomial");
  if (is_zero()) return zero(*vt_);
  const int n = vt_->size();
  const auto& [dm, dc] = d.leading_term();
  std::map<Monomial, Int, MonoLess> rem;
  for (const auto& [m, c] : terms_) rem.emplace(m, c);
  std::vector<Term> quot;
  while (!rem.empty()) {
    const auto& [rm, rc] = *rem.rbegin();
    Monomial qm(n);
    for (int v = 0; v < n; ++v) {
      if (rm[v] < dm[v]) throw Error(Errc::NotDivisible, "exact_div: monomial not divisible");
      qm[v] = rm[v] - dm[v];
    }
    Int qc, rr;
    mpz_tdiv_qr(qc.get_mpz_t(), rr.get_mpz_t(), rc.get_mpz_t(), dc.get_mpz_t());
    if (rr != 0) throw Error(Errc::NotDivisible, "exact_div: coefficient not divisible");
    for (const auto& [m, c] : d.terms_) {
      Monomial t(n);
      for (int v = 0; v < n; ++v) t[v] = qm[v] + m[v];
      auto [it, inserted] = rem.try_emplace(std::move(t), 0);
      it->second -= qc * c;
      if (it->second == 0) rem.erase(it);
    }
    quot.emplace_back(std::move(qm), std::move(qc));
  }
  return from_terms(*vt_, std::move(quot));
}

bool Poly::divisible_by(const Poly& d) const {
  try {
    exact_div(d);
    return true;
  } catch (const Error& e) {
    if (e.code() == Errc::NotDivisible) return false;
    throw;
  }
}

const Poly::Term& Poly::leading_term() const {
  if (terms_.empty()) throw Error(Errc::ZeroPolynomial, "leading term of zero");
  return terms_.back();
}

int poly_cmp(const Poly& a, const Poly& b) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  size_t i = ta.size(), j = tb.size();
  while (i > 0 && j > 0) {
    int c = mono_cmp(ta[i - 1].first, tb[j - 1].first);
    if (c != 0) return c;
    int s = cmp(ta[i - 1].second, tb[j - 1].second);
    if (s != 0) return s < 0 ? -1 : 1;
    --i, --j;
  }
  if (i == j) return 0;
  return i < j ? -1 : 1;
}

namespace {
// Cancels the common integer content and the common monomial factor of
// num/den; normalizes den's leading coefficient positive.
void fp_normalize(Poly& num, Poly& den) {
  if (den.is_zero()) throw Error(Errc::ZeroPolynomial, "FracPoly with zero denominator");
  if (num.is_zero()) {
    den = Poly::constant(den.table(), 1);
    return;
  }
  const int n = num.table().size();
  Monomial g(n, 0);
  bool first = true;
  for (const Poly* p : {&num, &den})
    for (const auto& [m, c] : p->terms()) {
      if (first) {
        g = m;
        first = false;
      } else {
        for (int v = 0; v < n; ++v) g[v] = std::min(g[v], m[v]);
      }
    }
  bool any = false;
  for (int v = 0; v < n; ++v) any = any || g[v] > 0;
  auto [cn, pn] = num.content_primitive();
  auto [cd, pd] = den.content_primitive();
  if (any) {
    Poly m = Poly::from_terms(num.table(), {{g, Int(1)}});
    pn = pn.exact_div(m);
    pd = pd.exact_div(m);
  }
  Int gg;
  mpz_gcd(gg.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
  if (cd < 0) gg = -gg;  // keep den positive
  Int rn, rd;
  mpz_divexact(rn.get_mpz_t(), cn.get_mpz_t(), gg.get_mpz_t());
  mpz_divexact(rd.get_mpz_t(), cd.get_mpz_t(), gg.get_mpz_t());
  num = pn * rn;
  den = pd * rd;
}
}  // namespace

FracPoly FracPoly::of(Poly n) {
  Poly d = Poly::constant(n.table(), 1);
  return {std::move(n), std::move(d)};
}

FracPoly FracPoly::of(Poly n, Poly d) {
  fp_normalize(n, d);
  return {std::move(n), std::move(d)};
}

FracPoly fp_neg(const FracPoly& a) { return {-a.num, a.den}; }

FracPoly fp_add(const FracPoly& a, const FracPoly& b) {
  if (a.den == b.den) return FracPoly::of(a.num + b.num, a.den);
  return FracPoly::of(a.num * b.den + b.num * a.den, a.den * b.den);
}

FracPoly fp_sub(const FracPoly& a, const FracPoly& b) { return fp_add(a, fp_neg(b)); }

FracPoly fp_mul(const FracPoly& a, const FracPoly& b) {
  return FracPoly::of(a.num * b.num, a.den * b.den);
}

FracPoly fp_mul(const FracPoly& a, const Poly& b) { return FracPoly::of(a.num * b, a.den); }

bool fp_equal(const FracPoly& a, const FracPoly& b) {
  return a.num * b.den == b.num * a.den;
}

}  // namespace cmc4
