#include "cmc4/elim.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "cmc4/error.hpp"

namespace cmc4 {

namespace {

void check_cap(const Poly& p, long long cap) {
  if (cap > 0 && p.term_count() > cap)
    throw Error(Errc::CapExceeded,
                "intermediate grew to " + std::to_string(p.term_count()) +
                    " terms (cap " + std::to_string(cap) + ")");
}

// Coefficient vector of p in v, ascending; index k holds the v^k block.
std::vector<Poly> vcoeffs(const Poly& p, int v) {
  int d = std::max(p.degree(v), 0);
  std::vector<Poly> out;
  out.reserve(d + 1);
  for (int k = 0; k <= d; ++k) out.push_back(p.coeff_in(v, k));
  while (out.size() > 1 && out.back().is_zero()) out.pop_back();
  return out;
}

int vdeg(const std::vector<Poly>& a) {
  for (int i = (int)a.size() - 1; i >= 0; --i)
    if (!a[i].is_zero()) return i;
  return -1;
}

void vtrim(std::vector<Poly>& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a = q*b + r.
std::vector<Poly> prem(std::vector<Poly> a, const std::vector<Poly>& b,
                       long long cap) {
  const Poly& lb = b.back();
  int db = (int)b.size() - 1;
  int e = (int)a.size() - 1 - db + 1;
  while (!a.empty() && (int)a.size() - 1 >= db) {
    int da = (int)a.size() - 1;
    Poly la = a.back();
    std::vector<Poly> next(da, Poly::zero(la.table()));
    for (int j = 0; j < da; ++j) next[j] = a[j] * lb;
    for (int j = 0; j < db; ++j) next[j + da - db] = next[j + da - db] - la * b[j];
    for (Poly& t : next) check_cap(t, cap);
    vtrim(next);
    a = std::move(next);
    --e;
  }
  if (e > 0 && !a.empty()) {
    Poly f = lb.pow((unsigned)e);
    for (Poly& t : a) {
      t = t * f;
      check_cap(t, cap);
    }
  }
  return a;
}

void check_resultant_inputs(const Poly& p, const Poly& q, int v) {
  if (p.degree(v) < 1 || q.degree(v) < 1)
    throw Error(Errc::VariableAbsent,
                "resultant needs positive degree in " + p.table().name(v));
}

// Fraction-free Gaussian elimination of the Sylvester matrix. Returns the
// determinant with exact sign; sets fell_back (leaving the result zero) if a
// pivot column vanishes entirely.
Poly bareiss(const Poly& p, const Poly& q, int v, long long cap,
             bool& fell_back) {
  const VarTable& vt = p.table();
  fell_back = false;
  auto a = vcoeffs(p, v), b = vcoeffs(q, v);
  int dp = (int)a.size() - 1, dq = (int)b.size() - 1;
  int n = dp + dq;
  std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n, Poly::zero(vt)));
  for (int i = 0; i < dq; ++i)
    for (int j = 0; j <= dp; ++j) m[i][i + j] = a[dp - j];
  for (int i = 0; i < dp; ++i)
    for (int j = 0; j <= dq; ++j) m[dq + i][i + j] = b[dq - j];
  int sign = 1;
  Poly prev = Poly::constant(vt, 1);
  for (int k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      int r = -1;
      for (int i = k + 1; i < n && r < 0; ++i)
        if (!m[i][k].is_zero()) r = i;
      if (r < 0) {
        fell_back = true;
        return Poly::zero(vt);
      }
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]).exact_div(prev);
        check_cap(m[i][j], cap);
      }
      m[i][k] = Poly::zero(vt);
    }
    prev = m[k][k];
  }
  return sign < 0 ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

// Subresultant PRS resultant (Cohen, Alg. 3.3.7).
Poly prs(const Poly& p, const Poly& q, int v, long long cap) {
  const VarTable& vt = p.table();
  auto a = vcoeffs(p, v), b = vcoeffs(q, v);
  int s = 1;
  if ((int)a.size() < (int)b.size()) {
    if ((((int)a.size() - 1) * ((int)b.size() - 1)) % 2 == 1) s = -s;
    std::swap(a, b);
  }
  Poly g = Poly::constant(vt, 1), h = g;
  while (true) {
    int da = (int)a.size() - 1, db = (int)b.size() - 1;
    int delta = da - db;
    if (da % 2 == 1 && db % 2 == 1) s = -s;
    std::vector<Poly> r = prem(a, b, cap);
    a = std::move(b);
    Poly divisor = g * h.pow((unsigned)delta);
    b.clear();
    for (Poly& t : r) b.push_back(t.exact_div(divisor));
    g = a.back();
    if (delta > 0) h = g.pow((unsigned)delta).exact_div(h.pow((unsigned)(delta - 1)));
    if (vdeg(b) <= 0) break;
  }
  if (vdeg(b) < 0) return Poly::zero(vt);
  int da = (int)a.size() - 1;
  Poly res = b[0].pow((unsigned)da).exact_div(h.pow((unsigned)(da - 1)));
  check_cap(res, cap);
  return s < 0 ? -res : res;
}

// Substitute the root of the degree-one lin into f, cleared by the leading
// coefficient: lc(lin)^deg_v(f) * f(v <- -lin0/lin1).
Poly subst_linear(const Poly& lin, const Poly& f, int v, long long cap) {
  Poly p0 = lin.coeff_in(v, 0), p1 = lin.coeff_in(v, 1);
  Poly mp0 = -p0;
  int d = f.degree(v);
  Poly acc = f.coeff_in(v, d);
  Poly p1pow = Poly::constant(f.table(), 1);
  for (int k = d - 1; k >= 0; --k) {
    p1pow = p1pow * p1;
    acc = acc * mp0 + f.coeff_in(v, k) * p1pow;
    check_cap(acc, cap);
  }
  return acc;
}

}  // namespace

FracPoly solve_linear(const Poly& p, int v) {
  if (p.degree(v) != 1)
    throw Error(Errc::NotLinear, "degree in " + p.table().name(v) + " is " +
                                     std::to_string(p.degree(v)));
  return FracPoly::of(-p.coeff_in(v, 0), p.coeff_in(v, 1));
}

Poly resultant(const Poly& p, const Poly& q, int v) {
  check_resultant_inputs(p, q, v);
  bool fell_back = false;
  Poly r = bareiss(p, q, v, 0, fell_back);
  return fell_back ? prs(p, q, v, 0) : r;
}

Poly resultant_prs(const Poly& p, const Poly& q, int v) {
  check_resultant_inputs(p, q, v);
  return prs(p, q, v, 0);
}

std::pair<Poly, int> remove_factor(const Poly& p, const Poly& factor) {
  if (factor.is_zero())
    throw Error(Errc::ZeroPolynomial, "zero factor");
  if (p.is_zero()) return {p, 0};
  if (factor.total_degree() == 0 &&
      (factor.leading_coeff() == 1 || factor.leading_coeff() == -1))
    return {p, 0};
  Poly cur = p;
  int m = 0;
  while (cur.divisible_by(factor)) {
    cur = cur.exact_div(factor);
    ++m;
  }
  return {cur, m};
}

ElimResult eliminate(const Poly& p, const Poly& q, int v,
                     const ElimOptions& opt) {
  const VarTable& vt = p.table();
  int dp = std::max(p.degree(v), 0), dq = std::max(q.degree(v), 0);
  if (dp == 0 && dq == 0)
    throw Error(Errc::VariableAbsent,
                "neither input contains " + vt.name(v));

  ElimResult out;
  if (dp == 0) {
    out.weight = p.weight();
  } else if (dq == 0) {
    out.weight = q.weight();
  } else if (auto wp = p.weight(), wq = q.weight(); wp && wq) {
    out.weight = (long long)dq * *wp + (long long)dp * *wq -
                 (long long)vt.weight(v) * dp * dq;
  }

  Poly raw = Poly::zero(vt);
  auto vouch = [&](const Poly& inverted) {
    out.denominator_declared =
        opt.table ? denominator_declared(*opt.table, inverted)
                  : inverted.total_degree() == 0;
  };
  if (dp == 0) {
    raw = p;
    out.method = ElimMethod::LinearSolve;
  } else if (dq == 0) {
    raw = q;
    out.method = ElimMethod::LinearSolve;
  } else if (dp == 1) {
    raw = subst_linear(p, q, v, opt.term_cap);
    out.method = ElimMethod::LinearSolve;
    vouch(p.coeff_in(v, 1));
  } else if (dq == 1) {
    raw = subst_linear(q, p, v, opt.term_cap);
    out.method = ElimMethod::LinearSolve;
    vouch(q.coeff_in(v, 1));
  } else {
    bool fell_back = false;
    raw = bareiss(p, q, v, opt.term_cap, fell_back);
    if (fell_back) {
      raw = prs(p, q, v, opt.term_cap);
      out.method = ElimMethod::SubresultantPRS;
    } else {
      out.method = ElimMethod::SylvesterBareiss;
    }
  }
  if (raw.is_zero())
    throw Error(Errc::ZeroPolynomial,
                "eliminant vanished; inputs share a factor");

  Poly e = raw.primitive_part();
  if (opt.table) {
    for (const Poly& gfac : opt.table->declared()) {
      if (gfac.total_degree() < 1) continue;
      auto [cof, mult] = remove_factor(e, gfac);
      if (mult > 0) {
        e = cof;
        out.removed_factors.emplace_back(gfac, mult);
      }
    }
  }
  out.eliminated = e;
  return out;
}

}  // namespace cmc4
