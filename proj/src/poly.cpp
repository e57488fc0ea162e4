#include "nil/poly.hpp"

#include <algorithm>
#include <cmath>

namespace nil {

unsigned mono_degree(const Monomial& m) {
  unsigned d = 0;
  for (unsigned e : m) d += e;
  return d;
}

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
  unsigned da = mono_degree(a), db = mono_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

double kernel(const KernelParams& k, std::span<const double> x,
              std::span<const double> y) {
  double dot = 0.0;
  for (size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
  double base = k.beta * dot + k.theta;
  double r = 1.0;
  for (unsigned i = 0; i < k.m; ++i) r *= base;
  return r;
}

size_t feature_dim(size_t n, unsigned m) {
  // C(n+m, n), small arguments only
  unsigned long long r = 1;
  for (size_t i = 1; i <= n; ++i) r = r * (m + i) / i;
  return (size_t)r;
}

static void enum_monos(size_t dim, unsigned budget, Monomial& cur,
                       std::vector<Monomial>& out) {
  if (dim == cur.size()) {
    out.push_back(cur);
    return;
  }
  for (unsigned e = 0; e <= budget; ++e) {
    cur.push_back(e);
    enum_monos(dim, budget - e, cur, out);
    cur.pop_back();
  }
}

FeatureMap make_feature_map(size_t n, unsigned m) {
  FeatureMap fm;
  fm.n = n;
  fm.m = m;
  Monomial cur;
  enum_monos(n, m, cur, fm.monos);
  std::sort(fm.monos.begin(), fm.monos.end(), GrlexLess{});
  return fm;
}

static double mono_eval_f(const Monomial& m, std::span<const double> x) {
  double r = 1.0;
  for (size_t j = 0; j < m.size(); ++j)
    for (unsigned e = 0; e < m[j]; ++e) r *= x[j];
  return r;
}

std::vector<double> phi_features(const FeatureMap& fm, std::span<const double> x) {
  std::vector<double> out;
  out.reserve(fm.monos.size());
  for (const auto& m : fm.monos) out.push_back(mono_eval_f(m, x));
  return out;
}

static FPoly fpoly_mul(const FPoly& a, const FPoly& b) {
  FPoly r;
  r.n = a.n;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      Monomial m(ma.size());
      for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      r.terms[m] += ca * cb;
    }
  return r;
}

FPoly expand_classifier(const std::vector<std::vector<double>>& svs,
                        const std::vector<double>& alphas,
                        const std::vector<double>& labels, double b,
                        const KernelParams& k) {
  size_t n = svs.empty() ? 0 : svs[0].size();
  FPoly acc;
  acc.n = n;
  for (size_t i = 0; i < svs.size(); ++i) {
    // (beta <sv, x> + theta)^m by repeated multiplication
    FPoly lin;
    lin.n = n;
    lin.terms[Monomial(n, 0)] = k.theta;
    for (size_t j = 0; j < n; ++j) {
      Monomial mj(n, 0);
      mj[j] = 1;
      lin.terms[mj] = k.beta * svs[i][j];
    }
    FPoly pw;
    pw.n = n;
    pw.terms[Monomial(n, 0)] = 1.0;
    for (unsigned e = 0; e < k.m; ++e) pw = fpoly_mul(pw, lin);
    double w = alphas[i] * labels[i];
    for (const auto& [m, c] : pw.terms) acc.terms[m] += w * c;
  }
  acc.terms[Monomial(n, 0)] += b;

  double top = max_abs_coeff(acc);
  FPoly out;
  out.n = n;
  for (const auto& [m, c] : acc.terms)
    if (std::abs(c) > 1e-12 * top) out.terms[m] = c;
  return out;
}

double poly_eval(const FPoly& p, std::span<const double> x) {
  double r = 0.0;
  for (const auto& [m, c] : p.terms) r += c * mono_eval_f(m, x);
  return r;
}

Rat poly_eval(const QPoly& p, std::span<const Rat> x) {
  Rat r(0);
  for (const auto& [m, c] : p.terms) {
    Rat t = c;
    for (size_t j = 0; j < m.size(); ++j)
      for (unsigned e = 0; e < m[j]; ++e) t *= x[j];
    r += t;
  }
  return r;
}

double poly_eval_f(const QPoly& p, std::span<const double> x) {
  double r = 0.0;
  for (const auto& [m, c] : p.terms) r += rat_to_double(c) * mono_eval_f(m, x);
  return r;
}

unsigned poly_degree(const QPoly& p) {
  unsigned d = 0;
  for (const auto& [m, c] : p.terms)
    if (c != 0) d = std::max(d, mono_degree(m));
  return d;
}

double max_abs_coeff(const FPoly& p) {
  double r = 0.0;
  for (const auto& [m, c] : p.terms) r = std::max(r, std::abs(c));
  return r;
}

Rat max_abs_coeff(const QPoly& p) {
  Rat r(0);
  for (const auto& [m, c] : p.terms) {
    Rat a = abs(c);
    if (a > r) r = a;
  }
  return r;
}

Normalized normalize(const QPoly& p) {
  QPoly work;
  work.n = p.n;
  for (const auto& [m, c] : p.terms)
    if (c != 0) work.terms[m] = c;
  if (work.terms.empty()) throw ZeroPolynomial();

  mpz_class den_lcm(1);
  for (const auto& [m, c] : work.terms)
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
  mpz_class num_gcd(0);
  for (const auto& [m, c] : work.terms) {
    mpz_class scaled_num = c.get_num() * (den_lcm / c.get_den());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled_num.get_mpz_t());
  }
  Rat scale(den_lcm, num_gcd);
  scale.canonicalize();

  Normalized out;
  out.poly.n = p.n;
  for (const auto& [m, c] : work.terms) out.poly.terms[m] = c * scale;
  if (out.poly.terms.rbegin()->second < 0) {
    out.flipped = true;
    for (auto& [m, c] : out.poly.terms) c = -c;
  }
  return out;
}

Rel orientation_rel(Orientation o) {
  switch (o) {
    case Orientation::Gt0: return Rel::Gt;
    case Orientation::Lt0: return Rel::Lt;
    case Orientation::Ge0: return Rel::Ge;
    case Orientation::Le0: return Rel::Le;
  }
  return Rel::Gt;
}

namespace {
ExprPtr term_expr(const Monomial& m, const Rat& coeff,
                  const std::vector<VarRef>& vars) {
  ExprPtr prod;
  for (size_t j = 0; j < m.size(); ++j) {
    if (m[j] == 0) continue;
    ExprPtr v = e_var(vars[j].index, vars[j].name);
    if (m[j] > 1) v = e_pow(v, m[j]);
    prod = prod ? e_mul(prod, v) : v;
  }
  Rat a = abs(coeff);
  if (!prod) return e_const(a);
  if (a == 1) return prod;
  return e_mul(e_const(a), prod);
}
}  // namespace

ExprPtr poly_to_expr(const QPoly& p, const std::vector<VarRef>& vars) {
  // descending grlex: leading term first
  ExprPtr acc;
  for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
    const auto& [m, c] = *it;
    if (c == 0) continue;
    if (!acc) {
      acc = term_expr(m, c, vars);
      if (c < 0) {
        // a lone negative constant folds; other shapes take an explicit Neg
        if (acc->kind == ExprKind::Const)
          acc = e_const(c);
        else
          acc = e_neg(acc);
      }
    } else {
      if (c < 0)
        acc = e_sub(acc, term_expr(m, c, vars));
      else
        acc = e_add(acc, term_expr(m, c, vars));
    }
  }
  if (!acc) acc = e_const(Rat(0));
  return acc;
}

FormulaPtr poly_to_formula(const QPoly& p, Orientation o,
                           const std::vector<VarRef>& vars) {
  return f_atom({poly_to_expr(p, vars), orientation_rel(o)});
}

namespace {
QPoly qp_const(size_t n, Rat v) {
  QPoly p;
  p.n = n;
  if (v != 0) p.terms[Monomial(n, 0)] = std::move(v);
  return p;
}
QPoly qp_add(const QPoly& a, const QPoly& b, int sign) {
  QPoly r = a;
  for (const auto& [m, c] : b.terms) {
    Rat& slot = r.terms[m];
    slot += sign > 0 ? c : -c;
    if (slot == 0) r.terms.erase(m);
  }
  return r;
}
QPoly qp_mul(const QPoly& a, const QPoly& b) {
  QPoly r;
  r.n = a.n;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      Monomial m(ma.size());
      for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      Rat& slot = r.terms[m];
      slot += ca * cb;
      if (slot == 0) r.terms.erase(m);
    }
  return r;
}
}  // namespace

QPoly poly_from_expr(const Expr& e, size_t n) {
  switch (e.kind) {
    case ExprKind::Const: return qp_const(n, e.value);
    case ExprKind::Var: {
      QPoly p;
      p.n = n;
      Monomial m(n, 0);
      m[(size_t)e.var] = 1;
      p.terms[m] = 1;
      return p;
    }
    case ExprKind::Add: return qp_add(poly_from_expr(*e.a, n), poly_from_expr(*e.b, n), 1);
    case ExprKind::Sub: return qp_add(poly_from_expr(*e.a, n), poly_from_expr(*e.b, n), -1);
    case ExprKind::Mul: return qp_mul(poly_from_expr(*e.a, n), poly_from_expr(*e.b, n));
    case ExprKind::Neg: return qp_add(qp_const(n, Rat(0)), poly_from_expr(*e.a, n), -1);
    case ExprKind::Pow: {
      QPoly base = poly_from_expr(*e.a, n);
      QPoly r = qp_const(n, Rat(1));
      for (unsigned i = 0; i < e.exponent; ++i) r = qp_mul(r, base);
      return r;
    }
    default:
      throw TranscendentalPresent("polynomial expansion of a transcendental term");
  }
}

std::string print_poly(const QPoly& p, const std::vector<VarRef>& vars) {
  return print_expr(*poly_to_expr(p, vars));
}

std::string print_fpoly(const FPoly& p) {
  std::string out;
  for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
    const auto& [m, c] = *it;
    if (!out.empty()) out += " + ";
    out += std::to_string(c);
    for (size_t j = 0; j < m.size(); ++j)
      if (m[j]) out += " x" + std::to_string(j) + "^" + std::to_string(m[j]);
  }
  return out.empty() ? "0" : out;
}

}  // namespace nil
