#include "nil/expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nil {

std::optional<Rat> rat_of_decimal(const std::string& text) {
  if (text.empty()) return std::nullopt;
  size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') {
    neg = text[i] == '-';
    ++i;
  }
  std::string digits;
  long frac_digits = 0;
  bool any = false;
  while (i < text.size() && isdigit((unsigned char)text[i])) {
    digits += text[i++];
    any = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && isdigit((unsigned char)text[i])) {
      digits += text[i++];
      ++frac_digits;
      any = true;
    }
  }
  if (!any) return std::nullopt;
  long exp10 = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      eneg = text[i] == '-';
      ++i;
    }
    if (i >= text.size() || !isdigit((unsigned char)text[i])) return std::nullopt;
    while (i < text.size() && isdigit((unsigned char)text[i])) {
      exp10 = exp10 * 10 + (text[i++] - '0');
      if (exp10 > 100000) return std::nullopt;
    }
    if (eneg) exp10 = -exp10;
  }
  if (i != text.size()) return std::nullopt;

  // Base must be explicit: the string ctor defaults to base 0, which treats
  // a leading '0' (e.g. the digits of "0.5418") as an octal prefix.
  mpz_class num(digits.empty() ? "0" : digits, 10);
  mpz_class den(1);
  long shift = exp10 - frac_digits;
  mpz_class ten(10);
  if (shift >= 0) {
    mpz_class p;
    mpz_pow_ui(p.get_mpz_t(), ten.get_mpz_t(), (unsigned long)shift);
    num *= p;
  } else {
    mpz_pow_ui(den.get_mpz_t(), ten.get_mpz_t(), (unsigned long)(-shift));
  }
  if (neg) num = -num;
  Rat q(num, den);
  q.canonicalize();
  return q;
}

std::string rat_to_string(const Rat& q) {
  mpz_class num = q.get_num(), den = q.get_den();
  if (den == 1) return num.get_str();
  // den = 2^a * 5^b * rest; exact decimal exists iff rest == 1
  mpz_class d = den;
  unsigned long a = 0, b = 0;
  while (mpz_divisible_ui_p(d.get_mpz_t(), 2)) {
    d /= 2;
    ++a;
  }
  while (mpz_divisible_ui_p(d.get_mpz_t(), 5)) {
    d /= 5;
    ++b;
  }
  if (d != 1) return num.get_str() + "/" + den.get_str();
  unsigned long k = std::max(a, b);
  mpz_class ten(10), p;
  mpz_pow_ui(p.get_mpz_t(), ten.get_mpz_t(), k);
  mpz_class scaled = num * p / den;  // exact by construction
  bool neg = scaled < 0;
  std::string s = (neg ? mpz_class(-scaled) : scaled).get_str();
  if (s.size() <= k) s.insert(0, k + 1 - s.size(), '0');
  s.insert(s.size() - k, ".");
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return (neg ? "-" : "") + s;
}

static ExprPtr mk(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

ExprPtr e_const(Rat v) {
  Expr e{ExprKind::Const, std::move(v), -1, {}, 0, nullptr, nullptr};
  return mk(std::move(e));
}
ExprPtr e_var(int index, std::string name) {
  Expr e{ExprKind::Var, Rat(0), index, std::move(name), 0, nullptr, nullptr};
  return mk(std::move(e));
}
static ExprPtr binary(ExprKind k, ExprPtr a, ExprPtr b) {
  Expr e{k, Rat(0), -1, {}, 0, std::move(a), std::move(b)};
  return mk(std::move(e));
}
static ExprPtr unary(ExprKind k, ExprPtr a) {
  Expr e{k, Rat(0), -1, {}, 0, std::move(a), nullptr};
  return mk(std::move(e));
}
ExprPtr e_add(ExprPtr a, ExprPtr b) { return binary(ExprKind::Add, std::move(a), std::move(b)); }
ExprPtr e_sub(ExprPtr a, ExprPtr b) { return binary(ExprKind::Sub, std::move(a), std::move(b)); }
ExprPtr e_mul(ExprPtr a, ExprPtr b) { return binary(ExprKind::Mul, std::move(a), std::move(b)); }
ExprPtr e_neg(ExprPtr a) { return unary(ExprKind::Neg, std::move(a)); }
ExprPtr e_pow(ExprPtr a, unsigned k) {
  Expr e{ExprKind::Pow, Rat(0), -1, {}, k, std::move(a), nullptr};
  return mk(std::move(e));
}
ExprPtr e_sin(ExprPtr a) { return unary(ExprKind::Sin, std::move(a)); }
ExprPtr e_cos(ExprPtr a) { return unary(ExprKind::Cos, std::move(a)); }
ExprPtr e_exp(ExprPtr a) { return unary(ExprKind::Exp, std::move(a)); }
ExprPtr e_log(ExprPtr a) { return unary(ExprKind::Log, std::move(a)); }

FormulaPtr f_atom(Atom at) {
  Formula f{FKind::Atom, std::move(at), nullptr, nullptr};
  return std::make_shared<const Formula>(std::move(f));
}
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  Formula f{FKind::And, {}, std::move(a), std::move(b)};
  return std::make_shared<const Formula>(std::move(f));
}
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  Formula f{FKind::Or, {}, std::move(a), std::move(b)};
  return std::make_shared<const Formula>(std::move(f));
}
FormulaPtr f_not(FormulaPtr a) {
  Formula f{FKind::Not, {}, std::move(a), nullptr};
  return std::make_shared<const Formula>(std::move(f));
}

static Rel rel_complement(Rel r) {
  switch (r) {
    case Rel::Lt: return Rel::Ge;
    case Rel::Gt: return Rel::Le;
    case Rel::Le: return Rel::Gt;
    case Rel::Ge: return Rel::Lt;
    case Rel::Eq: return Rel::Eq;  // handled by caller
  }
  return Rel::Eq;
}

FormulaPtr to_nnf(const FormulaPtr& f, bool negate) {
  switch (f->kind) {
    case FKind::Atom: {
      if (!negate) return f;
      if (f->atom.rel == Rel::Eq) {
        // trichotomy: not(e = 0)  ->  e < 0  or  e > 0
        return f_or(f_atom({f->atom.lhs, Rel::Lt}),
                    f_atom({f->atom.lhs, Rel::Gt}));
      }
      return f_atom({f->atom.lhs, rel_complement(f->atom.rel)});
    }
    case FKind::And: {
      auto a = to_nnf(f->a, negate), b = to_nnf(f->b, negate);
      return negate ? f_or(a, b) : f_and(a, b);
    }
    case FKind::Or: {
      auto a = to_nnf(f->a, negate), b = to_nnf(f->b, negate);
      return negate ? f_and(a, b) : f_or(a, b);
    }
    case FKind::Not:
      return to_nnf(f->a, !negate);
  }
  return f;
}

int Problem::var_index(const std::string& name) const {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name) return (int)i;
  return -1;
}

static double ipow(double x, unsigned k) {
  double r = 1.0;
  while (k) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}

double eval_float(const Expr& e, std::span<const double> point) {
  switch (e.kind) {
    case ExprKind::Const: return rat_to_double(e.value);
    case ExprKind::Var: return point[(size_t)e.var];
    case ExprKind::Add: return eval_float(*e.a, point) + eval_float(*e.b, point);
    case ExprKind::Sub: return eval_float(*e.a, point) - eval_float(*e.b, point);
    case ExprKind::Mul: return eval_float(*e.a, point) * eval_float(*e.b, point);
    case ExprKind::Neg: return -eval_float(*e.a, point);
    case ExprKind::Pow: return ipow(eval_float(*e.a, point), e.exponent);
    case ExprKind::Sin: return std::sin(eval_float(*e.a, point));
    case ExprKind::Cos: return std::cos(eval_float(*e.a, point));
    case ExprKind::Exp: return std::exp(eval_float(*e.a, point));
    case ExprKind::Log: {
      double v = eval_float(*e.a, point);
      if (v <= 0.0) throw DomainError("log of non-positive value");
      return std::log(v);
    }
  }
  return 0.0;
}

Rat eval_rational(const Expr& e, std::span<const Rat> point) {
  switch (e.kind) {
    case ExprKind::Const: return e.value;
    case ExprKind::Var: return point[(size_t)e.var];
    case ExprKind::Add: return eval_rational(*e.a, point) + eval_rational(*e.b, point);
    case ExprKind::Sub: return eval_rational(*e.a, point) - eval_rational(*e.b, point);
    case ExprKind::Mul: return eval_rational(*e.a, point) * eval_rational(*e.b, point);
    case ExprKind::Neg: return -eval_rational(*e.a, point);
    case ExprKind::Pow: {
      Rat base = eval_rational(*e.a, point);
      Rat r(1);
      unsigned k = e.exponent;
      while (k) {
        if (k & 1) r *= base;
        base *= base;
        k >>= 1;
      }
      return r;
    }
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Exp:
    case ExprKind::Log:
      throw TranscendentalPresent("exact evaluation of a transcendental term");
  }
  return Rat(0);
}

bool eval_formula_float(const Formula& f, std::span<const double> point) {
  switch (f.kind) {
    case FKind::Atom: {
      double v = eval_float(*f.atom.lhs, point);
      switch (f.atom.rel) {
        case Rel::Lt: return v < 0.0;
        case Rel::Gt: return v > 0.0;
        case Rel::Le: return v <= 0.0;
        case Rel::Ge: return v >= 0.0;
        case Rel::Eq: return v == 0.0;
      }
      return false;
    }
    case FKind::And: return eval_formula_float(*f.a, point) && eval_formula_float(*f.b, point);
    case FKind::Or: return eval_formula_float(*f.a, point) || eval_formula_float(*f.b, point);
    case FKind::Not: return !eval_formula_float(*f.a, point);
  }
  return false;
}

static void collect_rec(const Expr& e, std::vector<int>& out) {
  switch (e.kind) {
    case ExprKind::Var: out.push_back(e.var); break;
    case ExprKind::Const: break;
    default:
      if (e.a) collect_rec(*e.a, out);
      if (e.b) collect_rec(*e.b, out);
  }
}

void collect_vars(const Expr& e, std::vector<int>& out) {
  collect_rec(e, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

void collect_vars(const Formula& f, std::vector<int>& out) {
  switch (f.kind) {
    case FKind::Atom: collect_rec(*f.atom.lhs, out); break;
    case FKind::Not: collect_vars(*f.a, out); return;
    default:
      collect_vars(*f.a, out);
      collect_vars(*f.b, out);
      return;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

bool has_transcendental(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Exp:
    case ExprKind::Log:
      return true;
    default:
      if (e.a && has_transcendental(*e.a)) return true;
      return e.b && has_transcendental(*e.b);
  }
}

bool has_transcendental(const Formula& f) {
  switch (f.kind) {
    case FKind::Atom: return has_transcendental(*f.atom.lhs);
    case FKind::Not: return has_transcendental(*f.a);
    default: return has_transcendental(*f.a) || has_transcendental(*f.b);
  }
}

bool expr_equal(const Expr& x, const Expr& y) {
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case ExprKind::Const: return x.value == y.value;
    case ExprKind::Var: return x.var == y.var && x.name == y.name;
    case ExprKind::Pow:
      return x.exponent == y.exponent && expr_equal(*x.a, *y.a);
    default: {
      if ((x.a == nullptr) != (y.a == nullptr)) return false;
      if ((x.b == nullptr) != (y.b == nullptr)) return false;
      if (x.a && !expr_equal(*x.a, *y.a)) return false;
      if (x.b && !expr_equal(*x.b, *y.b)) return false;
      return true;
    }
  }
}

bool formula_equal(const Formula& x, const Formula& y) {
  if (x.kind != y.kind) return false;
  if (x.kind == FKind::Atom)
    return x.atom.rel == y.atom.rel && expr_equal(*x.atom.lhs, *y.atom.lhs);
  if (x.a && (!y.a || !formula_equal(*x.a, *y.a))) return false;
  if (x.b && (!y.b || !formula_equal(*x.b, *y.b))) return false;
  return (x.a == nullptr) == (y.a == nullptr) && (x.b == nullptr) == (y.b == nullptr);
}

// Precedence: Add/Sub 1, Mul 2, unary minus 3, Pow 4, primaries 5.
// A negative constant prints with its sign, so it carries unary-minus
// precedence to keep reparses structurally identical.
static int expr_prec(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    case ExprKind::Const: return e.value < 0 ? 3 : 5;
    default: return 5;
  }
}

static void print_rec(const Expr& e, int min_prec, std::string& out) {
  bool paren = expr_prec(e) < min_prec;
  if (paren) out += '(';
  switch (e.kind) {
    case ExprKind::Const: out += rat_to_string(e.value); break;
    case ExprKind::Var: out += e.name; break;
    case ExprKind::Add:
      print_rec(*e.a, 1, out);
      out += " + ";
      print_rec(*e.b, 2, out);
      break;
    case ExprKind::Sub:
      print_rec(*e.a, 1, out);
      out += " - ";
      print_rec(*e.b, 2, out);
      break;
    case ExprKind::Mul:
      print_rec(*e.a, 2, out);
      out += " * ";
      print_rec(*e.b, 3, out);
      break;
    case ExprKind::Neg:
      out += '-';
      print_rec(*e.a, 3, out);
      break;
    case ExprKind::Pow:
      print_rec(*e.a, 5, out);
      out += '^';
      out += std::to_string(e.exponent);
      break;
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Exp:
    case ExprKind::Log: {
      const char* n = e.kind == ExprKind::Sin   ? "sin"
                      : e.kind == ExprKind::Cos ? "cos"
                      : e.kind == ExprKind::Exp ? "exp"
                                                : "log";
      out += n;
      out += '(';
      print_rec(*e.a, 0, out);
      out += ')';
      break;
    }
  }
  if (paren) out += ')';
}

std::string print_expr(const Expr& e) {
  std::string out;
  print_rec(e, 0, out);
  return out;
}

std::string rel_string(Rel r) {
  switch (r) {
    case Rel::Lt: return "<";
    case Rel::Gt: return ">";
    case Rel::Le: return "<=";
    case Rel::Ge: return ">=";
    case Rel::Eq: return "=";
  }
  return "?";
}

std::string print_atom(const Atom& a) {
  return print_expr(*a.lhs) + " " + rel_string(a.rel) + " 0";
}

// Connective precedence: || 1, && 2, ! 3, atom 4.
static int formula_prec(const Formula& f) {
  switch (f.kind) {
    case FKind::Or: return 1;
    case FKind::And: return 2;
    case FKind::Not: return 3;
    case FKind::Atom: return 4;
  }
  return 4;
}

static void print_formula_rec(const Formula& f, int min_prec, std::string& out) {
  bool paren = formula_prec(f) < min_prec;
  if (paren) out += '(';
  switch (f.kind) {
    case FKind::Atom: out += print_atom(f.atom); break;
    case FKind::And:
      print_formula_rec(*f.a, 2, out);
      out += " && ";
      print_formula_rec(*f.b, 3, out);
      break;
    case FKind::Or:
      print_formula_rec(*f.a, 1, out);
      out += " || ";
      print_formula_rec(*f.b, 2, out);
      break;
    case FKind::Not:
      out += '!';
      print_formula_rec(*f.a, 4, out);
      break;
  }
  if (paren) out += ')';
}

std::string print_formula(const Formula& f) {
  std::string out;
  print_formula_rec(f, 0, out);
  return out;
}

std::string print_problem(const Problem& p) {
  std::ostringstream os;
  os << "vars ";
  for (size_t i = 0; i < p.vars.size(); ++i)
    os << (i ? ", " : "") << p.vars[i];
  os << ";\ncommon ";
  for (size_t i = 0; i < p.common.size(); ++i)
    os << (i ? ", " : "") << p.vars[(size_t)p.common[i]];
  os << ";\nphi: " << print_formula(*p.phi) << ";\npsi: "
     << print_formula(*p.psi) << ";\ndegree: " << p.degree << ";\n";
  for (const auto& [k, v] : p.options) os << "option " << k << " = " << v << ";\n";
  return os.str();
}

}  // namespace nil
