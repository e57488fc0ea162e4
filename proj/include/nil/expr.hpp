#pragma once

#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nil/rational.hpp"

namespace nil {

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct TranscendentalPresent : std::runtime_error {
  explicit TranscendentalPresent(const std::string& what)
      : std::runtime_error(what) {}
};

enum class ExprKind { Const, Var, Add, Sub, Mul, Neg, Pow, Sin, Cos, Exp, Log };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable tree. Pow keeps its natural exponent as data: expanding x^k to
// repeated Mul would lose the even/odd sign information the interval layer
// relies on to discard boxes.
struct Expr {
  ExprKind kind;
  Rat value;             // Const
  int var = -1;          // Var: index into the owning Problem's var list
  std::string name;      // Var: display name
  unsigned exponent = 0; // Pow: >= 1
  ExprPtr a, b;
};

ExprPtr e_const(Rat v);
ExprPtr e_var(int index, std::string name);
ExprPtr e_add(ExprPtr a, ExprPtr b);
ExprPtr e_sub(ExprPtr a, ExprPtr b);
ExprPtr e_mul(ExprPtr a, ExprPtr b);
ExprPtr e_neg(ExprPtr a);
ExprPtr e_pow(ExprPtr a, unsigned k);  // k >= 1
ExprPtr e_sin(ExprPtr a);
ExprPtr e_cos(ExprPtr a);
ExprPtr e_exp(ExprPtr a);
ExprPtr e_log(ExprPtr a);

enum class Rel { Lt, Gt, Le, Ge, Eq };

// lhs rel 0; the parser folds `e REL e'` into this shape.
struct Atom {
  ExprPtr lhs;
  Rel rel;
};

enum class FKind { Atom, And, Or, Not };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FKind kind;
  Atom atom;      // FKind::Atom
  FormulaPtr a, b;
};

FormulaPtr f_atom(Atom at);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_not(FormulaPtr a);

// Negation-free form. negate=true builds NNF of the complement.
FormulaPtr to_nnf(const FormulaPtr& f, bool negate);

struct Problem {
  std::vector<std::string> vars;      // declaration order fixes indices
  std::vector<int> common;            // sorted indices into vars
  FormulaPtr phi;
  FormulaPtr psi;
  unsigned degree = 1;
  std::map<std::string, std::string> options;  // raw "option k = v;" entries

  int var_index(const std::string& name) const;
};

using FPoint = std::vector<double>;
using QPoint = std::vector<Rat>;

// point is indexed by variable index; must cover every Var in e.
double eval_float(const Expr& e, std::span<const double> point);
Rat eval_rational(const Expr& e, std::span<const Rat> point);

// Truth of a formula at a float point (strict/non-strict as written).
// DomainError propagates.
bool eval_formula_float(const Formula& f, std::span<const double> point);

void collect_vars(const Expr& e, std::vector<int>& out);        // sorted, unique
void collect_vars(const Formula& f, std::vector<int>& out);
bool has_transcendental(const Expr& e);
bool has_transcendental(const Formula& f);
bool expr_equal(const Expr& x, const Expr& y);
bool formula_equal(const Formula& x, const Formula& y);

std::string print_expr(const Expr& e);
std::string print_atom(const Atom& a);
std::string print_formula(const Formula& f);
std::string print_problem(const Problem& p);

std::string rel_string(Rel r);

}  // namespace nil
