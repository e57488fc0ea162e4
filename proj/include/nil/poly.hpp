#pragma once

#include <map>
#include <span>
#include <vector>

#include "nil/expr.hpp"

namespace nil {

struct ZeroPolynomial : std::runtime_error {
  ZeroPolynomial() : std::runtime_error("zero polynomial") {}
};

// Exponent vector over a fixed dimension n.
using Monomial = std::vector<unsigned>;

unsigned mono_degree(const Monomial& m);

// Graded lexicographic order: total degree first, then lex on exponents.
// map.begin() is the constant monomial, map.rbegin() the leading term.
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

struct FPoly {
  size_t n = 0;
  std::map<Monomial, double, GrlexLess> terms;
};

struct QPoly {
  size_t n = 0;
  std::map<Monomial, Rat, GrlexLess> terms;

  bool operator==(const QPoly& o) const { return n == o.n && terms == o.terms; }
};

// Inhomogeneous polynomial kernel (beta * <x,x'> + theta)^m.
struct KernelParams {
  double beta = 1.0;
  double theta = 1.0;
  unsigned m = 1;
};

double kernel(const KernelParams& k, std::span<const double> x,
              std::span<const double> y);

// C(n+m, n): number of monomials of total degree <= m in n variables.
size_t feature_dim(size_t n, unsigned m);

struct FeatureMap {
  size_t n = 0;
  unsigned m = 0;
  std::vector<Monomial> monos;  // ascending grlex; monos[0] is constant
};

FeatureMap make_feature_map(size_t n, unsigned m);
std::vector<double> phi_features(const FeatureMap& fm, std::span<const double> x);

// Sum_i alpha_i y_i (beta <sv_i, x> + theta)^m + b, expanded exactly over the
// monomial basis (float coefficients), then coefficients below
// 1e-12 * max|coeff| are dropped as expansion noise.
FPoly expand_classifier(const std::vector<std::vector<double>>& svs,
                        const std::vector<double>& alphas,
                        const std::vector<double>& labels, double b,
                        const KernelParams& k);

double poly_eval(const FPoly& p, std::span<const double> x);
Rat poly_eval(const QPoly& p, std::span<const Rat> x);
double poly_eval_f(const QPoly& p, std::span<const double> x);

unsigned poly_degree(const QPoly& p);
double max_abs_coeff(const FPoly& p);
Rat max_abs_coeff(const QPoly& p);

// Integer coefficients, content 1, positive grlex-leading coefficient.
// flipped reports a sign change; callers own the orientation consequences.
struct Normalized {
  QPoly poly;
  bool flipped = false;
};
Normalized normalize(const QPoly& p);  // throws ZeroPolynomial

enum class Orientation { Gt0, Lt0, Ge0, Le0 };

Rel orientation_rel(Orientation o);

struct VarRef {
  int index;
  std::string name;
};

ExprPtr poly_to_expr(const QPoly& p, const std::vector<VarRef>& vars);
FormulaPtr poly_to_formula(const QPoly& p, Orientation o,
                           const std::vector<VarRef>& vars);

// Expands a polynomial expression over n variables (indices < n must hold).
// Throws TranscendentalPresent on sin/cos/exp/log.
QPoly poly_from_expr(const Expr& e, size_t n);

// Canonical string, identical to print_expr(poly_to_expr(p, ...)).
std::string print_poly(const QPoly& p, const std::vector<VarRef>& vars);
std::string print_fpoly(const FPoly& p);

}  // namespace nil
