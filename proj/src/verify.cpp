#include "nil/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

namespace nil {

namespace {

enum class Tri { False, True, Unknown };

// Termwise enclosures of a polynomial blow up linearly in the distance from
// the origin even where the polynomial itself stays near zero, which makes
// queries along a zero set (think a squared linear form plus a small
// constant) unprovable in any practical box budget. The mean value form
// p(m) + grad p(X) (X - m) is also sound and tightens quadratically near
// critical zero sets, so both are evaluated and intersected. Conversion and
// differentiation happen once per atom, cached for the whole search.
struct MeanValueData {
  bool usable = false;
  QPoly p;
  std::vector<std::pair<int, QPoly>> partials;
};

struct MvCache {
  std::unordered_map<const Expr*, MeanValueData> map;

  const MeanValueData& get(const Expr& e, size_t nvars) {
    auto it = map.find(&e);
    if (it != map.end()) return it->second;
    MeanValueData d;
    try {
      d.p = poly_from_expr(e, nvars);
      if (poly_degree(d.p) >= 2) {
        for (size_t v = 0; v < nvars; ++v) {
          QPoly dp;
          dp.n = nvars;
          for (const auto& [m, c] : d.p.terms) {
            if (m[v] == 0) continue;
            Monomial dm = m;
            dm[v] -= 1;
            dp.terms[dm] = c * Rat((int)m[v]);
          }
          if (!dp.terms.empty()) d.partials.push_back({(int)v, std::move(dp)});
        }
        d.usable = true;
      }
    } catch (...) {
      d.usable = false;
    }
    return map.emplace(&e, std::move(d)).first->second;
  }
};

Interval iv_poly_box(const QPoly& p, const Box& box) {
  Interval acc = iv_point(0.0);
  for (const auto& [m, c] : p.terms) {
    Interval t = iv_of_rat(c);
    for (size_t i = 0; i < m.size(); ++i)
      if (m[i]) t = iv_mul(t, iv_pow(box[i], m[i]));
    acc = iv_add(acc, t);
  }
  return acc;
}

bool mean_value_enclosure(const MeanValueData& mv, const Box& box,
                          Interval* out) {
  Box mid(box.size());
  for (const auto& [v, dp] : mv.partials) {
    if (!std::isfinite(box[v].lo) || !std::isfinite(box[v].hi)) return false;
  }
  for (size_t i = 0; i < box.size(); ++i) {
    double m = 0.0;
    if (std::isfinite(box[i].lo) && std::isfinite(box[i].hi)) {
      m = box[i].lo + 0.5 * (box[i].hi - box[i].lo);
      m = std::min(std::max(m, box[i].lo), box[i].hi);
    }
    mid[i] = iv_point(m);
  }
  Interval acc = iv_poly_box(mv.p, mid);
  for (const auto& [v, dp] : mv.partials) {
    Interval g = iv_poly_box(dp, box);
    acc = iv_add(acc, iv_mul(g, iv_sub(box[v], mid[v])));
  }
  *out = acc;
  return true;
}

// Certified sign of one atom over a box. DomainError means the expression is
// undefined on the whole box, and an undefined point satisfies nothing, so
// the atom is certainly false there. A clipped enclosure covers only the
// defined points, which still supports "false everywhere" but never "true
// everywhere".
Tri certify_atom_box(const Atom& a, const Box& box, MvCache& cache) {
  IntervalEvalFlags flags;
  Interval iv;
  try {
    iv = eval_interval(*a.lhs, box, &flags);
  } catch (const DomainError&) {
    return Tri::False;
  }
  const MeanValueData& mv = cache.get(*a.lhs, box.size());
  if (mv.usable) {
    Interval m2;
    if (mean_value_enclosure(mv, box, &m2)) {
      // both enclose the true range, so their intersection does too
      double nlo = std::max(iv.lo, m2.lo), nhi = std::min(iv.hi, m2.hi);
      if (nlo <= nhi) {
        iv.lo = nlo;
        iv.hi = nhi;
      }
    }
  }
  const bool cl = flags.clipped;
  switch (a.rel) {
    case Rel::Lt:
      if (iv.lo >= 0) return Tri::False;
      if (iv.hi < 0 && !cl) return Tri::True;
      return Tri::Unknown;
    case Rel::Le:
      if (iv.lo > 0) return Tri::False;
      if (iv.hi <= 0 && !cl) return Tri::True;
      return Tri::Unknown;
    case Rel::Gt:
      if (iv.hi <= 0) return Tri::False;
      if (iv.lo > 0 && !cl) return Tri::True;
      return Tri::Unknown;
    case Rel::Ge:
      if (iv.hi < 0) return Tri::False;
      if (iv.lo >= 0 && !cl) return Tri::True;
      return Tri::Unknown;
    case Rel::Eq:
      if (iv.lo > 0 || iv.hi < 0) return Tri::False;
      if (iv.lo == 0 && iv.hi == 0 && !cl) return Tri::True;
      return Tri::Unknown;
  }
  return Tri::Unknown;
}

Tri certify_box(const Formula& f, const Box& box, MvCache& cache) {
  switch (f.kind) {
    case FKind::Atom:
      return certify_atom_box(f.atom, box, cache);
    case FKind::And: {
      Tri a = certify_box(*f.a, box, cache);
      if (a == Tri::False) return Tri::False;
      Tri b = certify_box(*f.b, box, cache);
      if (b == Tri::False) return Tri::False;
      return (a == Tri::True && b == Tri::True) ? Tri::True : Tri::Unknown;
    }
    case FKind::Or: {
      Tri a = certify_box(*f.a, box, cache);
      if (a == Tri::True) return Tri::True;
      Tri b = certify_box(*f.b, box, cache);
      if (b == Tri::True) return Tri::True;
      return (a == Tri::False && b == Tri::False) ? Tri::False : Tri::Unknown;
    }
    case FKind::Not: {
      // Three-valued inversion is sound: certified-everywhere claims negate.
      Tri a = certify_box(*f.a, box, cache);
      if (a == Tri::True) return Tri::False;
      if (a == Tri::False) return Tri::True;
      return Tri::Unknown;
    }
  }
  return Tri::Unknown;
}

bool certify_atom_point(const Atom& a, const QPoint& pt) {
  if (has_transcendental(*a.lhs)) {
    // No exact value exists; a point-interval enclosure must decide the sign.
    if (a.rel == Rel::Eq) return false;
    Box pb(pt.size());
    for (size_t i = 0; i < pt.size(); ++i) pb[i] = iv_of_rat(pt[i]);
    IntervalEvalFlags flags;
    Interval iv;
    try {
      iv = eval_interval(*a.lhs, pb, &flags);
    } catch (const DomainError&) {
      return false;
    }
    if (flags.clipped) return false;
    switch (a.rel) {
      case Rel::Lt: return iv.hi < 0;
      case Rel::Le: return iv.hi <= 0;
      case Rel::Gt: return iv.lo > 0;
      case Rel::Ge: return iv.lo >= 0;
      case Rel::Eq: return false;
    }
    return false;
  }
  Rat v = eval_rational(*a.lhs, pt);
  switch (a.rel) {
    case Rel::Lt: return v < 0;
    case Rel::Le: return v <= 0;
    case Rel::Gt: return v > 0;
    case Rel::Ge: return v >= 0;
    case Rel::Eq: return v == 0;
  }
  return false;
}

void collect_atoms_rec(const Formula& f, std::vector<Atom>& out) {
  switch (f.kind) {
    case FKind::Atom: out.push_back(f.atom); return;
    case FKind::Not: collect_atoms_rec(*f.a, out); return;
    default:
      collect_atoms_rec(*f.a, out);
      collect_atoms_rec(*f.b, out);
  }
}

std::vector<AtomCert> make_certificate(const Formula& f, const QPoint& pt) {
  std::vector<Atom> atoms;
  collect_atoms_rec(f, atoms);
  std::vector<AtomCert> cert;
  cert.reserve(atoms.size());
  for (const Atom& a : atoms)
    cert.push_back({print_atom(a), certify_atom_point(a, pt)});
  return cert;
}

// Midpoint in float; exact as a rational. Falls back to 0 for unbounded dims.
double mid_of(const Interval& iv) {
  double m = iv.lo + 0.5 * (iv.hi - iv.lo);
  if (!std::isfinite(m)) m = 0.0;
  return m;
}

bool float_true(const Formula& f, const FPoint& pt) {
  try {
    return eval_formula_float(f, pt);
  } catch (const DomainError&) {
    return false;
  }
}

int widest_used_dim(const Box& b, const std::vector<int>& used,
                    double min_width) {
  int dim = -1;
  double w = min_width;
  for (int v : used) {
    double width = b[v].hi - b[v].lo;
    if (width > w) {
      w = width;
      dim = v;
    }
  }
  return dim;
}

// ---- model search helpers ----

bool contains_var(const Expr& e, int v) {
  switch (e.kind) {
    case ExprKind::Const: return false;
    case ExprKind::Var: return e.var == v;
    default:
      if (e.a && contains_var(*e.a, v)) return true;
      return e.b && contains_var(*e.b, v);
  }
}

// Saturating syntactic degree of v in e; transcendental wrapping makes it
// effectively infinite. Degree exactly 1 guarantees e = c*v + r with c and r
// free of v, so the root is exact.
unsigned lin_degree(const Expr& e, int v) {
  constexpr unsigned kInf = 1u << 20;
  switch (e.kind) {
    case ExprKind::Const: return 0;
    case ExprKind::Var: return e.var == v ? 1u : 0u;
    case ExprKind::Add:
    case ExprKind::Sub:
      return std::max(lin_degree(*e.a, v), lin_degree(*e.b, v));
    case ExprKind::Mul: {
      unsigned s = lin_degree(*e.a, v) + lin_degree(*e.b, v);
      return std::min(s, kInf);
    }
    case ExprKind::Neg: return lin_degree(*e.a, v);
    case ExprKind::Pow: {
      unsigned d = lin_degree(*e.a, v);
      if (d == 0) return 0;
      unsigned long s = (unsigned long)d * e.exponent;
      return (unsigned)std::min<unsigned long>(s, kInf);
    }
    default:
      return contains_var(e, v) ? kInf : 0u;
  }
}

void conjuncts_rec(const Formula& f, std::vector<const Formula*>& out) {
  if (f.kind == FKind::And) {
    conjuncts_rec(*f.a, out);
    conjuncts_rec(*f.b, out);
  } else {
    out.push_back(&f);
  }
}

std::vector<const Formula*> conjuncts(const Formula& f) {
  std::vector<const Formula*> out;
  conjuncts_rec(f, out);
  return out;
}

bool rat_within(const Interval& iv, const Rat& v) {
  if (std::isfinite(iv.lo) && v < rat_of_double(iv.lo)) return false;
  if (std::isfinite(iv.hi) && v > rat_of_double(iv.hi)) return false;
  return true;
}

// e is linear in var: two evaluations recover slope and intercept exactly.
std::optional<Rat> solve_linear(const Atom& a, int var, const QPoint& pt) {
  QPoint tmp = pt;
  tmp[var] = 0;
  Rat a0 = eval_rational(*a.lhs, tmp);
  tmp[var] = 1;
  Rat a1 = eval_rational(*a.lhs, tmp);
  Rat c = a1 - a0;
  if (c == 0) return std::nullopt;
  return Rat(-a0 / c);
}

struct PlanStep {
  Atom atom;
  int var;
};

// Greedy triangularization of the conjunction's equality atoms: repeatedly
// take an (atom, var) where var occurs linearly in that atom and in no other
// remaining equality. Reversing the removal order gives an execution order
// in which every step's other variables are already bound.
std::vector<PlanStep> make_plan(const std::vector<const Formula*>& parts) {
  std::vector<Atom> eqs;
  for (const Formula* g : parts)
    if (g->kind == FKind::Atom && g->atom.rel == Rel::Eq &&
        !has_transcendental(*g->atom.lhs))
      eqs.push_back(g->atom);

  std::vector<std::vector<int>> vars(eqs.size());
  for (size_t i = 0; i < eqs.size(); ++i) collect_vars(*eqs[i].lhs, vars[i]);

  std::vector<PlanStep> plan;
  std::vector<bool> taken(eqs.size(), false);
  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t i = 0; i < eqs.size() && !progress; ++i) {
      if (taken[i]) continue;
      for (int v : vars[i]) {
        if (lin_degree(*eqs[i].lhs, v) != 1) continue;
        bool elsewhere = false;
        for (size_t j = 0; j < eqs.size() && !elsewhere; ++j) {
          if (j == i || taken[j]) continue;
          elsewhere = std::binary_search(vars[j].begin(), vars[j].end(), v);
        }
        if (elsewhere) continue;
        plan.push_back({eqs[i], v});
        taken[i] = true;
        progress = true;
        break;
      }
    }
  }
  std::reverse(plan.begin(), plan.end());
  return plan;
}

bool apply_plan(const std::vector<PlanStep>& plan, const Box& box,
                QPoint& pt) {
  for (const PlanStep& s : plan) {
    auto root = solve_linear(s.atom, s.var, pt);
    if (!root || !rat_within(box[s.var], *root)) return false;
    pt[s.var] = *root;
  }
  return true;
}

bool relaxed_sat(Rel rel, double v, double eq_relax) {
  switch (rel) {
    case Rel::Lt: return v < 0;
    case Rel::Gt: return v > 0;
    case Rel::Le: return v <= std::max(eq_relax, 1e-9);
    case Rel::Ge: return v >= -std::max(eq_relax, 1e-9);
    case Rel::Eq: return std::fabs(v) <= 1e-6;
  }
  return false;
}

// Float rehearsal of the boundary-snap repair below; returns whether the
// exact replay is worth paying for. Points pinned to measure-zero sets by
// non-strict atoms (opposing inequalities, unsolved equalities) never pass a
// plain satisfiability test, but snapping a linearly occurring variable onto
// the atom's boundary root can land exactly on the set.
bool repair_gate(const std::vector<const Formula*>& parts, const Box& box,
                 FPoint fp, double eq_relax) {
  for (int pass = 0; pass < 3; ++pass) {
    bool changed = false;
    for (const Formula* g : parts) {
      if (g->kind != FKind::Atom) continue;
      const Atom& a = g->atom;
      if (has_transcendental(*a.lhs)) continue;
      double v;
      try {
        v = eval_float(*a.lhs, fp);
      } catch (const DomainError&) {
        return false;
      }
      bool sat = false;
      switch (a.rel) {
        case Rel::Lt: sat = v < 0; break;
        case Rel::Gt: sat = v > 0; break;
        case Rel::Le: sat = v <= 0; break;
        case Rel::Ge: sat = v >= 0; break;
        case Rel::Eq: sat = v == 0; break;
      }
      if (sat) continue;
      if (a.rel == Rel::Lt || a.rel == Rel::Gt) continue;  // boundary stays out
      std::vector<int> avars;
      collect_vars(*a.lhs, avars);
      for (int var : avars) {
        if (lin_degree(*a.lhs, var) != 1) continue;
        FPoint tmp = fp;
        tmp[var] = 0.0;
        double c0, c1;
        try {
          c0 = eval_float(*a.lhs, tmp);
          tmp[var] = 1.0;
          c1 = eval_float(*a.lhs, tmp);
        } catch (const DomainError&) {
          continue;
        }
        double c = c1 - c0;
        if (c == 0 || !std::isfinite(c)) continue;
        double root = -c0 / c;
        if (!std::isfinite(root)) continue;
        if (root < box[var].lo || root > box[var].hi) continue;
        fp[var] = root;
        changed = true;
        break;
      }
    }
    if (!changed) break;
  }
  for (const Formula* g : parts) {
    if (g->kind == FKind::Atom && !has_transcendental(*g->atom.lhs)) {
      double v;
      try {
        v = eval_float(*g->atom.lhs, fp);
      } catch (const DomainError&) {
        return false;
      }
      if (!relaxed_sat(g->atom.rel, v, eq_relax)) return false;
    } else {
      if (!float_true(*g, fp)) return false;
    }
  }
  return true;
}

// Exact replay: snap each violated non-strict atom onto its boundary root in
// a linearly occurring variable. The caller certifies the result, so this
// can only gain models, never admit a bad one.
QPoint repair_exact(const std::vector<const Formula*>& parts, const Box& box,
                    QPoint pt) {
  for (int pass = 0; pass < 3; ++pass) {
    bool changed = false;
    for (const Formula* g : parts) {
      if (g->kind != FKind::Atom) continue;
      const Atom& a = g->atom;
      if (has_transcendental(*a.lhs)) continue;
      if (a.rel == Rel::Lt || a.rel == Rel::Gt) continue;
      if (certify_atom_point(a, pt)) continue;
      std::vector<int> avars;
      collect_vars(*a.lhs, avars);
      for (int var : avars) {
        if (lin_degree(*a.lhs, var) != 1) continue;
        auto root = solve_linear(a, var, pt);
        if (!root || !rat_within(box[var], *root)) continue;
        pt[var] = *root;
        changed = true;
        break;
      }
    }
    if (!changed) break;
  }
  return pt;
}

void push_unique(std::vector<QPoint>& out, const QPoint& p) {
  for (const QPoint& q : out)
    if (q == p) return;
  out.push_back(p);
}

Rel strict_rel(Rel r) {
  if (r == Rel::Le) return Rel::Lt;
  if (r == Rel::Ge) return Rel::Gt;
  return r;
}

// Strict-interior test: non-strict inequalities must hold strictly, exact
// equalities keep their meaning. Boundary models are legal, but they make
// miserable training data, so callers prefer interior ones when they exist.
bool interior_point(const FormulaPtr& f, const QPoint& pt) {
  switch (f->kind) {
    case FKind::Atom: {
      Atom a = f->atom;
      a.rel = strict_rel(a.rel);
      return certify_atom_point(a, pt);
    }
    case FKind::And:
      return interior_point(f->a, pt) && interior_point(f->b, pt);
    case FKind::Or:
      return interior_point(f->a, pt) || interior_point(f->b, pt);
    case FKind::Not:
      return interior_point(to_nnf(f->a, true), pt);
  }
  return false;
}

// Trade a model pinned to an atom boundary for a nearby strict-interior one.
// Plan-solved variables stay functionally determined (the plan re-solves them
// after each trial move), so equality chains survive the perturbation. When
// the region has no interior the original point comes back unchanged.
QPoint interior_nudge(const FormulaPtr& f, const std::vector<PlanStep>& plan,
                      const Box& box, QPoint pt, std::mt19937_64& gen) {
  if (interior_point(f, pt)) return pt;
  std::vector<char> frozen(box.size(), 0);
  for (const PlanStep& s : plan) frozen[s.var] = 1;
  bool movable = false;
  for (char c : frozen)
    if (!c) movable = true;
  if (!movable) return pt;
  auto u11 = [&] { return double(gen() >> 11) * 0x1p-52 - 1.0; };
  for (double r : {1e-2, 1e-3, 1e-4}) {
    for (int t = 0; t < 16; ++t) {
      QPoint q = pt;
      for (size_t i = 0; i < box.size(); ++i) {
        if (frozen[i]) continue;
        double w = box[i].hi - box[i].lo;
        double x = rat_to_double(q[i]) + r * w * u11();
        q[i] = rat_of_double(std::min(std::max(x, box[i].lo), box[i].hi));
      }
      if (!plan.empty() && !apply_plan(plan, box, q)) continue;
      FPoint fp(box.size());
      for (size_t i = 0; i < box.size(); ++i) fp[i] = rat_to_double(q[i]);
      if (!float_true(*f, fp)) continue;
      if (interior_point(f, q)) return q;
    }
  }
  return pt;
}

// Branch-and-prune descent toward satisfiable boxes, certifying (and when
// needed repairing) midpoints along the way. Bounded independently of the
// prove_unsat budget: this is a sampler, not a prover.
void descent_collect(const FormulaPtr& f,
                     const std::vector<const Formula*>& parts,
                     const std::vector<PlanStep>& plan, const Box& box,
                     const SolverConfig& cfg, size_t count,
                     std::vector<QPoint>& out, std::mt19937_64& gen) {
  std::vector<int> used;
  collect_vars(*f, used);
  const size_t budget = std::min<size_t>(cfg.max_boxes, 50000);
  std::vector<Box> stack{box};
  MvCache cache;
  size_t pops = 0;
  while (!stack.empty() && out.size() < count && pops < budget) {
    Box b = std::move(stack.back());
    stack.pop_back();
    ++pops;
    if (certify_box(*f, b, cache) == Tri::False) continue;

    FPoint mf(b.size());
    QPoint mq(b.size());
    for (size_t i = 0; i < b.size(); ++i) {
      mf[i] = mid_of(b[i]);
      mq[i] = rat_of_double(mf[i]);
    }
    if (float_true(*f, mf) && certify_point(f, mq)) {
      push_unique(out, interior_nudge(f, plan, box, mq, gen));
    } else if (repair_gate(parts, box, mf, cfg.eq_relax)) {
      QPoint r = repair_exact(parts, box, mq);
      if (certify_point(f, r))
        push_unique(out, interior_nudge(f, plan, box, r, gen));
    }
    if (out.size() >= count) break;

    int dim = widest_used_dim(b, used, cfg.min_width);
    if (dim < 0) continue;
    double mid = mid_of(b[dim]);
    if (!(mid > b[dim].lo && mid < b[dim].hi)) continue;
    Box up = b;
    up[dim].lo = mid;
    b[dim].hi = mid;
    stack.push_back(std::move(up));
    stack.push_back(std::move(b));
  }
}

}  // namespace

Verdict prove_unsat(const FormulaPtr& f, const Box& box,
                    const SolverConfig& cfg) {
  Verdict out;
  std::vector<int> used;
  collect_vars(*f, used);
  std::vector<Box> stack{box};
  MvCache cache;
  bool residue = false;
  size_t pops = 0;
  while (!stack.empty()) {
    if (pops >= cfg.max_boxes) {
      out.kind = Verdict::Kind::Unknown;
      out.reason = "box budget exhausted";
      out.boxes_used = pops;
      return out;
    }
    Box b = std::move(stack.back());
    stack.pop_back();
    ++pops;
    Tri t = certify_box(*f, b, cache);
    if (t == Tri::False) continue;

    FPoint mf(b.size());
    QPoint mq(b.size());
    for (size_t i = 0; i < b.size(); ++i) {
      mf[i] = mid_of(b[i]);
      mq[i] = rat_of_double(mf[i]);
    }
    // Certainly-true boxes go straight to the exact check; everything else
    // gets a cheap float screen first.
    if ((t == Tri::True || float_true(*f, mf)) && certify_point(f, mq)) {
      out.kind = Verdict::Kind::Refuted;
      out.witness = std::move(mq);
      out.certificate = make_certificate(*f, out.witness);
      out.boxes_used = pops;
      return out;
    }

    int dim = widest_used_dim(b, used, cfg.min_width);
    if (dim < 0) {
      residue = true;
      continue;
    }
    double mid = mid_of(b[dim]);
    if (!(mid > b[dim].lo && mid < b[dim].hi)) {
      residue = true;
      continue;
    }
    Box up = b;
    up[dim].lo = mid;
    b[dim].hi = mid;
    stack.push_back(std::move(up));
    stack.push_back(std::move(b));  // lower half first
  }
  out.boxes_used = pops;
  if (residue) {
    out.kind = Verdict::Kind::Unknown;
    out.reason = "minimum width residue";
  } else {
    out.kind = Verdict::Kind::Proved;
  }
  return out;
}

bool certify_point(const FormulaPtr& f, const QPoint& pt) {
  switch (f->kind) {
    case FKind::Atom: return certify_atom_point(f->atom, pt);
    case FKind::And: return certify_point(f->a, pt) && certify_point(f->b, pt);
    case FKind::Or: return certify_point(f->a, pt) || certify_point(f->b, pt);
    case FKind::Not: return certify_point(to_nnf(f->a, true), pt);
  }
  return false;
}

std::vector<QPoint> find_model(const FormulaPtr& f, const Box& box,
                               size_t count, const SolverConfig& cfg) {
  std::vector<QPoint> out;
  if (count == 0) return out;
  auto parts = conjuncts(*f);
  auto plan = make_plan(parts);

  std::mt19937_64 gen(cfg.seed);
  auto u01 = [&] { return double(gen() >> 11) * 0x1p-53; };
  const size_t n = box.size();
  const size_t trials = std::max<size_t>(2000, 400 * count);
  for (size_t t = 0; t < trials && out.size() < count; ++t) {
    FPoint fp(n);
    QPoint qp(n);
    for (size_t i = 0; i < n; ++i) {
      double lo = box[i].lo, hi = box[i].hi;
      double x = lo + (hi - lo) * u01();
      if (!std::isfinite(x)) x = 0.0;
      fp[i] = x;
      qp[i] = rat_of_double(x);
    }
    if (!plan.empty()) {
      if (!apply_plan(plan, box, qp)) continue;
      for (size_t i = 0; i < n; ++i) fp[i] = rat_to_double(qp[i]);
    }
    if (float_true(*f, fp) && certify_point(f, qp)) {
      push_unique(out, qp);
      continue;
    }
    if (repair_gate(parts, box, fp, cfg.eq_relax)) {
      QPoint r = repair_exact(parts, box, qp);
      if (certify_point(f, r))
        push_unique(out, interior_nudge(f, plan, box, r, gen));
    }
  }
  if (out.size() < count)
    descent_collect(f, parts, plan, box, cfg, count, out, gen);
  return out;
}

namespace {

struct AtomCandidate {
  QPoly p;
  Rel rel;
};

std::optional<AtomCandidate> extract_candidate(const Problem& prob,
                                               const FormulaPtr& I) {
  if (!I || I->kind != FKind::Atom || I->atom.rel == Rel::Eq)
    return std::nullopt;
  try {
    return AtomCandidate{poly_from_expr(*I->atom.lhs, prob.vars.size()),
                         I->atom.rel};
  } catch (const TranscendentalPresent&) {
    return std::nullopt;
  }
}

std::vector<VarRef> var_refs(const Problem& prob) {
  std::vector<VarRef> vs;
  vs.reserve(prob.vars.size());
  for (size_t i = 0; i < prob.vars.size(); ++i)
    vs.push_back({static_cast<int>(i), prob.vars[i]});
  return vs;
}

QPoly shift_const(QPoly p, const Rat& t) {
  Monomial one(p.n, 0u);
  Rat c = p.terms.count(one) ? p.terms[one] + t : t;
  if (c == 0)
    p.terms.erase(one);
  else
    p.terms[one] = c;
  return p;
}

FormulaPtr poly_atom(const QPoly& p, Rel rel, const std::vector<VarRef>& vars) {
  ExprPtr lhs = p.terms.empty() ? e_const(Rat(0)) : poly_to_expr(p, vars);
  return f_atom(Atom{lhs, rel});
}

Rel complement_rel(Rel r) {
  switch (r) {
    case Rel::Lt: return Rel::Ge;
    case Rel::Le: return Rel::Gt;
    case Rel::Gt: return Rel::Le;
    case Rel::Ge: return Rel::Lt;
    case Rel::Eq: return Rel::Eq;  // callers exclude equality candidates
  }
  return Rel::Eq;
}

}  // namespace

FormulaPtr side_one_query(const Problem& prob, const FormulaPtr& I,
                          double delta) {
  FormulaPtr phi = to_nnf(prob.phi, false);
  auto cand = extract_candidate(prob, I);
  if (!cand) return f_and(phi, to_nnf(I, true));
  const bool upper = cand->rel == Rel::Gt || cand->rel == Rel::Ge;
  Rat t = delta > 0 ? Rat(rat_of_double(delta) * max_abs_coeff(cand->p))
                    : Rat(0);
  // Violating the candidate by at least t: the complement relation applied
  // to the polynomial pushed t deeper into the complement's side.
  QPoly q = shift_const(cand->p, upper ? t : Rat(-t));
  return f_and(phi, poly_atom(q, complement_rel(cand->rel), var_refs(prob)));
}

FormulaPtr side_two_query(const Problem& prob, const FormulaPtr& I,
                          double delta) {
  FormulaPtr psi = to_nnf(prob.psi, false);
  auto cand = extract_candidate(prob, I);
  if (!cand) return f_and(to_nnf(I, false), psi);
  auto vars = var_refs(prob);
  if (delta <= 0) {
    // As written: accepted candidates must separate with their own strictness.
    return f_and(poly_atom(cand->p, cand->rel, vars), psi);
  }
  const bool upper = cand->rel == Rel::Gt || cand->rel == Rel::Ge;
  Rat t = rat_of_double(delta) * max_abs_coeff(cand->p);
  QPoly q = shift_const(cand->p, upper ? Rat(-t) : t);
  return f_and(poly_atom(q, upper ? Rel::Ge : Rel::Le, vars), psi);
}

QPoint project_common(const Problem& prob, const QPoint& pt) {
  QPoint out;
  out.reserve(prob.common.size());
  for (int ci : prob.common) out.push_back(pt[ci]);
  return out;
}

CheckResult check_interpolant(const Problem& prob, const FormulaPtr& I,
                              const Box& box, const CheckConfig& cfg) {
  CheckResult res;
  FormulaPtr s1 = side_one_query(prob, I, cfg.delta);
  FormulaPtr s2 = side_two_query(prob, I, cfg.delta);

  Verdict v1 = prove_unsat(s1, box, cfg.solver);
  res.boxes_used += v1.boxes_used;
  if (v1.kind == Verdict::Kind::Refuted) {
    res.kind = CheckResult::Kind::CexPos;
    res.cex = {project_common(prob, v1.witness)};
    return res;
  }
  Verdict v2 = prove_unsat(s2, box, cfg.solver);
  res.boxes_used += v2.boxes_used;
  if (v2.kind == Verdict::Kind::Refuted) {
    res.kind = CheckResult::Kind::CexNeg;
    res.cex = {project_common(prob, v2.witness)};
    return res;
  }
  if (v1.kind == Verdict::Kind::Proved && v2.kind == Verdict::Kind::Proved) {
    res.kind = CheckResult::Kind::Valid;
    return res;
  }
  // A side ran out of budget: a model would still settle it.
  if (v1.kind == Verdict::Kind::Unknown) {
    auto ms = find_model(s1, box, 1, cfg.solver);
    if (!ms.empty()) {
      res.kind = CheckResult::Kind::CexPos;
      res.cex = {project_common(prob, ms[0])};
      return res;
    }
  }
  if (v2.kind == Verdict::Kind::Unknown) {
    auto ms = find_model(s2, box, 1, cfg.solver);
    if (!ms.empty()) {
      res.kind = CheckResult::Kind::CexNeg;
      res.cex = {project_common(prob, ms[0])};
      return res;
    }
  }
  res.kind = CheckResult::Kind::Unknown;
  auto word = [](const Verdict& v) {
    return v.kind == Verdict::Kind::Proved ? std::string("proved")
                                           : "unknown (" + v.reason + ")";
  };
  res.reason = "side one " + word(v1) + ", side two " + word(v2);
  return res;
}

}  // namespace nil
