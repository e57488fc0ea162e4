#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nil/interval.hpp"
#include "nil/poly.hpp"

namespace nil {

struct SolverConfig {
  double min_width = 1e-4;      // boxes narrower than this in every used dim
                                // become residue instead of splitting further
  size_t max_boxes = 2000000;   // pop budget for one prove_unsat call
  double eq_relax = 1e-9;       // |e| <= eq_relax stands in for e = 0 while
                                // searching; final certification is exact
  std::uint64_t seed = 0;
  bool deterministic = true;    // kept for reporting; the search itself never
                                // consults wall clock or address order
};

// Sign of one atom at the witness, certified the same way the witness was.
struct AtomCert {
  std::string atom;
  bool holds;
};

struct Verdict {
  enum class Kind { Proved, Refuted, Unknown };
  Kind kind = Kind::Unknown;
  QPoint witness;                   // Refuted: rational model, full var order
  std::vector<AtomCert> certificate;  // Refuted: every atom of the formula
  std::string reason;               // Unknown: what ran out
  size_t boxes_used = 0;
};

// Sound unsatisfiability search for f over box by branch-and-prune. Proved
// means no point of box satisfies f; Refuted carries an exactly certified
// model. Interval enclosures only ever discard boxes where f is certainly
// false, so Proved is trustworthy at any budget.
Verdict prove_unsat(const FormulaPtr& f, const Box& box,
                    const SolverConfig& cfg);

// Exact check: every comparison decided by rational arithmetic, except that
// transcendental inequalities go through a degenerate interval (certainly
// true required) and transcendental equalities are rejected outright.
bool certify_point(const FormulaPtr& f, const QPoint& pt);

// Up to count pairwise distinct certified models of f inside box. Attempts,
// in order: solving linearly occurring equality chains with the remaining
// coordinates sampled uniformly, plain uniform sampling, snapping violated
// non-strict atoms onto their boundary, and harvesting midpoints from a
// bounded branch-and-prune descent. May return fewer than count.
std::vector<QPoint> find_model(const FormulaPtr& f, const Box& box,
                               size_t count, const SolverConfig& cfg);

struct CheckConfig {
  SolverConfig solver;
  double delta = 0.0;  // candidate margin, relative to max |coefficient|
};

struct CheckResult {
  enum class Kind { Valid, CexPos, CexNeg, Unknown };
  Kind kind = Kind::Unknown;
  std::vector<QPoint> cex;  // projected onto the common variables
  std::string reason;
  size_t boxes_used = 0;    // sum over both side queries
};

// Both entailment sides for candidate I, each as an unsatisfiability query
// over box (full problem variable order; dimensions a side never mentions
// are free and cost nothing). With delta > 0 the sides are shifted apart by
// t = delta * max|coeff| so the certificate has slack on both flanks; with
// delta = 0 side one takes the literal complement of I and side two keeps I
// strict. When a side cannot be proved empty, a model search runs before
// giving up, so Unknown means neither certificate nor counterexample.
CheckResult check_interpolant(const Problem& prob, const FormulaPtr& I,
                              const Box& box, const CheckConfig& cfg);

// The two side queries check_interpolant decides, exposed so the refinement
// loop can mine additional counterexamples from exactly the same formulas.
// Null candidate parts fall back to the literal complement construction.
FormulaPtr side_one_query(const Problem& prob, const FormulaPtr& I,
                          double delta);
FormulaPtr side_two_query(const Problem& prob, const FormulaPtr& I,
                          double delta);

// pt indexed by prob.vars; result indexed by prob.common.
QPoint project_common(const Problem& prob, const QPoint& pt);

}  // namespace nil
