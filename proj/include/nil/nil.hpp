#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nil/rounding.hpp"
#include "nil/svm.hpp"
#include "nil/verify.hpp"

namespace nil {

// A side of the problem admitted no certified sample point within budget.
struct EmptySide : std::runtime_error {
  std::string side;  // "phi" or "psi"
  explicit EmptySide(std::string which)
      : std::runtime_error("no certified model found for " + which),
        side(std::move(which)) {}
};

struct NilConfig {
  size_t init_samples_per_side = 20;
  size_t cex_per_round = 4;       // counterexamples mined per side per round
  size_t max_iterations = 50;     // refinement iterations per run/round
  double delta = 0.0;             // candidate margin, in units of the checked
                                  // polynomial's max |coefficient|
  double box_halfwidth = 10.0;    // default [-B, B] per variable
  PrecisionLadder ladder;
  size_t star_cutoff = 6;         // outer rounds of the widening variant
  std::uint64_t seed = 0;
  SolverConfig solver;
  KernelParams kernel;            // m is overwritten by the problem's degree
};

// One rounded candidate and what the checker said about it.
struct RungRecord {
  QPoly poly;                 // over the common variables, integer coeffs
  Orientation orient = Orientation::Gt0;
  double tol = 0.0;
  std::string verdict;        // "valid" | "cex_pos" | "cex_neg" | "unknown"
  size_t boxes_used = 0;
};

struct IterationRecord {
  size_t iteration = 0;       // 1-based, global across outer rounds
  size_t round = 1;           // outer round (1 unless the widening variant)
  double delta = 0.0;
  size_t n_pos = 0, n_neg = 0;  // training set sizes fed to this training
  size_t sv_count = 0;
  double margin = 0.0;
  FPoly classifier;           // float stage, common-variable space
  std::vector<RungRecord> rungs;  // coarse to fine

  // Counterexample audit trail: the finest checked rung this iteration's
  // counterexamples were mined against, and the exact margin threshold
  // t = delta * max|coeff| they are guaranteed to clear.
  bool have_cex_target = false;
  QPoly cex_target;
  Orientation cex_orient = Orientation::Gt0;
  Rat cex_threshold;
  std::vector<QPoint> cex_pos, cex_neg;  // projected to common variables
};

enum class NilStatus {
  Interpolant,
  NotDisjoint,
  NoPolynomialInterpolant,
  BudgetExhausted,
};

struct NilResult {
  NilStatus status = NilStatus::BudgetExhausted;

  // Interpolant payload.
  FormulaPtr interpolant;               // atom over the common variables
  std::optional<QPoly> poly;            // same candidate, polynomial form
  Orientation orient = Orientation::Gt0;
  double accepted_tol = 0.0;
  double accepted_delta = 0.0;
  Box cert_box;                         // box the certificate holds on

  // NotDisjoint payload.
  QPoint witness;                       // full variable order
  std::vector<AtomCert> witness_cert;

  unsigned degree = 1;                  // kernel degree m of the run
  size_t iterations = 0;                // trainings performed, all rounds
  std::string diagnostics;
  std::optional<QPoly> best_candidate;  // finest checked rung on failure
  Orientation best_orient = Orientation::Gt0;
  std::vector<IterationRecord> history;

  // Final training state, for reporting and plotting.
  std::vector<QPoint> pos, neg;         // exact, common-variable space
  std::vector<FPoint> posf, negf;       // float mirrors (SVM input)
  std::vector<size_t> support;          // indices into pos ++ neg
};

// Full-variable-order box for one run: cfg.box_halfwidth for every variable
// unless the problem carries per-variable overrides (options "box.<v>" for a
// symmetric half-width, "box_lo.<v>"/"box_hi.<v>" for an explicit range).
// scale widens every interval about its center.
Box build_box(const Problem& prob, const NilConfig& cfg, double scale);

// Folds recognized "option k = v;" entries from the problem into cfg
// (init_samples, cex_per_round, max_iters, seed, delta, star_cutoff,
// max_boxes, min_width, box). Returns the value of "mode" if present
// ("core" | "delta" | "star"), else "".
std::string apply_options(const Problem& prob, NilConfig& cfg);

// Up to k certified models of each side, projected onto the common
// variables: uniform sampling first, model search when a side stays under
// max(1, k/4). Throws EmptySide when a side yields nothing at all.
std::pair<std::vector<QPoint>, std::vector<QPoint>> sample_initial(
    const Problem& prob, const Box& box, size_t k, const NilConfig& cfg);

NilResult nil_core(const Problem& prob, const NilConfig& cfg);
NilResult nil_delta(const Problem& prob, double delta, const NilConfig& cfg);
NilResult nil_star(const Problem& prob, double delta0, const NilConfig& cfg);

}  // namespace nil
