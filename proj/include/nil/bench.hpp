#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nil/nil.hpp"

namespace nil {

// One embedded benchmark problem. Per-case knobs (kernel degree, mode,
// delta, sample counts, boxes) live inside `source` as ordinary `degree:`
// and `option` declarations, so `nil solve` on the dumped text reproduces
// the bench run exactly.
struct BenchCase {
  std::string name;
  std::string source;
  std::string expect_form;               // atom the run must produce, "" = any
  std::string expect_outcome = "interpolant";
  unsigned max_degree = 0;               // cap on the accepted poly, 0 = none
  unsigned sweep_lo = 0, sweep_hi = 0;   // rerun per degree in [lo, hi]
  bool required = false;                 // gates `bench --required`
  bool stretch = false;                  // skipped unless asked for
  double budget_s = 300;                 // advisory, reported not enforced
};

const std::vector<BenchCase>& bench_cases();
const BenchCase* find_case(const std::string& name);

// One solver run of a case at its own declared degree.
struct BenchOutcome {
  Problem prob;
  NilConfig cfg;
  std::string mode;   // "core" | "delta" | "star"
  NilResult result;
  double seconds = 0;
};
BenchOutcome solve_case(const BenchCase& c, std::uint64_t seed);

// Expected-form test on the normalized polynomial and orientation, never on
// strings: "x^2 < y" and "-y + x^2 < 0" compare equal.
bool form_matches(const Problem& prob, const NilResult& r,
                  const std::string& expect);

struct BenchRow {
  std::string name;
  std::string mode;
  std::string outcome;
  std::string detail;      // produced atom, or why the case failed
  unsigned degree = 0;
  double seconds = 0;
  bool ok = false;
  bool verified = false;   // fresh re-check at doubled solver budget
  bool required = false;
};

// Full per-case policy: run (sweeping degrees when asked), re-verify any
// accepted candidate from scratch, compare against the expectations.
BenchRow evaluate_case(const BenchCase& c, std::uint64_t seed);

struct BenchSelection {
  std::vector<std::string> only;  // empty = everything the flags admit
  bool required_only = false;
  bool include_stretch = false;
  std::uint64_t seed = 42;
};

// Streams one row per selected case plus a summary line. Returns the number
// of selected required cases that failed.
int run_bench(const BenchSelection& sel, std::ostream& out);

}  // namespace nil
