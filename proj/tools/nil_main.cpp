#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nil/bench.hpp"
#include "nil/nil.hpp"
#include "nil/parser.hpp"
#include "nil/plot.hpp"
#include "nil/report.hpp"

namespace {

constexpr int kUsageExit = 64;

void emit_error(bool json, const std::string& kind, const std::string& msg,
                int code) {
  if (json) {
    nlohmann::json e{{"error", {{"kind", kind}, {"message", msg}}},
                     {"exit_code", code}};
    std::cout << e.dump(2) << "\n";
  } else {
    std::cerr << kind << ": " << msg << "\n";
  }
}

std::string basename_no_ext(const std::string& path) {
  size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  size_t dot = base.find_last_of('.');
  if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
  return base;
}

std::optional<std::pair<unsigned, unsigned>> parse_sweep(
    const std::string& s) {
  size_t dots = s.find("..");
  if (dots == std::string::npos) return std::nullopt;
  try {
    unsigned lo = (unsigned)std::stoul(s.substr(0, dots));
    unsigned hi = (unsigned)std::stoul(s.substr(dots + 2));
    if (lo < 1 || hi > 64 || lo > hi) return std::nullopt;
    return std::make_pair(lo, hi);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

struct SolveFlags {
  std::string file;
  unsigned degree = 0;  // 0 = keep the file's declaration
  double delta = -1;    // <0 = keep file option / default
  double box = 0;       // 0 = keep
  std::string mode;     // "" = keep
  unsigned max_iters = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool json = false;
  std::string plot_path;
  std::string sweep;
};

int run_solve(const SolveFlags& fl) {
  std::ifstream in(fl.file);
  if (!in) {
    emit_error(fl.json, "io", "cannot read " + fl.file, kUsageExit);
    return kUsageExit;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  nil::Problem prob;
  try {
    prob = nil::parse_problem(buf.str());
  } catch (const std::exception& e) {
    emit_error(fl.json, "parse", e.what(), kUsageExit);
    return kUsageExit;
  }

  nil::NilConfig cfg;
  std::string mode = nil::apply_options(prob, cfg);
  if (mode.empty()) mode = "core";

  // Command line beats file options beats defaults.
  if (!fl.mode.empty()) mode = fl.mode;
  if (fl.degree) prob.degree = fl.degree;
  if (fl.delta >= 0) cfg.delta = fl.delta;
  if (fl.box > 0) cfg.box_halfwidth = fl.box;
  if (fl.max_iters) cfg.max_iterations = fl.max_iters;
  if (fl.seed_given) cfg.seed = fl.seed;
  if (const char* env = std::getenv("NIL_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      emit_error(fl.json, "usage", "NIL_SEED is not a number", kUsageExit);
      return kUsageExit;
    }
  }

  unsigned sweep_lo = prob.degree, sweep_hi = prob.degree;
  if (!fl.sweep.empty()) {
    auto rng = parse_sweep(fl.sweep);
    if (!rng) {
      emit_error(fl.json, "usage", "--sweep-degree expects LO..HI",
                 kUsageExit);
      return kUsageExit;
    }
    sweep_lo = rng->first;
    sweep_hi = rng->second;
  }

  nil::NilResult result;
  double wall_ms = 0;
  try {
    for (unsigned m = sweep_lo; m <= sweep_hi; ++m) {
      prob.degree = m;
      auto t0 = std::chrono::steady_clock::now();
      if (mode == "delta")
        result = nil::nil_delta(prob, cfg.delta, cfg);
      else if (mode == "star")
        result = nil::nil_star(prob, cfg.delta, cfg);
      else
        result = nil::nil_core(prob, cfg);
      wall_ms += std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
      if (result.status == nil::NilStatus::Interpolant ||
          result.status == nil::NilStatus::NotDisjoint)
        break;
    }
  } catch (const nil::EmptySide& e) {
    emit_error(fl.json, "empty_side", e.what(), 3);
    return 3;
  } catch (const std::exception& e) {
    emit_error(fl.json, "runtime", e.what(), 3);
    return 3;
  }

  std::string name = basename_no_ext(fl.file);
  if (fl.json)
    std::cout << nil::report_json(prob, name, mode, result, wall_ms, cfg.seed)
                     .dump(2)
              << "\n";
  else
    std::cout << nil::report_text(prob, name, mode, result, wall_ms,
                                  cfg.seed);

  if (!fl.plot_path.empty()) {
    try {
      nil::write_plot_svg(prob, result, fl.plot_path);
    } catch (const std::exception& e) {
      emit_error(fl.json, "plot", e.what(), kUsageExit);
      return kUsageExit;
    }
  }
  return nil::exit_code(result.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polynomial interpolant synthesis for nonlinear arithmetic"};
  app.require_subcommand(1);

  SolveFlags fl;
  auto* solve = app.add_subcommand("solve", "run on a problem file");
  solve->add_option("file", fl.file, "problem file")->required();
  solve->add_option("--degree", fl.degree, "kernel degree m")
      ->check(CLI::Range(1u, 64u));
  solve->add_option("--delta", fl.delta, "acceptance tolerance")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--box", fl.box, "symmetric box half-width")
      ->check(CLI::PositiveNumber);
  solve->add_option("--mode", fl.mode, "core | delta | star")
      ->check(CLI::IsMember({"core", "delta", "star"}));
  solve->add_option("--max-iters", fl.max_iters, "iteration cap");
  auto* seed_opt = solve->add_option("--seed", fl.seed, "RNG seed");
  solve->add_flag("--json", fl.json, "machine-readable report");
  solve->add_option("--plot", fl.plot_path, "write an SVG of the run");
  solve->add_option("--sweep-degree", fl.sweep,
                    "LO..HI, raise m until an interpolant is found");

  nil::BenchSelection sel;
  bool list_only = false;
  auto* bench = app.add_subcommand("bench", "run the embedded suite");
  bench->add_option("--case", sel.only, "run only the named cases");
  bench->add_flag("--required", sel.required_only, "gating cases only");
  bench->add_flag("--stretch", sel.include_stretch,
                  "include long-running cases");
  bench->add_option("--seed", sel.seed, "RNG seed (default 42)");
  bench->add_flag("--list", list_only, "print case names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageExit;
  }

  if (solve->parsed()) {
    fl.seed_given = seed_opt->count() > 0;
    return run_solve(fl);
  }

  if (list_only) {
    for (const auto& c : nil::bench_cases())
      std::cout << c.name << (c.required ? " (required)" : "")
                << (c.stretch ? " (stretch)" : "") << "\n";
    return 0;
  }
  if (const char* env = std::getenv("NIL_SEED")) {
    try {
      sel.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "usage: NIL_SEED is not a number\n";
      return kUsageExit;
    }
  }
  int failed = nil::run_bench(sel, std::cout);
  return failed == 0 ? 0 : 1;
}
