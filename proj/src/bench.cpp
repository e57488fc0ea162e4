#include "nil/bench.hpp"

#include <cctype>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nil/parser.hpp"
#include "nil/report.hpp"

// Designated initializers below skip fields that keep their defaults.
#pragma GCC diagnostic ignored "-Wmissing-field-initializers"

namespace nil {

namespace {

// Literature suite. Sources are complete problem texts; anything a case
// needs beyond the defaults (mode, delta, boxes, sample counts) is declared
// inline so the text is self-contained.
std::vector<BenchCase> make_cases() {
  std::vector<BenchCase> cs;

  cs.push_back({.name = "dummy",
                .source = R"(
vars x;
common x;
phi: x < -1;
psi: x >= 1;
degree: 1;
option init_samples = 400;
)",
                .expect_form = "x < 0",
                .max_degree = 1,
                .required = true,
                .budget_s = 60});

  cs.push_back({.name = "necklace",
                .source = R"(
vars x, y;
common x, y;
phi: y - x^2 - 1 = 0;
psi: y + x^2 + 1 = 0;
degree: 1;
)",
                .max_degree = 1,
                .required = true});

  cs.push_back({.name = "face",
                .source = R"(
vars x, y;
common x, y;
phi: ((x + 4)^2 + y^2 - 1 <= 0) || ((x - 4)^2 + y^2 - 1 <= 0);
psi: (x^2 + y^2 - 64 <= 0) && ((x + 4)^2 + y^2 - 9 >= 0)
     && ((x - 4)^2 + y^2 - 9 >= 0);
degree: 4;
option mode = delta;
option delta = 0.01;
)",
                .max_degree = 4,
                .required = true});

  cs.push_back({.name = "twisted",
                .source = R"(
vars x, y, z, w;
common x, y;
phi: (x^2 - 2*x*y^2 + 3*x*z - y^2 - y*z + z^2 - 1 >= 0)
     && (-x^6 - y^6 + 20*x^4 + 40*x^2*y^2 + 20*y^4 + 120*x^2*z^2
         + 120*y^2*z^2 - 120*x^2 - 120*y^2 - 480 <= 0);
psi: (w^2 + 4*(x - y)^4 + (x + y)^2 - 80 <= 0)
     && (-w^2*(x - y)^4 + 100*(x + y)^2 - 3000 >= 0);
degree: 4;
option mode = delta;
option delta = 0.01;
)",
                .max_degree = 4,
                .stretch = true,
                .budget_s = 600});

  cs.push_back({.name = "ultimate",
                .source = R"(
vars x, y;
common x, y;
phi: (((x^2 + y^2 - 3.8025 <= 0) && (y >= 0))
      || ((x - 1)^2 + y^2 - 0.9025 <= 0))
     && ((x - 1)^2 + y^2 - 0.09 > 0)
     && ((x + 1)^2 + y^2 - 1.1025 >= 0)
     || ((x + 1)^2 + y^2 - 0.04 <= 0);
psi: (((x^2 + y^2 - 3.8025 <= 0) && (-y >= 0))
      || ((-1 - x)^2 + y^2 - 0.9025 <= 0))
     && ((-1 - x)^2 + y^2 - 0.09 > 0)
     && ((1 - x)^2 + y^2 - 1.1025 >= 0)
     || ((1 - x)^2 + y^2 - 0.04 <= 0);
degree: 7;
option mode = delta;
option delta = 0.01;
)",
                .max_degree = 7,
                .stretch = true,
                .budget_s = 600});

  cs.push_back({.name = "ijcar16-1",
                .source = R"(
vars x1, x2, y, z;
common x1, x2;
phi: (-x1^2 + 4*x1 + x2 - 4 >= 0) && (-x1 - x2 + 3 - y^2 > 0);
psi: (-3*x1^2 - x2^2 + 1 >= 0) && (x2 - z^2 >= 0);
degree: 1;
)",
                .max_degree = 1,
                .required = true});

  cs.push_back({.name = "cav13-1",
                .source = R"(
vars a, b, x, y;
common x, y;
phi: (1 - a^2 - b^2 > 0) && (a^2 + b - 1 - x = 0) && (b + b*x + 1 - y = 0);
psi: x^2 - 2*y^2 - 4 > 0;
degree: 2;
)",
                .max_degree = 2,
                .required = true});

  cs.push_back({.name = "cav13-2",
                .source = R"(
vars x, y, z;
common x, y, z;
phi: (x^2 + y^2 + z^2 - 2 >= 0) && (1.2*x^2 + y^2 + x*z = 0);
psi: (20 - 3*x^2 - 4*y^3 - 10*z^2 >= 0) && (x^2 + y^2 - z - 1 = 0);
degree: 4;
option mode = delta;
option delta = 0.01;
)",
                .max_degree = 4,
                .stretch = true,
                .budget_s = 600});

  cs.push_back({.name = "cav13-3",
                .source = R"(
vars vc, fa, fr, ac, vc1;
common vc1;
phi: (vc < 49.61) && (fa = 0.5418*vc^2) && (fr = 1000 - fa)
     && (ac = 0.0005*fr) && (vc1 = vc + ac);
psi: vc1 >= 49.61;
degree: 1;
option box_lo.vc = 40;   option box_hi.vc = 50;
option box_lo.fa = 800;  option box_hi.fa = 1400;
option box_lo.fr = -400; option box_hi.fr = 200;
option box_lo.ac = -1;   option box_hi.ac = 1;
option box_lo.vc1 = 40;  option box_hi.vc1 = 60;
)",
                .max_degree = 1,
                .required = true});

  cs.push_back({.name = "parallel-parabola",
                .source = R"(
vars x, y;
common x, y;
phi: y - x^2 - 1 >= 0;
psi: y - x^2 < 0;
degree: 2;
)",
                .max_degree = 2,
                .required = true});

  cs.push_back({.name = "parallel-halfplane",
                .source = R"(
vars x, y;
common x, y;
phi: y - x - 1 >= 0;
psi: y - x + 1 < 0;
degree: 1;
option mode = delta;
option delta = 0.01;
option init_samples = 400;
)",
                .expect_form = "x < y",
                .max_degree = 1,
                .required = true,
                .budget_s = 60});

  cs.push_back({.name = "sharper-1",
                .source = R"(
vars x, y;
common x, y;
phi: y + 1 < 0;
psi: x^2 + y^2 - 1 <= 0;
degree: 2;
option mode = delta;
option delta = 0.01;
)",
                .max_degree = 2,
                .required = true});

  cs.push_back({.name = "sharper-2",
                .source = R"(
vars x, y;
common x, y;
phi: (y - x > 0) && (x + y > 0);
psi: y + x^2 <= 0;
degree: 1;
option mode = delta;
option delta = 0.01;
)",
                .expect_form = "y > 0",
                .max_degree = 1,
                .required = true,
                .budget_s = 60});

  cs.push_back({.name = "coincident",
                .source = R"(
vars x, y;
common x, y;
phi: (x + y > 0) || (x + y < 0);
psi: x + y = 0;
degree: 2;
option mode = delta;
option delta = 0.01;
)",
                .expect_form = "(x + y)^2 > 0",
                .max_degree = 2,
                .required = true,
                .budget_s = 60});

  cs.push_back({.name = "adjacent",
                .source = R"(
vars x, y;
common x, y;
phi: y - x^2 > 0;
psi: y - x^2 <= 0;
degree: 2;
option mode = delta;
option delta = 0.01;
)",
                .expect_form = "x^2 < y",
                .max_degree = 2,
                .required = true,
                .budget_s = 60});

  cs.push_back({.name = "ijcar16-2",
                .source = R"(
vars x1, x2, y1, y2, z1, z2;
common x1, x2;
phi: (-y1 + x1 - 2 >= 0) && (2*x2 - x1 - 1 > 0)
     && (-y1^2 - x1^2 + 2*x1*y1 - 2*y1 + 2*x1 >= 0)
     && (-y2^2 - y1^2 - x2^2 - 4*y1 + 2*x2 - 4 >= 0);
psi: (-z1 + 2*x2 + 1 >= 0) && (2*x1 - x2 - 1 > 0)
     && (-z1^2 - 4*x2^2 + 4*x2*z1 + 3*z1 - 6*x2 - 2 >= 0)
     && (-z2^2 - x1^2 - x2^2 + 2*x1 + z1 - 2*x2 - 1 >= 0);
degree: 1;
option mode = delta;
option delta = 0.05;
)",
                .expect_form = "x1 < x2",
                .max_degree = 1,
                .required = true,
                .budget_s = 60});

  cs.push_back({.name = "cav13-4",
                .source = R"(
vars xa1, ya1, x1, y1, x, y, xa, ya;
common xa, ya;
phi: (xa1 + 2*ya1 >= 0) && (xa1 + 2*ya1 - x1 = 0)
     && (-2*xa1 + ya1 - y1 = 0) && (x - x1 - 1 = 0)
     && (y = y1 + x) && (xa = x - 2*y) && (ya = 2*x + y);
psi: xa + 2*ya < 0;
degree: 1;
)",
                .max_degree = 1,
                .required = true});

  cs.push_back({.name = "tacas16",
                .source = R"(
vars x, y;
common x, y;
phi: y - x^2 >= 0;
psi: y + cos(x) - 0.8 <= 0;
degree: 2;
option mode = delta;
option delta = 0.05;
)",
                .max_degree = 2,
                .required = true});

  cs.push_back({.name = "transcendental",
                .source = R"(
vars x;
common x;
phi: sin(x) >= 0.6;
psi: sin(x) <= 0.4;
degree: 1;
)",
                .expect_outcome = "no_polynomial_interpolant",
                .sweep_lo = 1,
                .sweep_hi = 4,
                .required = true,
                .budget_s = 120});

  cs.push_back({.name = "unbalanced",
                .source = R"(
vars x;
common x;
phi: (x > 0) || (x < 0);
psi: x = 0;
degree: 2;
option mode = delta;
option delta = 0.01;
)",
                .expect_form = "x^2 > 0",
                .max_degree = 2,
                .required = true,
                .budget_s = 60});

  cs.push_back({.name = "eps-face",
                .source = R"(
vars x, y, e1, e2;
common x, y;
phi: (-0.5 <= e1) && (e1 <= 0.5)
     && (((x + 4)^2 + y^2 - (1 + e1)^2 <= 0)
         || ((x - 4)^2 + y^2 - (1 + e1)^2 <= 0));
psi: (-0.5 <= e2) && (e2 <= 0.5) && (x^2 + y^2 - 64 <= 0)
     && ((x + 4)^2 + y^2 - (3 + e2)^2 >= 0)
     && ((x - 4)^2 + y^2 - (3 + e2)^2 >= 0);
degree: 4;
option mode = delta;
option delta = 0.01;
option box.e1 = 1;
option box.e2 = 1;
)",
                .max_degree = 4,
                .stretch = true,
                .budget_s = 600});

  return cs;
}

Orientation rel_to_orient(Rel r, bool flipped) {
  Orientation o;
  switch (r) {
    case Rel::Gt: o = Orientation::Gt0; break;
    case Rel::Lt: o = Orientation::Lt0; break;
    case Rel::Ge: o = Orientation::Ge0; break;
    case Rel::Le: o = Orientation::Le0; break;
    default: throw std::invalid_argument("equality has no orientation");
  }
  if (!flipped) return o;
  switch (o) {
    case Orientation::Gt0: return Orientation::Lt0;
    case Orientation::Lt0: return Orientation::Gt0;
    case Orientation::Ge0: return Orientation::Le0;
    case Orientation::Le0: return Orientation::Ge0;
  }
  return o;
}

std::vector<std::string> common_names(const Problem& prob) {
  std::vector<std::string> names;
  names.reserve(prob.common.size());
  for (int idx : prob.common) names.push_back(prob.vars[idx]);
  return names;
}

std::string produced_atom(const NilResult& r) {
  if (!r.interpolant) return "";
  return print_formula(*r.interpolant);
}

}  // namespace

const std::vector<BenchCase>& bench_cases() {
  static const std::vector<BenchCase> cs = make_cases();
  return cs;
}

const BenchCase* find_case(const std::string& name) {
  auto lower = [](std::string s) {
    for (char& ch : s) ch = (char)std::tolower((unsigned char)ch);
    return s;
  };
  std::string want = lower(name);
  for (const auto& c : bench_cases())
    if (lower(c.name) == want) return &c;
  return nullptr;
}

bool form_matches(const Problem& prob, const NilResult& r,
                  const std::string& expect) {
  if (expect.empty()) return true;
  if (r.status != NilStatus::Interpolant || !r.poly) return false;
  auto names = common_names(prob);
  FormulaPtr want = parse_formula_text(expect, names);
  if (want->kind != FKind::Atom || want->atom.rel == Rel::Eq) return false;
  Normalized wn = normalize(poly_from_expr(*want->atom.lhs, names.size()));
  Orientation wo = rel_to_orient(want->atom.rel, wn.flipped);
  Normalized gn = normalize(*r.poly);
  Orientation go =
      gn.flipped ? rel_to_orient(orientation_rel(r.orient), true) : r.orient;
  return wn.poly.terms == gn.poly.terms && wo == go;
}

BenchOutcome solve_case(const BenchCase& c, std::uint64_t seed) {
  BenchOutcome out;
  out.prob = parse_problem(c.source);
  out.cfg.seed = seed;
  out.mode = apply_options(out.prob, out.cfg);
  if (out.mode.empty()) out.mode = "core";

  auto t0 = std::chrono::steady_clock::now();
  if (out.mode == "delta")
    out.result = nil_delta(out.prob, out.cfg.delta, out.cfg);
  else if (out.mode == "star")
    out.result = nil_star(out.prob, out.cfg.delta, out.cfg);
  else
    out.result = nil_core(out.prob, out.cfg);
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

BenchRow evaluate_case(const BenchCase& c, std::uint64_t seed) {
  BenchRow row;
  row.name = c.name;
  row.required = c.required;

  unsigned lo = c.sweep_lo ? c.sweep_lo : 0;
  unsigned hi = c.sweep_hi ? c.sweep_hi : 0;
  bool ok = true;
  try {
    if (lo == 0) {
      BenchOutcome o = solve_case(c, seed);
      row.mode = o.mode;
      row.seconds = o.seconds;
      row.outcome = outcome_string(o.result.status);
      row.degree = o.result.poly ? poly_degree(*o.result.poly) : 0;
      ok = row.outcome == c.expect_outcome;
      if (ok && c.expect_outcome == "interpolant") {
        row.detail = produced_atom(o.result);
        if (!form_matches(o.prob, o.result, c.expect_form)) {
          ok = false;
          row.detail += " (expected " + c.expect_form + ")";
        }
        if (c.max_degree && row.degree > c.max_degree) {
          ok = false;
          row.detail += " (degree cap " + std::to_string(c.max_degree) + ")";
        }
        CheckConfig cc;
        cc.solver = o.cfg.solver;
        cc.solver.max_boxes *= 2;
        cc.delta = o.result.accepted_delta;
        CheckResult chk = check_interpolant(o.prob, o.result.interpolant,
                                            o.result.cert_box, cc);
        row.verified = chk.kind == CheckResult::Kind::Valid;
        if (!row.verified) {
          ok = false;
          row.detail += " (recheck: " + chk.reason + ")";
        }
      } else if (!ok) {
        row.detail = o.result.diagnostics.empty()
                         ? "expected " + c.expect_outcome
                         : o.result.diagnostics;
      } else {
        row.detail = o.result.diagnostics;
        row.verified = true;  // nothing to re-check
      }
    } else {
      // Degree sweep: every degree in [lo, hi] must land on expect_outcome.
      Problem base = parse_problem(c.source);
      NilConfig cfg0;
      cfg0.seed = seed;
      std::string mode = apply_options(base, cfg0);
      if (mode.empty()) mode = "core";
      row.mode = mode;
      std::string degs;
      for (unsigned m = lo; m <= hi && ok; ++m) {
        Problem prob = base;
        prob.degree = m;
        NilConfig cfg = cfg0;
        auto t0 = std::chrono::steady_clock::now();
        NilResult r = mode == "delta" ? nil_delta(prob, cfg.delta, cfg)
                      : mode == "star" ? nil_star(prob, cfg.delta, cfg)
                                       : nil_core(prob, cfg);
        row.seconds +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        ok = outcome_string(r.status) == c.expect_outcome;
        if (!degs.empty()) degs += ",";
        degs += std::to_string(m);
        if (!ok) row.outcome = outcome_string(r.status);
      }
      if (ok) {
        row.outcome = c.expect_outcome;
        row.verified = true;
        row.detail = "degrees " + degs;
      } else {
        row.detail = "failed in sweep at degrees " + degs;
      }
    }
  } catch (const std::exception& e) {
    ok = false;
    row.outcome = "error";
    row.detail = e.what();
  }
  row.ok = ok;
  return row;
}

int run_bench(const BenchSelection& sel, std::ostream& out) {
  std::vector<const BenchCase*> picked;
  if (!sel.only.empty()) {
    for (const auto& n : sel.only) {
      const BenchCase* c = find_case(n);
      if (!c) {
        out << "unknown case: " << n << "\n";
        return 1;
      }
      picked.push_back(c);
    }
  } else {
    for (const auto& c : bench_cases()) {
      if (sel.required_only && !c.required) continue;
      if (c.stretch && !sel.include_stretch) continue;
      picked.push_back(&c);
    }
  }

  out << std::left << std::setw(20) << "case" << std::setw(7) << "mode"
      << std::setw(27) << "outcome" << std::setw(5) << "deg" << std::setw(10)
      << "time_s" << std::setw(6) << "ok"
      << "detail\n";
  int failed_required = 0;
  for (const BenchCase* c : picked) {
    BenchRow row = evaluate_case(*c, sel.seed);
    if (!row.ok && row.required) ++failed_required;
    std::ostringstream t;
    t << std::fixed << std::setprecision(2) << row.seconds;
    out << std::left << std::setw(20) << row.name << std::setw(7) << row.mode
        << std::setw(27) << row.outcome << std::setw(5) << row.degree
        << std::setw(10) << t.str() << std::setw(6)
        << (row.ok ? "ok" : "FAIL") << row.detail << "\n";
  }
  out << picked.size() << " cases, " << failed_required
      << " required failures\n";
  return failed_required;
}

}  // namespace nil
