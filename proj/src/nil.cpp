#include "nil/nil.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nil {

namespace {

// splitmix64 finalizer; decouples every RNG consumer from the master seed.
std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum class Draw : std::uint64_t { Sample = 1, Cex = 2 };

std::uint64_t sub_seed(std::uint64_t seed, Draw purpose, size_t round,
                       size_t iter, size_t side) {
  return mix(seed, mix(static_cast<std::uint64_t>(purpose),
                       mix(round, iter * 2 + side)));
}

std::optional<double> opt_double(const Problem& p, const std::string& key) {
  auto it = p.options.find(key);
  if (it == p.options.end()) return std::nullopt;
  try {
    return std::stod(it->second);
  } catch (...) {
    return std::nullopt;
  }
}

std::optional<std::uint64_t> opt_u64(const Problem& p,
                                     const std::string& key) {
  auto it = p.options.find(key);
  if (it == p.options.end()) return std::nullopt;
  try {
    return std::stoull(it->second);
  } catch (...) {
    return std::nullopt;
  }
}

std::vector<VarRef> common_refs(const Problem& prob) {
  std::vector<VarRef> r;
  r.reserve(prob.common.size());
  for (int ci : prob.common) r.push_back({ci, prob.vars[ci]});
  return r;
}

bool float_true(const Formula& f, const FPoint& pt) {
  try {
    return eval_formula_float(f, pt);
  } catch (const DomainError&) {
    return false;
  }
}

// Exact, conflict-guarded sample pools in the common-variable space with
// float mirrors for training. A point can never sit in both classes: with
// disjoint sides the projections cannot collide, and if disjointness was
// only Unknown we must not hand the trainer a contradiction it cannot win.
struct SampleState {
  std::vector<QPoint> pos, neg;
  std::vector<FPoint> posf, negf;

  bool add(bool positive, const QPoint& q) {
    auto& mine = positive ? pos : neg;
    auto& other = positive ? neg : pos;
    for (const QPoint& e : mine)
      if (e == q) return false;
    for (const QPoint& e : other)
      if (e == q) return false;
    mine.push_back(q);
    FPoint f(q.size());
    for (size_t i = 0; i < q.size(); ++i) f[i] = rat_to_double(q[i]);
    (positive ? posf : negf).push_back(std::move(f));
    return true;
  }
};

size_t sample_side_uniform(const FormulaPtr& side, const Problem& prob,
                           const Box& box, size_t k, std::uint64_t seed,
                           bool positive, SampleState& st) {
  std::mt19937_64 gen(seed);
  auto u01 = [&] { return double(gen() >> 11) * 0x1p-53; };
  const size_t n = box.size();
  const size_t trials = std::max<size_t>(2000, 100 * k);
  size_t added = 0;
  for (size_t t = 0; t < trials; ++t) {
    if ((positive ? st.pos.size() : st.neg.size()) >= k) break;
    FPoint fp(n);
    QPoint qp(n);
    for (size_t i = 0; i < n; ++i) {
      double x = box[i].lo + (box[i].hi - box[i].lo) * u01();
      if (!std::isfinite(x)) x = 0.0;
      fp[i] = x;
      qp[i] = rat_of_double(x);
    }
    if (!float_true(*side, fp)) continue;
    if (!certify_point(side, qp)) continue;
    if (st.add(positive, project_common(prob, qp))) ++added;
  }
  return added;
}

void initial_samples(const Problem& prob, const Box& box,
                     const NilConfig& cfg, size_t round, SampleState& st) {
  const size_t k = std::max<size_t>(1, cfg.init_samples_per_side);
  const FormulaPtr sides[2] = {to_nnf(prob.phi, false),
                               to_nnf(prob.psi, false)};
  for (int s = 0; s < 2; ++s) {
    const bool positive = s == 0;
    sample_side_uniform(sides[s], prob, box, k,
                        sub_seed(cfg.seed, Draw::Sample, round, 0, s),
                        positive, st);
    size_t have = positive ? st.pos.size() : st.neg.size();
    if (have < std::max<size_t>(1, k / 4)) {
      // Sides concentrated on measure-zero sets never show up in uniform
      // draws; the model search solves its way onto them instead.
      SolverConfig ms = cfg.solver;
      ms.seed = sub_seed(cfg.seed, Draw::Sample, round, 1, s);
      for (const QPoint& w : find_model(sides[s], box, k - have, ms))
        st.add(positive, project_common(prob, w));
    }
    if ((positive ? st.pos.size() : st.neg.size()) == 0)
      throw EmptySide(positive ? "phi" : "psi");
  }
}

const char* verdict_str(CheckResult::Kind k) {
  switch (k) {
    case CheckResult::Kind::Valid: return "valid";
    case CheckResult::Kind::CexPos: return "cex_pos";
    case CheckResult::Kind::CexNeg: return "cex_neg";
    case CheckResult::Kind::Unknown: return "unknown";
  }
  return "unknown";
}

struct Engine {
  const Problem& prob;
  NilConfig cfg;  // kernel.m already pinned to prob.degree

  Engine(const Problem& p, const NilConfig& c) : prob(p), cfg(c) {}

  SampleState st;
  std::vector<IterationRecord> history;
  size_t iters_total = 0;
  std::string diag;
  std::optional<QPoly> best;
  Orientation best_orient = Orientation::Gt0;
  std::vector<size_t> last_support;

  void note(const std::string& s) {
    if (!diag.empty()) diag += "; ";
    diag += s;
  }

  void fill_common(NilResult& r, const Box& box) const {
    r.degree = cfg.kernel.m;
    r.iterations = iters_total;
    r.diagnostics = diag;
    r.history = history;
    r.cert_box = box;
    r.pos = st.pos;
    r.neg = st.neg;
    r.posf = st.posf;
    r.negf = st.negf;
    r.support = last_support;
    r.best_candidate = best;
    r.best_orient = best_orient;
  }

  NilResult finish_failure(const Box& box) {
    NilResult r;
    r.status = NilStatus::BudgetExhausted;
    if (diag.empty()) note("iteration budget exhausted");
    fill_common(r, box);
    return r;
  }

  // One delta/box round. Returns a terminal outcome, or nullopt when the
  // round's iteration budget ran out (the widening variant then continues).
  std::optional<NilResult> run_round(size_t round, double delta,
                                     const Box& box) {
    {
      FormulaPtr both = f_and(to_nnf(prob.phi, false), to_nnf(prob.psi, false));
      Verdict v = prove_unsat(both, box, cfg.solver);
      if (v.kind == Verdict::Kind::Refuted) {
        NilResult r;
        r.status = NilStatus::NotDisjoint;
        r.witness = v.witness;
        r.witness_cert = v.certificate;
        fill_common(r, box);
        return r;
      }
      if (v.kind == Verdict::Kind::Unknown)
        note("disjointness not certified (" + v.reason +
             "); proceeding on samples");
    }

    if (round == 1) initial_samples(prob, box, cfg, round, st);
    const auto crefs = common_refs(prob);

    for (size_t it = 0; it < cfg.max_iterations; ++it) {
      IterationRecord rec;
      rec.iteration = ++iters_total;
      rec.round = round;
      rec.delta = delta;
      rec.n_pos = st.pos.size();
      rec.n_neg = st.neg.size();

      TrainingSet ts;
      ts.pos = st.posf;
      ts.neg = st.negf;
      ts.weight_pos = double(std::max<size_t>(1, st.neg.size()));
      ts.weight_neg = double(std::max<size_t>(1, st.pos.size()));
      SvmConfig scfg;
      // an optimizer that quits early here would report inseparability, which
      // aborts the whole search; buy headroom well past the type default
      scfg.max_passes = 5000 * (ts.pos.size() + ts.neg.size());
      auto sol = train(ts, cfg.kernel, scfg);
      if (!sol) {
        history.push_back(std::move(rec));
        NilResult r;
        r.status = NilStatus::NoPolynomialInterpolant;
        note("training cannot separate the samples at this degree");
        fill_common(r, box);
        return r;
      }
      rec.sv_count = sol->support.size();
      rec.margin = sol->margin;
      last_support = sol->support;

      std::vector<std::vector<double>> svs;
      std::vector<double> alphas, labels;
      const size_t npos = st.posf.size();
      for (size_t idx : sol->support) {
        svs.push_back(idx < npos ? st.posf[idx] : st.negf[idx - npos]);
        alphas.push_back(sol->alphas[idx]);
        labels.push_back(idx < npos ? 1.0 : -1.0);
      }
      FPoly raw = expand_classifier(svs, alphas, labels, sol->b, cfg.kernel);
      rec.classifier = raw;

      auto rungs = round_ladder(raw, cfg.ladder);
      if (rungs.empty()) {
        note("rounding produced no candidates");
        history.push_back(std::move(rec));
        return finish_failure(box);
      }

      CheckResult finest_cr;
      for (size_t ri = 0; ri < rungs.size(); ++ri) {
        const LadderRung& rung = rungs[ri];
        Orientation o =
            rung.flipped ? Orientation::Lt0 : Orientation::Gt0;
        FormulaPtr I = poly_to_formula(rung.poly, o, crefs);
        CheckConfig cc{cfg.solver, delta};
        CheckResult cr = check_interpolant(prob, I, box, cc);
        rec.rungs.push_back(
            {rung.poly, o, rung.tol, verdict_str(cr.kind), cr.boxes_used});
        if (ri + 1 == rungs.size()) finest_cr = cr;
        if (cr.kind != CheckResult::Kind::Valid) continue;

        // Accepted candidates must survive an independent, better-funded
        // re-check before being returned.
        CheckConfig cc2 = cc;
        cc2.solver.max_boxes *= 2;
        CheckResult cr2 = check_interpolant(prob, I, box, cc2);
        if (cr2.kind != CheckResult::Kind::Valid) {
          rec.rungs.back().verdict = "revoked";
          note("re-verification did not confirm a candidate");
          continue;
        }
        history.push_back(std::move(rec));
        NilResult r;
        r.status = NilStatus::Interpolant;
        r.interpolant = I;
        r.poly = rung.poly;
        r.orient = o;
        r.accepted_tol = rung.tol;
        r.accepted_delta = delta;
        fill_common(r, box);
        return r;
      }

      // No rung passed: refine against the finest candidate actually
      // checked, so every added point is genuinely misclassified by it.
      const LadderRung& fin = rungs.back();
      Orientation fo = fin.flipped ? Orientation::Lt0 : Orientation::Gt0;
      FormulaPtr FI = poly_to_formula(fin.poly, fo, crefs);
      best = fin.poly;
      best_orient = fo;
      rec.have_cex_target = true;
      rec.cex_target = fin.poly;
      rec.cex_orient = fo;
      rec.cex_threshold =
          delta > 0 ? Rat(rat_of_double(delta) * max_abs_coeff(fin.poly))
                    : Rat(0);

      size_t added = 0;
      auto take = [&](bool positive, const QPoint& c) {
        if (!st.add(positive, c)) return;
        (positive ? rec.cex_pos : rec.cex_neg).push_back(c);
        ++added;
      };
      if (finest_cr.kind == CheckResult::Kind::CexPos)
        for (const QPoint& c : finest_cr.cex) take(true, c);
      if (finest_cr.kind == CheckResult::Kind::CexNeg)
        for (const QPoint& c : finest_cr.cex) take(false, c);

      SolverConfig ms = cfg.solver;
      ms.seed = sub_seed(cfg.seed, Draw::Cex, round, rec.iteration, 0);
      for (const QPoint& w :
           find_model(side_one_query(prob, FI, delta), box,
                      cfg.cex_per_round, ms))
        take(true, project_common(prob, w));
      ms.seed = sub_seed(cfg.seed, Draw::Cex, round, rec.iteration, 1);
      for (const QPoint& w :
           find_model(side_two_query(prob, FI, delta), box,
                      cfg.cex_per_round, ms))
        take(false, project_common(prob, w));

      history.push_back(std::move(rec));
      if (added == 0) {
        note("no fresh counterexamples against the finest candidate");
        return std::nullopt;
      }
    }
    return std::nullopt;
  }
};

}  // namespace

Box build_box(const Problem& prob, const NilConfig& cfg, double scale) {
  Box box(prob.vars.size());
  for (size_t i = 0; i < prob.vars.size(); ++i) {
    const std::string& name = prob.vars[i];
    double lo = -cfg.box_halfwidth, hi = cfg.box_halfwidth;
    if (auto hw = opt_double(prob, "box." + name)) {
      lo = -*hw;
      hi = *hw;
    }
    auto olo = opt_double(prob, "box_lo." + name);
    auto ohi = opt_double(prob, "box_hi." + name);
    if (olo && ohi) {
      lo = *olo;
      hi = *ohi;
    }
    double c = 0.5 * (lo + hi);
    double h = 0.5 * (hi - lo) * scale;
    box[i] = {c - h, c + h};
  }
  return box;
}

std::string apply_options(const Problem& prob, NilConfig& cfg) {
  if (auto v = opt_u64(prob, "init_samples")) cfg.init_samples_per_side = *v;
  if (auto v = opt_u64(prob, "cex_per_round")) cfg.cex_per_round = *v;
  if (auto v = opt_u64(prob, "max_iters")) cfg.max_iterations = *v;
  if (auto v = opt_u64(prob, "star_cutoff")) cfg.star_cutoff = *v;
  if (auto v = opt_u64(prob, "seed")) cfg.seed = *v;
  if (auto v = opt_u64(prob, "max_boxes")) cfg.solver.max_boxes = *v;
  if (auto v = opt_double(prob, "delta")) cfg.delta = *v;
  if (auto v = opt_double(prob, "box")) cfg.box_halfwidth = *v;
  if (auto v = opt_double(prob, "min_width")) cfg.solver.min_width = *v;
  auto it = prob.options.find("mode");
  return it == prob.options.end() ? "" : it->second;
}

std::pair<std::vector<QPoint>, std::vector<QPoint>> sample_initial(
    const Problem& prob, const Box& box, size_t k, const NilConfig& cfg) {
  NilConfig c = cfg;
  c.init_samples_per_side = k;
  SampleState st;
  initial_samples(prob, box, c, 1, st);
  return {st.pos, st.neg};
}

NilResult nil_core(const Problem& prob, const NilConfig& cfg0) {
  NilConfig cfg = cfg0;
  cfg.kernel.m = prob.degree;
  Engine eng{prob, cfg};
  Box box = build_box(prob, cfg, 1.0);
  if (auto r = eng.run_round(1, cfg.delta, box)) return *r;
  return eng.finish_failure(box);
}

NilResult nil_delta(const Problem& prob, double delta, const NilConfig& cfg0) {
  NilConfig cfg = cfg0;
  cfg.delta = delta;
  return nil_core(prob, cfg);
}

NilResult nil_star(const Problem& prob, double delta0, const NilConfig& cfg0) {
  NilConfig cfg = cfg0;
  cfg.kernel.m = prob.degree;
  Engine eng{prob, cfg};
  double delta = delta0;
  double scale = 1.0;
  Box box = build_box(prob, cfg, 1.0);
  for (size_t round = 1; round <= std::max<size_t>(1, cfg.star_cutoff);
       ++round) {
    box = build_box(prob, cfg, scale);
    if (auto r = eng.run_round(round, delta, box)) return *r;
    delta *= 0.5;
    scale *= 2.0;
  }
  return eng.finish_failure(box);
}

}  // namespace nil
