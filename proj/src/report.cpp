#include "nil/report.hpp"

#include <sstream>

namespace nil {

namespace {

using nlohmann::json;

std::vector<VarRef> common_refs(const Problem& prob) {
  std::vector<VarRef> r;
  r.reserve(prob.common.size());
  for (int ci : prob.common) r.push_back({ci, prob.vars[ci]});
  return r;
}

std::string orient_string(Orientation o) {
  switch (o) {
    case Orientation::Gt0: return "> 0";
    case Orientation::Lt0: return "< 0";
    case Orientation::Ge0: return ">= 0";
    case Orientation::Le0: return "<= 0";
  }
  return "> 0";
}

json point_json(const QPoint& p) {
  json a = json::array();
  for (const Rat& v : p) a.push_back(rat_to_string(v));
  return a;
}

json box_json(const Problem& prob, const Box& box) {
  json a = json::array();
  for (size_t i = 0; i < box.size() && i < prob.vars.size(); ++i)
    a.push_back({{"var", prob.vars[i]}, {"lo", box[i].lo}, {"hi", box[i].hi}});
  return a;
}

std::string candidate_string(const Problem& prob, const QPoly& p,
                             Orientation o) {
  return print_formula(*poly_to_formula(p, o, common_refs(prob)));
}

}  // namespace

int exit_code(NilStatus s) {
  switch (s) {
    case NilStatus::Interpolant: return 0;
    case NilStatus::NotDisjoint: return 1;
    case NilStatus::NoPolynomialInterpolant: return 2;
    case NilStatus::BudgetExhausted: return 3;
  }
  return 3;
}

std::string outcome_string(NilStatus s) {
  switch (s) {
    case NilStatus::Interpolant: return "interpolant";
    case NilStatus::NotDisjoint: return "not_disjoint";
    case NilStatus::NoPolynomialInterpolant:
      return "no_polynomial_interpolant";
    case NilStatus::BudgetExhausted: return "budget_exhausted";
  }
  return "budget_exhausted";
}

nlohmann::json report_json(const Problem& prob, const std::string& name,
                           const std::string& mode, const NilResult& r,
                           double wall_ms, std::uint64_t seed) {
  json j;
  j["problem"] = name;
  j["mode"] = mode;
  j["outcome"] = outcome_string(r.status);
  j["exit_code"] = exit_code(r.status);
  j["degree"] = r.degree;
  j["iterations"] = r.iterations;
  j["seed"] = seed;
  j["wall_ms"] = wall_ms;
  j["certification_box"] = box_json(prob, r.cert_box);
  j["samples"] = {{"pos", r.pos.size()}, {"neg", r.neg.size()}};
  if (!r.diagnostics.empty()) j["diagnostics"] = r.diagnostics;

  if (r.status == NilStatus::Interpolant && r.interpolant) {
    j["interpolant"] = print_formula(*r.interpolant);
    if (r.poly) j["interpolant_degree"] = poly_degree(*r.poly);
    j["accepted_tol"] = r.accepted_tol;
    j["accepted_delta"] = r.accepted_delta;
  }
  if (r.status == NilStatus::NotDisjoint) {
    json w;
    json pt = json::object();
    for (size_t i = 0; i < r.witness.size() && i < prob.vars.size(); ++i)
      pt[prob.vars[i]] = rat_to_string(r.witness[i]);
    w["point"] = pt;
    json atoms = json::array();
    for (const AtomCert& ac : r.witness_cert)
      atoms.push_back({{"atom", ac.atom}, {"holds", ac.holds}});
    w["atoms"] = atoms;
    j["witness"] = w;
  }
  if (r.status == NilStatus::BudgetExhausted && r.best_candidate)
    j["best_candidate"] =
        candidate_string(prob, *r.best_candidate, r.best_orient);

  json hist = json::array();
  for (const IterationRecord& it : r.history) {
    json h;
    h["iteration"] = it.iteration;
    h["round"] = it.round;
    h["delta"] = it.delta;
    h["n_pos"] = it.n_pos;
    h["n_neg"] = it.n_neg;
    h["sv_count"] = it.sv_count;
    h["margin"] = it.margin;
    h["classifier"] = print_fpoly(it.classifier);
    json rungs = json::array();
    for (const RungRecord& rr : it.rungs)
      rungs.push_back({{"candidate", candidate_string(prob, rr.poly,
                                                      rr.orient)},
                       {"tol", rr.tol},
                       {"verdict", rr.verdict},
                       {"boxes", rr.boxes_used}});
    h["rungs"] = rungs;
    if (it.have_cex_target) {
      json c;
      c["target"] = candidate_string(prob, it.cex_target, it.cex_orient);
      c["orientation"] = orient_string(it.cex_orient);
      c["threshold"] = rat_to_string(it.cex_threshold);
      json cp = json::array(), cn = json::array();
      for (const QPoint& p : it.cex_pos) cp.push_back(point_json(p));
      for (const QPoint& p : it.cex_neg) cn.push_back(point_json(p));
      c["pos"] = cp;
      c["neg"] = cn;
      h["cex"] = c;
    }
    hist.push_back(h);
  }
  j["history"] = hist;
  return j;
}

std::string report_text(const Problem& prob, const std::string& name,
                        const std::string& mode, const NilResult& r,
                        double wall_ms, std::uint64_t seed) {
  std::ostringstream os;
  os << "problem: " << name << "\n";
  os << "mode: " << mode << " (degree " << r.degree << ", seed " << seed
     << ")\n";
  os << "outcome: " << outcome_string(r.status) << "\n";
  switch (r.status) {
    case NilStatus::Interpolant:
      os << "interpolant: " << print_formula(*r.interpolant) << "\n";
      os << "accepted at tol " << r.accepted_tol << ", delta "
         << r.accepted_delta << "\n";
      break;
    case NilStatus::NotDisjoint: {
      os << "witness:";
      for (size_t i = 0; i < r.witness.size() && i < prob.vars.size(); ++i)
        os << " " << prob.vars[i] << " = " << rat_to_string(r.witness[i]);
      os << "\n";
      break;
    }
    case NilStatus::NoPolynomialInterpolant:
      os << "no separating polynomial up to degree " << r.degree << "\n";
      break;
    case NilStatus::BudgetExhausted:
      if (r.best_candidate)
        os << "best candidate: "
           << candidate_string(prob, *r.best_candidate, r.best_orient)
           << "\n";
      break;
  }
  if (!r.diagnostics.empty()) os << "diagnostics: " << r.diagnostics << "\n";
  os << "iterations: " << r.iterations << ", samples: " << r.pos.size()
     << "+/" << r.neg.size() << "-\n";
  os << "box:";
  for (size_t i = 0; i < r.cert_box.size() && i < prob.vars.size(); ++i)
    os << " " << prob.vars[i] << " in [" << r.cert_box[i].lo << ", "
       << r.cert_box[i].hi << "]";
  os << "\n";
  os << "time: " << wall_ms << " ms\n";
  return os.str();
}

}  // namespace nil
