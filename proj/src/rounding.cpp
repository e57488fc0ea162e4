#include "nil/rounding.hpp"

#include <cmath>
#include <cstdlib>

namespace nil {

Rat recover_rational(double f, double tol) {
  if (!std::isfinite(f)) return Rat(0);
  Rat target = rat_of_double(f);
  Rat atol = rat_of_double(std::abs(tol));
  bool negative = target < 0;
  if (negative) target = -target;

  // convergents h/k of the continued fraction of target;
  // recurrence h_n = a_n*h_{n-1} + h_{n-2}, seeded so the first step is a0/1
  mpz_class num = target.get_num(), den = target.get_den();
  mpz_class hp = 0, kp = 1;
  mpz_class hc = 1, kc = 0;
  while (true) {
    mpz_class a = num / den;
    mpz_class hn = a * hc + hp;
    mpz_class kn = a * kc + kp;
    Rat conv(hn, kn);
    conv.canonicalize();
    Rat diff = conv - target;
    if (diff < 0) diff = -diff;
    if (diff <= atol) {
      if (negative) conv = -conv;
      return conv;
    }
    mpz_class rem = num - a * den;
    if (rem == 0) {
      // exact expansion ended without meeting tol: the value itself is closest
      if (negative) conv = -conv;
      return conv;
    }
    num = den;
    den = rem;
    hp = hc;
    kp = kc;
    hc = hn;
    kc = kn;
  }
}

std::vector<LadderRung> round_ladder(const FPoly& p, const PrecisionLadder& ladder) {
  std::vector<LadderRung> out;
  double top = max_abs_coeff(p);
  if (!(top > 0.0) || !std::isfinite(top)) return out;
  const mpz_class den_cap(1000000);

  for (double tol : ladder.tols) {
    QPoly q;
    q.n = p.n;
    bool skip = false;
    for (const auto& [mono, c] : p.terms) {
      Rat r = recover_rational(c / top, tol);
      if (r == 0) continue;
      if (r.get_den() > den_cap) {
        skip = true;
        break;
      }
      q.terms.emplace(mono, r);
    }
    if (skip || q.terms.empty()) continue;
    Normalized norm = normalize(q);  // cannot be zero: zero coefficients were dropped
    if (!out.empty() && out.back().poly == norm.poly && out.back().flipped == norm.flipped)
      continue;
    out.push_back(LadderRung{std::move(norm.poly), tol, norm.flipped});
  }
  return out;
}

}  // namespace nil
