#include "nil/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nil {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// libm sin/cos/exp/log on this platform are within a couple of ulp of
// correctly rounded; four outward steps gives comfortable slack.
constexpr int kLibmSlack = 4;
}  // namespace

double next_up(double x, int steps) {
  for (int i = 0; i < steps; ++i) x = std::nextafter(x, kInf);
  return x;
}
double next_down(double x, int steps) {
  for (int i = 0; i < steps; ++i) x = std::nextafter(x, -kInf);
  return x;
}

Interval iv_point(double x) { return {x, x}; }

Interval iv_of_rat(const Rat& q) {
  double d = rat_to_double(q);
  if (std::isfinite(d) && Rat(d) == q) return {d, d};
  return {next_down(d), next_up(d)};
}

Interval iv_add(Interval a, Interval b) {
  return {next_down(a.lo + b.lo), next_up(a.hi + b.hi)};
}
Interval iv_sub(Interval a, Interval b) {
  return {next_down(a.lo - b.hi), next_up(a.hi - b.lo)};
}
Interval iv_neg(Interval a) { return {-a.hi, -a.lo}; }

namespace {
// Endpoint product with the extended-real convention 0 * inf = 0 (interval
// endpoints stand for arbitrarily large reals, never actual infinities).
double ep_mul(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}
}  // namespace

Interval iv_mul(Interval a, Interval b) {
  double p1 = ep_mul(a.lo, b.lo), p2 = ep_mul(a.lo, b.hi);
  double p3 = ep_mul(a.hi, b.lo), p4 = ep_mul(a.hi, b.hi);
  double lo = std::min(std::min(p1, p2), std::min(p3, p4));
  double hi = std::max(std::max(p1, p2), std::max(p3, p4));
  return {next_down(lo), next_up(hi)};
}

namespace {
double ipow_d(double x, unsigned k) {
  double r = 1.0;
  while (k) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}
}  // namespace

Interval iv_pow(Interval a, unsigned k) {
  int slack = (int)k + 1;  // covers accumulated multiplication rounding
  if (k % 2 == 1) {
    return {next_down(ipow_d(a.lo, k), slack), next_up(ipow_d(a.hi, k), slack)};
  }
  double alo = std::abs(a.lo), ahi = std::abs(a.hi);
  double big = std::max(alo, ahi);
  if (a.lo >= 0.0)
    return {std::max(0.0, next_down(ipow_d(a.lo, k), slack)),
            next_up(ipow_d(a.hi, k), slack)};
  if (a.hi <= 0.0)
    return {std::max(0.0, next_down(ipow_d(ahi, k), slack)),
            next_up(ipow_d(alo, k), slack)};
  return {0.0, next_up(ipow_d(big, k), slack)};
}

namespace {
// Shared scan for sin/cos: extrema of cos sit at k*pi, of sin at (k+1/2)*pi.
// half=false scans integer multiples, half=true the shifted ones. Extrema
// membership is tested with slack so uncertainty only widens the result.
Interval trig_range(Interval a, bool is_sin) {
  if (!(std::isfinite(a.lo) && std::isfinite(a.hi)) || a.hi - a.lo >= 6.9)
    return {-1.0, 1.0};
  double fa = is_sin ? std::sin(a.lo) : std::cos(a.lo);
  double fb = is_sin ? std::sin(a.hi) : std::cos(a.hi);
  double lo = std::min(fa, fb), hi = std::max(fa, fb);
  lo = next_down(lo, kLibmSlack);
  hi = next_up(hi, kLibmSlack);
  const double pi = 3.14159265358979323846;
  double shift = is_sin ? 0.5 : 0.0;
  long long kmin = (long long)std::floor(a.lo / pi - shift) - 1;
  long long kmax = (long long)std::ceil(a.hi / pi - shift) + 1;
  for (long long k = kmin; k <= kmax; ++k) {
    double x = ((double)k + shift) * pi;
    double slack = 4e-9 * (std::abs(x) + 1.0);
    if (x < a.lo - slack || x > a.hi + slack) continue;
    // cos(k*pi) = (-1)^k; sin((k+1/2)*pi) = (-1)^k
    bool even = (k % 2) == 0;
    if (even)
      hi = 1.0;
    else
      lo = -1.0;
  }
  return {std::max(lo, -1.0), std::min(hi, 1.0)};
}
}  // namespace

Interval iv_sin(Interval a) { return trig_range(a, true); }
Interval iv_cos(Interval a) { return trig_range(a, false); }

Interval iv_exp(Interval a) {
  double lo = a.lo == -kInf ? 0.0 : std::max(0.0, next_down(std::exp(a.lo), kLibmSlack));
  double hi = a.hi == kInf ? kInf : next_up(std::exp(a.hi), kLibmSlack);
  return {lo, hi};
}

Interval iv_log(Interval a, bool* clipped) {
  if (a.hi <= 0.0) throw DomainError("log argument is non-positive");
  double hi = a.hi == kInf ? kInf : next_up(std::log(a.hi), kLibmSlack);
  if (a.lo <= 0.0) {
    if (clipped) *clipped = true;
    return {-kInf, hi};
  }
  double lo = next_down(std::log(a.lo), kLibmSlack);
  return {lo, hi};
}

Interval eval_interval(const Expr& e, const Box& box, IntervalEvalFlags* flags) {
  switch (e.kind) {
    case ExprKind::Const: return iv_of_rat(e.value);
    case ExprKind::Var: return box[(size_t)e.var];
    case ExprKind::Add:
      return iv_add(eval_interval(*e.a, box, flags), eval_interval(*e.b, box, flags));
    case ExprKind::Sub:
      return iv_sub(eval_interval(*e.a, box, flags), eval_interval(*e.b, box, flags));
    case ExprKind::Mul:
      return iv_mul(eval_interval(*e.a, box, flags), eval_interval(*e.b, box, flags));
    case ExprKind::Neg: return iv_neg(eval_interval(*e.a, box, flags));
    case ExprKind::Pow: return iv_pow(eval_interval(*e.a, box, flags), e.exponent);
    case ExprKind::Sin: return iv_sin(eval_interval(*e.a, box, flags));
    case ExprKind::Cos: return iv_cos(eval_interval(*e.a, box, flags));
    case ExprKind::Exp: return iv_exp(eval_interval(*e.a, box, flags));
    case ExprKind::Log: {
      bool clipped = false;
      Interval r = iv_log(eval_interval(*e.a, box, flags), &clipped);
      if (clipped && flags) flags->clipped = true;
      return r;
    }
  }
  return {0.0, 0.0};
}

}  // namespace nil
