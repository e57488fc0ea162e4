#pragma once

#include <vector>

#include "nil/expr.hpp"

namespace nil {

// Closed interval with outward-rounded float endpoints. +-inf encode
// unbounded sides; endpoints are never NaN.
struct Interval {
  double lo, hi;
};

// One interval per variable index of the formula under analysis.
using Box = std::vector<Interval>;

double next_up(double x, int steps = 1);
double next_down(double x, int steps = 1);

Interval iv_point(double x);
Interval iv_of_rat(const Rat& q);  // tight when q is exactly a double
Interval iv_add(Interval a, Interval b);
Interval iv_sub(Interval a, Interval b);
Interval iv_neg(Interval a);
Interval iv_mul(Interval a, Interval b);
Interval iv_pow(Interval a, unsigned k);  // even/odd sign rule
Interval iv_sin(Interval a);
Interval iv_cos(Interval a);
Interval iv_exp(Interval a);
// lo <= 0 < hi clips to the valid domain and sets *clipped.
Interval iv_log(Interval a, bool* clipped);

struct IntervalEvalFlags {
  // Some subterm's domain was clipped: the enclosure covers only the points
  // where the expression is defined, so "certainly true" conclusions are off
  // the table (points outside the domain satisfy nothing).
  bool clipped = false;
};

// Sound enclosure of e over box. Throws DomainError when a Log argument is
// certainly non-positive over the whole box.
Interval eval_interval(const Expr& e, const Box& box,
                       IntervalEvalFlags* flags = nullptr);

}  // namespace nil
