#pragma once

#include <vector>

#include "nil/poly.hpp"

namespace nil {

// Best small-denominator rational within tol of f, found by walking the
// continued-fraction convergents of f's exact dyadic value. The first
// convergent inside the tolerance wins, so denominators never grow past
// what the tolerance requires.
Rat recover_rational(double f, double tol);

// Coarse-to-fine tolerances tried per rounding pass.
struct PrecisionLadder {
  std::vector<double> tols{1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-9};
};

struct LadderRung {
  QPoly poly;    // normalized: integer coprime coefficients, positive leading
  double tol;    // tolerance that produced this rung
  bool flipped;  // normalization negated the coefficients
};

// Round a float polynomial at every ladder tolerance, coarsest first.
// Coefficients are scaled by 1/max|coeff| before recovery so the tolerance
// is relative to the largest term. Rungs whose recovered denominators blow
// past 10^6, and rungs that round to the zero polynomial, are skipped;
// consecutive duplicates are merged.
std::vector<LadderRung> round_ladder(const FPoly& p, const PrecisionLadder& ladder);

}  // namespace nil
