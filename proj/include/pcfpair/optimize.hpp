#pragma once

#include <functional>
#include <vector>

namespace pcfpair {

struct ScalarMinimum {
  double x = 0.0;
  double f = 0.0;
  int evaluations = 0;
};

/// Golden-section search on [a, b]; assumes f is unimodal there.
ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                                      double tol);

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Nelder–Mead. Stops once (f_worst − f_best) ≤ rel_tol·(|f_best| + tiny) or after max_evals.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, double step, double rel_tol, int max_evals);

}  // namespace pcfpair
