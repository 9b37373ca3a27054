#ifndef MAP2FIT_OPTIMIZER_HPP
#define MAP2FIT_OPTIMIZER_HPP

// Derivative-free local minimization (Nelder-Mead simplex) over an
// unconstrained parameter vector. Constraints are the caller's business:
// the estimators map unconstrained coordinates onto the feasible set.

#include <functional>
#include <span>
#include <vector>

namespace map2fit {

struct OptimizerOptions {
  double step_tolerance = 1e-10;      // simplex size
  double objective_tolerance = 1e-12; // relative stall in the best value
  int max_iterations = 5000;
  double initial_step = 0.5;
  int restarts = 1; // extra runs from the converged point
};

struct OptimizerResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

// Non-finite objective values are replaced by a large finite penalty so a
// failed evaluation reads as "worse than anything feasible".
OptimizerResult minimize(const Objective &f, std::vector<double> start,
                         const OptimizerOptions &options);

} // namespace map2fit

#endif
