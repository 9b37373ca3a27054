#include "map2fit/optimizer.hpp"

#include "map2fit/error.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <cmath>
#include <deque>
#include <memory>

namespace map2fit {

namespace {

constexpr double failed_evaluation_penalty = 1e300;

struct Callback {
  const Objective *f;
  std::vector<double> buffer;
  int evaluations = 0;
};

double trampoline(const gsl_vector *x, void *params) {
  auto *cb = static_cast<Callback *>(params);
  for (std::size_t i = 0; i < cb->buffer.size(); ++i)
    cb->buffer[i] = gsl_vector_get(x, i);
  ++cb->evaluations;
  double value;
  try {
    value = (*cb->f)(cb->buffer);
  } catch (const Error &) {
    value = failed_evaluation_penalty;
  }
  return std::isfinite(value) ? value : failed_evaluation_penalty;
}

struct VectorDeleter {
  void operator()(gsl_vector *v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer *m) const {
    gsl_multimin_fminimizer_free(m);
  }
};
using VectorPtr = std::unique_ptr<gsl_vector, VectorDeleter>;
using MinimizerPtr = std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter>;

VectorPtr to_gsl(const std::vector<double> &x) {
  VectorPtr v(gsl_vector_alloc(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    gsl_vector_set(v.get(), i, x[i]);
  return v;
}

struct Pass {
  std::vector<double> x;
  double value;
  int iterations;
  bool converged;
};

Pass run_pass(Callback &cb, const std::vector<double> &start,
              const OptimizerOptions &options, int iteration_budget) {
  const std::size_t dim = start.size();
  gsl_multimin_function fn{&trampoline, dim, &cb};
  MinimizerPtr solver(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim));
  VectorPtr x0 = to_gsl(start);
  VectorPtr steps(gsl_vector_alloc(dim));
  gsl_vector_set_all(steps.get(), options.initial_step);
  gsl_multimin_fminimizer_set(solver.get(), &fn, x0.get(), steps.get());

  const std::size_t window = 20 * dim;
  std::deque<double> history;
  bool converged = false;
  int it = 0;
  while (it < iteration_budget) {
    ++it;
    if (gsl_multimin_fminimizer_iterate(solver.get()) != GSL_SUCCESS)
      break;
    const double size = gsl_multimin_fminimizer_size(solver.get());
    const double best = solver->fval;
    history.push_back(best);
    if (history.size() > window)
      history.pop_front();
    if (size < options.step_tolerance) {
      converged = true;
      break;
    }
    if (history.size() == window &&
        history.front() - best <=
            options.objective_tolerance * std::max(1.0, std::abs(best))) {
      converged = true;
      break;
    }
  }
  std::vector<double> x(dim);
  for (std::size_t i = 0; i < dim; ++i)
    x[i] = gsl_vector_get(solver->x, i);
  return {std::move(x), solver->fval, it, converged};
}

} // namespace

OptimizerResult minimize(const Objective &f, std::vector<double> start,
                         const OptimizerOptions &options) {
  static const bool handler_off = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)handler_off;

  Callback cb{&f, std::vector<double>(start.size())};
  OptimizerResult result;
  result.x = start;
  result.value = trampoline(to_gsl(start).get(), &cb);

  std::vector<double> from = std::move(start);
  for (int pass = 0; pass <= options.restarts; ++pass) {
    const int budget = options.max_iterations - result.iterations;
    if (budget <= 0)
      break;
    Pass p = run_pass(cb, from, options, budget);
    result.iterations += p.iterations;
    const double previous = result.value;
    if (p.value < result.value) {
      result.value = p.value;
      result.x = p.x;
    }
    result.converged = p.converged;
    if (!p.converged)
      break;
    // A restart that gains nothing confirms the minimum.
    if (pass > 0 && previous - result.value <=
                        options.objective_tolerance *
                            std::max(1.0, std::abs(result.value)))
      break;
    from = result.x;
  }
  result.evaluations = cb.evaluations;
  return result;
}

} // namespace map2fit
