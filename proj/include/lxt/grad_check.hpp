#ifndef LXT_GRAD_CHECK_HPP_
#define LXT_GRAD_CHECK_HPP_

#include "lxt/autodiff.hpp"

#include <functional>
#include <span>
#include <string>

namespace lxt {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::string worst_param;
  Index worst_index = -1;
  double analytic_at_worst = 0.0;
  double numeric_at_worst = 0.0;
};

/// Compares the tape gradient of a scalar function against central differences.
///
/// `f` must build its graph on the given tape, reading every input through
/// tape.parameter(), and return a 1x1 value. It is re-evaluated on a fresh tape
/// for every perturbation, so it has to be deterministic (reseed any Rng inside).
/// Relative error per element is |a - n| / max(|a|, |n|, 1e-8).
template <typename Scalar>
GradCheckResult grad_check(const std::function<Var<Scalar>(Tape<Scalar>&)>& f,
                           std::span<Parameter<Scalar>* const> inputs, double eps = 1e-4);

}  // namespace lxt

#endif  // LXT_GRAD_CHECK_HPP_
