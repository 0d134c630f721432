#include "lxt/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace lxt {

template <typename Scalar>
GradCheckResult grad_check(const std::function<Var<Scalar>(Tape<Scalar>&)>& f,
                           std::span<Parameter<Scalar>* const> inputs, double eps) {
  for (auto* p : inputs) {
    if (p->frozen) throw std::invalid_argument("grad_check: input " + p->name + " is frozen");
    p->grad = MatrixX<Scalar>::Zero(p->value.rows(), p->value.cols());
  }
  std::vector<MatrixX<Scalar>> analytic;
  {
    Tape<Scalar> tape;
    Var<Scalar> out = f(tape);
    tape.backward(out);
    for (auto* p : inputs) analytic.push_back(p->grad);
  }

  auto evaluate = [&f]() {
    Tape<Scalar> tape;
    return static_cast<double>(f(tape).value()(0, 0));
  };

  GradCheckResult result;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    auto* p = inputs[k];
    for (Index i = 0; i < p->value.size(); ++i) {
      Scalar& x = p->value.data()[i];
      const Scalar saved = x;
      x = Scalar(static_cast<double>(saved) + eps);
      const double up = evaluate();
      x = Scalar(static_cast<double>(saved) - eps);
      const double down = evaluate();
      x = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double a = static_cast<double>(analytic[k].data()[i]);
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
      ++result.checked;
      if (result.worst_index < 0 || rel > result.max_rel_error) {
        result.max_rel_error = rel;
        result.worst_param = p->name;
        result.worst_index = i;
        result.analytic_at_worst = a;
        result.numeric_at_worst = numeric;
      }
    }
  }
  return result;
}

template GradCheckResult grad_check<float>(const std::function<Var<float>(Tape<float>&)>&,
                                           std::span<Parameter<float>* const>, double);
template GradCheckResult grad_check<double>(const std::function<Var<double>(Tape<double>&)>&,
                                            std::span<Parameter<double>* const>, double);

}  // namespace lxt
