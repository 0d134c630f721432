#ifndef LXT_OPTIM_HPP_
#define LXT_OPTIM_HPP_

#include "lxt/autodiff.hpp"
#include "lxt/rng.hpp"

#include <span>

namespace lxt {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One bias-corrected Adam update on every non-frozen parameter. Frozen
/// parameters keep value, moments and step count bit-unchanged.
template <typename Scalar>
void adam_step(std::span<Parameter<Scalar>* const> params, const AdamConfig& config);

/// lr0 * gamma^epoch; gamma must lie in (0, 1].
double exp_decay_lr(double lr0, double gamma, int epoch);

/// fan_in x fan_out matrix, i.i.d. uniform on +-sqrt(6 / (fan_in + fan_out)).
template <typename Scalar>
MatrixX<Scalar> xavier_uniform(Index fan_in, Index fan_out, Rng& rng);

/// rows x cols matrix, i.i.d. uniform on [-bound, bound).
template <typename Scalar>
MatrixX<Scalar> uniform_matrix(Index rows, Index cols, double bound, Rng& rng);

}  // namespace lxt

#endif  // LXT_OPTIM_HPP_
