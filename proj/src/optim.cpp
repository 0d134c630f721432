#include "lxt/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace lxt {

template <typename Scalar>
void adam_step(std::span<Parameter<Scalar>* const> params, const AdamConfig& config) {
  const Scalar b1 = Scalar(config.beta1);
  const Scalar b2 = Scalar(config.beta2);
  for (Parameter<Scalar>* p : params) {
    if (p->frozen) continue;
    if (p->grad.rows() != p->value.rows() || p->grad.cols() != p->value.cols()) {
      throw std::invalid_argument("adam_step: gradient shape does not match parameter " + p->name);
    }
    ++p->step_count;
    const double t = static_cast<double>(p->step_count);
    const Scalar c1 = Scalar(1.0 - std::pow(config.beta1, t));
    const Scalar c2 = Scalar(1.0 - std::pow(config.beta2, t));
    const Scalar lr = Scalar(config.lr);
    const Scalar eps = Scalar(config.eps);
    p->adam_m.array() = b1 * p->adam_m.array() + (Scalar(1) - b1) * p->grad.array();
    p->adam_v.array() = b2 * p->adam_v.array() + (Scalar(1) - b2) * p->grad.array().square();
    p->value.array() -= lr * (p->adam_m.array() / c1) / ((p->adam_v.array() / c2).sqrt() + eps);
  }
}

double exp_decay_lr(double lr0, double gamma, int epoch) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("exp_decay_lr: gamma must lie in (0, 1]");
  if (epoch < 0) throw std::invalid_argument("exp_decay_lr: negative epoch");
  return lr0 * std::pow(gamma, epoch);
}

template <typename Scalar>
MatrixX<Scalar> uniform_matrix(Index rows, Index cols, double bound, Rng& rng) {
  MatrixX<Scalar> m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = Scalar(rng.uniform(-bound, bound));
  return m;
}

template <typename Scalar>
MatrixX<Scalar> xavier_uniform(Index fan_in, Index fan_out, Rng& rng) {
  if (fan_in < 1 || fan_out < 1) throw std::invalid_argument("xavier_uniform: fans must be >= 1");
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  return uniform_matrix<Scalar>(fan_in, fan_out, bound, rng);
}

template void adam_step<float>(std::span<Parameter<float>* const>, const AdamConfig&);
template void adam_step<double>(std::span<Parameter<double>* const>, const AdamConfig&);
template MatrixX<float> xavier_uniform<float>(Index, Index, Rng&);
template MatrixX<double> xavier_uniform<double>(Index, Index, Rng&);
template MatrixX<float> uniform_matrix<float>(Index, Index, double, Rng&);
template MatrixX<double> uniform_matrix<double>(Index, Index, double, Rng&);

}  // namespace lxt
