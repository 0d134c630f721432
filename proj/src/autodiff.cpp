#include "lxt/autodiff.hpp"

#include <stdexcept>

namespace lxt {

template <typename Scalar>
Var<Scalar> Tape<Scalar>::constant(Matrix value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return Var<Scalar>(this, nodes_.size() - 1);
}

template <typename Scalar>
Var<Scalar> Tape<Scalar>::variable(Matrix value) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = true;
  nodes_.push_back(std::move(n));
  return Var<Scalar>(this, nodes_.size() - 1);
}

template <typename Scalar>
Var<Scalar> Tape<Scalar>::constant_ref(const Matrix& value) {
  Node n;
  n.value_ref = &value;
  nodes_.push_back(std::move(n));
  return Var<Scalar>(this, nodes_.size() - 1);
}

template <typename Scalar>
Var<Scalar> Tape<Scalar>::parameter(Parameter<Scalar>& p) {
  Node n;
  n.value_ref = &p.value;
  if (!p.frozen) {
    n.requires_grad = true;
    if (p.grad.rows() != p.value.rows() || p.grad.cols() != p.value.cols()) {
      p.grad = Matrix::Zero(p.value.rows(), p.value.cols());
    }
    n.grad_ref = &p.grad;
  }
  nodes_.push_back(std::move(n));
  return Var<Scalar>(this, nodes_.size() - 1);
}

template <typename Scalar>
Var<Scalar> Tape<Scalar>::record(Matrix value, std::initializer_list<Var<Scalar>> inputs,
                                 Backward backward) {
  return record(std::move(value), std::span<const Var<Scalar>>(inputs.begin(), inputs.size()),
                std::move(backward));
}

template <typename Scalar>
Var<Scalar> Tape<Scalar>::record(Matrix value, std::span<const Var<Scalar>> inputs,
                                 Backward backward) {
  Node n;
  n.value = std::move(value);
  for (const auto& in : inputs) {
    if (&in.tape() != this) throw std::invalid_argument("Tape::record: input from another tape");
    n.requires_grad = n.requires_grad || requires_grad(in);
  }
  if (n.requires_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var<Scalar>(this, nodes_.size() - 1);
}

template <typename Scalar>
void Tape<Scalar>::backward(Var<Scalar> root) {
  const Matrix& v = value(root);
  if (v.rows() != 1 || v.cols() != 1) {
    throw std::invalid_argument("Tape::backward: root must be a 1x1 scalar");
  }
  if (!requires_grad(root)) return;
  accumulate(root, Matrix::Ones(1, 1));
  for (std::size_t i = root.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || !n.backward || n.grad.size() == 0) continue;
    n.backward(n.grad);
  }
}

template <typename Scalar>
const typename Tape<Scalar>::Matrix& Tape<Scalar>::grad(Var<Scalar> v) const {
  const Node& n = node(v);
  return n.grad_ref ? *n.grad_ref : n.grad;
}

template class Tape<float>;
template class Tape<double>;

}  // namespace lxt
