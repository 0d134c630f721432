#ifndef LXT_AUTODIFF_HPP_
#define LXT_AUTODIFF_HPP_

#include "lxt/tensor.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace lxt {

/// Trainable matrix with its gradient buffer and Adam state.
/// Invariant: value, grad, adam_m and adam_v always share one shape.
template <typename Scalar>
struct Parameter {
  using Matrix = MatrixX<Scalar>;

  Parameter() = default;
  explicit Parameter(Matrix initial, std::string param_name = {})
      : value(std::move(initial)),
        grad(Matrix::Zero(value.rows(), value.cols())),
        adam_m(Matrix::Zero(value.rows(), value.cols())),
        adam_v(Matrix::Zero(value.rows(), value.cols())),
        name(std::move(param_name)) {}

  void zero_grad() { grad.setZero(); }
  void reset_optimizer_state() {
    adam_m.setZero();
    adam_v.setZero();
    step_count = 0;
  }

  Matrix value;
  Matrix grad;
  Matrix adam_m;
  Matrix adam_v;
  std::int64_t step_count = 0;
  bool frozen = false;
  std::string name;
};

template <typename Scalar>
class Tape;

/// Handle to a node recorded on a Tape.
template <typename Scalar>
class Var {
 public:
  using Matrix = MatrixX<Scalar>;

  Var() = default;
  Var(Tape<Scalar>* tape, std::size_t id) : tape_(tape), id_(id) {}

  const Matrix& value() const { return tape_->value(*this); }
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }
  Tape<Scalar>& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  bool requires_grad() const { return tape_->requires_grad(*this); }

 private:
  Tape<Scalar>* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Reverse-mode recording of a computation. Nodes live in a deque so that
/// references to values stay valid while more nodes are recorded.
template <typename Scalar>
class Tape {
 public:
  using Matrix = MatrixX<Scalar>;
  using Backward = std::function<void(const Matrix& grad_out)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Value that never receives a gradient.
  Var<Scalar> constant(Matrix value);
  /// Leaf with its own gradient buffer, read back with grad().
  Var<Scalar> variable(Matrix value);
  /// Constant that reads `value` in place; it must outlive the tape.
  Var<Scalar> constant_ref(const Matrix& value);
  /// Leaf that reads the parameter's value in place and accumulates into its
  /// grad buffer. Frozen parameters are recorded as constants.
  Var<Scalar> parameter(Parameter<Scalar>& p);

  /// Records an operation result. The node requires a gradient iff any input
  /// does; `backward` receives d(root)/d(result) and must push gradients to
  /// the inputs with accumulate().
  Var<Scalar> record(Matrix value, std::initializer_list<Var<Scalar>> inputs, Backward backward);
  Var<Scalar> record(Matrix value, std::span<const Var<Scalar>> inputs, Backward backward);

  /// Seeds d(root)/d(root) = 1 and visits recorded nodes in exact reverse order.
  void backward(Var<Scalar> root);

  const Matrix& value(Var<Scalar> v) const { return node(v).value_ref ? *node(v).value_ref : node(v).value; }
  const Matrix& grad(Var<Scalar> v) const;
  bool requires_grad(Var<Scalar> v) const { return node(v).requires_grad; }
  std::size_t size() const { return nodes_.size(); }

  template <typename Derived>
  void accumulate(Var<Scalar> v, const Eigen::MatrixBase<Derived>& g) {
    Node& n = node(v);
    if (!n.requires_grad) return;
    Matrix& target = n.grad_ref ? *n.grad_ref : n.grad;
    if (target.size() == 0) {
      target = g;
    } else {
      target += g;
    }
  }

  /// target.row(rows[i]) += g.row(i). Used by row gathers so untouched rows stay exactly zero.
  template <typename Derived>
  void accumulate_rows(Var<Scalar> v, std::span<const std::int32_t> rows,
                       const Eigen::MatrixBase<Derived>& g) {
    Node& n = node(v);
    if (!n.requires_grad) return;
    Matrix& target = n.grad_ref ? *n.grad_ref : n.grad;
    if (target.size() == 0) target = Matrix::Zero(value(v).rows(), value(v).cols());
    for (std::size_t i = 0; i < rows.size(); ++i) target.row(rows[i]) += g.row(static_cast<Index>(i));
  }

 private:
  struct Node {
    Matrix value;
    const Matrix* value_ref = nullptr;
    Matrix grad;
    Matrix* grad_ref = nullptr;
    bool requires_grad = false;
    Backward backward;
  };

  Node& node(Var<Scalar> v) { return nodes_.at(v.id()); }
  const Node& node(Var<Scalar> v) const { return nodes_.at(v.id()); }

  std::deque<Node> nodes_;
};

extern template class Tape<float>;
extern template class Tape<double>;

}  // namespace lxt

#endif  // LXT_AUTODIFF_HPP_
