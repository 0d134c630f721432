#include "lxt/ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lxt {

namespace {

[[noreturn]] void shape_error(const char* op, Index r1, Index c1, Index r2, Index c2) {
  throw std::invalid_argument(std::string(op) + ": shape mismatch " + std::to_string(r1) + "x" +
                              std::to_string(c1) + " vs " + std::to_string(r2) + "x" +
                              std::to_string(c2));
}

template <typename Scalar>
void require_same_shape(const char* op, Var<Scalar> a, Var<Scalar> b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    shape_error(op, a.rows(), a.cols(), b.rows(), b.cols());
  }
}

}  // namespace

template <typename Scalar>
Scalar softplus(Scalar z) {
  return z > Scalar(0) ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

template <typename Scalar>
Scalar sigmoid_scalar(Scalar z) {
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-z));
  const Scalar e = std::exp(z);
  return e / (Scalar(1) + e);
}

template <typename Scalar>
Var<Scalar> matmul(Var<Scalar> a, Var<Scalar> b) {
  if (a.cols() != b.rows()) shape_error("matmul", a.rows(), a.cols(), b.rows(), b.cols());
  MatrixX<Scalar> out;
  out.noalias() = a.value() * b.value();
  return a.tape().record(std::move(out), {a, b}, [a, b](const MatrixX<Scalar>& g) {
    auto& tape = a.tape();
    if (a.requires_grad()) tape.accumulate(a, g * b.value().transpose());
    if (b.requires_grad()) tape.accumulate(b, a.value().transpose() * g);
  });
}

template <typename Scalar>
Var<Scalar> matmul_nt(Var<Scalar> a, Var<Scalar> b) {
  if (a.cols() != b.cols()) shape_error("matmul_nt", a.rows(), a.cols(), b.rows(), b.cols());
  MatrixX<Scalar> out;
  out.noalias() = a.value() * b.value().transpose();
  return a.tape().record(std::move(out), {a, b}, [a, b](const MatrixX<Scalar>& g) {
    auto& tape = a.tape();
    if (a.requires_grad()) tape.accumulate(a, g * b.value());
    if (b.requires_grad()) tape.accumulate(b, g.transpose() * a.value());
  });
}

template <typename Scalar>
Var<Scalar> add(Var<Scalar> a, Var<Scalar> b) {
  require_same_shape("add", a, b);
  return a.tape().record(a.value() + b.value(), {a, b}, [a, b](const MatrixX<Scalar>& g) {
    a.tape().accumulate(a, g);
    a.tape().accumulate(b, g);
  });
}

template <typename Scalar>
Var<Scalar> add_row(Var<Scalar> x, Var<Scalar> row) {
  if (row.rows() != 1 || row.cols() != x.cols()) {
    shape_error("add_row", x.rows(), x.cols(), row.rows(), row.cols());
  }
  MatrixX<Scalar> out = x.value().rowwise() + row.value().row(0);
  return x.tape().record(std::move(out), {x, row}, [x, row](const MatrixX<Scalar>& g) {
    x.tape().accumulate(x, g);
    if (row.requires_grad()) x.tape().accumulate(row, g.colwise().sum());
  });
}

template <typename Scalar>
Var<Scalar> scale(Var<Scalar> x, Scalar factor) {
  return x.tape().record(x.value() * factor, {x}, [x, factor](const MatrixX<Scalar>& g) {
    x.tape().accumulate(x, g * factor);
  });
}

template <typename Scalar>
Var<Scalar> sum(Var<Scalar> x) {
  MatrixX<Scalar> out(1, 1);
  out(0, 0) = x.value().sum();
  return x.tape().record(std::move(out), {x}, [x](const MatrixX<Scalar>& g) {
    x.tape().accumulate(x, MatrixX<Scalar>::Constant(x.rows(), x.cols(), g(0, 0)));
  });
}

template <typename Scalar>
Var<Scalar> sigmoid(Var<Scalar> x) {
  MatrixX<Scalar> y = x.value().unaryExpr([](Scalar z) { return sigmoid_scalar(z); });
  MatrixX<Scalar> y_copy = y;
  return x.tape().record(std::move(y), {x}, [x, y = std::move(y_copy)](const MatrixX<Scalar>& g) {
    x.tape().accumulate(x, (g.array() * y.array() * (Scalar(1) - y.array())).matrix());
  });
}

template <typename Scalar>
Var<Scalar> softmax(Var<Scalar> x, int axis) {
  if (axis != 0 && axis != 1) throw std::invalid_argument("softmax: axis must be 0 or 1");
  MatrixX<Scalar> y(x.rows(), x.cols());
  const auto& v = x.value();
  if (axis == 1) {
    for (Index i = 0; i < v.rows(); ++i) {
      auto e = (v.row(i).array() - v.row(i).maxCoeff()).exp();
      y.row(i) = e / e.sum();
    }
  } else {
    for (Index j = 0; j < v.cols(); ++j) {
      auto e = (v.col(j).array() - v.col(j).maxCoeff()).exp();
      y.col(j) = e / e.sum();
    }
  }
  MatrixX<Scalar> y_copy = y;
  return x.tape().record(std::move(y), {x},
                         [x, axis, y = std::move(y_copy)](const MatrixX<Scalar>& g) {
                           MatrixX<Scalar> gy = (g.array() * y.array()).matrix();
                           MatrixX<Scalar> dx(y.rows(), y.cols());
                           if (axis == 1) {
                             auto s = gy.rowwise().sum();
                             dx = gy - (y.array().colwise() * s.array()).matrix();
                           } else {
                             auto s = gy.colwise().sum();
                             dx = gy - (y.array().rowwise() * s.array()).matrix();
                           }
                           x.tape().accumulate(x, dx);
                         });
}

template <typename Scalar>
Var<Scalar> bce_with_logits(Var<Scalar> logits, std::span<const int> targets) {
  if (logits.cols() != 1 || static_cast<std::size_t>(logits.rows()) != targets.size()) {
    throw std::invalid_argument("bce_with_logits: expected n x 1 logits and n targets");
  }
  if (targets.empty()) throw std::invalid_argument("bce_with_logits: empty batch");
  const auto& z = logits.value();
  const Index n = z.rows();
  Scalar total = 0;
  for (Index i = 0; i < n; ++i) {
    const int t = targets[static_cast<std::size_t>(i)];
    if (t != 0 && t != 1) throw std::invalid_argument("bce_with_logits: target must be 0 or 1");
    total += softplus(z(i, 0)) - Scalar(t) * z(i, 0);
  }
  MatrixX<Scalar> out(1, 1);
  out(0, 0) = total / Scalar(n);
  std::vector<int> t_copy(targets.begin(), targets.end());
  return logits.tape().record(
      std::move(out), {logits}, [logits, t = std::move(t_copy)](const MatrixX<Scalar>& g) {
        const auto& z = logits.value();
        MatrixX<Scalar> dz(z.rows(), 1);
        const Scalar w = g(0, 0) / Scalar(z.rows());
        for (Index i = 0; i < z.rows(); ++i) {
          dz(i, 0) = (sigmoid_scalar(z(i, 0)) - Scalar(t[static_cast<std::size_t>(i)])) * w;
        }
        logits.tape().accumulate(logits, dz);
      });
}

template <typename Scalar>
Var<Scalar> cross_entropy(Var<Scalar> logits, std::span<const std::int32_t> targets) {
  const auto& v = logits.value();
  if (static_cast<std::size_t>(v.rows()) != targets.size()) {
    throw std::invalid_argument("cross_entropy: one target per row required");
  }
  if (targets.empty()) throw std::invalid_argument("cross_entropy: empty batch");
  MatrixX<Scalar> probs(v.rows(), v.cols());
  Scalar total = 0;
  for (Index i = 0; i < v.rows(); ++i) {
    const auto t = targets[static_cast<std::size_t>(i)];
    if (t < 0 || t >= v.cols()) {
      throw std::out_of_range("cross_entropy: target id " + std::to_string(t) + " out of range");
    }
    const Scalar m = v.row(i).maxCoeff();
    auto e = (v.row(i).array() - m).exp();
    const Scalar s = e.sum();
    probs.row(i) = e / s;
    total += (m + std::log(s)) - v(i, t);
  }
  MatrixX<Scalar> out(1, 1);
  out(0, 0) = total / Scalar(v.rows());
  std::vector<std::int32_t> t_copy(targets.begin(), targets.end());
  return logits.tape().record(
      std::move(out), {logits},
      [logits, p = std::move(probs), t = std::move(t_copy)](const MatrixX<Scalar>& g) {
        MatrixX<Scalar> d = p;
        for (Index i = 0; i < d.rows(); ++i) d(i, t[static_cast<std::size_t>(i)]) -= Scalar(1);
        d *= g(0, 0) / Scalar(d.rows());
        logits.tape().accumulate(logits, d);
      });
}

template <typename Scalar>
Var<Scalar> layer_norm(Var<Scalar> x, Var<Scalar> gain, Var<Scalar> bias, Scalar eps) {
  if (!(eps > Scalar(0))) throw std::invalid_argument("layer_norm: eps must be positive");
  const auto& v = x.value();
  const Index d = v.cols();
  if (gain.rows() != 1 || gain.cols() != d) shape_error("layer_norm", v.rows(), d, gain.rows(), gain.cols());
  if (bias.rows() != 1 || bias.cols() != d) shape_error("layer_norm", v.rows(), d, bias.rows(), bias.cols());
  MatrixX<Scalar> xhat(v.rows(), d);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rstd(v.rows());
  for (Index i = 0; i < v.rows(); ++i) {
    const Scalar mu = v.row(i).mean();
    auto centered = v.row(i).array() - mu;
    const Scalar var = centered.square().mean();
    rstd(i) = Scalar(1) / std::sqrt(var + eps);
    xhat.row(i) = centered * rstd(i);
  }
  MatrixX<Scalar> out =
      (xhat.array().rowwise() * gain.value().row(0).array()).rowwise() + bias.value().row(0).array();
  return x.tape().record(
      std::move(out), {x, gain, bias},
      [x, gain, bias, xhat = std::move(xhat), rstd = std::move(rstd)](const MatrixX<Scalar>& g) {
        auto& tape = x.tape();
        if (gain.requires_grad()) tape.accumulate(gain, (g.array() * xhat.array()).colwise().sum().matrix());
        if (bias.requires_grad()) tape.accumulate(bias, g.colwise().sum());
        if (!x.requires_grad()) return;
        const Scalar d = Scalar(xhat.cols());
        MatrixX<Scalar> dxhat = g.array().rowwise() * gain.value().row(0).array();
        MatrixX<Scalar> dx(xhat.rows(), xhat.cols());
        for (Index i = 0; i < xhat.rows(); ++i) {
          const Scalar s1 = dxhat.row(i).sum();
          const Scalar s2 = dxhat.row(i).dot(xhat.row(i));
          dx.row(i) = (rstd(i) / d) * (d * dxhat.row(i).array() - s1 - xhat.row(i).array() * s2);
        }
        tape.accumulate(x, dx);
      });
}

template <typename Scalar>
Var<Scalar> dropout(Var<Scalar> x, double p, bool training, Rng& rng) {
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("dropout: p must lie in [0, 1)");
  if (!training || p == 0.0) return x;
  const Scalar keep_scale = Scalar(1.0 / (1.0 - p));
  MatrixX<Scalar> mask(x.rows(), x.cols());
  for (Index i = 0; i < mask.size(); ++i) {
    mask.data()[i] = rng.uniform() < p ? Scalar(0) : keep_scale;
  }
  MatrixX<Scalar> out = (x.value().array() * mask.array()).matrix();
  return x.tape().record(std::move(out), {x}, [x, mask = std::move(mask)](const MatrixX<Scalar>& g) {
    x.tape().accumulate(x, (g.array() * mask.array()).matrix());
  });
}

template <typename Scalar>
Var<Scalar> slice_cols(Var<Scalar> x, Index start, Index count) {
  if (start < 0 || count < 0 || start + count > x.cols()) {
    throw std::invalid_argument("slice_cols: range out of bounds");
  }
  MatrixX<Scalar> out = x.value().middleCols(start, count);
  return x.tape().record(std::move(out), {x}, [x, start, count](const MatrixX<Scalar>& g) {
    MatrixX<Scalar> full = MatrixX<Scalar>::Zero(x.rows(), x.cols());
    full.middleCols(start, count) = g;
    x.tape().accumulate(x, full);
  });
}

template <typename Scalar>
Var<Scalar> concat_cols(std::span<const Var<Scalar>> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: no inputs");
  const Index rows = parts[0].rows();
  Index cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) shape_error("concat_cols", rows, cols, p.rows(), p.cols());
    cols += p.cols();
  }
  MatrixX<Scalar> out(rows, cols);
  Index at = 0;
  for (const auto& p : parts) {
    out.middleCols(at, p.cols()) = p.value();
    at += p.cols();
  }
  std::vector<Var<Scalar>> ins(parts.begin(), parts.end());
  return parts[0].tape().record(std::move(out), parts, [ins](const MatrixX<Scalar>& g) {
    Index at = 0;
    for (const auto& p : ins) {
      if (p.requires_grad()) p.tape().accumulate(p, g.middleCols(at, p.cols()));
      at += p.cols();
    }
  });
}

template <typename Scalar>
Var<Scalar> concat_rows(std::span<const Var<Scalar>> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_rows: no inputs");
  const Index cols = parts[0].cols();
  Index rows = 0;
  for (const auto& p : parts) {
    if (p.cols() != cols) shape_error("concat_rows", rows, cols, p.rows(), p.cols());
    rows += p.rows();
  }
  MatrixX<Scalar> out(rows, cols);
  Index at = 0;
  for (const auto& p : parts) {
    out.middleRows(at, p.rows()) = p.value();
    at += p.rows();
  }
  std::vector<Var<Scalar>> ins(parts.begin(), parts.end());
  return parts[0].tape().record(std::move(out), parts, [ins](const MatrixX<Scalar>& g) {
    Index at = 0;
    for (const auto& p : ins) {
      if (p.requires_grad()) p.tape().accumulate(p, g.middleRows(at, p.rows()));
      at += p.rows();
    }
  });
}

template <typename Scalar>
Var<Scalar> gather_rows(Var<Scalar> table, std::span<const std::int32_t> ids) {
  const auto& t = table.value();
  MatrixX<Scalar> out(static_cast<Index>(ids.size()), t.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= t.rows()) {
      throw std::out_of_range("gather_rows: id " + std::to_string(ids[i]) + " out of range");
    }
    out.row(static_cast<Index>(i)) = t.row(ids[i]);
  }
  std::vector<std::int32_t> id_copy(ids.begin(), ids.end());
  return table.tape().record(std::move(out), {table},
                             [table, ids = std::move(id_copy)](const MatrixX<Scalar>& g) {
                               table.tape().accumulate_rows(table, ids, g);
                             });
}

template <typename Scalar>
Var<Scalar> mean_rows(Var<Scalar> x, std::span<const bool> keep) {
  const auto& v = x.value();
  if (!keep.empty() && static_cast<Index>(keep.size()) != v.rows()) {
    throw std::invalid_argument("mean_rows: mask length must equal row count");
  }
  std::vector<bool> k(static_cast<std::size_t>(v.rows()), true);
  if (!keep.empty()) k.assign(keep.begin(), keep.end());
  Index count = 0;
  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(1, v.cols());
  for (Index i = 0; i < v.rows(); ++i) {
    if (!k[static_cast<std::size_t>(i)]) continue;
    out += v.row(i);
    ++count;
  }
  if (count == 0) throw std::invalid_argument("mean_rows: no rows selected");
  out /= Scalar(count);
  return x.tape().record(std::move(out), {x}, [x, k = std::move(k), count](const MatrixX<Scalar>& g) {
    MatrixX<Scalar> dx = MatrixX<Scalar>::Zero(x.rows(), x.cols());
    for (Index i = 0; i < dx.rows(); ++i) {
      if (k[static_cast<std::size_t>(i)]) dx.row(i) = g / Scalar(count);
    }
    x.tape().accumulate(x, dx);
  });
}

template <typename Scalar>
Var<Scalar> segment_mean_rows(Var<Scalar> x, std::span<const Index> segments) {
  const auto& v = x.value();
  Index total = 0;
  for (Index len : segments) {
    if (len <= 0) throw std::invalid_argument("segment_mean_rows: segment lengths must be positive");
    total += len;
  }
  if (total != v.rows()) throw std::invalid_argument("segment_mean_rows: segment lengths must sum to the row count");
  MatrixX<Scalar> out(static_cast<Index>(segments.size()), v.cols());
  Index at = 0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    out.row(static_cast<Index>(s)) = v.middleRows(at, segments[s]).colwise().sum() / Scalar(segments[s]);
    at += segments[s];
  }
  std::vector<Index> seg(segments.begin(), segments.end());
  return x.tape().record(std::move(out), {x}, [x, seg = std::move(seg)](const MatrixX<Scalar>& g) {
    MatrixX<Scalar> dx(x.rows(), x.cols());
    Index at = 0;
    for (std::size_t s = 0; s < seg.size(); ++s) {
      const MatrixX<Scalar> row = g.row(static_cast<Index>(s)) / Scalar(seg[s]);
      dx.middleRows(at, seg[s]) = row.replicate(seg[s], 1);
      at += seg[s];
    }
    x.tape().accumulate(x, dx);
  });
}

template <typename Scalar>
Var<Scalar> attention_heads(Var<Scalar> q, Var<Scalar> k, Var<Scalar> v, int heads,
                            std::span<const Index> segments, std::span<const bool> key_mask,
                            std::vector<MatrixX<Scalar>>* attention) {
  require_same_shape("attention_heads", q, k);
  require_same_shape("attention_heads", q, v);
  const Index n = q.rows();
  const Index d = q.cols();
  if (heads <= 0 || d % heads != 0) {
    throw std::invalid_argument("attention_heads: model dim " + std::to_string(d) + " not divisible by " +
                                std::to_string(heads) + " heads");
  }
  if (!key_mask.empty() && static_cast<Index>(key_mask.size()) != n) {
    throw std::invalid_argument("attention_heads: mask length must equal sequence length");
  }
  std::vector<Index> seg(segments.begin(), segments.end());
  if (seg.empty()) seg.push_back(n);
  Index total = 0;
  for (Index len : seg) {
    if (len <= 0) throw std::invalid_argument("attention_heads: segment lengths must be positive");
    total += len;
  }
  if (total != n) throw std::invalid_argument("attention_heads: segment lengths must sum to the row count");

  const Index hd = d / heads;
  const Scalar inv_sqrt = Scalar(1) / std::sqrt(Scalar(hd));
  const auto& Q = q.value();
  const auto& K = k.value();
  const auto& V = v.value();
  // probs[s * heads + h] holds the softmax weights of segment s, head h.
  std::vector<MatrixX<Scalar>> probs;
  probs.reserve(seg.size() * static_cast<std::size_t>(heads));
  MatrixX<Scalar> out(n, d);
  if (attention) attention->clear();
  Index at = 0;
  for (Index len : seg) {
    for (int h = 0; h < heads; ++h) {
      const Index c0 = h * hd;
      MatrixX<Scalar> scores = Q.block(at, c0, len, hd) * K.block(at, c0, len, hd).transpose() * inv_sqrt;
      if (!key_mask.empty()) {
        for (Index j = 0; j < len; ++j) {
          if (key_mask[static_cast<std::size_t>(at + j)]) scores.col(j).array() += Scalar(kMaskedScore);
        }
      }
      for (Index i = 0; i < len; ++i) {
        auto row = scores.row(i);
        row.array() = (row.array() - row.maxCoeff()).exp();
        row /= row.sum();
      }
      out.block(at, c0, len, hd).noalias() = scores * V.block(at, c0, len, hd);
      if (attention) attention->push_back(scores);
      probs.push_back(std::move(scores));
    }
    at += len;
  }
  return q.tape().record(
      std::move(out), {q, k, v},
      [q, k, v, heads, hd, inv_sqrt, seg = std::move(seg), probs = std::move(probs)](const MatrixX<Scalar>& g) {
        const auto& Q = q.value();
        const auto& K = k.value();
        const auto& V = v.value();
        MatrixX<Scalar> dq = MatrixX<Scalar>::Zero(Q.rows(), Q.cols());
        MatrixX<Scalar> dk = MatrixX<Scalar>::Zero(Q.rows(), Q.cols());
        MatrixX<Scalar> dv = MatrixX<Scalar>::Zero(Q.rows(), Q.cols());
        Index at = 0;
        std::size_t idx = 0;
        for (Index len : seg) {
          for (int h = 0; h < heads; ++h, ++idx) {
            const Index c0 = h * hd;
            const MatrixX<Scalar>& p = probs[idx];
            const auto go = g.block(at, c0, len, hd);
            dv.block(at, c0, len, hd).noalias() = p.transpose() * go;
            MatrixX<Scalar> dp = go * V.block(at, c0, len, hd).transpose();
            const auto row_dot = (dp.array() * p.array()).rowwise().sum().eval();
            MatrixX<Scalar> ds = (p.array() * (dp.array().colwise() - row_dot)).matrix() * inv_sqrt;
            dq.block(at, c0, len, hd).noalias() = ds * K.block(at, c0, len, hd);
            dk.block(at, c0, len, hd).noalias() = ds.transpose() * Q.block(at, c0, len, hd);
          }
          at += len;
        }
        q.tape().accumulate(q, dq);
        k.tape().accumulate(k, dk);
        v.tape().accumulate(v, dv);
      });
}

template <typename Scalar>
Var<Scalar> multi_head_attention(Var<Scalar> x, const AttentionWeights<Scalar>& w, int heads,
                                 std::span<const bool> pad_mask, std::vector<MatrixX<Scalar>>* attention,
                                 std::span<const Index> segments) {
  const Index d = x.cols();
  for (const auto* m : {&w.wq, &w.wk, &w.wv, &w.wo}) {
    if (m->rows() != d || m->cols() != d) shape_error("multi_head_attention", d, d, m->rows(), m->cols());
  }
  Var<Scalar> q = matmul(x, w.wq);
  Var<Scalar> k = matmul(x, w.wk);
  Var<Scalar> v = matmul(x, w.wv);
  return matmul(attention_heads(q, k, v, heads, segments, pad_mask, attention), w.wo);
}

#define LXT_INSTANTIATE_OPS(S)                                                                  \
  template S softplus<S>(S);                                                                    \
  template S sigmoid_scalar<S>(S);                                                              \
  template Var<S> matmul<S>(Var<S>, Var<S>);                                                    \
  template Var<S> matmul_nt<S>(Var<S>, Var<S>);                                                 \
  template Var<S> add<S>(Var<S>, Var<S>);                                                       \
  template Var<S> add_row<S>(Var<S>, Var<S>);                                                   \
  template Var<S> scale<S>(Var<S>, S);                                                          \
  template Var<S> sum<S>(Var<S>);                                                               \
  template Var<S> sigmoid<S>(Var<S>);                                                           \
  template Var<S> softmax<S>(Var<S>, int);                                                      \
  template Var<S> bce_with_logits<S>(Var<S>, std::span<const int>);                             \
  template Var<S> cross_entropy<S>(Var<S>, std::span<const std::int32_t>);                      \
  template Var<S> layer_norm<S>(Var<S>, Var<S>, Var<S>, S);                                     \
  template Var<S> dropout<S>(Var<S>, double, bool, Rng&);                                       \
  template Var<S> slice_cols<S>(Var<S>, Index, Index);                                          \
  template Var<S> concat_cols<S>(std::span<const Var<S>>);                                      \
  template Var<S> concat_rows<S>(std::span<const Var<S>>);                                      \
  template Var<S> gather_rows<S>(Var<S>, std::span<const std::int32_t>);                        \
  template Var<S> mean_rows<S>(Var<S>, std::span<const bool>);                                  \
  template Var<S> segment_mean_rows<S>(Var<S>, std::span<const Index>);                         \
  template Var<S> attention_heads<S>(Var<S>, Var<S>, Var<S>, int, std::span<const Index>,       \
                                     std::span<const bool>, std::vector<MatrixX<S>>*);          \
  template Var<S> multi_head_attention<S>(Var<S>, const AttentionWeights<S>&, int,              \
                                          std::span<const bool>, std::vector<MatrixX<S>>*,      \
                                          std::span<const Index>);

LXT_INSTANTIATE_OPS(float)
LXT_INSTANTIATE_OPS(double)

}  // namespace lxt
