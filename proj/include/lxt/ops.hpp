#ifndef LXT_OPS_HPP_
#define LXT_OPS_HPP_

#include "lxt/autodiff.hpp"
#include "lxt/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lxt {

// Differentiable operations on 2-D values. Every function records its result on
// the tape of its first argument. Shapes are checked and mismatches throw
// std::invalid_argument.

template <typename Scalar>
Var<Scalar> matmul(Var<Scalar> a, Var<Scalar> b);

/// a * b^T.
template <typename Scalar>
Var<Scalar> matmul_nt(Var<Scalar> a, Var<Scalar> b);

template <typename Scalar>
Var<Scalar> add(Var<Scalar> a, Var<Scalar> b);

/// x[n x d] + row[1 x d] broadcast over rows.
template <typename Scalar>
Var<Scalar> add_row(Var<Scalar> x, Var<Scalar> row);

template <typename Scalar>
Var<Scalar> scale(Var<Scalar> x, Scalar factor);

template <typename Scalar>
Var<Scalar> sum(Var<Scalar> x);

template <typename Scalar>
Var<Scalar> sigmoid(Var<Scalar> x);

/// Softmax along `axis` (0: each column sums to 1, 1: each row sums to 1).
template <typename Scalar>
Var<Scalar> softmax(Var<Scalar> x, int axis = 1);

/// Mean over rows of softplus(z) - t*z for logits[n x 1], targets in {0, 1}.
template <typename Scalar>
Var<Scalar> bce_with_logits(Var<Scalar> logits, std::span<const int> targets);

/// Mean over rows of -log softmax(logits)[target].
template <typename Scalar>
Var<Scalar> cross_entropy(Var<Scalar> logits, std::span<const std::int32_t> targets);

/// Standardize each row over the last axis, then apply gain[1 x d] and bias[1 x d].
template <typename Scalar>
Var<Scalar> layer_norm(Var<Scalar> x, Var<Scalar> gain, Var<Scalar> bias, Scalar eps = Scalar(1e-5));

/// Inverted dropout: in training each element is zeroed with probability p and
/// survivors are scaled by 1/(1-p); otherwise the identity.
template <typename Scalar>
Var<Scalar> dropout(Var<Scalar> x, double p, bool training, Rng& rng);

template <typename Scalar>
Var<Scalar> slice_cols(Var<Scalar> x, Index start, Index count);

template <typename Scalar>
Var<Scalar> concat_cols(std::span<const Var<Scalar>> parts);

template <typename Scalar>
Var<Scalar> concat_rows(std::span<const Var<Scalar>> parts);

/// out.row(i) = table.row(ids[i]); the backward pass touches only those rows.
template <typename Scalar>
Var<Scalar> gather_rows(Var<Scalar> table, std::span<const std::int32_t> ids);

/// Mean of the rows whose `keep` flag is set. An empty `keep` means all rows.
template <typename Scalar>
Var<Scalar> mean_rows(Var<Scalar> x, std::span<const bool> keep = {});

/// Row means of consecutive row blocks: segment s covers the next segments[s] rows.
template <typename Scalar>
Var<Scalar> segment_mean_rows(Var<Scalar> x, std::span<const Index> segments);

/// Additive score offset that blocks attention to PAD key positions.
inline constexpr double kMaskedScore = -1e9;

/// Scaled dot-product attention of q, k, v [n x d] split into `heads` column
/// blocks. Rows are grouped into independent sequences by `segments` (lengths
/// summing to n; empty means one sequence), so attention is block-diagonal.
/// Keys with key_mask[j] set get kMaskedScore added to their scores.
/// When `attention` is non-null it receives one weight matrix per (segment, head).
template <typename Scalar>
Var<Scalar> attention_heads(Var<Scalar> q, Var<Scalar> k, Var<Scalar> v, int heads,
                            std::span<const Index> segments = {}, std::span<const bool> key_mask = {},
                            std::vector<MatrixX<Scalar>>* attention = nullptr);

template <typename Scalar>
struct AttentionWeights {
  Var<Scalar> wq, wk, wv, wo;  // each d x d, applied as x * W
};

/// Multi-head self-attention over x[n x d]: attention_heads(x Wq, x Wk, x Wv) Wo.
/// `pad_mask[i]` marks position i as padding (masked as a key).
template <typename Scalar>
Var<Scalar> multi_head_attention(Var<Scalar> x, const AttentionWeights<Scalar>& w, int heads,
                                 std::span<const bool> pad_mask = {},
                                 std::vector<MatrixX<Scalar>>* attention = nullptr,
                                 std::span<const Index> segments = {});

template <typename Scalar>
Var<Scalar> operator+(Var<Scalar> a, Var<Scalar> b) {
  return add(a, b);
}

template <typename Scalar>
Var<Scalar> operator*(Var<Scalar> a, Var<Scalar> b) {
  return matmul(a, b);
}

// Plain (non-recorded) helpers shared by the ops and their callers.

/// Numerically stable log(1 + exp(z)).
template <typename Scalar>
Scalar softplus(Scalar z);

template <typename Scalar>
Scalar sigmoid_scalar(Scalar z);

}  // namespace lxt

#endif  // LXT_OPS_HPP_
