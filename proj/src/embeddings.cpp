#include "lxt/embeddings.hpp"

#include "lxt/errors.hpp"
#include "lxt/ops.hpp"

#include "fpenv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace lxt {

namespace {

// Rng stream ids; each epoch uses its own stream so epochs are independent of batch layout.
constexpr std::uint64_t kInitStream = 0x1000;
constexpr std::uint64_t kEpochStreamBase = 0x2000;

}  // namespace

EmbeddingConfig EmbeddingConfig::baseline() {
  EmbeddingConfig c;
  c.mode = EmbeddingMode::baseline_softmax;
  c.window = 10;
  return c;
}

EmbeddingConfig EmbeddingConfig::enhanced() {
  EmbeddingConfig c;
  c.mode = EmbeddingMode::sgns;
  c.window = 5;
  c.neg_ratio = 10;
  c.noise_power = 0.75;
  return c;
}

void EmbeddingConfig::validate() const {
  if (dim <= 0) throw ConfigError("embedding.dim must be positive");
  if (window < 1) throw ConfigError("embedding.window must be >= 1");
  if (mode == EmbeddingMode::sgns && neg_ratio < 1) throw ConfigError("embedding.neg_ratio must be >= 1");
  if (!(subsample_t > 0.0)) throw ConfigError("embedding.subsample_t must be positive (or disabled)");
  if (!(noise_power >= 0.0)) throw ConfigError("embedding.noise_power must be >= 0");
  if (!(lr0 > 0.0)) throw ConfigError("embedding.lr0 must be positive");
  if (!(lr_gamma > 0.0 && lr_gamma <= 1.0)) throw ConfigError("embedding.lr_gamma must lie in (0, 1]");
  if (epochs < 0) throw ConfigError("embedding.epochs must be >= 0");
  if (batch_size < 1) throw ConfigError("embedding.batch_size must be >= 1");
}

NoiseTable::NoiseTable(std::vector<double> probabilities) : probabilities_(std::move(probabilities)) {
  cumulative_.resize(probabilities_.size());
  std::partial_sum(probabilities_.begin(), probabilities_.end(), cumulative_.begin());
}

std::int32_t NoiseTable::sample(Rng& rng) const {
  const double u = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  auto id = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
  if (id >= probabilities_.size()) id = probabilities_.size() - 1;
  // upper_bound can land on a zero-probability id only through rounding at a boundary.
  while (probabilities_[id] == 0.0 && id > 0) --id;
  return static_cast<std::int32_t>(id);
}

NoiseTable build_noise_table(const Vocabulary& vocab, double power) {
  if (vocab.size() == 0) throw DataError("build_noise_table: empty vocabulary");
  std::vector<double> p(vocab.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (static_cast<std::int32_t>(i) == Vocabulary::kPad) continue;
    const auto c = vocab.counts()[i];
    if (c <= 0) continue;
    p[i] = std::pow(static_cast<double>(c), power);
    total += p[i];
  }
  if (total <= 0.0) throw DataError("build_noise_table: all counts are zero");
  for (auto& x : p) x /= total;
  return NoiseTable(std::move(p));
}

double subsample_keep_prob(double freq, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("subsample_keep_prob: t must be positive");
  if (!(freq > 0.0)) throw std::invalid_argument("subsample_keep_prob: freq must be positive");
  return std::min(1.0, std::sqrt(t / freq));
}

std::vector<IdPair> generate_pairs(std::span<const std::int32_t> ids, int window, const Vocabulary& vocab,
                                   Rng& rng, double subsample_t) {
  if (window < 1) throw std::invalid_argument("generate_pairs: window must be >= 1");
  std::vector<std::int32_t> kept;
  kept.reserve(ids.size());
  const double total = static_cast<double>(vocab.total_count());
  for (auto id : ids) {
    if (id == Vocabulary::kPad) continue;
    const auto count = vocab.count(id);
    double keep = 1.0;
    if (std::isfinite(subsample_t) && count > 0) keep = subsample_keep_prob(static_cast<double>(count) / total, subsample_t);
    if (keep < 1.0 && !rng.bernoulli(keep)) continue;
    kept.push_back(id);
  }
  std::vector<IdPair> pairs;
  const auto n = static_cast<std::ptrdiff_t>(kept.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto lo = std::max<std::ptrdiff_t>(0, i - window);
    const auto hi = std::min<std::ptrdiff_t>(n - 1, i + window);
    for (auto j = lo; j <= hi; ++j) {
      if (j != i) pairs.emplace_back(kept[static_cast<std::size_t>(i)], kept[static_cast<std::size_t>(j)]);
    }
  }
  return pairs;
}

std::vector<IdPair> generate_pairs(const Document& doc, int window, const Vocabulary& vocab, Rng& rng,
                                   double subsample_t) {
  const auto ids = vocab.encode(doc.tokens);
  return generate_pairs(ids, window, vocab, rng, subsample_t);
}

template <typename Scalar>
BasicSkipGramModel<Scalar> init_skipgram(std::size_t vocab_size, const EmbeddingConfig& config, Rng& rng) {
  const auto v = static_cast<Index>(vocab_size);
  BasicSkipGramModel<Scalar> m;
  if (config.mode == EmbeddingMode::sgns) {
    m.center = Parameter<Scalar>(xavier_uniform<Scalar>(v, config.dim, rng), "center");
    m.context = Parameter<Scalar>(xavier_uniform<Scalar>(v, config.dim, rng), "context");
  } else {
    const double bound = 0.5 / config.dim;
    m.center = Parameter<Scalar>(uniform_matrix<Scalar>(v, config.dim, bound, rng), "center");
    m.context = Parameter<Scalar>(uniform_matrix<Scalar>(v, config.dim, bound, rng), "context");
  }
  return m;
}

template <typename Scalar>
Var<Scalar> sgns_loss(Var<Scalar> center, Var<Scalar> context, Var<Scalar> negatives) {
  const Index batch = center.rows();
  const Index d = center.cols();
  if (batch == 0) throw std::invalid_argument("sgns_loss: empty batch");
  if (context.rows() != batch || context.cols() != d || negatives.cols() != d || negatives.rows() % batch != 0) {
    throw std::invalid_argument("sgns_loss: inconsistent shapes");
  }
  const Index k = negatives.rows() / batch;
  const auto& c = center.value();
  const auto& x = context.value();
  const auto& n = negatives.value();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pos(batch);
  MatrixX<Scalar> neg(batch, k);
  Scalar total = 0;
  for (Index b = 0; b < batch; ++b) {
    pos(b) = c.row(b).dot(x.row(b));
    total += softplus(-pos(b));
    for (Index j = 0; j < k; ++j) {
      neg(b, j) = c.row(b).dot(n.row(b * k + j));
      total += softplus(neg(b, j));
    }
  }
  MatrixX<Scalar> out(1, 1);
  out(0, 0) = total / Scalar(batch);
  return center.tape().record(
      std::move(out), {center, context, negatives},
      [center, context, negatives, pos = std::move(pos), neg = std::move(neg), k](const MatrixX<Scalar>& g) {
        const auto& c = center.value();
        const auto& x = context.value();
        const auto& n = negatives.value();
        const Index batch = c.rows();
        const Scalar w = g(0, 0) / Scalar(batch);
        MatrixX<Scalar> dc(c.rows(), c.cols());
        MatrixX<Scalar> dx(x.rows(), x.cols());
        MatrixX<Scalar> dn(n.rows(), n.cols());
        for (Index b = 0; b < batch; ++b) {
          const Scalar gp = (sigmoid_scalar(pos(b)) - Scalar(1)) * w;
          dc.row(b) = gp * x.row(b);
          dx.row(b) = gp * c.row(b);
          for (Index j = 0; j < k; ++j) {
            const Scalar gn = sigmoid_scalar(neg(b, j)) * w;
            dc.row(b) += gn * n.row(b * k + j);
            dn.row(b * k + j) = gn * c.row(b);
          }
        }
        auto& tape = center.tape();
        tape.accumulate(center, dc);
        tape.accumulate(context, dx);
        tape.accumulate(negatives, dn);
      });
}

template <typename Scalar>
Var<Scalar> baseline_loss(Tape<Scalar>& tape, BasicSkipGramModel<Scalar>& model,
                          std::span<const std::int32_t> center_ids, std::span<const std::int32_t> context_ids) {
  Var<Scalar> centers = gather_rows(tape.parameter(model.center), center_ids);
  Var<Scalar> logits = matmul_nt(centers, tape.parameter(model.context));
  return cross_entropy(logits, context_ids);
}

template <typename Scalar>
double baseline_step(BasicSkipGramModel<Scalar>& model, std::span<const std::int32_t> center_ids,
                     std::span<const std::int32_t> context_ids, const AdamConfig& adam) {
  model.center.zero_grad();
  model.context.zero_grad();
  Tape<Scalar> tape;
  Var<Scalar> loss = baseline_loss(tape, model, center_ids, context_ids);
  tape.backward(loss);
  Parameter<Scalar>* params[] = {&model.center, &model.context};
  adam_step<Scalar>(params, adam);
  return static_cast<double>(loss.value()(0, 0));
}

EmbeddingResult train_embeddings(std::span<const Document> docs, const Vocabulary& vocab,
                                 const EmbeddingConfig& config, std::uint64_t seed) {
  config.validate();
  Rng init_rng = Rng(seed).split(kInitStream);
  EmbeddingResult result{init_skipgram<float>(vocab.size(), config, init_rng), {}};
  result.log = train_embeddings(result.model, docs, vocab, config, seed);
  return result;
}

EmbeddingTrainLog train_embeddings(SkipGramModel& model, std::span<const Document> docs, const Vocabulary& vocab,
                                   const EmbeddingConfig& config, std::uint64_t seed) {
  detail::FlushDenormals ftz;
  config.validate();
  if (model.center.value.rows() != static_cast<Index>(vocab.size()) ||
      model.context.value.rows() != static_cast<Index>(vocab.size())) {
    throw std::invalid_argument("train_embeddings: model rows do not match vocabulary size");
  }
  std::vector<std::vector<std::int32_t>> encoded;
  encoded.reserve(docs.size());
  for (const auto& d : docs) encoded.push_back(vocab.encode(d.tokens));

  std::optional<NoiseTable> noise;
  if (config.mode == EmbeddingMode::sgns) noise = build_noise_table(vocab, config.noise_power);

  EmbeddingTrainLog log;
  const Rng base(seed);
  const auto k = static_cast<std::size_t>(config.neg_ratio);
  Parameter<float>* params[] = {&model.center, &model.context};

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Rng rng = base.split(kEpochStreamBase + static_cast<std::uint64_t>(epoch));
    std::vector<IdPair> pairs;
    for (const auto& ids : encoded) {
      auto p = generate_pairs(ids, config.window, vocab, rng, config.subsample_t);
      pairs.insert(pairs.end(), p.begin(), p.end());
    }
    if (pairs.empty()) throw DataError("train_embeddings: no training pairs (corpus too small or over-subsampled)");
    rng.shuffle(pairs.begin(), pairs.end());

    const AdamConfig adam{exp_decay_lr(config.lr0, config.lr_gamma, epoch)};
    double loss_sum = 0.0;
    std::vector<std::int32_t> centers, contexts, negatives;
    for (std::size_t start = 0; start < pairs.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(pairs.size(), start + static_cast<std::size_t>(config.batch_size));
      centers.clear();
      contexts.clear();
      negatives.clear();
      for (std::size_t i = start; i < end; ++i) {
        centers.push_back(pairs[i].first);
        contexts.push_back(pairs[i].second);
        if (noise) {
          for (std::size_t j = 0; j < k; ++j) negatives.push_back(noise->sample(rng));
        }
      }
      model.center.zero_grad();
      model.context.zero_grad();
      Tape<float> tape;
      Var<float> loss;
      if (config.mode == EmbeddingMode::sgns) {
        Var<float> center_table = tape.parameter(model.center);
        Var<float> context_table = tape.parameter(model.context);
        loss = sgns_loss(gather_rows(center_table, centers), gather_rows(context_table, contexts),
                         gather_rows(context_table, negatives));
      } else {
        loss = baseline_loss(tape, model, centers, contexts);
      }
      tape.backward(loss);
      adam_step<float>(params, adam);
      loss_sum += static_cast<double>(loss.value()(0, 0)) * static_cast<double>(end - start);
    }
    const double mean_loss = loss_sum / static_cast<double>(pairs.size());
    if (!std::isfinite(mean_loss) || !all_finite(model.center.value) || !all_finite(model.context.value)) {
      throw NumericalError("train_embeddings: non-finite values in epoch " + std::to_string(epoch));
    }
    log.epoch_loss.push_back(mean_loss);
    log.epoch_pairs.push_back(pairs.size());
  }
  return log;
}

std::vector<std::int32_t> nearest_neighbors(const Matrix& matrix, std::int32_t word_id, std::size_t k) {
  const Index v = matrix.rows();
  if (word_id < 0 || word_id >= v) throw std::out_of_range("nearest_neighbors: unknown id " + std::to_string(word_id));
  if (static_cast<Index>(k) >= v) throw std::invalid_argument("nearest_neighbors: k must be smaller than the vocabulary");
  std::vector<std::pair<double, std::int32_t>> scored;
  scored.reserve(static_cast<std::size_t>(v));
  for (Index i = 0; i < v; ++i) {
    if (i == word_id) continue;
    scored.emplace_back(cosine_similarity(matrix.row(word_id), matrix.row(i)), static_cast<std::int32_t>(i));
  }
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
  std::vector<std::int32_t> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(scored[i].second);
  return out;
}

#define LXT_INSTANTIATE_EMBEDDINGS(S)                                                                     \
  template BasicSkipGramModel<S> init_skipgram<S>(std::size_t, const EmbeddingConfig&, Rng&);             \
  template Var<S> sgns_loss<S>(Var<S>, Var<S>, Var<S>);                                                   \
  template Var<S> baseline_loss<S>(Tape<S>&, BasicSkipGramModel<S>&, std::span<const std::int32_t>,        \
                                   std::span<const std::int32_t>);                                        \
  template double baseline_step<S>(BasicSkipGramModel<S>&, std::span<const std::int32_t>,                 \
                                   std::span<const std::int32_t>, const AdamConfig&);

LXT_INSTANTIATE_EMBEDDINGS(float)
LXT_INSTANTIATE_EMBEDDINGS(double)

}  // namespace lxt
