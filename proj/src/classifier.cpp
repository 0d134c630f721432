#include "lxt/classifier.hpp"

#include "lxt/errors.hpp"
#include "lxt/ops.hpp"
#include "lxt/optim.hpp"

#include "fpenv.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lxt {

std::string to_string(Architecture arch) { return arch == Architecture::baseline ? "baseline" : "enhanced"; }

Architecture parse_architecture(std::string_view name) {
  if (name == "baseline") return Architecture::baseline;
  if (name == "enhanced") return Architecture::enhanced;
  throw ConfigError("unknown architecture '" + std::string(name) + "' (expected baseline or enhanced)");
}

std::string to_string(ParamGroup group) {
  switch (group) {
    case ParamGroup::embedding: return "embedding";
    case ParamGroup::blocks: return "blocks";
    case ParamGroup::head: return "head";
  }
  return "?";
}

ParamGroup parse_param_group(std::string_view name) {
  for (ParamGroup g : kParamGroups) {
    if (to_string(g) == name) return g;
  }
  throw ConfigError("unknown parameter group '" + std::string(name) + "' (expected embedding, blocks or head)");
}

bool FreezeMask::frozen(ParamGroup g) const {
  switch (g) {
    case ParamGroup::embedding: return embedding;
    case ParamGroup::blocks: return blocks;
    case ParamGroup::head: return head;
  }
  return false;
}

void FreezeMask::set(ParamGroup g, bool value) {
  switch (g) {
    case ParamGroup::embedding: embedding = value; break;
    case ParamGroup::blocks: blocks = value; break;
    case ParamGroup::head: head = value; break;
  }
}

std::vector<std::string> FreezeMask::names() const {
  std::vector<std::string> out;
  for (ParamGroup g : kParamGroups) {
    if (frozen(g)) out.push_back(to_string(g));
  }
  return out;
}

FreezeMask FreezeMask::from_names(std::span<const std::string> names) {
  FreezeMask m;
  for (const auto& n : names) m.set(parse_param_group(n), true);
  return m;
}

ClassifierConfig ClassifierConfig::baseline() {
  ClassifierConfig c;
  c.arch = Architecture::baseline;
  c.num_blocks = 1;
  c.dropout_p = 0.0;
  return c;
}

ClassifierConfig ClassifierConfig::enhanced() { return ClassifierConfig{}; }

void ClassifierConfig::validate() const {
  if (num_blocks < 1) throw ConfigError("classifier.num_blocks must be >= 1");
  if (heads < 1) throw ConfigError("classifier.heads must be >= 1");
  if (!(dropout_p >= 0.0 && dropout_p < 1.0)) throw ConfigError("classifier.dropout_p must lie in [0, 1)");
  if (max_len < 1) throw ConfigError("classifier.max_len must be >= 1");
  if (!(lr0 > 0.0) || !std::isfinite(lr0)) throw ConfigError("classifier.lr0 must be positive");
  if (!(lr_gamma > 0.0 && lr_gamma <= 1.0)) throw ConfigError("classifier.lr_gamma must lie in (0, 1]");
  if (epochs < 0) throw ConfigError("classifier.epochs must be >= 0");
  if (batch_size < 1) throw ConfigError("classifier.batch_size must be >= 1");
}

void ClassifierConfig::validate_for_dim(Index dim) const {
  if (dim % heads != 0) {
    throw ConfigError("classifier.heads = " + std::to_string(heads) + " does not divide embedding dim " +
                      std::to_string(dim));
  }
  if (arch == Architecture::enhanced && dim % 2 != 0) {
    throw ConfigError("enhanced classifier needs an even embedding dim for positional encoding");
  }
}

template <typename Scalar>
std::vector<Parameter<Scalar>*> BasicClassifierModel<Scalar>::parameters(ParamGroup group) {
  std::vector<Parameter<Scalar>*> out;
  switch (group) {
    case ParamGroup::embedding:
      out.push_back(&embedding);
      break;
    case ParamGroup::blocks:
      for (auto& b : blocks) {
        for (auto* p : {&b.wq, &b.wk, &b.wv, &b.wo, &b.ln_gain, &b.ln_bias}) out.push_back(p);
      }
      break;
    case ParamGroup::head:
      out.push_back(&head_weight);
      out.push_back(&head_bias);
      break;
  }
  return out;
}

template <typename Scalar>
std::vector<const Parameter<Scalar>*> BasicClassifierModel<Scalar>::parameters(ParamGroup group) const {
  auto mutable_ptrs = const_cast<BasicClassifierModel*>(this)->parameters(group);
  return {mutable_ptrs.begin(), mutable_ptrs.end()};
}

template <typename Scalar>
std::vector<Parameter<Scalar>*> BasicClassifierModel<Scalar>::parameters() {
  std::vector<Parameter<Scalar>*> out;
  for (ParamGroup g : kParamGroups) {
    auto part = parameters(g);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

template <typename Scalar>
std::vector<const Parameter<Scalar>*> BasicClassifierModel<Scalar>::parameters() const {
  auto mutable_ptrs = const_cast<BasicClassifierModel*>(this)->parameters();
  return {mutable_ptrs.begin(), mutable_ptrs.end()};
}

template <typename Scalar>
void BasicClassifierModel<Scalar>::set_freeze(const FreezeMask& mask) {
  freeze = mask;
  for (ParamGroup g : kParamGroups) {
    for (auto* p : parameters(g)) p->frozen = mask.frozen(g);
  }
}

template <typename Scalar>
void BasicClassifierModel<Scalar>::reset_optimizer_state() {
  for (auto* p : parameters()) p->reset_optimizer_state();
}

template <typename Scalar>
MatrixX<Scalar> positional_encoding(Index max_len, Index dim) {
  if (dim <= 0 || dim % 2 != 0) throw std::invalid_argument("positional_encoding: dim must be even and positive");
  if (max_len < 0) throw std::invalid_argument("positional_encoding: negative length");
  MatrixX<Scalar> pe(max_len, dim);
  for (Index pos = 0; pos < max_len; ++pos) {
    for (Index i = 0; i < dim / 2; ++i) {
      const double angle =
          static_cast<double>(pos) / std::pow(10000.0, static_cast<double>(2 * i) / static_cast<double>(dim));
      pe(pos, 2 * i) = static_cast<Scalar>(std::sin(angle));
      pe(pos, 2 * i + 1) = static_cast<Scalar>(std::cos(angle));
    }
  }
  return pe;
}

template <typename Scalar>
BasicClassifierModel<Scalar> make_classifier(const ClassifierConfig& config, const MatrixX<Scalar>& embedding,
                                             Rng& rng) {
  config.validate();
  const Index d = embedding.cols();
  if (embedding.rows() == 0 || d == 0) throw std::invalid_argument("make_classifier: empty embedding matrix");
  config.validate_for_dim(d);

  BasicClassifierModel<Scalar> m;
  m.arch = config.arch;
  m.heads = config.heads;
  m.max_len = config.max_len;
  const bool enhanced = config.arch == Architecture::enhanced;
  m.dropout_p = enhanced ? config.dropout_p : 0.0;
  m.embedding = Parameter<Scalar>(embedding, "embedding");
  if (enhanced) m.positional = positional_encoding<Scalar>(config.max_len, d);
  const int num_blocks = enhanced ? config.num_blocks : 1;
  for (int b = 0; b < num_blocks; ++b) {
    const std::string prefix = "block" + std::to_string(b) + ".";
    EncoderBlock<Scalar> block;
    block.wq = Parameter<Scalar>(xavier_uniform<Scalar>(d, d, rng), prefix + "wq");
    block.wk = Parameter<Scalar>(xavier_uniform<Scalar>(d, d, rng), prefix + "wk");
    block.wv = Parameter<Scalar>(xavier_uniform<Scalar>(d, d, rng), prefix + "wv");
    block.wo = Parameter<Scalar>(xavier_uniform<Scalar>(d, d, rng), prefix + "wo");
    block.ln_gain = Parameter<Scalar>(MatrixX<Scalar>::Ones(1, d), prefix + "ln_gain");
    block.ln_bias = Parameter<Scalar>(MatrixX<Scalar>::Zero(1, d), prefix + "ln_bias");
    m.blocks.push_back(std::move(block));
  }
  m.head_weight = Parameter<Scalar>(xavier_uniform<Scalar>(d, 1, rng), "head.w");
  m.head_bias = Parameter<Scalar>(MatrixX<Scalar>::Zero(1, 1), "head.b");
  return m;
}

namespace {

// Shared body of the trainable and read-only forward passes; `leaf` turns a
// Parameter into a tape leaf.
template <typename Scalar, typename Model, typename Leaf>
Var<Scalar> forward_impl(Tape<Scalar>& tape, Model& model, std::span<const std::span<const std::int32_t>> sequences,
                         bool training, Rng& rng, Leaf leaf) {
  if (sequences.empty()) throw std::invalid_argument("forward: empty batch");
  std::vector<std::int32_t> ids;
  std::vector<Index> segments;
  segments.reserve(sequences.size());
  const Index vocab = model.vocab_size();
  for (const auto& seq : sequences) {
    if (static_cast<Index>(seq.size()) > model.max_len) {
      throw std::invalid_argument("forward: sequence of " + std::to_string(seq.size()) + " ids exceeds max_len " +
                                  std::to_string(model.max_len));
    }
    Index n = 0;
    for (std::int32_t id : seq) {
      if (id < 0 || id >= vocab) throw std::out_of_range("forward: token id " + std::to_string(id) + " out of range");
      if (id == Vocabulary::kPad) continue;
      ids.push_back(id);
      ++n;
    }
    if (n == 0) throw DataError("forward: token sequence has no non-PAD tokens");
    segments.push_back(n);
  }

  Var<Scalar> h = gather_rows(leaf(model.embedding), std::span<const std::int32_t>(ids));
  const bool enhanced = model.arch == Architecture::enhanced;
  if (enhanced) {
    MatrixX<Scalar> pe(h.rows(), h.cols());
    Index at = 0;
    for (Index len : segments) {
      pe.middleRows(at, len) = model.positional.topRows(len);
      at += len;
    }
    h = add(h, tape.constant(std::move(pe)));
  }
  for (auto& block : model.blocks) {
    const AttentionWeights<Scalar> w{leaf(block.wq), leaf(block.wk), leaf(block.wv), leaf(block.wo)};
    Var<Scalar> attended = multi_head_attention<Scalar>(h, w, model.heads, {}, nullptr, std::span<const Index>(segments));
    h = layer_norm(add(h, attended), leaf(block.ln_gain), leaf(block.ln_bias));
    if (enhanced) h = dropout(h, model.dropout_p, training, rng);
  }
  Var<Scalar> pooled = segment_mean_rows(h, std::span<const Index>(segments));
  return add_row(matmul(pooled, leaf(model.head_weight)), leaf(model.head_bias));
}

template <typename Scalar>
std::vector<std::size_t> scorable_indices(std::span<const LabeledSequence> data) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!data[i].ids.empty()) out.push_back(i);
  }
  return out;
}

}  // namespace

template <typename Scalar>
Var<Scalar> forward_batch(Tape<Scalar>& tape, BasicClassifierModel<Scalar>& model,
                          std::span<const std::span<const std::int32_t>> sequences, bool training, Rng& rng) {
  return forward_impl<Scalar>(tape, model, sequences, training, rng,
                              [&tape](Parameter<Scalar>& p) { return tape.parameter(p); });
}

template <typename Scalar>
Var<Scalar> forward(Tape<Scalar>& tape, BasicClassifierModel<Scalar>& model, std::span<const std::int32_t> ids,
                    bool training, Rng& rng) {
  const std::span<const std::int32_t> one[] = {ids};
  return forward_batch(tape, model, std::span<const std::span<const std::int32_t>>(one), training, rng);
}

template <typename Scalar>
std::vector<double> logits(const BasicClassifierModel<Scalar>& model,
                           std::span<const std::span<const std::int32_t>> sequences) {
  detail::FlushDenormals ftz;
  Tape<Scalar> tape;
  Rng unused;
  Var<Scalar> out = forward_impl<Scalar>(tape, model, sequences, false, unused,
                                         [&tape](const Parameter<Scalar>& p) { return tape.constant_ref(p.value); });
  std::vector<double> result(static_cast<std::size_t>(out.rows()));
  for (Index i = 0; i < out.rows(); ++i) result[static_cast<std::size_t>(i)] = static_cast<double>(out.value()(i, 0));
  return result;
}

template <typename Scalar>
double logit(const BasicClassifierModel<Scalar>& model, std::span<const std::int32_t> ids) {
  const std::span<const std::int32_t> one[] = {ids};
  return logits(model, std::span<const std::span<const std::int32_t>>(one)).front();
}

std::vector<LabeledSequence> encode_documents(std::span<const Document> docs, const Vocabulary& vocab, int max_len) {
  if (max_len < 1) throw std::invalid_argument("encode_documents: max_len must be positive");
  std::vector<LabeledSequence> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) {
    LabeledSequence s;
    s.ids = vocab.encode(doc.tokens);
    std::erase(s.ids, Vocabulary::kPad);
    if (s.ids.size() > static_cast<std::size_t>(max_len)) s.ids.resize(static_cast<std::size_t>(max_len));
    s.label = doc.label;
    out.push_back(std::move(s));
  }
  return out;
}

template <typename Scalar>
std::vector<Label> predict_labels(const BasicClassifierModel<Scalar>& model, std::span<const LabeledSequence> data,
                                  int batch_size) {
  if (batch_size < 1) throw std::invalid_argument("predict_labels: batch_size must be positive");
  std::vector<Label> out(data.size(), Label::NOT);
  const auto usable = scorable_indices<Scalar>(data);
  const std::size_t bs = static_cast<std::size_t>(batch_size);
  std::vector<std::span<const std::int32_t>> batch;
  for (std::size_t start = 0; start < usable.size(); start += bs) {
    const std::size_t end = std::min(usable.size(), start + bs);
    batch.clear();
    for (std::size_t i = start; i < end; ++i) batch.emplace_back(data[usable[i]].ids);
    const auto z = logits(model, std::span<const std::span<const std::int32_t>>(batch));
    for (std::size_t i = start; i < end; ++i) {
      out[usable[i]] = label_for_probability(sigmoid_scalar(z[i - start]));
    }
  }
  return out;
}

template <typename Scalar>
ClassificationScores evaluate(const BasicClassifierModel<Scalar>& model, std::span<const LabeledSequence> data,
                              int batch_size) {
  if (data.empty()) throw DataError("evaluate: empty evaluation set");
  const auto predicted = predict_labels(model, data, batch_size);
  std::vector<Label> truth;
  truth.reserve(data.size());
  for (const auto& s : data) truth.push_back(s.label);
  return score(predicted, truth);
}

template <typename Scalar>
TrainRunResult train_classifier(BasicClassifierModel<Scalar>& model, std::span<const LabeledSequence> train,
                                std::span<const LabeledSequence> eval, const ClassifierConfig& config,
                                std::uint64_t seed) {
  detail::FlushDenormals ftz;
  config.validate();
  const auto usable = scorable_indices<Scalar>(train);
  if (usable.empty()) throw DataError("train_classifier: no training sequence has tokens");
  if (eval.empty()) throw DataError("train_classifier: empty evaluation set");
  if (config.epochs > 0 && model.freeze.all_frozen()) {
    throw ConfigError("train_classifier: every parameter group is frozen");
  }
  model.set_freeze(model.freeze);

  TrainRunResult result;
  result.seed = seed;
  result.initial_eval = evaluate(model, eval);

  const Rng base(seed);
  auto params = model.parameters();
  const std::size_t bs = static_cast<std::size_t>(config.batch_size);
  std::vector<std::span<const std::int32_t>> batch;
  std::vector<int> targets;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    Rng rng = base.split(static_cast<std::uint64_t>(epoch));
    std::vector<std::size_t> order = usable;
    rng.shuffle(order.begin(), order.end());
    AdamConfig adam;
    adam.lr = exp_decay_lr(config.lr0, config.lr_gamma, epoch - 1);

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += bs) {
      const std::size_t end = std::min(order.size(), start + bs);
      batch.clear();
      targets.clear();
      for (std::size_t i = start; i < end; ++i) {
        const auto& s = train[order[i]];
        batch.emplace_back(s.ids);
        targets.push_back(binary_target(s.label));
      }
      for (auto* p : params) {
        if (!p->frozen) p->zero_grad();
      }
      Tape<Scalar> tape;
      Var<Scalar> z = forward_batch(tape, model, std::span<const std::span<const std::int32_t>>(batch), true, rng);
      Var<Scalar> loss = bce_with_logits(z, std::span<const int>(targets));
      const double l = static_cast<double>(loss.value()(0, 0));
      if (!std::isfinite(l)) {
        throw NumericalError("train_classifier: non-finite loss in epoch " + std::to_string(epoch));
      }
      tape.backward(loss);
      adam_step(std::span<Parameter<Scalar>* const>(params), adam);
      loss_sum += l * static_cast<double>(end - start);
    }

    EpochMetrics em;
    em.epoch = epoch;
    em.train_loss = loss_sum / static_cast<double>(order.size());
    if (config.track_train_metrics) em.train = evaluate(model, train);
    em.eval = evaluate(model, eval);
    result.epochs.push_back(em);
  }
  return result;
}

template <typename Scalar>
std::optional<ScoredPrediction> predict(const BasicClassifierModel<Scalar>& model, std::string_view text,
                                        const CleaningConfig& cleaning, const Vocabulary& vocab) {
  Document doc;
  doc.tokens = tokenize(clean_text(text, cleaning), cleaning);
  const auto encoded = encode_documents(std::span<const Document>(&doc, 1), vocab, model.max_len);
  if (encoded.front().ids.empty()) return std::nullopt;
  const double p = sigmoid_scalar(logit(model, encoded.front().ids));
  return ScoredPrediction{p, label_for_probability(p)};
}

#define LXT_INSTANTIATE_CLASSIFIER(S)                                                                          \
  template struct BasicClassifierModel<S>;                                                                     \
  template MatrixX<S> positional_encoding<S>(Index, Index);                                                    \
  template BasicClassifierModel<S> make_classifier<S>(const ClassifierConfig&, const MatrixX<S>&, Rng&);       \
  template Var<S> forward_batch<S>(Tape<S>&, BasicClassifierModel<S>&,                                         \
                                   std::span<const std::span<const std::int32_t>>, bool, Rng&);                \
  template Var<S> forward<S>(Tape<S>&, BasicClassifierModel<S>&, std::span<const std::int32_t>, bool, Rng&);   \
  template std::vector<double> logits<S>(const BasicClassifierModel<S>&,                                       \
                                         std::span<const std::span<const std::int32_t>>);                      \
  template double logit<S>(const BasicClassifierModel<S>&, std::span<const std::int32_t>);                     \
  template std::vector<Label> predict_labels<S>(const BasicClassifierModel<S>&, std::span<const LabeledSequence>, \
                                                int);                                                          \
  template ClassificationScores evaluate<S>(const BasicClassifierModel<S>&, std::span<const LabeledSequence>,  \
                                            int);                                                              \
  template TrainRunResult train_classifier<S>(BasicClassifierModel<S>&, std::span<const LabeledSequence>,      \
                                              std::span<const LabeledSequence>, const ClassifierConfig&,       \
                                              std::uint64_t);                                                  \
  template std::optional<ScoredPrediction> predict<S>(const BasicClassifierModel<S>&, std::string_view,        \
                                                      const CleaningConfig&, const Vocabulary&);

LXT_INSTANTIATE_CLASSIFIER(float)
LXT_INSTANTIATE_CLASSIFIER(double)

}  // namespace lxt
