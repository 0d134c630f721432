#ifndef LXT_CLASSIFIER_HPP_
#define LXT_CLASSIFIER_HPP_

#include "lxt/autodiff.hpp"
#include "lxt/corpus.hpp"
#include "lxt/label.hpp"
#include "lxt/metrics.hpp"
#include "lxt/rng.hpp"
#include "lxt/text.hpp"
#include "lxt/vocabulary.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lxt {

enum class Architecture { baseline, enhanced };

std::string to_string(Architecture arch);
/// Throws ConfigError.
Architecture parse_architecture(std::string_view name);

enum class ParamGroup { embedding, blocks, head };

inline constexpr std::array<ParamGroup, 3> kParamGroups = {ParamGroup::embedding, ParamGroup::blocks,
                                                           ParamGroup::head};

std::string to_string(ParamGroup group);
/// Throws ConfigError.
ParamGroup parse_param_group(std::string_view name);

/// Parameter groups excluded from optimizer updates.
struct FreezeMask {
  bool embedding = false;
  bool blocks = false;
  bool head = false;

  bool frozen(ParamGroup g) const;
  void set(ParamGroup g, bool value);
  bool all_frozen() const { return embedding && blocks && head; }
  std::vector<std::string> names() const;
  static FreezeMask from_names(std::span<const std::string> names);

  friend bool operator==(const FreezeMask&, const FreezeMask&) = default;
};

struct ClassifierConfig {
  Architecture arch = Architecture::enhanced;
  int num_blocks = 2;
  int heads = 6;
  double dropout_p = 0.7;
  int max_len = 64;  // longer sequences are truncated
  double lr0 = 1e-3;
  double lr_gamma = 0.95;
  int epochs = 15;
  int batch_size = 32;
  bool track_train_metrics = true;

  /// One attention layer with shortcut and layer norm; no positional encoding or dropout.
  static ClassifierConfig baseline();
  static ClassifierConfig enhanced();
  /// Throws ConfigError.
  void validate() const;
  /// Throws ConfigError when `dim` is not divisible by heads (or is odd for the enhanced arch).
  void validate_for_dim(Index dim) const;

  friend bool operator==(const ClassifierConfig&, const ClassifierConfig&) = default;
};

template <typename Scalar>
struct EncoderBlock {
  Parameter<Scalar> wq, wk, wv, wo;
  Parameter<Scalar> ln_gain, ln_bias;
};

template <typename Scalar>
struct BasicClassifierModel {
  using Matrix = MatrixX<Scalar>;

  Architecture arch = Architecture::enhanced;
  int heads = 6;
  double dropout_p = 0.0;
  int max_len = 64;
  Parameter<Scalar> embedding;  // V x d
  Matrix positional;            // max_len x d; empty for the baseline
  std::vector<EncoderBlock<Scalar>> blocks;
  Parameter<Scalar> head_weight;  // d x 1
  Parameter<Scalar> head_bias;    // 1 x 1
  FreezeMask freeze;

  Index dim() const { return embedding.value.cols(); }
  Index vocab_size() const { return embedding.value.rows(); }

  /// Stable order: embedding, then per block wq wk wv wo ln_gain ln_bias, then head weight and bias.
  std::vector<Parameter<Scalar>*> parameters();
  std::vector<const Parameter<Scalar>*> parameters() const;
  std::vector<Parameter<Scalar>*> parameters(ParamGroup group);
  std::vector<const Parameter<Scalar>*> parameters(ParamGroup group) const;

  /// Stores the mask and sets each parameter's frozen flag accordingly.
  void set_freeze(const FreezeMask& mask);
  /// Zeroes Adam moments and step counts of every parameter.
  void reset_optimizer_state();
};

using ClassifierModel = BasicClassifierModel<float>;

/// PE[pos, 2i] = sin(pos / 10000^(2i/dim)), PE[pos, 2i+1] = cos(same). Throws
/// std::invalid_argument on odd dim.
template <typename Scalar>
MatrixX<Scalar> positional_encoding(Index max_len, Index dim);

/// Fresh model around a copy of `embedding`. Attention and head weights are
/// Xavier-uniform, layer-norm gain 1 and bias 0, head bias 0.
template <typename Scalar>
BasicClassifierModel<Scalar> make_classifier(const ClassifierConfig& config, const MatrixX<Scalar>& embedding,
                                             Rng& rng);

/// Logits [B x 1] for a batch of token-id sequences. PAD ids are dropped before
/// encoding, so padding never influences the result. Parameters enter the tape
/// as trainable leaves (frozen ones as constants). Dropout is active only when
/// `training` is set and the architecture is enhanced.
/// Throws DataError for a sequence without non-PAD tokens and std::invalid_argument
/// for one longer than max_len.
template <typename Scalar>
Var<Scalar> forward_batch(Tape<Scalar>& tape, BasicClassifierModel<Scalar>& model,
                          std::span<const std::span<const std::int32_t>> sequences, bool training, Rng& rng);

/// Single-sequence forward; returns a 1 x 1 logit.
template <typename Scalar>
Var<Scalar> forward(Tape<Scalar>& tape, BasicClassifierModel<Scalar>& model, std::span<const std::int32_t> ids,
                    bool training, Rng& rng);

/// Inference logits. Reads the model without modifying it; safe for concurrent callers.
template <typename Scalar>
std::vector<double> logits(const BasicClassifierModel<Scalar>& model,
                           std::span<const std::span<const std::int32_t>> sequences);
template <typename Scalar>
double logit(const BasicClassifierModel<Scalar>& model, std::span<const std::int32_t> ids);

struct LabeledSequence {
  std::vector<std::int32_t> ids;  // empty when nothing survived cleaning
  Label label = Label::NOT;
};

/// Encodes each document and truncates it to max_len ids.
std::vector<LabeledSequence> encode_documents(std::span<const Document> docs, const Vocabulary& vocab,
                                              int max_len);

/// HOF iff sigmoid(logit) > 0.5 (logit 0 is NOT). Empty sequences are predicted NOT.
template <typename Scalar>
std::vector<Label> predict_labels(const BasicClassifierModel<Scalar>& model, std::span<const LabeledSequence> data,
                                  int batch_size = 64);

template <typename Scalar>
ClassificationScores evaluate(const BasicClassifierModel<Scalar>& model, std::span<const LabeledSequence> data,
                              int batch_size = 64);

/// Minibatch Adam with lr0 * gamma^(epoch - 1), binary cross-entropy on logits.
/// Sequences without tokens are skipped. Frozen groups stay bit-identical.
/// Evaluates `eval` before training and after every epoch.
/// Throws DataError (no trainable sequences, empty eval set), ConfigError (every
/// group frozen while epochs > 0) and NumericalError (non-finite loss).
template <typename Scalar>
TrainRunResult train_classifier(BasicClassifierModel<Scalar>& model, std::span<const LabeledSequence> train,
                                std::span<const LabeledSequence> eval, const ClassifierConfig& config,
                                std::uint64_t seed);

struct ScoredPrediction {
  double probability = 0.0;
  Label label = Label::NOT;
};

/// Cleans, tokenizes and scores one raw text. std::nullopt means unscorable
/// (no tokens left after cleaning).
template <typename Scalar>
std::optional<ScoredPrediction> predict(const BasicClassifierModel<Scalar>& model, std::string_view text,
                                        const CleaningConfig& cleaning, const Vocabulary& vocab);

/// Label decision for a probability: HOF iff p > 0.5.
inline Label label_for_probability(double p) { return p > 0.5 ? Label::HOF : Label::NOT; }

}  // namespace lxt

#endif  // LXT_CLASSIFIER_HPP_
