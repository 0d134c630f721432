#ifndef LXT_TRANSFER_HPP_
#define LXT_TRANSFER_HPP_

#include "lxt/classifier.hpp"
#include "lxt/vocabulary.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>

namespace lxt {

/// no_fix trains everything, fix_non_embedding freezes blocks and head,
/// fix_embedding freezes the embedding.
enum class TransferMode { no_fix, fix_non_embedding, fix_embedding };

std::string to_string(TransferMode mode);
/// Throws ConfigError.
TransferMode parse_transfer_mode(std::string_view name);
FreezeMask freeze_mask_for(TransferMode mode);

/// New embedding rows drawn Xavier-uniform (fan_in = vocab size, fan_out = dim).
struct XavierFresh {};

/// Rows copied from a pretrained matrix by token; target tokens it lacks get Xavier rows.
struct PretrainedEmbedding {
  const Matrix* matrix = nullptr;
  const Vocabulary* vocab = nullptr;
};

using EmbeddingInit = std::variant<XavierFresh, PretrainedEmbedding>;

/// Copy of `source` with its embedding replaced by one sized to `target_vocab`.
/// Blocks and head are copied bit-exactly, every optimizer moment is reset and the
/// freeze mask is cleared. Throws ConfigError when a pretrained matrix has a
/// different dim than the source model.
ClassifierModel swap_embedding(const ClassifierModel& source, const Vocabulary& target_vocab,
                               const EmbeddingInit& init, std::uint64_t seed);

struct TransferResult {
  ClassifierModel model;
  TrainRunResult run;
  TransferMode mode = TransferMode::no_fix;
  std::string source_hash;
};

/// swap_embedding, freeze per `mode`, then train_classifier on the target data.
TransferResult transfer_train(const ClassifierModel& source, std::string source_hash, const Vocabulary& target_vocab,
                              const EmbeddingInit& init, std::span<const LabeledSequence> train,
                              std::span<const LabeledSequence> eval, TransferMode mode,
                              const ClassifierConfig& config, std::uint64_t seed);

}  // namespace lxt

#endif  // LXT_TRANSFER_HPP_
