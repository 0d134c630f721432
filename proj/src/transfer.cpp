#include "lxt/transfer.hpp"

#include "lxt/errors.hpp"
#include "lxt/optim.hpp"

namespace lxt {

namespace {

constexpr std::uint64_t kSwapStream = 0x5a1;

}  // namespace

std::string to_string(TransferMode mode) {
  switch (mode) {
    case TransferMode::no_fix: return "no_fix";
    case TransferMode::fix_non_embedding: return "fix_non_embedding";
    case TransferMode::fix_embedding: return "fix_embedding";
  }
  return "?";
}

TransferMode parse_transfer_mode(std::string_view name) {
  for (auto m : {TransferMode::no_fix, TransferMode::fix_non_embedding, TransferMode::fix_embedding}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown transfer mode '" + std::string(name) +
                    "' (expected no_fix, fix_non_embedding or fix_embedding)");
}

FreezeMask freeze_mask_for(TransferMode mode) {
  FreezeMask m;
  if (mode == TransferMode::fix_non_embedding) {
    m.blocks = true;
    m.head = true;
  } else if (mode == TransferMode::fix_embedding) {
    m.embedding = true;
  }
  return m;
}

ClassifierModel swap_embedding(const ClassifierModel& source, const Vocabulary& target_vocab,
                               const EmbeddingInit& init, std::uint64_t seed) {
  const Index dim = source.dim();
  const Index rows = static_cast<Index>(target_vocab.size());
  if (rows == 0) throw DataError("swap_embedding: empty target vocabulary");
  Rng rng = Rng(seed).split(kSwapStream);
  Matrix embedding = xavier_uniform<float>(rows, dim, rng);
  if (const auto* pre = std::get_if<PretrainedEmbedding>(&init)) {
    if (pre->matrix == nullptr || pre->vocab == nullptr) {
      throw std::invalid_argument("swap_embedding: pretrained embedding without matrix or vocabulary");
    }
    if (pre->matrix->cols() != dim) {
      throw ConfigError("swap_embedding: pretrained embedding dim " + std::to_string(pre->matrix->cols()) +
                        " does not match classifier dim " + std::to_string(dim));
    }
    if (static_cast<std::size_t>(pre->matrix->rows()) != pre->vocab->size()) {
      throw DataError("swap_embedding: pretrained matrix rows do not match its vocabulary");
    }
    for (Index i = 0; i < rows; ++i) {
      const auto& token = target_vocab.token(static_cast<std::int32_t>(i));
      if (pre->vocab->contains(token)) embedding.row(i) = pre->matrix->row(pre->vocab->id(token));
    }
  }

  ClassifierModel out = source;
  out.embedding = Parameter<float>(std::move(embedding), source.embedding.name);
  out.reset_optimizer_state();
  for (auto* p : out.parameters()) p->zero_grad();
  out.set_freeze(FreezeMask{});
  return out;
}

TransferResult transfer_train(const ClassifierModel& source, std::string source_hash, const Vocabulary& target_vocab,
                              const EmbeddingInit& init, std::span<const LabeledSequence> train,
                              std::span<const LabeledSequence> eval, TransferMode mode,
                              const ClassifierConfig& config, std::uint64_t seed) {
  TransferResult result;
  result.mode = mode;
  result.source_hash = std::move(source_hash);
  result.model = swap_embedding(source, target_vocab, init, seed);
  result.model.set_freeze(freeze_mask_for(mode));
  result.run = train_classifier(result.model, train, eval, config, seed);
  return result;
}

}  // namespace lxt
