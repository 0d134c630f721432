#ifndef LXT_EMBEDDINGS_HPP_
#define LXT_EMBEDDINGS_HPP_

#include "lxt/autodiff.hpp"
#include "lxt/optim.hpp"
#include "lxt/rng.hpp"
#include "lxt/vocabulary.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace lxt {

enum class EmbeddingMode { baseline_softmax, sgns };

/// Subsampling threshold that keeps every occurrence.
inline constexpr double kNoSubsampling = std::numeric_limits<double>::infinity();

struct EmbeddingConfig {
  int dim = 300;
  int window = 5;
  int neg_ratio = 10;
  double subsample_t = 1e-5;
  double noise_power = 0.75;
  double lr0 = 0.025;
  double lr_gamma = 0.9;
  int epochs = 5;
  int batch_size = 256;
  EmbeddingMode mode = EmbeddingMode::sgns;

  /// Full-softmax skip-gram, window 10.
  static EmbeddingConfig baseline();
  /// Negative sampling, window 5, 10 negatives, unigram^0.75 noise.
  static EmbeddingConfig enhanced();
  /// Throws ConfigError.
  void validate() const;

  friend bool operator==(const EmbeddingConfig&, const EmbeddingConfig&) = default;
};

/// Sampling distribution over vocabulary ids proportional to count^power. PAD has probability 0.
class NoiseTable {
 public:
  NoiseTable(std::vector<double> probabilities);

  const std::vector<double>& probabilities() const { return probabilities_; }
  std::int32_t sample(Rng& rng) const;

 private:
  std::vector<double> probabilities_;
  std::vector<double> cumulative_;
};

/// Throws DataError when every non-PAD count is zero.
NoiseTable build_noise_table(const Vocabulary& vocab, double power);

/// min(1, sqrt(t / freq)); t must be positive (kNoSubsampling keeps everything).
double subsample_keep_prob(double freq, double t);

using IdPair = std::pair<std::int32_t, std::int32_t>;

/// Subsamples the id stream (one Bernoulli draw per occurrence whose keep
/// probability is below 1), then pairs every surviving position with every other
/// surviving position at most `window` away.
std::vector<IdPair> generate_pairs(std::span<const std::int32_t> ids, int window, const Vocabulary& vocab,
                                   Rng& rng, double subsample_t);
std::vector<IdPair> generate_pairs(const Document& doc, int window, const Vocabulary& vocab, Rng& rng,
                                   double subsample_t);

template <typename Scalar>
struct BasicSkipGramModel {
  Parameter<Scalar> center;
  Parameter<Scalar> context;
};
using SkipGramModel = BasicSkipGramModel<float>;

/// Xavier for sgns, uniform +-0.5/dim for the softmax baseline.
template <typename Scalar>
BasicSkipGramModel<Scalar> init_skipgram(std::size_t vocab_size, const EmbeddingConfig& config, Rng& rng);

/// Mean over the B pairs of -log s(c.x) - sum_j log s(-c.n_j).
/// center and context are B x d; negatives holds the k rows of pair b at b*k .. b*k+k-1.
template <typename Scalar>
Var<Scalar> sgns_loss(Var<Scalar> center, Var<Scalar> context, Var<Scalar> negatives);

/// Full-softmax skip-gram loss: cross entropy of center[c] . context^T against c's context id.
template <typename Scalar>
Var<Scalar> baseline_loss(Tape<Scalar>& tape, BasicSkipGramModel<Scalar>& model,
                          std::span<const std::int32_t> center_ids, std::span<const std::int32_t> context_ids);

/// One Adam update on the baseline objective; returns the loss before the update.
template <typename Scalar>
double baseline_step(BasicSkipGramModel<Scalar>& model, std::span<const std::int32_t> center_ids,
                     std::span<const std::int32_t> context_ids, const AdamConfig& adam);

struct EmbeddingTrainLog {
  std::vector<double> epoch_loss;
  std::vector<std::size_t> epoch_pairs;
};

struct EmbeddingResult {
  SkipGramModel model;
  EmbeddingTrainLog log;
};

/// Trains from a fresh initialization. Deterministic for a given seed.
EmbeddingResult train_embeddings(std::span<const Document> docs, const Vocabulary& vocab,
                                 const EmbeddingConfig& config, std::uint64_t seed);
/// Continues training `model` in place (frozen parameters are left untouched).
EmbeddingTrainLog train_embeddings(SkipGramModel& model, std::span<const Document> docs, const Vocabulary& vocab,
                                   const EmbeddingConfig& config, std::uint64_t seed);

/// Cosine similarity; 0 when either vector is zero.
template <typename DerivedA, typename DerivedB>
double cosine_similarity(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  const double na = a.template cast<double>().norm();
  const double nb = b.template cast<double>().norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.template cast<double>().dot(b.template cast<double>()) / (na * nb);
}

/// The k rows most cosine-similar to row word_id, most similar first, ties by lower id.
std::vector<std::int32_t> nearest_neighbors(const Matrix& matrix, std::int32_t word_id, std::size_t k);

}  // namespace lxt

#endif  // LXT_EMBEDDINGS_HPP_
