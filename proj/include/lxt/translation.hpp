#ifndef LXT_TRANSLATION_HPP_
#define LXT_TRANSLATION_HPP_

#include "lxt/tensor.hpp"
#include "lxt/vocabulary.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lxt {

struct TranslationPair {
  std::string concept_name;  // gloss, e.g. an English word
  std::string source_word;
  std::string target_word;

  friend bool operator==(const TranslationPair&, const TranslationPair&) = default;
};

/// UTF-8 TSV with columns concept, source_word, target_word. A first line equal to
/// "concept\tsource_word\ttarget_word" is treated as a header. Blank lines and lines
/// starting with '#' are skipped. Throws DataError with file:line context.
std::vector<TranslationPair> load_pairs(const std::filesystem::path& path);
std::vector<TranslationPair> read_pairs(std::istream& in, const std::string& source_name);
/// Writes the header line followed by one row per pair.
void write_pairs(const std::filesystem::path& path, std::span<const TranslationPair> pairs);

/// 1 + the number of candidate rows whose cosine similarity to `query` exceeds that of
/// row `truth`, plus the rows with equal similarity and a smaller index.
/// Throws std::invalid_argument on dim mismatch and std::out_of_range for a bad row.
std::size_t cosine_rank(const Matrix& query_matrix, Index query_row, const Matrix& candidates, Index truth);

enum class RankDirection {
  source_to_target,  // query a source word, rank the target vocabulary
  target_to_source,
};

std::string to_string(RankDirection d);
/// Throws ConfigError.
RankDirection parse_rank_direction(std::string_view name);

struct PairRank {
  TranslationPair pair;
  std::optional<std::size_t> rank;  // absent when either word is out of vocabulary
  bool source_oov = false;
  bool target_oov = false;
};

struct RankReport {
  RankDirection direction = RankDirection::source_to_target;
  std::size_t candidates = 0;  // size of the ranked vocabulary
  std::vector<PairRank> pairs;
  std::optional<double> median_rank;  // over in-vocabulary pairs
  std::size_t rank1_count = 0;
  std::size_t oov_count = 0;
};

/// Ranks every pair; rows of each matrix are indexed by its vocabulary's ids.
/// Throws std::invalid_argument on dim mismatch or matrix/vocabulary size mismatch.
RankReport translation_rank(const Matrix& source, const Vocabulary& source_vocab, const Matrix& target,
                            const Vocabulary& target_vocab, std::span<const TranslationPair> pairs,
                            RankDirection direction = RankDirection::source_to_target);

/// Header concept,source_word,target_word,rank,status then a summary comment block.
void write_rank_tsv(std::ostream& out, const RankReport& report);
/// Aligned plain-text table with the summary underneath.
std::string format_rank_table(const RankReport& report);

}  // namespace lxt

#endif  // LXT_TRANSLATION_HPP_
