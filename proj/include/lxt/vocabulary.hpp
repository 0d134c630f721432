#ifndef LXT_VOCABULARY_HPP_
#define LXT_VOCABULARY_HPP_

#include "lxt/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lxt {

inline constexpr std::string_view kPadToken = "<PAD>";
inline constexpr std::string_view kUnkToken = "<UNK>";

/// Bidirectional token <-> id map with occurrence counts.
///
/// Specials take the lowest ids: PAD = 0, UNK = 1, then every "<NUMd>" bin that
/// occurs in the corpus, ordered by digit count. Regular tokens follow by
/// descending count, ties broken by byte-wise token order. UNK counts the
/// occurrences of tokens pruned by min_count.
class Vocabulary {
 public:
  static constexpr std::int32_t kPad = 0;
  static constexpr std::int32_t kUnk = 1;

  Vocabulary() = default;
  /// Rebuilds from an explicit id order (persistence). Throws DataError on duplicates
  /// or when the first two tokens are not PAD and UNK.
  Vocabulary(std::vector<std::string> tokens, std::vector<std::int64_t> counts, std::size_t num_specials);

  std::size_t size() const { return id_to_token_.size(); }
  std::size_t num_specials() const { return num_specials_; }
  bool contains(std::string_view token) const;
  /// Id of `token`, or kUnk.
  std::int32_t id(std::string_view token) const;
  const std::string& token(std::int32_t id) const { return id_to_token_.at(static_cast<std::size_t>(id)); }
  std::int64_t count(std::int32_t id) const { return counts_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& tokens() const { return id_to_token_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  std::int64_t total_count() const;

  std::vector<std::int32_t> encode(std::span<const std::string> tokens) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.id_to_token_ == b.id_to_token_ && a.counts_ == b.counts_ && a.num_specials_ == b.num_specials_;
  }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::vector<std::string> id_to_token_;
  std::vector<std::int64_t> counts_;
  std::unordered_map<std::string, std::int32_t, Hash, std::equal_to<>> token_to_id_;
  std::size_t num_specials_ = 0;
};

/// Throws DataError when docs contain no tokens at all.
Vocabulary build_vocab(std::span<const Document> docs, std::int64_t min_count = 1);

/// "vocab.txt" (one token per line, id = line number) plus "vocab.counts".
void save_vocab(const std::filesystem::path& dir, const Vocabulary& vocab, const std::string& file_name = "vocab.txt");
Vocabulary load_vocab(const std::filesystem::path& dir, const std::string& file_name = "vocab.txt");

struct CorpusStats {
  std::size_t num_texts = 0;
  double avg_tokens_per_text = 0.0;
  std::size_t vocab_size = 0;
  double avg_occurrences_per_token = 0.0;
  double hate_proportion = 0.0;
  std::int64_t total_tokens = 0;
};

/// vocab_size counts vocabulary entries that occur at least once (PAD never does).
CorpusStats corpus_stats(std::span<const Document> docs, const Vocabulary& vocab);

/// key=value lines.
std::string format_stats(const CorpusStats& stats);

}  // namespace lxt

#endif  // LXT_VOCABULARY_HPP_
