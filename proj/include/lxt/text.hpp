#ifndef LXT_TEXT_HPP_
#define LXT_TEXT_HPP_

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lxt {

struct CleaningConfig {
  bool strip_mentions = true;
  bool strip_urls = false;
  bool strip_punctuation = true;
  bool lowercase_latin = true;
  bool keep_hashtags = true;
  bool drop_stopwords = true;
  bool bin_numbers = false;
  std::set<std::string> stopword_list;

  static CleaningConfig baseline();
  /// baseline plus URL removal and number binning.
  static CleaningConfig enhanced();

  friend bool operator==(const CleaningConfig&, const CleaningConfig&) = default;
};

/// Removes mentions, URLs and punctuation, folds Latin case, and joins the
/// surviving whitespace-separated tokens with single spaces. Idempotent.
std::string clean_text(std::string_view raw, const CleaningConfig& config);

/// "0", "1", "2" pass through; any other all-ASCII-digit token of length d
/// becomes "<NUMd>"; everything else is unchanged.
std::string bin_number_token(std::string_view token);

/// Splits on runs of Unicode whitespace, bins numbers (if enabled), then drops
/// stopwords (if enabled).
std::vector<std::string> tokenize(std::string_view cleaned, const CleaningConfig& config);

/// One token per line, UTF-8; blank lines and surrounding whitespace ignored.
std::set<std::string> load_stopwords(const std::filesystem::path& path);

/// True for Unicode punctuation (P*) and ASCII symbols.
bool is_punctuation(char32_t cp);

}  // namespace lxt

#endif  // LXT_TEXT_HPP_
