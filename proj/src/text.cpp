#include "lxt/text.hpp"

#include "lxt/errors.hpp"
#include "lxt/label.hpp"

#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cctype>
#include <fstream>

namespace lxt {

std::optional<Label> parse_label(std::string_view s) {
  std::string upper(s);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "HOF") return Label::HOF;
  if (upper == "NOT") return Label::NOT;
  return std::nullopt;
}

namespace {

struct CodePoint {
  char32_t value;
  std::string_view bytes;
};

// Decodes UTF-8; ill-formed sequences are skipped.
std::vector<CodePoint> decode(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  const int32_t len = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < len) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(p, i, len, c);
    if (c < 0) continue;
    out.push_back({static_cast<char32_t>(c), s.substr(static_cast<std::size_t>(start),
                                                       static_cast<std::size_t>(i - start))});
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t n = 0;
  UBool error = false;
  U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(cp), error);
  if (!error) out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

bool is_separator(char32_t cp) {
  const auto c = static_cast<UChar32>(cp);
  return u_isUWhiteSpace(c) || u_charType(c) == U_CONTROL_CHAR;
}

std::vector<std::vector<CodePoint>> split_tokens(std::string_view s) {
  std::vector<std::vector<CodePoint>> tokens;
  std::vector<CodePoint> current;
  for (const auto& cp : decode(s)) {
    if (is_separator(cp.value)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(cp);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

bool starts_with_ascii_ci(const std::vector<CodePoint>& token, std::string_view prefix) {
  if (token.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char32_t c = token[i].value;
    if (c >= 'A' && c <= 'Z') c = c - 'A' + 'a';
    if (c != static_cast<char32_t>(prefix[i])) return false;
  }
  return true;
}

bool is_url(const std::vector<CodePoint>& token) {
  return starts_with_ascii_ci(token, "http://") || starts_with_ascii_ci(token, "https://") ||
         starts_with_ascii_ci(token, "www.");
}

bool is_latin(char32_t cp) {
  UErrorCode err = U_ZERO_ERROR;
  return uscript_getScript(static_cast<UChar32>(cp), &err) == USCRIPT_LATIN && U_SUCCESS(err);
}

}  // namespace

bool is_punctuation(char32_t cp) {
  if (cp < 0x80) {
    return cp > 0x20 && cp < 0x7f && !std::isalnum(static_cast<unsigned char>(cp));
  }
  return (U_GET_GC_MASK(static_cast<UChar32>(cp)) & U_GC_P_MASK) != 0;
}

CleaningConfig CleaningConfig::baseline() {
  CleaningConfig c;
  c.strip_mentions = true;
  c.strip_urls = false;
  c.strip_punctuation = true;
  c.lowercase_latin = true;
  c.keep_hashtags = true;
  c.drop_stopwords = true;
  c.bin_numbers = false;
  return c;
}

CleaningConfig CleaningConfig::enhanced() {
  CleaningConfig c = baseline();
  c.strip_urls = true;
  c.bin_numbers = true;
  return c;
}

std::string clean_text(std::string_view raw, const CleaningConfig& config) {
  std::string out;
  out.reserve(raw.size());
  for (const auto& token : split_tokens(raw)) {
    if (config.strip_mentions && token.front().value == U'@') continue;
    if (config.strip_urls && is_url(token)) continue;

    // A hashtag needs something other than punctuation after the '#'; its body is kept intact.
    const bool hashtag = config.keep_hashtags && token.front().value == U'#' &&
                         std::any_of(token.begin() + 1, token.end(),
                                     [](const CodePoint& c) { return !is_punctuation(c.value); });
    std::string cleaned;
    for (std::size_t i = 0; i < token.size(); ++i) {
      char32_t cp = token[i].value;
      if (config.strip_punctuation && !hashtag && is_punctuation(cp)) continue;
      if (config.lowercase_latin && is_latin(cp)) {
        cp = static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
        append_utf8(cleaned, cp);
      } else {
        cleaned.append(token[i].bytes);
      }
    }
    if (cleaned.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += cleaned;
  }
  return out;
}

std::string bin_number_token(std::string_view token) {
  if (token.empty()) return std::string(token);
  if (!std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return std::string(token);
  }
  if (token == "0" || token == "1" || token == "2") return std::string(token);
  return "<NUM" + std::to_string(token.size()) + ">";
}

std::vector<std::string> tokenize(std::string_view cleaned, const CleaningConfig& config) {
  std::vector<std::string> out;
  for (const auto& token : split_tokens(cleaned)) {
    std::string text;
    for (const auto& cp : token) text.append(cp.bytes);
    if (config.bin_numbers) text = bin_number_token(text);
    if (config.drop_stopwords && config.stopword_list.contains(text)) continue;
    out.push_back(std::move(text));
  }
  return out;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stopword file " + path.string());
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    for (auto& t : split_tokens(line)) {
      std::string w;
      for (const auto& cp : t) w.append(cp.bytes);
      words.insert(std::move(w));
    }
  }
  return words;
}

}  // namespace lxt
