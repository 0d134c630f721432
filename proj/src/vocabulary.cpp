#include "lxt/vocabulary.hpp"

#include "lxt/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace lxt {

namespace {

// Digit count of a "<NUMd>" bin token, or 0.
int number_bin_digits(std::string_view t) {
  if (t.size() < 6 || !t.starts_with("<NUM") || t.back() != '>') return 0;
  auto digits = t.substr(4, t.size() - 5);
  if (digits.empty() || digits.size() > 9 || digits.front() == '0') return 0;
  int d = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') return 0;
    d = d * 10 + (c - '0');
  }
  return d;
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::vector<std::int64_t> counts,
                       std::size_t num_specials)
    : id_to_token_(std::move(tokens)), counts_(std::move(counts)), num_specials_(num_specials) {
  if (id_to_token_.size() != counts_.size()) throw DataError("vocabulary: token/count length mismatch");
  if (id_to_token_.size() < 2 || id_to_token_[0] != kPadToken || id_to_token_[1] != kUnkToken) {
    throw DataError("vocabulary: first entries must be <PAD> and <UNK>");
  }
  if (num_specials_ < 2 || num_specials_ > id_to_token_.size()) throw DataError("vocabulary: bad special count");
  token_to_id_.reserve(id_to_token_.size());
  for (std::size_t i = 0; i < id_to_token_.size(); ++i) {
    if (!token_to_id_.emplace(id_to_token_[i], static_cast<std::int32_t>(i)).second) {
      throw DataError("vocabulary: duplicate token '" + id_to_token_[i] + "'");
    }
  }
}

bool Vocabulary::contains(std::string_view token) const { return token_to_id_.find(token) != token_to_id_.end(); }

std::int32_t Vocabulary::id(std::string_view token) const {
  auto it = token_to_id_.find(token);
  return it == token_to_id_.end() ? kUnk : it->second;
}

std::int64_t Vocabulary::total_count() const { return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0}); }

std::vector<std::int32_t> Vocabulary::encode(std::span<const std::string> tokens) const {
  std::vector<std::int32_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(id(t));
  return ids;
}

Vocabulary build_vocab(std::span<const Document> docs, std::int64_t min_count) {
  if (min_count < 1) throw std::invalid_argument("build_vocab: min_count must be >= 1");
  std::map<std::string, std::int64_t, std::less<>> freq;
  std::int64_t total = 0;
  for (const auto& d : docs) {
    for (const auto& t : d.tokens) {
      ++freq[t];
      ++total;
    }
  }
  if (total == 0) throw DataError("build_vocab: empty corpus");

  std::vector<std::pair<int, std::string>> bins;
  std::vector<std::pair<std::string, std::int64_t>> regular;
  std::int64_t unk = 0;
  for (const auto& [token, count] : freq) {
    if (token == kPadToken || token == kUnkToken) {
      unk += count;
    } else if (int d = number_bin_digits(token)) {
      bins.emplace_back(d, token);
    } else if (count >= min_count) {
      regular.emplace_back(token, count);
    } else {
      unk += count;
    }
  }
  std::sort(bins.begin(), bins.end());
  std::stable_sort(regular.begin(), regular.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<std::string> tokens{std::string(kPadToken), std::string(kUnkToken)};
  std::vector<std::int64_t> counts{0, unk};
  for (const auto& [d, token] : bins) {
    tokens.push_back(token);
    counts.push_back(freq.find(token)->second);
  }
  const std::size_t specials = tokens.size();
  for (auto& [token, count] : regular) {
    tokens.push_back(std::move(token));
    counts.push_back(count);
  }
  return Vocabulary(std::move(tokens), std::move(counts), specials);
}

void save_vocab(const std::filesystem::path& dir, const Vocabulary& vocab, const std::string& file_name) {
  std::ofstream tokens(dir / file_name, std::ios::binary);
  std::ofstream counts(dir / (std::filesystem::path(file_name).stem().string() + ".counts"), std::ios::binary);
  if (!tokens || !counts) throw DataError("cannot write vocabulary into " + dir.string());
  counts << "specials\t" << vocab.num_specials() << '\n';
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    tokens << vocab.tokens()[i] << '\n';
    counts << vocab.counts()[i] << '\n';
  }
}

Vocabulary load_vocab(const std::filesystem::path& dir, const std::string& file_name) {
  const auto token_path = dir / file_name;
  const auto count_path = dir / (std::filesystem::path(file_name).stem().string() + ".counts");
  std::ifstream tokens_in(token_path);
  std::ifstream counts_in(count_path);
  if (!tokens_in) throw DataError("cannot open " + token_path.string());
  if (!counts_in) throw DataError("cannot open " + count_path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(tokens_in, line)) tokens.push_back(line);
  std::vector<std::int64_t> counts;
  std::size_t specials = 0;
  if (!std::getline(counts_in, line) || std::sscanf(line.c_str(), "specials\t%zu", &specials) != 1) {
    throw DataError(count_path.string() + ": missing specials header");
  }
  while (std::getline(counts_in, line)) {
    try {
      counts.push_back(std::stoll(line));
    } catch (const std::exception&) {
      throw DataError(count_path.string() + ": bad count '" + line + "'");
    }
  }
  return Vocabulary(std::move(tokens), std::move(counts), specials);
}

CorpusStats corpus_stats(std::span<const Document> docs, const Vocabulary& vocab) {
  CorpusStats s;
  s.num_texts = docs.size();
  std::size_t hof = 0;
  for (const auto& d : docs) {
    s.total_tokens += static_cast<std::int64_t>(d.tokens.size());
    if (d.label == Label::HOF) ++hof;
  }
  s.vocab_size = static_cast<std::size_t>(
      std::count_if(vocab.counts().begin(), vocab.counts().end(), [](std::int64_t c) { return c > 0; }));
  if (s.num_texts > 0) {
    s.avg_tokens_per_text = static_cast<double>(s.total_tokens) / static_cast<double>(s.num_texts);
    s.hate_proportion = static_cast<double>(hof) / static_cast<double>(s.num_texts);
  }
  if (s.vocab_size > 0) {
    s.avg_occurrences_per_token = static_cast<double>(s.total_tokens) / static_cast<double>(s.vocab_size);
  }
  return s;
}

std::string format_stats(const CorpusStats& s) {
  std::ostringstream out;
  out.precision(6);
  out << "num_texts=" << s.num_texts << '\n'
      << "avg_tokens_per_text=" << s.avg_tokens_per_text << '\n'
      << "vocab_size=" << s.vocab_size << '\n'
      << "avg_occurrences_per_token=" << s.avg_occurrences_per_token << '\n'
      << "hate_proportion=" << s.hate_proportion << '\n'
      << "total_tokens=" << s.total_tokens << '\n';
  return out.str();
}

}  // namespace lxt
