#ifndef LXT_SYNTHDATA_HPP_
#define LXT_SYNTHDATA_HPP_

#include "lxt/corpus.hpp"
#include "lxt/translation.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lxt {

/// Parameters of the two-language synthetic corpus. Surface forms are lowercase
/// ASCII letters so that cleaning leaves them intact.
struct SynthConfig {
  int vocab_size = 200;  // background tokens per language
  int num_topics = 2;
  double topic_purity = 0.9;  // chance a background token comes from the text's topic
  int num_train = 4665;
  int num_test = 1318;
  int min_length = 8;
  int max_length = 20;
  int toxic_lexicon_size = 20;
  double toxic_insert_prob = 0.15;  // per position, HOF texts only; at least one is forced
  double hate_proportion = 0.5;
  std::uint64_t seed = 1;
  std::string prefix_a = "ha";
  std::string prefix_b = "be";

  /// Throws ConfigError for infeasible settings.
  void validate() const;

  friend bool operator==(const SynthConfig&, const SynthConfig&) = default;
};

struct SynthLanguage {
  std::vector<RawRecord> train;
  std::vector<RawRecord> test;
  std::vector<std::string> background;  // index -> surface form
  std::vector<std::string> toxic;
};

struct SynthCorpus {
  SynthLanguage a;
  SynthLanguage b;
  /// a.background[i] and b.background[map_background[i]] name the same concept.
  std::vector<int> map_background;
  std::vector<int> map_toxic;
  /// Topic block of background index i (contiguous blocks).
  std::vector<int> topic_of;

  /// Every token pair of the bijection, background then toxic, concept = language-A word.
  std::vector<TranslationPair> bijection() const;
  /// Applies the bijection token by token to a language-A text.
  std::string translate(const std::string& text_a) const;
};

/// Exactly round(n * hate_proportion) HOF texts per split. HOF texts hold at least
/// one toxic token, NOT texts none. Language B is language A mapped through a seeded
/// bijection, record by record. Deterministic in the config.
SynthCorpus generate_corpus(const SynthConfig& config);

/// a_train.tsv, a_test.tsv, b_train.tsv, b_test.tsv, bijection.tsv and topics.tsv
/// (token, topic index or "toxic").
void write_corpus(const std::filesystem::path& dir, const SynthCorpus& corpus);

/// Language-A token surface forms: prefix + 'w' or 't' + base-26 letters of the index.
std::string synth_token(const std::string& prefix, bool toxic, int index);

}  // namespace lxt

#endif  // LXT_SYNTHDATA_HPP_
