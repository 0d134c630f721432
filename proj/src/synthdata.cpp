#include "lxt/synthdata.hpp"

#include "lxt/errors.hpp"
#include "lxt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_map>

namespace lxt {

namespace {

constexpr std::uint64_t kBijectionStream = 0xb1;
constexpr std::uint64_t kTrainStream = 0x7a;
constexpr std::uint64_t kTestStream = 0x7e;

bool lowercase_letters(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

std::vector<int> permutation(int n, Rng& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  rng.shuffle(p.begin(), p.end());
  return p;
}

struct TokenStream {
  std::vector<std::pair<bool, int>> tokens;  // (toxic, index)
  Label label = Label::NOT;
};

std::vector<TokenStream> generate_split(const SynthConfig& c, int count, Rng rng) {
  const auto hof = static_cast<std::size_t>(std::llround(static_cast<double>(count) * c.hate_proportion));
  std::vector<Label> labels(static_cast<std::size_t>(count), Label::NOT);
  std::fill_n(labels.begin(), hof, Label::HOF);
  rng.shuffle(labels.begin(), labels.end());

  std::vector<TokenStream> out;
  out.reserve(labels.size());
  for (Label label : labels) {
    TokenStream s;
    s.label = label;
    const int length = c.min_length + static_cast<int>(rng.uniform_int(
                                          static_cast<std::uint64_t>(c.max_length - c.min_length + 1)));
    const int topic = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(c.num_topics)));
    const int block_begin = topic * c.vocab_size / c.num_topics;
    const int block_end = (topic + 1) * c.vocab_size / c.num_topics;
    bool has_toxic = false;
    for (int i = 0; i < length; ++i) {
      if (label == Label::HOF && rng.bernoulli(c.toxic_insert_prob)) {
        s.tokens.emplace_back(true, static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(c.toxic_lexicon_size))));
        has_toxic = true;
      } else if (rng.bernoulli(c.topic_purity)) {
        s.tokens.emplace_back(false, block_begin + static_cast<int>(rng.uniform_int(
                                                       static_cast<std::uint64_t>(block_end - block_begin))));
      } else {
        s.tokens.emplace_back(false, static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(c.vocab_size))));
      }
    }
    if (label == Label::HOF && !has_toxic) {
      const auto pos = rng.uniform_int(static_cast<std::uint64_t>(length));
      s.tokens[pos] = {true, static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(c.toxic_lexicon_size)))};
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string render(const TokenStream& s, const std::vector<std::string>& background,
                   const std::vector<std::string>& toxic, const std::vector<int>* map_bg,
                   const std::vector<int>* map_tox) {
  std::string text;
  for (const auto& [is_toxic, index] : s.tokens) {
    if (!text.empty()) text += ' ';
    if (is_toxic) {
      text += toxic[static_cast<std::size_t>(map_tox ? (*map_tox)[static_cast<std::size_t>(index)] : index)];
    } else {
      text += background[static_cast<std::size_t>(map_bg ? (*map_bg)[static_cast<std::size_t>(index)] : index)];
    }
  }
  return text;
}

void render_split(const std::vector<TokenStream>& streams, Split split, const std::string& tag, const SynthCorpus& c,
                  std::vector<RawRecord>& out_a, std::vector<RawRecord>& out_b) {
  const int width = static_cast<int>(std::to_string(streams.size()).size());
  for (std::size_t i = 0; i < streams.size(); ++i) {
    std::string num = std::to_string(i + 1);
    num.insert(0, static_cast<std::size_t>(width) - num.size(), '0');
    out_a.push_back({"a-" + tag + "-" + num, render(streams[i], c.a.background, c.a.toxic, nullptr, nullptr),
                     streams[i].label, split});
    out_b.push_back({"b-" + tag + "-" + num,
                     render(streams[i], c.b.background, c.b.toxic, &c.map_background, &c.map_toxic),
                     streams[i].label, split});
  }
}

}  // namespace

std::string synth_token(const std::string& prefix, bool toxic, int index) {
  std::string letters;
  do {
    letters.insert(letters.begin(), static_cast<char>('a' + index % 26));
    index /= 26;
  } while (index > 0);
  return prefix + (toxic ? "t" : "w") + letters;
}

void SynthConfig::validate() const {
  if (vocab_size < 1) throw ConfigError("synth.vocab_size must be >= 1");
  if (num_topics < 1 || num_topics > vocab_size) throw ConfigError("synth.num_topics must lie in [1, vocab_size]");
  if (!(topic_purity >= 0.0 && topic_purity <= 1.0)) throw ConfigError("synth.topic_purity must lie in [0, 1]");
  if (num_train < 1 || num_test < 1) throw ConfigError("synth.num_train and synth.num_test must be >= 1");
  if (min_length < 1 || max_length < min_length) {
    throw ConfigError("synth text length range must satisfy 1 <= min_length <= max_length");
  }
  if (toxic_lexicon_size < 0) throw ConfigError("synth.toxic_lexicon_size must be >= 0");
  if (!(toxic_insert_prob >= 0.0 && toxic_insert_prob <= 1.0)) {
    throw ConfigError("synth.toxic_insert_prob must lie in [0, 1]");
  }
  if (!(hate_proportion >= 0.0 && hate_proportion <= 1.0)) throw ConfigError("synth.hate_proportion must lie in [0, 1]");
  if (hate_proportion > 0.0 && toxic_lexicon_size == 0) {
    throw ConfigError("synth: HOF texts requested but the toxic lexicon is empty");
  }
  if (!lowercase_letters(prefix_a) || !lowercase_letters(prefix_b)) {
    throw ConfigError("synth prefixes must be non-empty lowercase ASCII letters");
  }
  if (prefix_a.starts_with(prefix_b) || prefix_b.starts_with(prefix_a)) {
    throw ConfigError("synth prefixes must not be prefixes of each other");
  }
}

std::vector<TranslationPair> SynthCorpus::bijection() const {
  std::vector<TranslationPair> out;
  for (std::size_t i = 0; i < a.background.size(); ++i) {
    out.push_back({a.background[i], a.background[i], b.background[static_cast<std::size_t>(map_background[i])]});
  }
  for (std::size_t i = 0; i < a.toxic.size(); ++i) {
    out.push_back({a.toxic[i], a.toxic[i], b.toxic[static_cast<std::size_t>(map_toxic[i])]});
  }
  return out;
}

std::string SynthCorpus::translate(const std::string& text_a) const {
  std::unordered_map<std::string, std::string> table;
  for (const auto& p : bijection()) table.emplace(p.source_word, p.target_word);
  std::string out;
  std::size_t start = 0;
  while (start <= text_a.size()) {
    auto space = text_a.find(' ', start);
    if (space == std::string::npos) space = text_a.size();
    const std::string word = text_a.substr(start, space - start);
    if (!word.empty()) {
      const auto it = table.find(word);
      if (it == table.end()) throw DataError("translate: '" + word + "' is not a language-A token");
      if (!out.empty()) out += ' ';
      out += it->second;
    }
    start = space + 1;
  }
  return out;
}

SynthCorpus generate_corpus(const SynthConfig& config) {
  config.validate();
  SynthCorpus c;
  for (int i = 0; i < config.vocab_size; ++i) {
    c.a.background.push_back(synth_token(config.prefix_a, false, i));
    c.b.background.push_back(synth_token(config.prefix_b, false, i));
    c.topic_of.push_back(i * config.num_topics / config.vocab_size);
  }
  for (int i = 0; i < config.toxic_lexicon_size; ++i) {
    c.a.toxic.push_back(synth_token(config.prefix_a, true, i));
    c.b.toxic.push_back(synth_token(config.prefix_b, true, i));
  }
  const Rng root(config.seed);
  Rng bij = root.split(kBijectionStream);
  c.map_background = permutation(config.vocab_size, bij);
  c.map_toxic = permutation(config.toxic_lexicon_size, bij);

  const auto train = generate_split(config, config.num_train, root.split(kTrainStream));
  const auto test = generate_split(config, config.num_test, root.split(kTestStream));
  render_split(train, Split::train, "train", c, c.a.train, c.b.train);
  render_split(test, Split::test, "test", c, c.a.test, c.b.test);
  return c;
}

void write_corpus(const std::filesystem::path& dir, const SynthCorpus& corpus) {
  std::filesystem::create_directories(dir);
  write_dataset(dir / "a_train.tsv", corpus.a.train);
  write_dataset(dir / "a_test.tsv", corpus.a.test);
  write_dataset(dir / "b_train.tsv", corpus.b.train);
  write_dataset(dir / "b_test.tsv", corpus.b.test);
  const auto pairs = corpus.bijection();
  write_pairs(dir / "bijection.tsv", pairs);
  std::ofstream topics(dir / "topics.tsv", std::ios::binary);
  if (!topics) throw DataError("cannot open " + (dir / "topics.tsv").string() + " for writing");
  topics << "token\ttopic\n";
  for (std::size_t i = 0; i < corpus.a.background.size(); ++i) {
    topics << corpus.a.background[i] << '\t' << corpus.topic_of[i] << '\n';
  }
  for (const auto& t : corpus.a.toxic) topics << t << "\ttoxic\n";
}

}  // namespace lxt
