#include "lxt/config.hpp"

#include "lxt/errors.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace lxt {

namespace {

// Reads the keys of one JSON object and rejects the ones nobody asked for.
class Section {
 public:
  Section(const Json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw ConfigError("config section '" + name_ + "' must be an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  template <typename T>
  void get(const char* key, T& out) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    const Json& v = j_.at(key);
    bool ok = false;
    if constexpr (std::is_same_v<T, bool>) {
      ok = v.is_boolean();
    } else if constexpr (std::is_integral_v<T>) {
      if (v.is_number_unsigned()) {
        ok = v.get<std::uint64_t>() <= static_cast<std::uint64_t>(std::numeric_limits<T>::max());
      } else if (v.is_number_integer()) {
        const auto x = v.get<std::int64_t>();
        ok = x >= 0 ? static_cast<std::uint64_t>(x) <= static_cast<std::uint64_t>(std::numeric_limits<T>::max())
                    : std::is_signed_v<T> && x >= static_cast<std::int64_t>(std::numeric_limits<T>::min());
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      ok = v.is_number();
    } else {
      ok = v.is_string();
    }
    if (!ok) throw ConfigError("config key '" + name_ + "." + key + "' has the wrong type");
    out = v.get<T>();
  }

  void get_path(const char* key, std::filesystem::path& out, const std::filesystem::path& base) {
    std::string s;
    if (!j_.contains(key)) return;
    get(key, s);
    out = s;
    if (!out.empty() && out.is_relative() && !base.empty()) out = base / out;
  }

  const Json& raw(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) throw ConfigError("unknown config key '" + name_ + "." + key + "'");
    }
  }

 private:
  const Json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

std::string preset_of(Section& s) {
  std::string preset;
  s.get("preset", preset);
  if (!preset.empty() && preset != "baseline" && preset != "enhanced") {
    throw ConfigError("preset must be 'baseline' or 'enhanced', got '" + preset + "'");
  }
  return preset;
}

CleaningConfig read_cleaning(const Json& j) {
  Section s(j, "cleaning");
  CleaningConfig c = preset_of(s) == "baseline" ? CleaningConfig::baseline() : CleaningConfig::enhanced();
  s.get("strip_mentions", c.strip_mentions);
  s.get("strip_urls", c.strip_urls);
  s.get("strip_punctuation", c.strip_punctuation);
  s.get("lowercase_latin", c.lowercase_latin);
  s.get("keep_hashtags", c.keep_hashtags);
  s.get("drop_stopwords", c.drop_stopwords);
  s.get("bin_numbers", c.bin_numbers);
  if (s.has("stopwords")) {
    const Json& list = s.raw("stopwords");
    if (!list.is_array()) throw ConfigError("config key 'cleaning.stopwords' must be an array of strings");
    for (const auto& w : list) {
      if (!w.is_string()) throw ConfigError("config key 'cleaning.stopwords' must be an array of strings");
      c.stopword_list.insert(w.get<std::string>());
    }
  }
  s.finish();
  return c;
}

EmbeddingConfig read_embedding(const Json& j) {
  Section s(j, "embedding");
  EmbeddingConfig c = preset_of(s) == "baseline" ? EmbeddingConfig::baseline() : EmbeddingConfig::enhanced();
  std::string mode;
  s.get("mode", mode);
  if (!mode.empty()) c.mode = parse_embedding_mode(mode);
  s.get("dim", c.dim);
  s.get("window", c.window);
  s.get("neg_ratio", c.neg_ratio);
  if (s.has("subsample_t") && s.raw("subsample_t").is_null()) {
    c.subsample_t = kNoSubsampling;
  } else {
    s.get("subsample_t", c.subsample_t);
  }
  s.get("noise_power", c.noise_power);
  s.get("lr0", c.lr0);
  s.get("lr_gamma", c.lr_gamma);
  s.get("epochs", c.epochs);
  s.get("batch_size", c.batch_size);
  s.finish();
  c.validate();
  return c;
}

ClassifierConfig read_classifier(const Json& j) {
  Section s(j, "classifier");
  ClassifierConfig c = preset_of(s) == "baseline" ? ClassifierConfig::baseline() : ClassifierConfig::enhanced();
  std::string arch;
  s.get("arch", arch);
  if (!arch.empty()) c.arch = parse_architecture(arch);
  s.get("num_blocks", c.num_blocks);
  s.get("heads", c.heads);
  s.get("dropout_p", c.dropout_p);
  s.get("max_len", c.max_len);
  s.get("lr0", c.lr0);
  s.get("lr_gamma", c.lr_gamma);
  s.get("epochs", c.epochs);
  s.get("batch_size", c.batch_size);
  s.get("track_train_metrics", c.track_train_metrics);
  s.finish();
  c.validate();
  return c;
}

SynthConfig read_synth(const Json& j) {
  Section s(j, "synth");
  SynthConfig c;
  s.get("vocab_size", c.vocab_size);
  s.get("num_topics", c.num_topics);
  s.get("topic_purity", c.topic_purity);
  s.get("num_train", c.num_train);
  s.get("num_test", c.num_test);
  s.get("min_length", c.min_length);
  s.get("max_length", c.max_length);
  s.get("toxic_lexicon_size", c.toxic_lexicon_size);
  s.get("toxic_insert_prob", c.toxic_insert_prob);
  s.get("hate_proportion", c.hate_proportion);
  s.get("seed", c.seed);
  s.get("prefix_a", c.prefix_a);
  s.get("prefix_b", c.prefix_b);
  s.finish();
  c.validate();
  return c;
}

std::string path_string(const std::filesystem::path& p) { return p.generic_string(); }

}  // namespace

std::string to_string(EmbeddingMode mode) { return mode == EmbeddingMode::sgns ? "sgns" : "baseline_softmax"; }

EmbeddingMode parse_embedding_mode(std::string_view name) {
  if (name == "sgns") return EmbeddingMode::sgns;
  if (name == "baseline_softmax") return EmbeddingMode::baseline_softmax;
  throw ConfigError("unknown embedding mode '" + std::string(name) + "' (expected sgns or baseline_softmax)");
}

CleaningConfig cleaning_from_json(const Json& j) { return read_cleaning(j); }
EmbeddingConfig embedding_from_json(const Json& j) { return read_embedding(j); }
ClassifierConfig classifier_from_json(const Json& j) { return read_classifier(j); }
SynthConfig synth_from_json(const Json& j) { return read_synth(j); }

Json to_json(const CleaningConfig& c) {
  Json j;
  j["strip_mentions"] = c.strip_mentions;
  j["strip_urls"] = c.strip_urls;
  j["strip_punctuation"] = c.strip_punctuation;
  j["lowercase_latin"] = c.lowercase_latin;
  j["keep_hashtags"] = c.keep_hashtags;
  j["drop_stopwords"] = c.drop_stopwords;
  j["bin_numbers"] = c.bin_numbers;
  j["stopwords"] = Json::array();
  for (const auto& w : c.stopword_list) j["stopwords"].push_back(w);
  return j;
}

Json to_json(const EmbeddingConfig& c) {
  Json j;
  j["mode"] = to_string(c.mode);
  j["dim"] = c.dim;
  j["window"] = c.window;
  j["neg_ratio"] = c.neg_ratio;
  j["subsample_t"] = std::isinf(c.subsample_t) ? Json(nullptr) : Json(c.subsample_t);
  j["noise_power"] = c.noise_power;
  j["lr0"] = c.lr0;
  j["lr_gamma"] = c.lr_gamma;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  return j;
}

Json to_json(const ClassifierConfig& c) {
  Json j;
  j["arch"] = to_string(c.arch);
  j["num_blocks"] = c.num_blocks;
  j["heads"] = c.heads;
  j["dropout_p"] = c.dropout_p;
  j["max_len"] = c.max_len;
  j["lr0"] = c.lr0;
  j["lr_gamma"] = c.lr_gamma;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["track_train_metrics"] = c.track_train_metrics;
  return j;
}

Json to_json(const SynthConfig& c) {
  Json j;
  j["vocab_size"] = c.vocab_size;
  j["num_topics"] = c.num_topics;
  j["topic_purity"] = c.topic_purity;
  j["num_train"] = c.num_train;
  j["num_test"] = c.num_test;
  j["min_length"] = c.min_length;
  j["max_length"] = c.max_length;
  j["toxic_lexicon_size"] = c.toxic_lexicon_size;
  j["toxic_insert_prob"] = c.toxic_insert_prob;
  j["hate_proportion"] = c.hate_proportion;
  j["seed"] = c.seed;
  j["prefix_a"] = c.prefix_a;
  j["prefix_b"] = c.prefix_b;
  return j;
}

void ExperimentConfig::validate() const {
  embedding.validate();
  classifier.validate();
  synth.validate();
  classifier.validate_for_dim(embedding.dim);
  if (seeds.runs < 1) throw ConfigError("seeds.runs must be >= 1");
  if (!(data.validation_fraction >= 0.0 && data.validation_fraction < 1.0)) {
    throw ConfigError("data.validation_fraction must lie in [0, 1)");
  }
  if (data.eval_on != "test" && data.eval_on != "validation") {
    throw ConfigError("data.eval_on must be 'test' or 'validation'");
  }
  if (data.min_count < 1) throw ConfigError("data.min_count must be >= 1");
  if (transfer.embedding_init != "pretrained" && transfer.embedding_init != "xavier") {
    throw ConfigError("transfer.embedding_init must be 'pretrained' or 'xavier'");
  }
}

ExperimentConfig config_from_json(const Json& j, const std::filesystem::path& base_dir) {
  Section root(j, "config");
  ExperimentConfig c;
  if (root.has("cleaning")) c.cleaning = read_cleaning(root.raw("cleaning"));
  if (root.has("embedding")) c.embedding = read_embedding(root.raw("embedding"));
  if (root.has("classifier")) c.classifier = read_classifier(root.raw("classifier"));
  if (root.has("synth")) c.synth = read_synth(root.raw("synth"));
  if (root.has("transfer")) {
    Section s(root.raw("transfer"), "transfer");
    std::string mode;
    s.get("mode", mode);
    if (!mode.empty()) c.transfer.mode = parse_transfer_mode(mode);
    s.get("embedding_init", c.transfer.embedding_init);
    s.finish();
  }
  if (root.has("seeds")) {
    Section s(root.raw("seeds"), "seeds");
    s.get("base", c.seeds.base);
    s.get("runs", c.seeds.runs);
    s.finish();
  }
  if (root.has("data")) {
    Section s(root.raw("data"), "data");
    s.get_path("train", c.data.train, base_dir);
    s.get_path("test", c.data.test, base_dir);
    s.get("header", c.data.header);
    s.get("validation_fraction", c.data.validation_fraction);
    s.get("eval_on", c.data.eval_on);
    s.get("min_count", c.data.min_count);
    s.finish();
  }
  if (root.has("paths")) {
    Section s(root.raw("paths"), "paths");
    s.get_path("out", c.paths.out, base_dir);
    s.get_path("embedding_bundle", c.paths.embedding_bundle, base_dir);
    s.get_path("source_bundle", c.paths.source_bundle, base_dir);
    s.get_path("stopwords_file", c.paths.stopwords_file, base_dir);
    s.finish();
  }
  root.finish();
  c.validate();
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["cleaning"] = to_json(c.cleaning);
  j["embedding"] = to_json(c.embedding);
  j["classifier"] = to_json(c.classifier);
  j["transfer"] = {{"mode", to_string(c.transfer.mode)}, {"embedding_init", c.transfer.embedding_init}};
  j["seeds"] = {{"base", c.seeds.base}, {"runs", c.seeds.runs}};
  j["data"] = {{"train", path_string(c.data.train)},
               {"test", path_string(c.data.test)},
               {"header", c.data.header},
               {"validation_fraction", c.data.validation_fraction},
               {"eval_on", c.data.eval_on},
               {"min_count", c.data.min_count}};
  j["paths"] = {{"out", path_string(c.paths.out)},
                {"embedding_bundle", path_string(c.paths.embedding_bundle)},
                {"source_bundle", path_string(c.paths.source_bundle)},
                {"stopwords_file", path_string(c.paths.stopwords_file)}};
  j["synth"] = to_json(c.synth);
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  ExperimentConfig c = config_from_json(j, path.parent_path());
  if (!c.paths.stopwords_file.empty()) {
    const auto words = load_stopwords(c.paths.stopwords_file);
    c.cleaning.stopword_list.insert(words.begin(), words.end());
  }
  return c;
}

}  // namespace lxt
