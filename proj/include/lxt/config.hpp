#ifndef LXT_CONFIG_HPP_
#define LXT_CONFIG_HPP_

#include "lxt/classifier.hpp"
#include "lxt/embeddings.hpp"
#include "lxt/synthdata.hpp"
#include "lxt/text.hpp"
#include "lxt/transfer.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>

namespace lxt {

using Json = nlohmann::ordered_json;

struct SeedConfig {
  std::uint64_t base = 1;
  int runs = 5;

  /// Seed of run r (0-based): base + r.
  std::uint64_t run_seed(int r) const { return base + static_cast<std::uint64_t>(r); }
  friend bool operator==(const SeedConfig&, const SeedConfig&) = default;
};

struct DataConfig {
  std::filesystem::path train;
  std::filesystem::path test;
  bool header = false;
  double validation_fraction = 0.0;
  std::string eval_on = "test";  // "test" or "validation"
  std::int64_t min_count = 1;

  friend bool operator==(const DataConfig&, const DataConfig&) = default;
};

struct TransferConfig {
  TransferMode mode = TransferMode::fix_non_embedding;
  std::string embedding_init = "pretrained";  // "pretrained" or "xavier"

  friend bool operator==(const TransferConfig&, const TransferConfig&) = default;
};

struct PathConfig {
  std::filesystem::path out = "out";
  std::filesystem::path embedding_bundle;
  std::filesystem::path source_bundle;
  std::filesystem::path stopwords_file;

  friend bool operator==(const PathConfig&, const PathConfig&) = default;
};

struct ExperimentConfig {
  CleaningConfig cleaning = CleaningConfig::enhanced();
  EmbeddingConfig embedding = EmbeddingConfig::enhanced();
  ClassifierConfig classifier = ClassifierConfig::enhanced();
  TransferConfig transfer;
  SeedConfig seeds;
  DataConfig data;
  PathConfig paths;
  SynthConfig synth;

  /// Throws ConfigError.
  void validate() const;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Applies the keys present in `j` on top of the defaults. Unknown keys, wrong
/// types and invalid values throw ConfigError. A "preset" key ("baseline" or
/// "enhanced") in the cleaning, embedding or classifier section selects the
/// defaults that the remaining keys of that section override. Relative paths are
/// resolved against `base_dir` when it is non-empty.
ExperimentConfig config_from_json(const Json& j, const std::filesystem::path& base_dir = {});
/// Fully resolved form; config_from_json(config_to_json(c)) == c.
Json config_to_json(const ExperimentConfig& c);

/// Reads a JSON config file; relative paths resolve against its directory.
/// Stopwords from paths.stopwords_file are merged into cleaning.stopword_list.
ExperimentConfig load_config(const std::filesystem::path& path);

Json to_json(const CleaningConfig& c);
Json to_json(const EmbeddingConfig& c);
Json to_json(const ClassifierConfig& c);
Json to_json(const SynthConfig& c);
CleaningConfig cleaning_from_json(const Json& j);
EmbeddingConfig embedding_from_json(const Json& j);
ClassifierConfig classifier_from_json(const Json& j);
SynthConfig synth_from_json(const Json& j);

std::string to_string(EmbeddingMode mode);
/// Throws ConfigError.
EmbeddingMode parse_embedding_mode(std::string_view name);

}  // namespace lxt

#endif  // LXT_CONFIG_HPP_
