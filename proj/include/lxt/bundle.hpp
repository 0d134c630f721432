#ifndef LXT_BUNDLE_HPP_
#define LXT_BUNDLE_HPP_

#include "lxt/classifier.hpp"
#include "lxt/config.hpp"
#include "lxt/embeddings.hpp"
#include "lxt/vocabulary.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace lxt {

inline constexpr int kBundleVersion = 1;
inline constexpr const char* kEmbeddingFormat = "lxt-embedding";
inline constexpr const char* kClassifierFormat = "lxt-classifier";

// A bundle is a directory: manifest.json, vocab.txt, vocab.counts and one LXT1
// file per tensor.

struct EmbeddingBundle {
  SkipGramModel model;
  Vocabulary vocab;
  EmbeddingConfig config;
  CleaningConfig cleaning;
  std::uint64_t seed = 0;
  EmbeddingTrainLog log;
};

void save_embedding_bundle(const std::filesystem::path& dir, const EmbeddingBundle& bundle);
/// Throws DataError for a missing, malformed or version-mismatched bundle.
EmbeddingBundle load_embedding_bundle(const std::filesystem::path& dir);

struct ClassifierBundle {
  ClassifierModel model;
  Vocabulary vocab;
  ClassifierConfig config;
  CleaningConfig cleaning;
  std::uint64_t seed = 0;
  /// Free-form origin record, e.g. embedding bundle hash, transfer mode, source bundle hash.
  Json provenance = Json::object();
  /// Resolved experiment configuration for replay; may be null.
  Json experiment;
};

void save_classifier_bundle(const std::filesystem::path& dir, const ClassifierBundle& bundle);
/// Throws DataError for a missing, malformed or version-mismatched bundle.
ClassifierBundle load_classifier_bundle(const std::filesystem::path& dir);

/// File name of each classifier parameter, in ClassifierModel::parameters() order.
std::vector<std::string> classifier_tensor_files(const ClassifierModel& model);

/// SHA-256 over the bundle's regular files (sorted relative names and file digests).
std::string bundle_hash(const std::filesystem::path& dir);
/// SHA-256 over the LXT1 bytes of a parameter group's tensors.
std::string group_hash(const ClassifierModel& model, ParamGroup group);

/// Reads manifest.json and checks its format and version. Throws DataError.
Json read_manifest(const std::filesystem::path& dir, const std::string& expected_format);

}  // namespace lxt

#endif  // LXT_BUNDLE_HPP_
