#ifndef LXT_CORPUS_HPP_
#define LXT_CORPUS_HPP_

#include "lxt/label.hpp"
#include "lxt/text.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lxt {

enum class Split { train, test };

struct RawRecord {
  std::string id;
  std::string text;
  Label label = Label::NOT;
  Split split = Split::train;

  friend bool operator==(const RawRecord&, const RawRecord&) = default;
};

struct Document {
  std::vector<std::string> tokens;
  Label label = Label::NOT;
};

struct LoadOptions {
  bool header = false;
  Split split = Split::train;
};

/// Reads a tab-separated id/text/label file. Errors name the file and 1-based line.
std::vector<RawRecord> load_dataset(const std::filesystem::path& path, const LoadOptions& options = {});
std::vector<RawRecord> read_dataset(std::istream& in, const std::string& source_name,
                                    const LoadOptions& options = {});

/// Writes records in the format load_dataset reads, without a header.
void write_dataset(const std::filesystem::path& path, std::span<const RawRecord> records);

std::vector<Document> make_documents(std::span<const RawRecord> records, const CleaningConfig& config);

/// Exactly target_size records, round(target_size * hate_proportion) of them HOF,
/// drawn uniformly without replacement inside each label stratum, then shuffled.
std::vector<RawRecord> stratified_sample(std::span<const RawRecord> records, std::size_t target_size,
                                         double target_hate_proportion, std::uint64_t seed);

struct TrainValidationSplit {
  std::vector<RawRecord> train;
  std::vector<RawRecord> validation;
};

/// Stratified hold-out: round(fraction * |stratum|) records of each label go to validation.
TrainValidationSplit split_train_validation(std::span<const RawRecord> records, double validation_fraction,
                                            std::uint64_t seed);

double hate_proportion(std::span<const RawRecord> records);

}  // namespace lxt

#endif  // LXT_CORPUS_HPP_
