#include "lxt/corpus.hpp"

#include "lxt/errors.hpp"
#include "lxt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

namespace lxt {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      cols.push_back(line.substr(start));
      return cols;
    }
    cols.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

}  // namespace

std::vector<RawRecord> read_dataset(std::istream& in, const std::string& source_name,
                                    const LoadOptions& options) {
  std::vector<RawRecord> records;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && options.header) continue;
    if (line.empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() != 3) {
      throw DataError(where(source_name, line_no) + "malformed row: expected 3 tab-separated columns, got " +
                      std::to_string(cols.size()));
    }
    auto label = parse_label(cols[2]);
    if (!label) {
      throw DataError(where(source_name, line_no) + "unknown label '" + std::string(cols[2]) + "'");
    }
    if (cols[0].empty()) throw DataError(where(source_name, line_no) + "empty id");
    if (cols[1].find_first_not_of(" \t") == std::string_view::npos) {
      throw DataError(where(source_name, line_no) + "empty text");
    }
    RawRecord r{std::string(cols[0]), std::string(cols[1]), *label, options.split};
    if (!ids.insert(r.id).second) {
      throw DataError(where(source_name, line_no) + "duplicate id '" + r.id + "'");
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<RawRecord> load_dataset(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset " + path.string());
  return read_dataset(in, path.string(), options);
}

void write_dataset(const std::filesystem::path& path, std::span<const RawRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  for (const auto& r : records) {
    if (r.text.find_first_of("\t\n") != std::string::npos || r.id.find_first_of("\t\n") != std::string::npos) {
      throw DataError("record '" + r.id + "' contains a tab or newline");
    }
    out << r.id << '\t' << r.text << '\t' << to_string(r.label) << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<Document> make_documents(std::span<const RawRecord> records, const CleaningConfig& config) {
  std::vector<Document> docs;
  docs.reserve(records.size());
  for (const auto& r : records) {
    docs.push_back({tokenize(clean_text(r.text, config), config), r.label});
  }
  return docs;
}

double hate_proportion(std::span<const RawRecord> records) {
  if (records.empty()) return 0.0;
  auto hof = std::count_if(records.begin(), records.end(), [](const RawRecord& r) { return r.label == Label::HOF; });
  return static_cast<double>(hof) / static_cast<double>(records.size());
}

std::vector<RawRecord> stratified_sample(std::span<const RawRecord> records, std::size_t target_size,
                                         double target_hate_proportion, std::uint64_t seed) {
  if (!(target_hate_proportion >= 0.0 && target_hate_proportion <= 1.0)) {
    throw std::invalid_argument("stratified_sample: proportion must lie in [0, 1]");
  }
  std::vector<std::size_t> hof, neg;
  for (std::size_t i = 0; i < records.size(); ++i) {
    (records[i].label == Label::HOF ? hof : neg).push_back(i);
  }
  const auto want_hof = static_cast<std::size_t>(std::llround(static_cast<double>(target_size) * target_hate_proportion));
  const std::size_t want_not = target_size - want_hof;
  if (want_hof > hof.size()) {
    throw DataError("stratified_sample: insufficient HOF records (" + std::to_string(hof.size()) + " < " +
                    std::to_string(want_hof) + ")");
  }
  if (want_not > neg.size()) {
    throw DataError("stratified_sample: insufficient NOT records (" + std::to_string(neg.size()) + " < " +
                    std::to_string(want_not) + ")");
  }
  Rng rng(seed);
  rng.shuffle(hof.begin(), hof.end());
  rng.shuffle(neg.begin(), neg.end());
  std::vector<std::size_t> chosen(hof.begin(), hof.begin() + static_cast<std::ptrdiff_t>(want_hof));
  chosen.insert(chosen.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(want_not));
  rng.shuffle(chosen.begin(), chosen.end());
  std::vector<RawRecord> out;
  out.reserve(chosen.size());
  for (auto i : chosen) out.push_back(records[i]);
  return out;
}

TrainValidationSplit split_train_validation(std::span<const RawRecord> records, double validation_fraction,
                                            std::uint64_t seed) {
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw std::invalid_argument("split_train_validation: fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> hof, neg;
  for (std::size_t i = 0; i < records.size(); ++i) {
    (records[i].label == Label::HOF ? hof : neg).push_back(i);
  }
  Rng rng(seed);
  std::vector<bool> held(records.size(), false);
  for (auto* stratum : {&hof, &neg}) {
    rng.shuffle(stratum->begin(), stratum->end());
    const auto k = static_cast<std::size_t>(std::llround(validation_fraction * static_cast<double>(stratum->size())));
    for (std::size_t j = 0; j < k; ++j) held[(*stratum)[j]] = true;
  }
  TrainValidationSplit out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    (held[i] ? out.validation : out.train).push_back(records[i]);
  }
  return out;
}

}  // namespace lxt
