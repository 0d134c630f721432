#ifndef LXT_METRICS_HPP_
#define LXT_METRICS_HPP_

#include "lxt/label.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lxt {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
};

/// Counts with `positive` as the positive class.
ConfusionCounts confusion(std::span<const Label> predictions, std::span<const Label> labels, Label positive);

/// Fraction of exact matches. Throws std::invalid_argument on length mismatch or empty input.
double accuracy(std::span<const Label> predictions, std::span<const Label> labels);

struct MacroF1Report {
  double macro = 0.0;
  double f1_hof = 0.0;
  double f1_not = 0.0;
  bool hof_absent = false;  // class missing from both predictions and labels
  bool not_absent = false;
};

/// Per-class F1 = 2tp / (2tp + fp + fn); a class absent from both sequences scores 0.
MacroF1Report macro_f1_report(std::span<const Label> predictions, std::span<const Label> labels);
/// Unweighted mean of the two per-class F1 scores; warns on stderr when a class is absent.
double macro_f1(std::span<const Label> predictions, std::span<const Label> labels);

struct ClassificationScores {
  double accuracy = 0.0;
  double macro_f1 = 0.0;

  friend bool operator==(const ClassificationScores&, const ClassificationScores&) = default;
};

ClassificationScores score(std::span<const Label> predictions, std::span<const Label> labels);

struct EpochMetrics {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  std::optional<ClassificationScores> train;
  ClassificationScores eval;
};

struct TrainRunResult {
  std::uint64_t seed = 0;
  ClassificationScores initial_eval;  // before the first update; written as epoch 0
  std::vector<EpochMetrics> epochs;
};

struct MetricSeries {
  std::string split;
  std::string metric;
  std::vector<double> values;  // index = epoch - 1
};

/// The per-epoch series of one run: train/loss, [train/accuracy, train/macro_f1,] eval/accuracy, eval/macro_f1.
std::vector<MetricSeries> metric_series(const TrainRunResult& run);

struct SeriesBand {
  std::string split;
  std::string metric;
  std::vector<double> mean;
  std::vector<double> min;
  std::vector<double> max;
};

/// Element-wise mean and min/max band across runs. Throws std::invalid_argument on
/// mismatched epoch counts or series sets.
std::vector<SeriesBand> aggregate_runs(std::span<const TrainRunResult> runs);

/// Rows run,epoch,split,metric,value; values with 6 significant digits.
void write_metrics_csv(std::ostream& out, std::span<const TrainRunResult> runs, int first_run_index = 0);
void write_metrics_csv(const std::filesystem::path& path, std::span<const TrainRunResult> runs);
/// Rows epoch,split,metric,mean,min,max.
void write_aggregate_csv(const std::filesystem::path& path, std::span<const SeriesBand> bands);

/// printf("%.6g").
std::string format_value(double v);

}  // namespace lxt

#endif  // LXT_METRICS_HPP_
