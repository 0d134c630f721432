#include "lxt/metrics.hpp"

#include "lxt/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace lxt {

namespace {

void check_lengths(std::span<const Label> predictions, std::span<const Label> labels) {
  if (predictions.size() != labels.size()) {
    throw std::invalid_argument("metrics: " + std::to_string(predictions.size()) + " predictions vs " +
                                std::to_string(labels.size()) + " labels");
  }
}

double class_f1(const ConfusionCounts& c) {
  const double denom = 2.0 * static_cast<double>(c.tp) + static_cast<double>(c.fp) + static_cast<double>(c.fn);
  return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / denom;
}

}  // namespace

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

ConfusionCounts confusion(std::span<const Label> predictions, std::span<const Label> labels, Label positive) {
  check_lengths(predictions, labels);
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool p = predictions[i] == positive;
    const bool t = labels[i] == positive;
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double accuracy(std::span<const Label> predictions, std::span<const Label> labels) {
  check_lengths(predictions, labels);
  if (labels.empty()) throw std::invalid_argument("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hits += predictions[i] == labels[i];
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

MacroF1Report macro_f1_report(std::span<const Label> predictions, std::span<const Label> labels) {
  check_lengths(predictions, labels);
  if (labels.empty()) throw std::invalid_argument("macro_f1: empty input");
  const auto hof = confusion(predictions, labels, Label::HOF);
  const auto neg = confusion(predictions, labels, Label::NOT);
  MacroF1Report r;
  r.f1_hof = class_f1(hof);
  r.f1_not = class_f1(neg);
  r.hof_absent = hof.tp + hof.fp + hof.fn == 0;
  r.not_absent = neg.tp + neg.fp + neg.fn == 0;
  r.macro = (r.f1_hof + r.f1_not) / 2.0;
  return r;
}

double macro_f1(std::span<const Label> predictions, std::span<const Label> labels) {
  const auto r = macro_f1_report(predictions, labels);
  if (r.hof_absent || r.not_absent) {
    std::cerr << "warning: macro_f1: class " << (r.hof_absent ? "HOF" : "NOT")
              << " absent from predictions and labels; scored as F1 = 0\n";
  }
  return r.macro;
}

ClassificationScores score(std::span<const Label> predictions, std::span<const Label> labels) {
  return {accuracy(predictions, labels), macro_f1(predictions, labels)};
}

std::vector<MetricSeries> metric_series(const TrainRunResult& run) {
  const bool has_train = !run.epochs.empty() && run.epochs.front().train.has_value();
  std::vector<MetricSeries> s;
  s.push_back({"train", "loss", {}});
  if (has_train) {
    s.push_back({"train", "accuracy", {}});
    s.push_back({"train", "macro_f1", {}});
  }
  s.push_back({"eval", "accuracy", {}});
  s.push_back({"eval", "macro_f1", {}});
  for (const auto& e : run.epochs) {
    std::size_t i = 0;
    s[i++].values.push_back(e.train_loss);
    if (has_train) {
      if (!e.train) throw std::invalid_argument("metric_series: train metrics missing for some epochs");
      s[i++].values.push_back(e.train->accuracy);
      s[i++].values.push_back(e.train->macro_f1);
    }
    s[i++].values.push_back(e.eval.accuracy);
    s[i++].values.push_back(e.eval.macro_f1);
  }
  return s;
}

std::vector<SeriesBand> aggregate_runs(std::span<const TrainRunResult> runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate_runs: no runs");
  const auto reference = metric_series(runs.front());
  std::vector<SeriesBand> bands;
  for (const auto& s : reference) {
    bands.push_back({s.split, s.metric, s.values, s.values, s.values});
  }
  for (std::size_t r = 1; r < runs.size(); ++r) {
    const auto series = metric_series(runs[r]);
    if (series.size() != reference.size()) throw std::invalid_argument("aggregate_runs: runs track different metrics");
    for (std::size_t k = 0; k < series.size(); ++k) {
      if (series[k].values.size() != reference[k].values.size()) {
        throw std::invalid_argument("aggregate_runs: mismatched epoch counts");
      }
      for (std::size_t e = 0; e < series[k].values.size(); ++e) {
        const double v = series[k].values[e];
        bands[k].mean[e] += v;
        bands[k].min[e] = std::min(bands[k].min[e], v);
        bands[k].max[e] = std::max(bands[k].max[e], v);
      }
    }
  }
  for (auto& b : bands) {
    for (auto& m : b.mean) m /= static_cast<double>(runs.size());
  }
  return bands;
}

void write_metrics_csv(std::ostream& out, std::span<const TrainRunResult> runs, int first_run_index) {
  out << "run,epoch,split,metric,value\n";
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const int run = first_run_index + static_cast<int>(r);
    out << run << ",0,eval,accuracy," << format_value(runs[r].initial_eval.accuracy) << '\n';
    out << run << ",0,eval,macro_f1," << format_value(runs[r].initial_eval.macro_f1) << '\n';
    for (const auto& e : runs[r].epochs) {
      out << run << ',' << e.epoch << ",train,loss," << format_value(e.train_loss) << '\n';
      if (e.train) {
        out << run << ',' << e.epoch << ",train,accuracy," << format_value(e.train->accuracy) << '\n';
        out << run << ',' << e.epoch << ",train,macro_f1," << format_value(e.train->macro_f1) << '\n';
      }
      out << run << ',' << e.epoch << ",eval,accuracy," << format_value(e.eval.accuracy) << '\n';
      out << run << ',' << e.epoch << ",eval,macro_f1," << format_value(e.eval.macro_f1) << '\n';
    }
  }
}

void write_metrics_csv(const std::filesystem::path& path, std::span<const TrainRunResult> runs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  write_metrics_csv(out, runs);
}

void write_aggregate_csv(const std::filesystem::path& path, std::span<const SeriesBand> bands) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << "epoch,split,metric,mean,min,max\n";
  for (const auto& b : bands) {
    for (std::size_t e = 0; e < b.mean.size(); ++e) {
      out << e + 1 << ',' << b.split << ',' << b.metric << ',' << format_value(b.mean[e]) << ','
          << format_value(b.min[e]) << ',' << format_value(b.max[e]) << '\n';
    }
  }
}

}  // namespace lxt
