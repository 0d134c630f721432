#include "lxt/cli.hpp"

#include "lxt/bundle.hpp"
#include "lxt/classifier.hpp"
#include "lxt/config.hpp"
#include "lxt/corpus.hpp"
#include "lxt/embeddings.hpp"
#include "lxt/errors.hpp"
#include "lxt/hash.hpp"
#include "lxt/metrics.hpp"
#include "lxt/optim.hpp"
#include "lxt/synthdata.hpp"
#include "lxt/transfer.hpp"
#include "lxt/translation.hpp"
#include "lxt/vocabulary.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace lxt {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kClassifierInitStream = 0xc1;
constexpr std::uint64_t kFreshEmbeddingStream = 0xe0;

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::string out;
  int threads = 1;
};

ExperimentConfig resolve(const Globals& g) {
  ExperimentConfig c = g.config_path.empty() ? ExperimentConfig{} : load_config(g.config_path);
  if (g.seed) {
    c.seeds.base = *g.seed;
    c.synth.seed = *g.seed;
  }
  if (g.runs) c.seeds.runs = *g.runs;
  if (!g.out.empty()) c.paths.out = g.out;
  if (g.threads < 1) throw ConfigError("--threads must be >= 1");
  c.validate();
  return c;
}

std::vector<RawRecord> load_required(const fs::path& path, const char* what, bool header, Split split) {
  if (path.empty()) throw ConfigError(std::string(what) + " is not set");
  LoadOptions opts;
  opts.header = header;
  opts.split = split;
  return load_dataset(path, opts);
}

// Runs f(0) .. f(n-1) on up to `threads` threads; every run writes only its own slot.
template <typename F>
void run_parallel(int n, int threads, F f) {
  if (threads <= 1 || n <= 1) {
    for (int r = 0; r < n; ++r) f(r);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min(threads, n); ++t) {
    pool.emplace_back([&] {
      for (int r = next++; r < n; r = next++) {
        try {
          f(r);
        } catch (...) {
          errors[static_cast<std::size_t>(r)] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct ClassifierData {
  std::vector<LabeledSequence> train;
  std::vector<LabeledSequence> eval;
};

// Splits the training file, picks the evaluation set and encodes both.
// A nonzero split is written next to the run bundles.
ClassifierData prepare_classifier_data(const ExperimentConfig& c, const CleaningConfig& cleaning,
                                       const Vocabulary& vocab, int max_len, const fs::path& out_dir) {
  const auto records = load_required(c.data.train, "data.train", c.data.header, Split::train);
  TrainValidationSplit split;
  if (c.data.validation_fraction > 0.0) {
    split = split_train_validation(records, c.data.validation_fraction, c.seeds.base);
    write_dataset(out_dir / "train_split.tsv", split.train);
    write_dataset(out_dir / "validation_split.tsv", split.validation);
  } else {
    split.train = records;
  }
  std::vector<RawRecord> eval_records;
  if (c.data.eval_on == "test") {
    eval_records = load_required(c.data.test, "data.test", c.data.header, Split::test);
  } else {
    if (split.validation.empty()) throw ConfigError("data.eval_on = validation needs validation_fraction > 0");
    eval_records = split.validation;
  }
  ClassifierData d;
  const auto train_docs = make_documents(split.train, cleaning);
  const auto eval_docs = make_documents(eval_records, cleaning);
  d.train = encode_documents(train_docs, vocab, max_len);
  d.eval = encode_documents(eval_docs, vocab, max_len);
  return d;
}

void write_run_metrics(const fs::path& dir, const std::vector<TrainRunResult>& runs, std::ostream& out) {
  write_metrics_csv(dir / "metrics.csv", runs);
  const auto bands = aggregate_runs(runs);
  write_aggregate_csv(dir / "aggregate.csv", bands);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& last = runs[r].epochs.empty() ? ClassificationScores{runs[r].initial_eval} : runs[r].epochs.back().eval;
    out << "run " << r << " seed " << runs[r].seed << ": eval accuracy " << format_value(last.accuracy)
        << ", macro_f1 " << format_value(last.macro_f1) << '\n';
  }
  for (const auto& b : bands) {
    if (b.split == "eval" && !b.mean.empty()) {
      out << "mean final eval " << b.metric << ": " << format_value(b.mean.back()) << '\n';
    }
  }
  out << "wrote " << (dir / "metrics.csv").string() << '\n';
}

fs::path run_dir(const fs::path& out, int r) { return out / ("run" + std::to_string(r)); }

std::pair<Matrix, Vocabulary> load_any_embedding(const fs::path& dir, const std::string& matrix) {
  std::ifstream in(dir / "manifest.json", std::ios::binary);
  if (!in) throw DataError("not a bundle: cannot open " + (dir / "manifest.json").string());
  std::string format;
  try {
    format = Json::parse(in).at("format").get<std::string>();
  } catch (const Json::exception& e) {
    throw DataError((dir / "manifest.json").string() + ": " + e.what());
  }
  if (format == kClassifierFormat) {
    auto b = load_classifier_bundle(dir);
    return {std::move(b.model.embedding.value), std::move(b.vocab)};
  }
  auto b = load_embedding_bundle(dir);
  if (matrix == "context") return {std::move(b.model.context.value), std::move(b.vocab)};
  return {std::move(b.model.center.value), std::move(b.vocab)};
}

int cmd_stats(const Globals& g, const std::string& dataset, const std::string& preset, bool header, std::ostream& out) {
  const auto c = resolve(g);
  CleaningConfig cleaning = c.cleaning;
  if (preset == "baseline" || preset == "enhanced") {
    cleaning = preset == "baseline" ? CleaningConfig::baseline() : CleaningConfig::enhanced();
    cleaning.stopword_list = c.cleaning.stopword_list;
  } else if (!preset.empty()) {
    throw ConfigError("--preset must be baseline or enhanced");
  }
  LoadOptions opts;
  opts.header = header;
  const auto records = load_dataset(dataset, opts);
  const auto docs = make_documents(records, cleaning);
  const auto vocab = build_vocab(docs, c.data.min_count);
  const std::string report = format_stats(corpus_stats(docs, vocab));
  out << report;
  if (!g.out.empty()) {
    fs::create_directories(g.out);
    std::ofstream f(fs::path(g.out) / "stats.txt", std::ios::binary);
    f << report;
  }
  return kExitOk;
}

int cmd_sample(const Globals& g, const std::string& dataset, std::size_t size, std::optional<double> proportion,
               bool header, const std::string& output, std::ostream& out) {
  const auto c = resolve(g);
  LoadOptions opts;
  opts.header = header;
  const auto records = load_dataset(dataset, opts);
  const double p = proportion ? *proportion : hate_proportion(records);
  const auto sample = stratified_sample(records, size, p, c.seeds.base);
  fs::path target = output.empty() ? c.paths.out / "sample.tsv" : fs::path(output);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  write_dataset(target, sample);
  out << "wrote " << sample.size() << " records to " << target.string() << '\n';
  return kExitOk;
}

int cmd_synth(const Globals& g, std::ostream& out) {
  const auto c = resolve(g);
  const auto corpus = generate_corpus(c.synth);
  write_corpus(c.paths.out, corpus);
  out << "wrote synthetic corpus (" << corpus.a.train.size() << " train / " << corpus.a.test.size()
      << " test per language) to " << c.paths.out.string() << '\n';
  return kExitOk;
}

int cmd_train_embed(const Globals& g, std::ostream& out) {
  const auto c = resolve(g);
  const auto records = load_required(c.data.train, "data.train", c.data.header, Split::train);
  const auto docs = make_documents(records, c.cleaning);
  const auto vocab = build_vocab(docs, c.data.min_count);
  EmbeddingResult result = train_embeddings(docs, vocab, c.embedding, c.seeds.base);
  EmbeddingBundle bundle{std::move(result.model), vocab, c.embedding, c.cleaning, c.seeds.base, result.log};
  const fs::path dir = c.paths.out / "embedding";
  save_embedding_bundle(dir, bundle);
  for (std::size_t e = 0; e < bundle.log.epoch_loss.size(); ++e) {
    out << "epoch " << e + 1 << ": loss " << format_value(bundle.log.epoch_loss[e]) << " over "
        << bundle.log.epoch_pairs[e] << " pairs\n";
  }
  out << "wrote " << dir.string() << '\n';
  return kExitOk;
}

int cmd_train_clf(const Globals& g, const std::string& embedding_flag, std::ostream& out) {
  const auto c = resolve(g);
  const fs::path emb_path = embedding_flag.empty() ? c.paths.embedding_bundle : fs::path(embedding_flag);
  Json provenance = Json::object();
  CleaningConfig cleaning = c.cleaning;
  Vocabulary vocab;
  Matrix embedding;
  if (!emb_path.empty()) {
    auto emb = load_embedding_bundle(emb_path);
    provenance["embedding_init"] = "pretrained";
    provenance["embedding_bundle_hash"] = bundle_hash(emb_path);
    if (!(emb.cleaning == c.cleaning)) out << "note: using the embedding bundle's cleaning settings\n";
    cleaning = emb.cleaning;
    vocab = std::move(emb.vocab);
    embedding = std::move(emb.model.center.value);
  } else {
    const auto records = load_required(c.data.train, "data.train", c.data.header, Split::train);
    vocab = build_vocab(make_documents(records, cleaning), c.data.min_count);
    Rng rng = Rng(c.seeds.base).split(kFreshEmbeddingStream);
    embedding = xavier_uniform<float>(static_cast<Index>(vocab.size()), c.embedding.dim, rng);
    provenance["embedding_init"] = "xavier";
  }
  c.classifier.validate_for_dim(embedding.cols());
  fs::create_directories(c.paths.out);
  const auto data = prepare_classifier_data(c, cleaning, vocab, c.classifier.max_len, c.paths.out);

  std::vector<TrainRunResult> results(static_cast<std::size_t>(c.seeds.runs));
  std::mutex log_mutex;
  run_parallel(c.seeds.runs, g.threads, [&](int r) {
    const std::uint64_t seed = c.seeds.run_seed(r);
    Rng init = Rng(seed).split(kClassifierInitStream);
    ClassifierBundle bundle{make_classifier<float>(c.classifier, embedding, init), vocab, c.classifier, cleaning,
                            seed, provenance, config_to_json(c)};
    results[static_cast<std::size_t>(r)] = train_classifier(bundle.model, data.train, data.eval, c.classifier, seed);
    save_classifier_bundle(run_dir(c.paths.out, r), bundle);
    std::lock_guard lock(log_mutex);
    out << "finished run " << r << '\n';
  });
  write_run_metrics(c.paths.out, results, out);
  return kExitOk;
}

int cmd_transfer(const Globals& g, const std::string& source_flag, const std::string& embedding_flag,
                 const std::string& mode_flag, std::ostream& out) {
  auto c = resolve(g);
  if (!mode_flag.empty()) c.transfer.mode = parse_transfer_mode(mode_flag);
  const fs::path source_path = source_flag.empty() ? c.paths.source_bundle : fs::path(source_flag);
  if (source_path.empty()) throw ConfigError("transfer needs a source classifier bundle (--source or paths.source_bundle)");
  const auto source = load_classifier_bundle(source_path);
  const std::string source_hash = bundle_hash(source_path);

  Json provenance = Json::object();
  provenance["source_bundle_hash"] = source_hash;
  provenance["transfer_mode"] = to_string(c.transfer.mode);
  CleaningConfig cleaning = c.cleaning;
  Vocabulary vocab;
  std::optional<EmbeddingBundle> emb;
  EmbeddingInit init = XavierFresh{};
  if (c.transfer.embedding_init == "pretrained") {
    const fs::path emb_path = embedding_flag.empty() ? c.paths.embedding_bundle : fs::path(embedding_flag);
    if (emb_path.empty()) {
      throw ConfigError("transfer.embedding_init = pretrained needs an embedding bundle (--embedding or "
                        "paths.embedding_bundle)");
    }
    emb = load_embedding_bundle(emb_path);
    provenance["embedding_bundle_hash"] = bundle_hash(emb_path);
    cleaning = emb->cleaning;
    vocab = emb->vocab;
  } else {
    const auto records = load_required(c.data.train, "data.train", c.data.header, Split::train);
    vocab = build_vocab(make_documents(records, cleaning), c.data.min_count);
  }
  provenance["embedding_init"] = c.transfer.embedding_init;
  if (emb) init = PretrainedEmbedding{&emb->model.center.value, &emb->vocab};

  fs::create_directories(c.paths.out);
  const auto data = prepare_classifier_data(c, cleaning, vocab, source.model.max_len, c.paths.out);
  std::vector<TrainRunResult> results(static_cast<std::size_t>(c.seeds.runs));
  std::mutex log_mutex;
  run_parallel(c.seeds.runs, g.threads, [&](int r) {
    const std::uint64_t seed = c.seeds.run_seed(r);
    auto t = transfer_train(source.model, source_hash, vocab, init, data.train, data.eval, c.transfer.mode,
                            c.classifier, seed);
    ClassifierConfig echo = c.classifier;
    echo.arch = source.model.arch;
    ClassifierBundle bundle{std::move(t.model), vocab, echo, cleaning, seed, provenance, config_to_json(c)};
    save_classifier_bundle(run_dir(c.paths.out, r), bundle);
    results[static_cast<std::size_t>(r)] = std::move(t.run);
    std::lock_guard lock(log_mutex);
    out << "finished run " << r << '\n';
  });
  write_run_metrics(c.paths.out, results, out);
  return kExitOk;
}

int cmd_eval(const Globals& g, const std::string& bundle_path, const std::string& dataset, bool header,
             std::ostream& out) {
  resolve(g);
  const auto bundle = load_classifier_bundle(bundle_path);
  LoadOptions opts;
  opts.header = header;
  const auto records = load_dataset(dataset, opts);
  const auto docs = make_documents(records, bundle.cleaning);
  const auto data = encode_documents(docs, bundle.vocab, bundle.model.max_len);
  const auto scores = evaluate(bundle.model, data);
  const auto unscorable = std::count_if(data.begin(), data.end(), [](const auto& s) { return s.ids.empty(); });
  std::ostringstream report;
  report << "texts\t" << data.size() << "\nunscorable\t" << unscorable << "\naccuracy\t"
         << format_value(scores.accuracy) << "\nmacro_f1\t" << format_value(scores.macro_f1) << '\n';
  out << report.str();
  if (!g.out.empty()) {
    fs::create_directories(g.out);
    std::ofstream f(fs::path(g.out) / "eval.tsv", std::ios::binary);
    f << report.str();
  }
  return kExitOk;
}

int cmd_translate(const Globals& g, const std::string& a, const std::string& b, const std::string& pairs_path,
                  bool reverse, const std::string& matrix, std::ostream& out) {
  const auto c = resolve(g);
  if (matrix != "center" && matrix != "context") throw ConfigError("--matrix must be center or context");
  const auto [ma, va] = load_any_embedding(a, matrix);
  const auto [mb, vb] = load_any_embedding(b, matrix);
  if (ma.cols() != mb.cols()) {
    throw DataError("embedding dims differ: " + std::to_string(ma.cols()) + " vs " + std::to_string(mb.cols()));
  }
  const auto pairs = load_pairs(pairs_path);
  const auto report = translation_rank(ma, va, mb, vb, pairs,
                                       reverse ? RankDirection::target_to_source : RankDirection::source_to_target);
  out << format_rank_table(report);
  fs::create_directories(c.paths.out);
  const fs::path tsv = c.paths.out / "ranks.tsv";
  std::ofstream f(tsv, std::ios::binary);
  if (!f) throw DataError("cannot write " + tsv.string());
  write_rank_tsv(f, report);
  out << "wrote " << tsv.string() << '\n';
  return kExitOk;
}

int cmd_predict(const Globals& g, const std::string& bundle_path, const std::vector<std::string>& texts,
                std::ostream& out) {
  resolve(g);
  const auto bundle = load_classifier_bundle(bundle_path);
  for (const auto& text : texts) {
    const auto p = predict(bundle.model, text, bundle.cleaning, bundle.vocab);
    if (p) {
      out << to_string(p->label) << '\t' << format_value(p->probability) << '\n';
    } else {
      out << "unscorable\tNA\n";
    }
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hate-speech classifier toolkit with cross-lingual embedding transfer", "lxt"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "JSON experiment config");
  app.add_option("--seed", g.seed, "Base seed (overrides seeds.base and synth.seed)");
  app.add_option("--runs", g.runs, "Number of seeded runs (overrides seeds.runs)")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output directory (overrides paths.out)");
  app.add_option("--threads", g.threads, "Concurrent runs for train-clf and transfer")->check(CLI::PositiveNumber);

  std::string dataset, preset, output, bundle, bundle_b, pairs, embedding, source, mode, matrix = "center";
  bool header = false, reverse = false;
  std::size_t size = 0;
  std::optional<double> proportion;
  std::vector<std::string> texts;

  auto* stats = app.add_subcommand("stats", "Corpus statistics of a TSV dataset");
  stats->add_option("dataset", dataset, "id<TAB>text<TAB>label file")->required();
  stats->add_option("--preset", preset, "Cleaning preset: baseline or enhanced");
  stats->add_flag("--header", header, "First line is a header");

  auto* sample = app.add_subcommand("sample", "Stratified random sample of a dataset");
  sample->add_option("dataset", dataset)->required();
  sample->add_option("--size", size, "Number of records")->required();
  sample->add_option("--proportion", proportion, "HOF proportion of the sample (default: the input's)");
  sample->add_option("-o,--output", output, "Output TSV (default: <out>/sample.tsv)");
  sample->add_flag("--header", header, "First line is a header");

  auto* synth = app.add_subcommand("synth", "Generate the synthetic bilingual corpus");
  auto* train_embed = app.add_subcommand("train-embed", "Train skip-gram embeddings on data.train");

  auto* train_clf = app.add_subcommand("train-clf", "Train the classifier for every seeded run");
  train_clf->add_option("--embedding", embedding, "Embedding bundle (overrides paths.embedding_bundle)");

  auto* transfer = app.add_subcommand("transfer", "Swap the embedding of a trained classifier and retrain");
  transfer->add_option("--source", source, "Source classifier bundle (overrides paths.source_bundle)");
  transfer->add_option("--embedding", embedding, "Target embedding bundle (overrides paths.embedding_bundle)");
  transfer->add_option("--mode", mode, "no_fix, fix_non_embedding or fix_embedding");

  auto* eval = app.add_subcommand("eval", "Accuracy and macro-F1 of a classifier bundle on a dataset");
  eval->add_option("bundle", bundle)->required();
  eval->add_option("dataset", dataset)->required();
  eval->add_flag("--header", header, "First line is a header");

  auto* translate = app.add_subcommand("translate", "Cosine-similarity translation ranks between two bundles");
  translate->add_option("source_bundle", bundle)->required();
  translate->add_option("target_bundle", bundle_b)->required();
  translate->add_option("pairs", pairs, "concept<TAB>source_word<TAB>target_word file")->required();
  translate->add_flag("--reverse", reverse, "Rank source-vocabulary candidates for each target word");
  translate->add_option("--matrix", matrix, "Embedding-bundle matrix: center or context");

  auto* predict_cmd = app.add_subcommand("predict", "Score raw texts with a classifier bundle");
  predict_cmd->add_option("bundle", bundle)->required();
  predict_cmd->add_option("texts", texts)->required();

  std::vector<const char*> argv{"lxt"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (stats->parsed()) return cmd_stats(g, dataset, preset, header, out);
    if (sample->parsed()) return cmd_sample(g, dataset, size, proportion, header, output, out);
    if (synth->parsed()) return cmd_synth(g, out);
    if (train_embed->parsed()) return cmd_train_embed(g, out);
    if (train_clf->parsed()) return cmd_train_clf(g, embedding, out);
    if (transfer->parsed()) return cmd_transfer(g, source, embedding, mode, out);
    if (eval->parsed()) return cmd_eval(g, bundle, dataset, header, out);
    if (translate->parsed()) return cmd_translate(g, bundle, bundle_b, pairs, reverse, matrix, out);
    if (predict_cmd->parsed()) return cmd_predict(g, bundle, texts, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace lxt
