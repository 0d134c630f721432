// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status is nonzero when any criterion fails.

#include "lxt/bundle.hpp"
#include "lxt/cli.hpp"
#include "lxt/corpus.hpp"
#include "lxt/embeddings.hpp"
#include "lxt/metrics.hpp"
#include "lxt/optim.hpp"
#include "lxt/synthdata.hpp"
#include "lxt/transfer.hpp"
#include "lxt/translation.hpp"

#include "gradcheck_cases.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

namespace fs = std::filesystem;
using namespace lxt;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [failed]");
  }
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

double cpu_seconds() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

struct Cli {
  int code;
  std::string out, err;
};

Cli cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

void must(const Cli& r, const std::string& what) {
  if (r.code != kExitOk) throw std::runtime_error(what + " exited " + std::to_string(r.code) + ": " + r.err);
}

fs::path write_json(const fs::path& path, const Json& j) {
  test::write_file(path, j.dump(2));
  return path;
}

// Per-epoch eval accuracy of run 0 from a metrics CSV.
std::vector<double> eval_accuracy(const fs::path& csv) {
  std::istringstream in(test::read_file(csv));
  std::vector<double> acc;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::istringstream row(line);
    for (std::string x; std::getline(row, x, ',');) f.push_back(x);
    if (f.size() == 5 && f[0] == "0" && f[2] == "eval" && f[3] == "accuracy") acc.push_back(std::stod(f[4]));
  }
  return acc;
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = test::read_file(e.path());
  }
  return files;
}

// ---------------------------------------------------------------------------

Outcome gradient_correctness() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t seed = 90000;
  double worst = 0.0;
  for (const auto& fam : test::grad_families()) {
    const auto r = test::run_family(fam, 100, seed++);
    worst = std::max(worst, r.max_rel_error);
    o.require(r.cases >= 100 && r.max_rel_error < 1e-3, fam.name + " " + fmt(r.max_rel_error, 2));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(secs < 60.0, "worst " + fmt(worst, 2) + " in " + fmt(secs, 3) + " s");
  return o;
}

Outcome numerical_invariants() {
  Outcome o;
  Rng rng(91);
  double softmax_err = 0.0, attn_err = 0.0, ln_mean = 0.0, ln_var = 0.0;
  std::size_t ln_rows = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = test::dim_in(rng, 1, 16), d = 2 * test::dim_in(rng, 1, 16);
    const MatrixX<float> x = test::random_matrix<float>(n, d, rng, 1.0 + 20.0 * rng.uniform());
    Tape<float> t;
    for (int axis : {0, 1}) {
      const MatrixX<double> s = softmax(t.constant(x), axis).value().cast<double>();
      const Eigen::VectorXd sums = axis == 1 ? Eigen::VectorXd(s.rowwise().sum()) : Eigen::VectorXd(s.colwise().sum().transpose());
      softmax_err = std::max(softmax_err, (sums.array() - 1.0).abs().maxCoeff());
    }
    const int heads = d % 4 == 0 ? 4 : 2;
    std::vector<bool> pad(static_cast<std::size_t>(n));
    for (Index i = 1; i < n; ++i) pad[static_cast<std::size_t>(i)] = rng.bernoulli(0.3);
    std::unique_ptr<bool[]> mask(new bool[static_cast<std::size_t>(n)]);
    for (Index i = 0; i < n; ++i) mask[static_cast<std::size_t>(i)] = pad[static_cast<std::size_t>(i)];
    const AttentionWeights<float> w{t.constant(test::random_matrix<float>(d, d, rng)),
                                    t.constant(test::random_matrix<float>(d, d, rng)),
                                    t.constant(test::random_matrix<float>(d, d, rng)),
                                    t.constant(test::random_matrix<float>(d, d, rng))};
    std::vector<MatrixX<float>> weights;
    multi_head_attention<float>(t.constant(x), w, heads, std::span<const bool>(mask.get(), static_cast<std::size_t>(n)),
                                &weights);
    for (const auto& a : weights) {
      const Eigen::VectorXd sums = a.cast<double>().rowwise().sum();
      attn_err = std::max(attn_err, (sums.array() - 1.0).abs().maxCoeff());
    }
    const auto y = layer_norm(t.constant(x), t.constant(MatrixX<float>::Ones(1, d)),
                              t.constant(MatrixX<float>::Zero(1, d)))
                       .value()
                       .cast<double>();
    for (Index i = 0; i < n; ++i) {
      // rows whose variance is comparable to eps are degenerate
      const Eigen::ArrayXd xi = x.row(i).cast<double>().transpose().array();
      if ((xi - xi.mean()).square().mean() < 1e-2) continue;
      ++ln_rows;
      const double mu = y.row(i).mean();
      const double var = (y.row(i).array() - mu).square().mean();
      ln_mean = std::max(ln_mean, std::abs(mu));
      ln_var = std::max(ln_var, std::abs(var - 1.0));
    }
  }
  o.require(softmax_err <= 1e-6, "softmax sum err " + fmt(softmax_err, 2));
  o.require(attn_err <= 1e-6, "attention sum err " + fmt(attn_err, 2));
  o.require(ln_mean < 1e-6 && ln_var <= 1e-3, "layer_norm |mean| " + fmt(ln_mean, 2) + " |var-1| " + fmt(ln_var, 2) + " over " +
                                                 std::to_string(ln_rows) + " rows");

  const auto xw = xavier_uniform<double>(300, 300, rng);
  const double var = xw.array().square().mean() - std::pow(xw.mean(), 2);
  const double ratio = var / (2.0 / 600.0);
  o.require(std::abs(ratio - 1.0) <= 0.1, "xavier var ratio " + fmt(ratio));

  Tape<float> t;
  const auto y = dropout(t.constant(MatrixX<float>::Ones(1, 100000)), 0.7, true, rng).value();
  const double zeros = static_cast<double>((y.array() == 0.0f).count()) / 1e5;
  o.require(std::abs(zeros - 0.7) <= 0.01, "dropout zero fraction " + fmt(zeros));
  return o;
}

Outcome sgns_structure() {
  Outcome o;
  const double t0 = cpu_seconds();
  SynthConfig sc;
  sc.vocab_size = 200;
  sc.num_topics = 2;
  sc.num_train = 2000;
  sc.num_test = 1;
  sc.hate_proportion = 0.0;
  const auto corpus = generate_corpus(sc);
  const auto cleaning = CleaningConfig::enhanced();
  const auto docs = make_documents(corpus.a.train, cleaning);
  const auto vocab = build_vocab(docs);
  EmbeddingConfig ec = EmbeddingConfig::enhanced();
  ec.epochs = 5;
  ec.subsample_t = 1e-3;
  const auto result = train_embeddings(docs, vocab, ec, 7);
  const Matrix& m = result.model.center.value;

  double intra = 0, inter = 0;
  std::size_t n_intra = 0, n_inter = 0;
  const auto& words = corpus.a.background;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!vocab.contains(words[i])) continue;
    for (std::size_t j = i + 1; j < words.size(); ++j) {
      if (!vocab.contains(words[j])) continue;
      const double c = cosine_similarity(m.row(vocab.id(words[i])), m.row(vocab.id(words[j])));
      if (corpus.topic_of[i] == corpus.topic_of[j]) {
        intra += c;
        ++n_intra;
      } else {
        inter += c;
        ++n_inter;
      }
    }
  }
  intra /= static_cast<double>(n_intra);
  inter /= static_cast<double>(n_inter);
  const double secs = cpu_seconds() - t0;
  o.require(intra - inter >= 0.2, "intra " + fmt(intra) + " inter " + fmt(inter) + " gap " + fmt(intra - inter));
  o.require(ec.epochs <= 5 && secs < 60.0, fmt(ec.epochs, 1) + " epochs in " + fmt(secs, 3) + " s");
  return o;
}

// Shared synthetic workspace for the classifier, transfer and translation criteria.
struct Workspace {
  test::TempDir dir{"acceptance"};
  fs::path corpus() const { return dir.path() / "corpus"; }

  Json config(const std::string& lang, const std::string& preset) const {
    Json j;
    j["cleaning"]["preset"] = preset;
    j["embedding"]["preset"] = preset;
    j["classifier"]["preset"] = preset;
    j["classifier"]["epochs"] = 10;
    j["seeds"]["runs"] = 1;
    j["data"]["train"] = (corpus() / (lang + "_train.tsv")).string();
    j["data"]["test"] = (corpus() / (lang + "_test.tsv")).string();
    return j;
  }

  // train-embed then train-clf; returns the output directory and classifier CPU seconds.
  std::pair<fs::path, double> train(const std::string& lang, const std::string& preset) const {
    const auto out = dir.path() / (lang + "_" + preset);
    const auto cfg = write_json(dir.path() / (lang + "_" + preset + ".json"), config(lang, preset)).string();
    must(cli({"--config", cfg, "--out", out.string(), "train-embed"}), "train-embed " + lang);
    const double t0 = cpu_seconds();
    must(cli({"--config", cfg, "--out", out.string(), "train-clf", "--embedding", (out / "embedding").string()}),
         "train-clf " + lang);
    return {out, cpu_seconds() - t0};
  }
};

Outcome classifier_learns(const Workspace& ws) {
  Outcome o;
  const auto test_size = load_dataset(ws.corpus() / "a_test.tsv").size();
  const auto train_size = load_dataset(ws.corpus() / "a_train.tsv").size();
  o.require(train_size == 4665 && test_size == 1318,
            "corpus " + std::to_string(train_size) + "/" + std::to_string(test_size));
  for (const auto& [preset, bar] : {std::pair<std::string, double>{"enhanced", 0.95}, {"baseline", 0.90}}) {
    const auto [out, secs] = ws.train("a", preset);
    const auto acc = eval_accuracy(out / "metrics.csv");
    const double best = acc.size() > 1 ? *std::max_element(acc.begin() + 1, acc.end()) : 0.0;
    o.require(acc.size() == 11 && best >= bar, preset + " best " + fmt(best) + " final " + fmt(acc.back()));
    o.require(secs < 180.0, preset + " " + fmt(secs, 3) + " s CPU");
  }
  return o;
}

Outcome transfer_mechanics(const Workspace& ws) {
  Outcome o;
  const auto source_dir = ws.dir.path() / "a_enhanced" / "run0";
  const auto source = load_classifier_bundle(source_dir);

  // identity swap
  const auto test_docs = make_documents(load_dataset(ws.corpus() / "a_test.tsv"), source.cleaning);
  const auto seqs = encode_documents(test_docs, source.vocab, source.config.max_len);
  std::vector<std::span<const std::int32_t>> views;
  for (const auto& s : seqs) {
    if (!s.ids.empty()) views.emplace_back(s.ids);
  }
  const auto swapped =
      swap_embedding(source.model, source.vocab, PretrainedEmbedding{&source.model.embedding.value, &source.vocab}, 5);
  const auto before = logits(source.model, std::span<const std::span<const std::int32_t>>(views));
  const auto after = logits(swapped, std::span<const std::span<const std::int32_t>>(views));
  o.require(before == after, "identity swap logits bit-exact over " + std::to_string(views.size()) + " texts");

  // language B from scratch and by transfer
  const auto [scratch_dir, scratch_secs] = ws.train("b", "enhanced");
  (void)scratch_secs;
  const auto xfer_dir = ws.dir.path() / "b_transfer";
  Json xfer_cfg = ws.config("b", "enhanced");
  xfer_cfg["classifier"]["lr0"] = 1e-2;
  const auto xcfg = write_json(ws.dir.path() / "b_transfer.json", xfer_cfg).string();
  must(cli({"--config", xcfg, "--out", xfer_dir.string(), "transfer", "--source", source_dir.string(), "--embedding",
            (scratch_dir / "embedding").string(), "--mode", "fix_non_embedding"}),
       "transfer");
  const auto moved = load_classifier_bundle(xfer_dir / "run0");
  const bool same = group_hash(moved.model, ParamGroup::blocks) == group_hash(source.model, ParamGroup::blocks) &&
                    group_hash(moved.model, ParamGroup::head) == group_hash(source.model, ParamGroup::head);
  o.require(same, "blocks/head hashes unchanged by fix_non_embedding");
  o.require(bundle_hash(source_dir) == moved.provenance.at("source_bundle_hash").get<std::string>(),
            "source hash recorded");

  const double scratch = eval_accuracy(scratch_dir / "metrics.csv").back();
  const double transfer = eval_accuracy(xfer_dir / "metrics.csv").back();
  o.require(scratch - transfer <= 0.05, "B scratch " + fmt(scratch) + " vs transfer " + fmt(transfer));
  return o;
}

Outcome translation_probe(const Workspace& ws) {
  Outcome o;
  // permuted copy of a trained embedding along the synthetic bijection
  const auto emb = load_embedding_bundle(ws.dir.path() / "a_enhanced" / "embedding");
  const auto pairs = load_pairs(ws.corpus() / "bijection.tsv");
  std::map<std::string, std::string> to_a;
  for (const auto& p : pairs) to_a[p.target_word] = p.source_word;
  const auto b_docs = make_documents(load_dataset(ws.corpus() / "b_train.tsv"), emb.cleaning);
  const auto vb = build_vocab(b_docs);
  Matrix b = Matrix::Zero(static_cast<Index>(vb.size()), emb.model.center.value.cols());
  bool complete = true;
  for (std::size_t i = 0; i < vb.size(); ++i) {
    const auto& tok = vb.token(static_cast<std::int32_t>(i));
    const auto it = to_a.find(tok);
    const std::string src = it == to_a.end() ? tok : it->second;
    if (!emb.vocab.contains(src)) {
      complete = false;
      continue;
    }
    b.row(static_cast<Index>(i)) = emb.model.center.value.row(emb.vocab.id(src));
  }
  o.require(complete && vb.size() == emb.vocab.size(), "B vocabulary is a relabeling of A");
  for (auto dir : {RankDirection::source_to_target, RankDirection::target_to_source}) {
    const auto r = translation_rank(emb.model.center.value, emb.vocab, b, vb, pairs, dir);
    o.require(r.rank1_count == pairs.size() && r.oov_count == 0,
              to_string(dir) + " rank-1 " + std::to_string(r.rank1_count) + "/" + std::to_string(pairs.size()));
  }

  Rng rng(96);
  std::size_t agree = 0, invariant = 0;
  const std::size_t trials = 500;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const Matrix q = test::random_matrix<float>(50, 8, rng), c = test::random_matrix<float>(50, 8, rng);
    const auto qi = static_cast<Index>(rng.uniform_int(50)), truth = static_cast<Index>(rng.uniform_int(50));
    const auto rank = cosine_rank(q, qi, c, truth);
    agree += rank == oracle::full_sort_rank(oracle::from(q)[static_cast<std::size_t>(qi)], oracle::from(c),
                                            static_cast<std::size_t>(truth));
    const float a = static_cast<float>(rng.uniform(0.1, 10.0)), s = static_cast<float>(rng.uniform(0.1, 10.0));
    invariant += rank == cosine_rank(Matrix(q * a), qi, Matrix(c * s), truth);
  }
  o.require(agree == trials, "brute force agreement " + std::to_string(agree) + "/" + std::to_string(trials));
  o.require(invariant == trials, "rescale invariance " + std::to_string(invariant) + "/" + std::to_string(trials));
  return o;
}

Outcome metrics_correctness() {
  Outcome o;
  const std::vector<Label> pred = {Label::HOF, Label::NOT, Label::NOT, Label::NOT};
  const std::vector<Label> truth = {Label::HOF, Label::HOF, Label::NOT, Label::NOT};
  const double f = macro_f1(pred, truth);
  o.require(std::abs(f - 11.0 / 15.0) <= 1e-9, "macro_f1 " + fmt(f, 12));

  Rng rng(97);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto runs_n = 1 + rng.uniform_int(6), epochs = 1 + rng.uniform_int(10);
    std::vector<TrainRunResult> runs;
    double total = 0;
    for (std::uint64_t r = 0; r < runs_n; ++r) {
      TrainRunResult run;
      run.initial_eval = {0.5, 0.5};
      for (std::uint64_t e = 0; e < epochs; ++e) {
        EpochMetrics m;
        m.epoch = static_cast<int>(e + 1);
        m.train_loss = rng.uniform();
        m.eval = {rng.uniform(), rng.uniform()};
        total += m.eval.accuracy;
        run.epochs.push_back(m);
      }
      runs.push_back(run);
    }
    for (const auto& b : aggregate_runs(runs)) {
      if (b.split != "eval" || b.metric != "accuracy") continue;
      const double mean_of_means = std::accumulate(b.mean.begin(), b.mean.end(), 0.0) / static_cast<double>(epochs);
      worst = std::max(worst, std::abs(mean_of_means - total / static_cast<double>(runs_n * epochs)));
    }
  }
  o.require(worst <= 1e-12, "aggregate linearity max err " + fmt(worst, 2));
  return o;
}

Outcome determinism() {
  Outcome o;
  test::TempDir dir("determinism");
  Json cfg = Json::parse(R"({
    "synth": {"vocab_size": 80, "num_train": 400, "num_test": 120},
    "embedding": {"dim": 24, "epochs": 2, "subsample_t": 1e-3},
    "classifier": {"heads": 4, "epochs": 2, "max_len": 24},
    "seeds": {"base": 11, "runs": 2}
  })");
  cfg["data"]["train"] = (dir.path() / "corpus" / "a_train.tsv").string();
  cfg["data"]["test"] = (dir.path() / "corpus" / "a_test.tsv").string();
  cfg["paths"]["out"] = (dir.path() / "corpus").string();
  Json cfg_b = cfg;
  cfg_b["data"]["train"] = (dir.path() / "corpus" / "b_train.tsv").string();
  cfg_b["data"]["test"] = (dir.path() / "corpus" / "b_test.tsv").string();
  const auto a = write_json(dir.path() / "a.json", cfg).string();
  const auto b = write_json(dir.path() / "b.json", cfg_b).string();
  const auto out = dir.path() / "out";
  const auto o_ = out.string();
  const auto corpus = dir.path() / "corpus";

  auto pipeline = [&] {
    fs::remove_all(corpus);
    fs::remove_all(out);
    must(cli({"--config", a, "--threads", "1", "synth"}), "synth");
    must(cli({"--config", a, "--out", o_ + "/stats", "stats", (corpus / "a_train.tsv").string()}), "stats");
    must(cli({"--config", a, "--out", o_, "sample", (corpus / "a_train.tsv").string(), "--size", "100"}), "sample");
    must(cli({"--config", a, "--out", o_ + "/a", "train-embed"}), "train-embed a");
    must(cli({"--config", a, "--out", o_ + "/a", "--threads", "1", "train-clf", "--embedding", o_ + "/a/embedding"}),
         "train-clf a");
    must(cli({"--config", b, "--out", o_ + "/b", "train-embed"}), "train-embed b");
    must(cli({"--config", b, "--out", o_ + "/t", "--threads", "1", "transfer", "--source", o_ + "/a/run0",
              "--embedding", o_ + "/b/embedding", "--mode", "no_fix"}),
         "transfer");
    must(cli({"--out", o_ + "/eval", "eval", o_ + "/t/run1", (corpus / "b_test.tsv").string()}), "eval");
    must(cli({"--out", o_ + "/probe", "translate", o_ + "/a/run0", o_ + "/t/run0", (corpus / "bijection.tsv").string()}),
         "translate");
    auto files = snapshot(out);
    for (auto& [k, v] : snapshot(corpus)) files["corpus/" + k] = v;
    return files;
  };
  const auto first = pipeline();
  const auto second = pipeline();
  std::size_t differing = 0;
  for (const auto& [k, v] : first) differing += !second.count(k) || second.at(k) != v;
  o.require(first.size() == second.size() && differing == 0,
            std::to_string(first.size()) + " files compared, " + std::to_string(differing) + " differ");
  o.require(first.count("a/metrics.csv") && first.count("t/metrics.csv") && first.count("a/run1/manifest.json"),
            "bundles and metrics present");
  return o;
}

// Reproduction on the real Hindi data, only when its location is given.
std::optional<Outcome> hindi_reproduction() {
  const char* train = std::getenv("LXT_HASOC_HINDI_TRAIN");
  const char* test = std::getenv("LXT_HASOC_HINDI_TEST");
  if (train == nullptr || test == nullptr) return std::nullopt;
  Outcome o;
  test::TempDir dir("hindi");
  Json cfg;
  cfg["data"]["train"] = train;
  cfg["data"]["test"] = test;
  if (const char* header = std::getenv("LXT_HASOC_HEADER")) cfg["data"]["header"] = std::string(header) == "1";
  const auto path = write_json(dir.path() / "c.json", cfg).string();
  const auto out = (dir.path() / "out").string();
  must(cli({"--config", path, "--out", out, "train-embed"}), "train-embed");
  must(cli({"--config", path, "--out", out, "train-clf", "--embedding", out + "/embedding"}), "train-clf");
  std::istringstream in(test::read_file(fs::path(out) / "aggregate.csv"));
  double f1 = 0, best_acc = 0;
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> f;
    std::istringstream row(line);
    for (std::string x; std::getline(row, x, ',');) f.push_back(x);
    if (f.size() != 6 || f[1] != "eval") continue;
    if (f[2] == "macro_f1") f1 = std::stod(f[3]);
    if (f[2] == "accuracy") best_acc = std::max(best_acc, std::stod(f[3]));
  }
  o.require(std::abs(f1 - 0.8057) <= 0.03, "final mean macro_f1 " + fmt(f1));
  o.require(std::abs(best_acc - 0.8073) <= 0.02, "best mean accuracy " + fmt(best_acc));
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const std::string& id, const std::string& title, const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::cout << id << ' ' << (o.pass ? "PASS" : "FAIL") << ' ' << title << ": " << o.detail.str() << " ("
              << fmt(secs, 3) << " s)" << std::endl;
  };

  report("AC1", "gradient correctness", gradient_correctness);
  report("AC2", "numerical invariants", numerical_invariants);
  report("AC3", "SGNS learns topic structure", sgns_structure);

  std::unique_ptr<Workspace> ws;
  try {
    ws = std::make_unique<Workspace>();
    must(cli({"--out", ws->corpus().string(), "synth"}), "synth");
  } catch (const std::exception& e) {
    std::cerr << "synthetic workspace: " << e.what() << '\n';
  }
  auto with_ws = [&](std::function<Outcome(const Workspace&)> f) {
    return [&ws, f] {
      if (!ws) throw std::runtime_error("no synthetic workspace");
      return f(*ws);
    };
  };
  report("AC4", "classifier learns", with_ws(classifier_learns));
  report("AC5", "transfer mechanics", with_ws(transfer_mechanics));
  report("AC6", "translation probe", with_ws(translation_probe));
  report("AC7", "metrics correctness", metrics_correctness);
  report("AC8", "determinism", determinism);

  if (std::getenv("LXT_HASOC_HINDI_TRAIN") != nullptr && std::getenv("LXT_HASOC_HINDI_TEST") != nullptr) {
    report("AC9", "Hindi reproduction", [] { return std::move(*hindi_reproduction()); });
  } else {
    std::cout << "AC9 SKIP Hindi reproduction: set LXT_HASOC_HINDI_TRAIN and LXT_HASOC_HINDI_TEST to run" << std::endl;
  }

  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
