#include "lxt/embeddings.hpp"
#include "lxt/errors.hpp"
#include "lxt/ops.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace lxt {
namespace {

Vocabulary vocab_from(const std::vector<std::string>& tokens) {
  return build_vocab(std::vector<Document>{{tokens, Label::NOT}});
}

std::vector<std::string> repeat(const std::string& t, int n) { return std::vector<std::string>(n, t); }

TEST(NoiseTable, PowerRaisedUnigram) {
  auto toks = repeat("b", 16);
  toks.push_back("a");
  const auto v = vocab_from(toks);
  const auto table = build_noise_table(v, 0.75);
  const auto& p = table.probabilities();
  EXPECT_EQ(p[Vocabulary::kPad], 0.0);
  EXPECT_NEAR(p[v.id("a")], 1.0 / 9.0, 1e-12);
  EXPECT_NEAR(p[v.id("b")], 8.0 / 9.0, 1e-12);

  const auto uniform = build_noise_table(v, 0.0);
  EXPECT_NEAR(uniform.probabilities()[v.id("a")], uniform.probabilities()[v.id("b")], 1e-15);

  const auto single = build_noise_table(vocab_from({"x", "x"}), 0.75);
  EXPECT_NEAR(single.probabilities()[2], 1.0, 1e-12);
}

TEST(NoiseTable, SumsToOneAndSamplesMatch) {
  std::vector<std::string> toks;
  for (int w = 0; w < 6; ++w) {
    auto r = repeat("w" + std::to_string(w), 1 + w * w * 3);
    toks.insert(toks.end(), r.begin(), r.end());
  }
  const auto v = vocab_from(toks);
  const auto table = build_noise_table(v, 0.75);
  const auto& p = table.probabilities();
  double total = 0;
  for (double x : p) total += x;
  EXPECT_NEAR(total, 1.0, 1e-9);

  Rng rng(21);
  const int n = 1000000;
  std::vector<int> counts(p.size(), 0);
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(table.sample(rng))];
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double sigma = std::sqrt(n * p[i] * (1 - p[i]));
    EXPECT_LE(std::abs(counts[i] - n * p[i]), 3 * sigma + 1e-9) << "id " << i;
  }
}

TEST(NoiseTable, RejectsZeroCounts) {
  Vocabulary v({std::string(kPadToken), std::string(kUnkToken), "a"}, {0, 0, 0}, 2);
  EXPECT_THROW(build_noise_table(v, 0.75), DataError);
}

TEST(Subsampling, KeepProbability) {
  EXPECT_EQ(subsample_keep_prob(1e-6, 1e-5), 1.0);
  EXPECT_EQ(subsample_keep_prob(1e-5, 1e-5), 1.0);
  EXPECT_NEAR(subsample_keep_prob(1e-2, 1e-5), std::sqrt(1e-3), 1e-12);
  EXPECT_NEAR(std::sqrt(1e-3), 0.0316, 1e-4);
  EXPECT_EQ(subsample_keep_prob(0.9, kNoSubsampling), 1.0);
  EXPECT_THROW(subsample_keep_prob(0.5, 0.0), std::invalid_argument);
}

std::set<IdPair> pair_set(const std::vector<IdPair>& v) { return {v.begin(), v.end()}; }

TEST(Pairs, WindowEnumeration) {
  const auto v = vocab_from({"a", "b", "c"});
  const std::int32_t a = v.id("a"), b = v.id("b"), c = v.id("c");
  const std::int32_t ids[] = {a, b, c};
  Rng rng(1);
  const auto w1 = generate_pairs(ids, 1, v, rng, kNoSubsampling);
  EXPECT_EQ(w1, (std::vector<IdPair>{{a, b}, {b, a}, {b, c}, {c, b}}));
  const auto all = generate_pairs(ids, 5, v, rng, kNoSubsampling);
  EXPECT_EQ(pair_set(all), (std::set<IdPair>{{a, b}, {a, c}, {b, a}, {b, c}, {c, a}, {c, b}}));
  EXPECT_EQ(all.size(), 6u);
  const std::int32_t one[] = {a};
  EXPECT_TRUE(generate_pairs(one, 3, v, rng, kNoSubsampling).empty());
}

TEST(Pairs, SymmetricWithoutSubsamplingAndMatchesBruteForce) {
  Rng gen(22);
  std::vector<std::string> toks;
  for (int i = 0; i < 40; ++i) toks.push_back("t" + std::to_string(i));
  const auto v = vocab_from(toks);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = gen.uniform_int(15);
    const int window = 1 + static_cast<int>(gen.uniform_int(6));
    std::vector<std::int32_t> ids;
    for (std::uint64_t i = 0; i < n; ++i) ids.push_back(static_cast<std::int32_t>(2 + gen.uniform_int(40)));
    Rng rng(trial);
    const auto pairs = generate_pairs(ids, window, v, rng, kNoSubsampling);
    std::multiset<IdPair> got(pairs.begin(), pairs.end()), want, mirrored;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = 0; j < ids.size(); ++j) {
        const auto dist = i > j ? i - j : j - i;
        if (i != j && dist <= static_cast<std::size_t>(window)) want.insert({ids[i], ids[j]});
      }
    }
    for (const auto& [x, y] : pairs) mirrored.insert({y, x});
    EXPECT_EQ(got, want);
    EXPECT_EQ(got, mirrored);
  }
}

TEST(Pairs, SubsamplingDropsFrequentTokens) {
  auto toks = repeat("the", 1000);
  toks.push_back("rare");
  const auto v = vocab_from(toks);
  std::vector<std::int32_t> ids;
  for (const auto& t : toks) ids.push_back(v.id(t));
  Rng rng(3);
  const auto pairs = generate_pairs(ids, 2, v, rng, 1e-3);
  // keep prob for "the" is sqrt(1e-3 / (1000/1001)) ~ 0.032
  EXPECT_LT(pairs.size(), 4u * 100);
  EXPECT_GT(pairs.size(), 0u);
}

TEST(SgnsLoss, ValuesMatchOracle) {
  Rng rng(4);
  for (int k : {1, 3, 10}) {
    Tape<double> t;
    const Index d = 8;
    auto zero = t.constant(MatrixX<double>::Zero(1, d));
    auto x = t.constant(test::random_matrix(1, d, rng));
    auto negs = t.constant(test::random_matrix(k, d, rng));
    EXPECT_NEAR(sgns_loss(zero, x, negs).value()(0, 0), (k + 1) * std::log(2.0), 1e-12);

    const auto cm = test::random_matrix(3, d, rng), xm = test::random_matrix(3, d, rng),
               nm = test::random_matrix(3 * k, d, rng);
    const double got = sgns_loss(t.constant(cm), t.constant(xm), t.constant(nm)).value()(0, 0);
    const auto c = oracle::from(cm), xo = oracle::from(xm), n = oracle::from(nm);
    double want = 0;
    for (std::size_t b = 0; b < 3; ++b) {
      const oracle::Mat mine(n.begin() + static_cast<long>(b) * k, n.begin() + static_cast<long>(b + 1) * k);
      want += oracle::sgns_pair_loss(c[b], xo[b], mine);
    }
    EXPECT_NEAR(got, want / 3.0, 1e-10);
    EXPECT_GE(got, 0.0);
  }
}

TEST(SgnsLoss, PerfectSeparationLimitAndStability) {
  Tape<double> t;
  MatrixX<double> c(1, 1), x(1, 1), n(2, 1);
  c << 100;
  x << 100;
  n << -100, -100;
  EXPECT_NEAR(sgns_loss(t.constant(c), t.constant(x), t.constant(n)).value()(0, 0), 0.0, 1e-12);
  n << 100, 100;
  const double big = sgns_loss(t.constant(c), t.constant(x), t.constant(n)).value()(0, 0);
  EXPECT_TRUE(std::isfinite(big));
  EXPECT_NEAR(big, 2e4, 1e-6);
}

TEST(Baseline, ZeroMatricesGiveLogV) {
  BasicSkipGramModel<double> m{Parameter<double>(MatrixX<double>::Zero(7, 4)),
                               Parameter<double>(MatrixX<double>::Zero(7, 4))};
  Tape<double> t;
  const std::int32_t c[] = {2, 3}, x[] = {4, 5};
  EXPECT_NEAR(baseline_loss<double>(t, m, c, x).value()(0, 0), std::log(7.0), 1e-12);
}

TEST(Baseline, LossStrictlyDecreasesOnTwoTokenCorpus) {
  const auto v = vocab_from({"a", "b"});
  Rng rng(5);
  EmbeddingConfig cfg = EmbeddingConfig::baseline();
  cfg.dim = 16;
  auto m = init_skipgram<float>(v.size(), cfg, rng);
  const std::int32_t c[] = {v.id("a"), v.id("b")}, x[] = {v.id("b"), v.id("a")};
  double prev = std::numeric_limits<double>::infinity();
  for (int step = 0; step < 50; ++step) {
    const double loss = baseline_step<float>(m, c, x, AdamConfig{0.01});
    EXPECT_LT(loss, prev) << "step " << step;
    prev = loss;
  }
}

TEST(Init, XavierForSgnsAndSmallUniformForBaseline) {
  Rng rng(6);
  const auto sg = init_skipgram<double>(200, EmbeddingConfig::enhanced(), rng);
  const double bound = std::sqrt(6.0 / (200 + 300));
  EXPECT_LE(sg.center.value.cwiseAbs().maxCoeff(), bound);
  EXPECT_GT(sg.context.value.cwiseAbs().maxCoeff(), 0.9 * bound);
  const auto base = init_skipgram<double>(200, EmbeddingConfig::baseline(), rng);
  EXPECT_LE(base.center.value.cwiseAbs().maxCoeff(), 0.5 / 300);
}

TEST(Config, PresetsAndValidation) {
  const auto b = EmbeddingConfig::baseline(), e = EmbeddingConfig::enhanced();
  EXPECT_EQ(b.dim, 300);
  EXPECT_EQ(b.window, 10);
  EXPECT_EQ(b.mode, EmbeddingMode::baseline_softmax);
  EXPECT_EQ(e.window, 5);
  EXPECT_EQ(e.neg_ratio, 10);
  EXPECT_DOUBLE_EQ(e.noise_power, 0.75);
  EXPECT_DOUBLE_EQ(e.subsample_t, 1e-5);
  auto bad = e;
  bad.dim = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = e;
  bad.neg_ratio = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = e;
  bad.subsample_t = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

std::vector<Document> small_corpus(Rng& rng) {
  std::vector<Document> docs;
  for (int i = 0; i < 120; ++i) {
    Document d;
    const int topic = i % 2;
    for (int t = 0; t < 12; ++t) d.tokens.push_back((topic ? "x" : "y") + std::to_string(rng.uniform_int(10)));
    docs.push_back(d);
  }
  return docs;
}

EmbeddingConfig small_config() {
  EmbeddingConfig cfg = EmbeddingConfig::enhanced();
  cfg.dim = 16;
  cfg.epochs = 6;
  cfg.batch_size = 64;
  cfg.subsample_t = kNoSubsampling;
  return cfg;
}

TEST(Train, DeterministicFiniteAndDecreasing) {
  Rng rng(7);
  const auto docs = small_corpus(rng);
  const auto v = build_vocab(docs);
  const auto cfg = small_config();
  const auto a = train_embeddings(docs, v, cfg, 42);
  const auto b = train_embeddings(docs, v, cfg, 42);
  EXPECT_EQ(a.model.center.value, b.model.center.value);
  EXPECT_EQ(a.model.context.value, b.model.context.value);
  EXPECT_EQ(a.log.epoch_loss, b.log.epoch_loss);
  EXPECT_TRUE(a.model.center.value.allFinite());
  EXPECT_LE(a.model.center.value.rowwise().norm().maxCoeff(), 100.0f);

  std::vector<double> deltas;
  for (std::size_t i = 1; i < a.log.epoch_loss.size(); ++i) deltas.push_back(a.log.epoch_loss[i] - a.log.epoch_loss[i - 1]);
  std::nth_element(deltas.begin(), deltas.begin() + static_cast<long>(deltas.size() / 2), deltas.end());
  EXPECT_LT(deltas[deltas.size() / 2], 0.0);
  EXPECT_EQ(a.log.epoch_pairs.size(), 6u);

  const auto c = train_embeddings(docs, v, cfg, 43);
  EXPECT_NE(a.model.center.value, c.model.center.value);
}

TEST(Train, BaselineModeRuns) {
  Rng rng(8);
  const auto docs = small_corpus(rng);
  const auto v = build_vocab(docs);
  auto cfg = small_config();
  cfg.mode = EmbeddingMode::baseline_softmax;
  cfg.window = 10;
  cfg.epochs = 3;
  const auto r = train_embeddings(docs, v, cfg, 1);
  ASSERT_EQ(r.log.epoch_loss.size(), 3u);
  EXPECT_LT(r.log.epoch_loss.back(), r.log.epoch_loss.front());
  EXPECT_TRUE(r.model.center.value.allFinite());
}

TEST(Train, FullyFrozenModelIsUnchanged) {
  Rng rng(9);
  const auto docs = small_corpus(rng);
  const auto v = build_vocab(docs);
  const auto cfg = small_config();
  Rng init(1);
  auto m = init_skipgram<float>(v.size(), cfg, init);
  m.center.frozen = m.context.frozen = true;
  const auto before_c = m.center.value, before_x = m.context.value;
  train_embeddings(m, docs, v, cfg, 3);
  EXPECT_EQ(m.center.value, before_c);
  EXPECT_EQ(m.context.value, before_x);
}

TEST(Train, EmptyPairStreamFails) {
  const std::vector<Document> docs = {{{"solo"}, Label::NOT}, {{"alone"}, Label::NOT}};
  EXPECT_THROW(train_embeddings(docs, build_vocab(docs), small_config(), 1), DataError);
}

TEST(NearestNeighbors, IdenticalAndOrthogonalRows) {
  Matrix m(4, 3);
  m << 1, 0, 0,  //
      0, 1, 0,   //
      0, 0, 1,   //
      2, 0, 0;
  EXPECT_EQ(nearest_neighbors(m, 0, 1), std::vector<std::int32_t>{3});
  EXPECT_EQ(nearest_neighbors(m, 1, 3), (std::vector<std::int32_t>{0, 2, 3}));
  EXPECT_THROW(nearest_neighbors(m, 9, 1), std::out_of_range);
}

TEST(NearestNeighbors, MatchesBruteForceSort) {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = test::random_matrix<float>(50, 8, rng);
    const auto query = static_cast<std::int32_t>(rng.uniform_int(50));
    const auto got = nearest_neighbors(m, query, 49);
    const auto rows = oracle::from(m);
    std::vector<std::pair<double, std::int32_t>> scored;
    for (std::int32_t i = 0; i < 50; ++i) {
      if (i != query) scored.emplace_back(oracle::cosine(rows[static_cast<std::size_t>(query)], rows[static_cast<std::size_t>(i)]), i);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    ASSERT_EQ(got.size(), 49u);
    for (std::size_t r = 0; r < 49; ++r) EXPECT_EQ(got[r], scored[r].second) << "rank " << r;
  }
}

}  // namespace
}  // namespace lxt
