#include "lxt/ops.hpp"
#include "lxt/optim.hpp"

#include "gradcheck_cases.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace lxt {
namespace {

using test::random_matrix;

void expect_near(const MatrixX<double>& got, const oracle::Mat& want, double tol) {
  ASSERT_EQ(static_cast<std::size_t>(got.rows()), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    ASSERT_EQ(static_cast<std::size_t>(got.cols()), want[i].size());
    for (std::size_t j = 0; j < want[i].size(); ++j) EXPECT_NEAR(got(i, j), want[i][j], tol) << i << "," << j;
  }
}

TEST(Ops, MatmulMatchesLoops) {
  Rng rng(1);
  const auto a = random_matrix(3, 4, rng), b = random_matrix(4, 2, rng), c = random_matrix(5, 4, rng);
  Tape<double> t;
  expect_near(matmul(t.constant(a), t.constant(b)).value(), oracle::matmul(oracle::from(a), oracle::from(b)), 1e-12);
  expect_near(matmul_nt(t.constant(a), t.constant(c)).value(),
              oracle::matmul(oracle::from(a), oracle::transpose(oracle::from(c))), 1e-12);
  EXPECT_THROW(matmul(t.constant(a), t.constant(a)), std::invalid_argument);
}

TEST(Ops, SoftmaxRowsAndColumnsSumToOne) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_matrix(1 + trial % 5, 1 + trial % 7, rng, 20.0);
    Tape<double> t;
    const auto rows = softmax(t.constant(x), 1).value();
    const auto cols = softmax(t.constant(x), 0).value();
    for (Index i = 0; i < x.rows(); ++i) {
      EXPECT_NEAR(rows.row(i).sum(), 1.0, 1e-6);
      std::vector<double> z;
      for (Index j = 0; j < x.cols(); ++j) z.push_back(x(i, j));
      const auto want = oracle::softmax(z);
      for (Index j = 0; j < x.cols(); ++j) EXPECT_NEAR(rows(i, j), want[static_cast<std::size_t>(j)], 1e-12);
    }
    for (Index j = 0; j < x.cols(); ++j) EXPECT_NEAR(cols.col(j).sum(), 1.0, 1e-6);
  }
}

TEST(Ops, SoftmaxIsStableForHugeInputs) {
  Tape<float> t;
  MatrixX<float> x(1, 3);
  x << 1e30f, 1e30f, -1e30f;
  const auto p = softmax(t.constant(x)).value();
  EXPECT_FLOAT_EQ(p(0, 0), 0.5f);
  EXPECT_FLOAT_EQ(p(0, 2), 0.0f);
}

TEST(Ops, BceMatchesDirectFormulaAndStaysFinite) {
  MatrixX<double> z(4, 1);
  z << 0.3, -2.0, 800.0, -800.0;
  const std::vector<int> y = {1, 0, 0, 1};
  double want = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double p = oracle::sigmoid(z(i, 0));
    want -= y[i] ? std::log(p) : std::log(1 - p);
  }
  want += 800.0 + 800.0;  // -log s(-800) and -log s(-800) in the limit
  Tape<double> t;
  const double got = bce_with_logits(t.constant(z), std::span<const int>(y)).value()(0, 0);
  EXPECT_NEAR(got, want / 4.0, 1e-9);
}

TEST(Ops, LayerNormMatchesOracleAndNormalizes) {
  Rng rng(3);
  const auto x = random_matrix(6, 12, rng, 5.0);
  MatrixX<double> ones = MatrixX<double>::Ones(1, 12), zero = MatrixX<double>::Zero(1, 12);
  const auto g = random_matrix(1, 12, rng), b = random_matrix(1, 12, rng);
  Tape<double> t;
  const auto plain = layer_norm(t.constant(x), t.constant(ones), t.constant(zero)).value();
  for (Index i = 0; i < plain.rows(); ++i) {
    EXPECT_NEAR(plain.row(i).mean(), 0.0, 1e-6);
    EXPECT_NEAR(plain.row(i).squaredNorm() / 12.0, 1.0, 1e-3);
  }
  std::vector<double> gv(g.data(), g.data() + 12), bv(b.data(), b.data() + 12);
  expect_near(layer_norm(t.constant(x), t.constant(g), t.constant(b)).value(),
              oracle::layer_norm(oracle::from(x), gv, bv), 1e-10);
}

TEST(Ops, DropoutZeroFractionAndScaling) {
  Rng rng(4);
  const Index n = 100000;
  MatrixX<float> x = MatrixX<float>::Ones(1, n);
  Tape<float> t;
  const auto y = dropout(t.constant(x), 0.7, true, rng).value();
  const double zeros = static_cast<double>((y.array() == 0.0f).count()) / static_cast<double>(n);
  EXPECT_NEAR(zeros, 0.7, 0.01);
  for (Index i = 0; i < n; ++i) {
    if (y(0, i) != 0.0f) EXPECT_NEAR(y(0, i), 1.0f / 0.3f, 1e-5f);
  }
  EXPECT_EQ(dropout(t.constant(x), 0.7, false, rng).value(), x);
  EXPECT_THROW(dropout(t.constant(x), 1.0, true, rng), std::invalid_argument);
}

TEST(Ops, AttentionMatchesOracle) {
  Rng rng(5);
  for (int heads : {1, 2, 3}) {
    const Index d = 6, n = 5;
    const auto x = random_matrix(n, d, rng), wq = random_matrix(d, d, rng), wk = random_matrix(d, d, rng),
               wv = random_matrix(d, d, rng), wo = random_matrix(d, d, rng);
    bool mask[] = {false, true, false, false, true};
    Tape<double> t;
    const AttentionWeights<double> w{t.constant(wq), t.constant(wk), t.constant(wv), t.constant(wo)};
    std::vector<MatrixX<double>> weights;
    const auto got = multi_head_attention<double>(t.constant(x), w, heads, mask, &weights).value();
    const auto want = oracle::attention(oracle::from(x), oracle::from(wq), oracle::from(wk), oracle::from(wv),
                                        oracle::from(wo), heads, {false, true, false, false, true});
    expect_near(got, want, 1e-10);
    ASSERT_EQ(weights.size(), static_cast<std::size_t>(heads));
    for (const auto& p : weights) {
      for (Index i = 0; i < n; ++i) {
        EXPECT_NEAR(p.row(i).sum(), 1.0, 1e-6);
        EXPECT_EQ(p(i, 1), 0.0);
        EXPECT_EQ(p(i, 4), 0.0);
      }
    }
  }
}

TEST(Ops, SegmentedAttentionEqualsSeparateCalls) {
  Rng rng(6);
  const Index d = 4;
  const auto a = random_matrix(3, d, rng), b = random_matrix(2, d, rng);
  MatrixX<double> ab(5, d);
  ab << a, b;
  const auto wq = random_matrix(d, d, rng), wk = random_matrix(d, d, rng), wv = random_matrix(d, d, rng),
             wo = random_matrix(d, d, rng);
  Tape<double> t;
  const AttentionWeights<double> w{t.constant(wq), t.constant(wk), t.constant(wv), t.constant(wo)};
  const Index segs[] = {3, 2};
  const auto joint = multi_head_attention<double>(t.constant(ab), w, 2, {}, nullptr, segs).value();
  const auto ya = multi_head_attention<double>(t.constant(a), w, 2).value();
  const auto yb = multi_head_attention<double>(t.constant(b), w, 2).value();
  EXPECT_LT((joint.topRows(3) - ya).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((joint.bottomRows(2) - yb).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Ops, SegmentMeanRowsAndGather) {
  MatrixX<double> x(4, 2);
  x << 1, 2, 3, 4, 5, 6, 7, 8;
  Tape<double> t;
  const Index segs[] = {1, 3};
  const auto m = segment_mean_rows(t.constant(x), std::span<const Index>(segs)).value();
  EXPECT_EQ(m(0, 0), 1);
  EXPECT_EQ(m(1, 1), 6);
  const Index bad[] = {1, 2};
  EXPECT_THROW(segment_mean_rows(t.constant(x), std::span<const Index>(bad)), std::invalid_argument);
  const std::int32_t ids[] = {3, 3, 0};
  const auto g = gather_rows(t.constant(x), std::span<const std::int32_t>(ids)).value();
  EXPECT_EQ(g(1, 0), 7);
  EXPECT_EQ(g(2, 1), 2);
  const std::int32_t oob[] = {4};
  EXPECT_THROW(gather_rows(t.constant(x), std::span<const std::int32_t>(oob)), std::out_of_range);
}

TEST(Ops, GatherGradientTouchesOnlyUsedRows) {
  Parameter<double> table(MatrixX<double>::Ones(5, 3));
  Tape<double> t;
  const std::int32_t ids[] = {1, 3, 1};
  t.backward(sum(gather_rows(t.parameter(table), std::span<const std::int32_t>(ids))));
  EXPECT_EQ(table.grad.row(1).sum(), 6.0);
  EXPECT_EQ(table.grad.row(3).sum(), 3.0);
  EXPECT_EQ(table.grad.row(0).sum() + table.grad.row(2).sum() + table.grad.row(4).sum(), 0.0);
}

TEST(Ops, XavierVarianceMatchesTheory) {
  Rng rng(7);
  const auto w = xavier_uniform<double>(300, 300, rng);
  const double var = w.array().square().mean() - std::pow(w.mean(), 2);
  EXPECT_NEAR(var / (2.0 / 600.0), 1.0, 0.1);
}

class GradFamilies : public ::testing::TestWithParam<std::size_t> {};

TEST_P(GradFamilies, AnalyticMatchesNumeric) {
  const auto fams = test::grad_families();
  const auto& fam = fams[GetParam()];
  const auto out = test::run_family(fam, 10, 1000 + GetParam());
  EXPECT_LT(out.max_rel_error, 1e-3) << fam.name << ": " << out.worst;
}

INSTANTIATE_TEST_SUITE_P(AllOps, GradFamilies, ::testing::Range<std::size_t>(0, test::grad_families().size()),
                         [](const auto& info) { return test::grad_families()[info.param].name; });

}  // namespace
}  // namespace lxt
