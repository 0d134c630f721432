#include "lxt/bundle.hpp"
#include "lxt/errors.hpp"
#include "lxt/transfer.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

namespace lxt {
namespace {

constexpr Index kDim = 8;

Vocabulary word_vocab(const std::string& prefix, int n) {
  std::vector<std::string> toks;
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r <= n - i; ++r) toks.push_back(prefix + std::to_string(i));
  }
  return build_vocab(std::vector<Document>{{toks, Label::NOT}});
}

ClassifierConfig config() {
  ClassifierConfig cfg = ClassifierConfig::enhanced();
  cfg.heads = 2;
  cfg.max_len = 12;
  cfg.batch_size = 8;
  cfg.epochs = 2;
  cfg.lr0 = 0.01;
  return cfg;
}

ClassifierModel source_model(const Vocabulary& v) {
  Rng rng(1);
  const Matrix emb = test::random_matrix<float>(static_cast<Index>(v.size()), kDim, rng, 0.5);
  return make_classifier<float>(config(), emb, rng);
}

std::vector<LabeledSequence> data_for(const Vocabulary& v, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledSequence> out;
  const auto words = static_cast<std::uint64_t>(v.size() - v.num_specials());
  for (std::size_t i = 0; i < n; ++i) {
    LabeledSequence s;
    for (int t = 0; t < 5; ++t) s.ids.push_back(static_cast<std::int32_t>(v.num_specials() + rng.uniform_int(words)));
    s.label = s.ids[0] % 2 ? Label::HOF : Label::NOT;
    out.push_back(s);
  }
  return out;
}

bool same_values(const std::vector<const Parameter<float>*>& a, const std::vector<const Parameter<float>*>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i]->value != b[i]->value) return false;
  }
  return true;
}

TEST(TransferMode, MasksAndNames) {
  EXPECT_EQ(freeze_mask_for(TransferMode::no_fix), (FreezeMask{false, false, false}));
  EXPECT_EQ(freeze_mask_for(TransferMode::fix_non_embedding), (FreezeMask{false, true, true}));
  EXPECT_EQ(freeze_mask_for(TransferMode::fix_embedding), (FreezeMask{true, false, false}));
  for (auto m : {TransferMode::no_fix, TransferMode::fix_non_embedding, TransferMode::fix_embedding}) {
    EXPECT_EQ(parse_transfer_mode(to_string(m)), m);
  }
  EXPECT_THROW(parse_transfer_mode("fix_everything"), ConfigError);
}

TEST(Swap, CopiesBlocksAndHeadAndResizesEmbedding) {
  const auto va = word_vocab("a", 10), vb = word_vocab("b", 25);
  auto src = source_model(va);
  src.set_freeze({false, true, false});
  src.blocks[0].wq.adam_m.setConstant(1.0f);
  const auto swapped = swap_embedding(src, vb, XavierFresh{}, 3);
  EXPECT_EQ(swapped.embedding.value.rows(), static_cast<Index>(vb.size()));
  EXPECT_EQ(swapped.embedding.value.cols(), kDim);
  EXPECT_TRUE(same_values(std::as_const(swapped).parameters(ParamGroup::blocks), std::as_const(src).parameters(ParamGroup::blocks)));
  EXPECT_TRUE(same_values(std::as_const(swapped).parameters(ParamGroup::head), std::as_const(src).parameters(ParamGroup::head)));
  EXPECT_EQ(swapped.positional, src.positional);
  EXPECT_EQ(swapped.blocks[0].wq.adam_m, Matrix::Zero(kDim, kDim));
  EXPECT_EQ(swapped.freeze, FreezeMask{});
  EXPECT_EQ(swap_embedding(src, vb, XavierFresh{}, 3).embedding.value, swapped.embedding.value);
}

TEST(Swap, IdentitySwapReproducesLogitsBitExactly) {
  const auto va = word_vocab("a", 10);
  const auto src = source_model(va);
  const auto swapped = swap_embedding(src, va, PretrainedEmbedding{&src.embedding.value, &va}, 5);
  EXPECT_EQ(swapped.embedding.value, src.embedding.value);
  const auto data = data_for(va, 20, 1);
  for (const auto& s : data) EXPECT_EQ(logit<float>(swapped, s.ids), logit<float>(src, s.ids));
}

TEST(Swap, PretrainedRowsFollowTokens) {
  const auto va = word_vocab("a", 6);
  const auto vb = word_vocab("a", 9);  // superset with different ids
  Rng rng(2);
  const Matrix pre = test::random_matrix<float>(static_cast<Index>(va.size()), kDim, rng);
  const auto swapped = swap_embedding(source_model(va), vb, PretrainedEmbedding{&pre, &va}, 1);
  for (std::size_t i = 0; i < vb.size(); ++i) {
    const auto& tok = vb.token(static_cast<std::int32_t>(i));
    if (va.contains(tok)) EXPECT_EQ(swapped.embedding.value.row(static_cast<Index>(i)), pre.row(va.id(tok))) << tok;
  }
  const Matrix wrong_dim = Matrix::Zero(static_cast<Index>(va.size()), kDim + 2);
  EXPECT_THROW(swap_embedding(source_model(va), vb, PretrainedEmbedding{&wrong_dim, &va}, 1), ConfigError);
  const Matrix wrong_rows = Matrix::Zero(3, kDim);
  EXPECT_THROW(swap_embedding(source_model(va), vb, PretrainedEmbedding{&wrong_rows, &va}, 1), DataError);
}

TEST(Swap, ZeroEpochFixNonEmbeddingDiffersOnlyInEmbedding) {
  const auto va = word_vocab("a", 10), vb = word_vocab("b", 10);
  const auto src = source_model(va);
  auto cfg = config();
  cfg.epochs = 0;
  const auto data = data_for(vb, 10, 2);
  const auto r = transfer_train(src, "h", vb, XavierFresh{}, data, data, TransferMode::fix_non_embedding, cfg, 1);
  EXPECT_TRUE(r.run.epochs.empty());
  EXPECT_EQ(group_hash(r.model, ParamGroup::blocks), group_hash(src, ParamGroup::blocks));
  EXPECT_EQ(group_hash(r.model, ParamGroup::head), group_hash(src, ParamGroup::head));
  EXPECT_NE(group_hash(r.model, ParamGroup::embedding), group_hash(src, ParamGroup::embedding));
}

TEST(TransferTrain, FreezeModesAndProvenance) {
  const auto va = word_vocab("a", 12), vb = word_vocab("b", 12);
  const auto src = source_model(va);
  const auto train = data_for(vb, 48, 3), eval = data_for(vb, 16, 4);
  const auto src_hashes = std::array{group_hash(src, ParamGroup::embedding), group_hash(src, ParamGroup::blocks),
                                     group_hash(src, ParamGroup::head)};

  const auto fixed = transfer_train(src, "abc", vb, XavierFresh{}, train, eval, TransferMode::fix_non_embedding, config(), 7);
  EXPECT_EQ(fixed.source_hash, "abc");
  EXPECT_EQ(fixed.mode, TransferMode::fix_non_embedding);
  EXPECT_EQ(fixed.model.freeze, freeze_mask_for(TransferMode::fix_non_embedding));
  EXPECT_EQ(group_hash(fixed.model, ParamGroup::blocks), src_hashes[1]);
  EXPECT_EQ(group_hash(fixed.model, ParamGroup::head), src_hashes[2]);
  const auto fresh = swap_embedding(src, vb, XavierFresh{}, 7);
  EXPECT_NE(fixed.model.embedding.value, fresh.embedding.value);

  const auto free = transfer_train(src, "abc", vb, XavierFresh{}, train, eval, TransferMode::no_fix, config(), 7);
  for (auto g : kParamGroups) {
    if (g != ParamGroup::embedding) EXPECT_NE(group_hash(free.model, g), src_hashes[static_cast<std::size_t>(g)]);
  }

  const auto emb_fixed = transfer_train(src, "abc", vb, XavierFresh{}, train, eval, TransferMode::fix_embedding, config(), 7);
  EXPECT_EQ(emb_fixed.model.embedding.value, fresh.embedding.value);

  // the source is never touched
  EXPECT_EQ(group_hash(src, ParamGroup::embedding), src_hashes[0]);
  EXPECT_EQ(group_hash(src, ParamGroup::blocks), src_hashes[1]);
}

TEST(TransferTrain, NoFixOnOwnEmbeddingStartsAtSourceMetrics) {
  const auto va = word_vocab("a", 12);
  auto src = source_model(va);
  const auto train = data_for(va, 48, 5), eval = data_for(va, 24, 6);
  train_classifier<float>(src, train, eval, config(), 1);
  const auto r = transfer_train(src, "h", va, PretrainedEmbedding{&src.embedding.value, &va}, train, eval,
                                TransferMode::no_fix, config(), 2);
  EXPECT_EQ(r.run.initial_eval, evaluate<float>(src, eval));
}

TEST(TransferTrain, SourceBundleReloadsBitIdentically) {
  test::TempDir dir("xfer");
  const auto va = word_vocab("a", 8), vb = word_vocab("b", 8);
  ClassifierBundle b{source_model(va), va, config(), CleaningConfig::enhanced(), 1, Json::object(), Json()};
  save_classifier_bundle(dir / "src", b);
  const auto before = bundle_hash(dir / "src");
  const auto loaded = load_classifier_bundle(dir / "src");
  const auto data = data_for(vb, 16, 1);
  transfer_train(loaded.model, before, vb, XavierFresh{}, data, data, TransferMode::no_fix, config(), 1);
  save_classifier_bundle(dir / "again", loaded);
  EXPECT_EQ(bundle_hash(dir / "again"), before);
  EXPECT_EQ(bundle_hash(dir / "src"), before);
}

}  // namespace
}  // namespace lxt
