#include <gtest/gtest.h>

#include "sleepbench/errors.hpp"
#include "sleepbench/model_io.hpp"
#include "testutil.hpp"

using namespace sleepbench;
namespace tu = sleepbench::testutil;

TEST(ModelIo, ClassicModelsRoundTrip) {
  Rng rng(1);
  const NumArray x = tu::random_array(rng, {14, 3});
  const std::vector<int> y = tu::random_labels(rng, 14);
  TrainConfig cfg;
  cfg.k = 3;
  cfg.epochs = 50;

  for (auto trainer : {train_logreg, train_dtree, train_knn, train_gnb, train_svm}) {
    const ClassicModel model = trainer(x, y, cfg);
    const std::string text = save_model(model);
    const ClassicModel reloaded = load_classic_model(text);
    EXPECT_EQ(reloaded.kind, model.kind);
    EXPECT_EQ(reloaded.dim, model.dim);
    Rng qr(2);
    const NumArray queries = tu::random_array(qr, {9, 3});
    EXPECT_EQ(predict(reloaded, queries), predict(model, queries));
    // Bit-exact round trip for the serialized text itself.
    EXPECT_EQ(save_model(reloaded), text);
  }
}

TEST(ModelIo, CnnModelsRoundTrip) {
  Rng rng(3);
  const NumArray x = tu::random_array(rng, {10, 6});
  const std::vector<int> y = tu::random_labels(rng, 10);
  CnnTrainConfig cfg;
  cfg.epochs = 20;

  for (const CnnVariant variant : {CnnVariant::conv1d_1, CnnVariant::conv1d_2}) {
    Rng build_rng(4), train_rng(5);
    CnnModel model = build_cnn(variant, 6, cfg, build_rng);
    const CnnTrainResult result = train_cnn(std::move(model), x, y, cfg, train_rng);
    const std::string text = save_model(result.model);
    const CnnModel reloaded = load_cnn_model(text);
    EXPECT_EQ(reloaded.variant, variant);
    Rng qr(6);
    const NumArray queries = tu::random_array(qr, {7, 6});
    EXPECT_EQ(predict_cnn(reloaded, queries), predict_cnn(result.model, queries));
    EXPECT_EQ(save_model(reloaded), text);
  }
}

TEST(ModelIo, RejectsGarbage) {
  EXPECT_THROW(load_classic_model("not json"), ParseError);
  EXPECT_THROW(load_classic_model("{\"format\":\"something-else\"}"), ParseError);
  EXPECT_THROW(load_cnn_model("{\"format\":\"sleepbench-model\",\"version\":99}"), ParseError);
}
