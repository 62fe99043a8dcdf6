#include "sleepbench/model_io.hpp"

#include <json.hpp>

#include "sleepbench/errors.hpp"

namespace sleepbench {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;
constexpr const char* kFormatName = "sleepbench-model";

json shape_json(const NumArray& a) { return json(a.shape()); }

json array_json(const NumArray& a) {
  return json{{"shape", shape_json(a)}, {"data", std::vector<double>(a.flat().begin(), a.flat().end())}};
}

NumArray array_from_json(const json& j) {
  return NumArray(j.at("shape").get<std::vector<std::size_t>>(),
                  j.at("data").get<std::vector<double>>());
}

json envelope(std::string_view kind) {
  return json{{"format", kFormatName}, {"version", kFormatVersion}, {"kind", std::string(kind)}};
}

json parse_envelope(std::string_view text, std::string* kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (j.value("format", "") != kFormatName) {
    throw ParseError("not a model file (missing format tag)");
  }
  if (j.value("version", -1) != kFormatVersion) {
    throw ParseError("unsupported model format version " + std::to_string(j.value("version", -1)));
  }
  *kind = j.value("kind", "");
  return j;
}

}  // namespace

std::string save_model(const ClassicModel& model) {
  json j = envelope(to_string(model.kind));
  j["dim"] = model.dim;
  switch (model.kind) {
    case ClassicKind::logreg:
    case ClassicKind::svm: {
      const auto& p = std::get<LinearParams>(model.params);
      j["params"] = {{"weights", p.weights}, {"bias", p.bias}};
      break;
    }
    case ClassicKind::dtree: {
      const auto& p = std::get<TreeParams>(model.params);
      json nodes = json::array();
      for (const TreeNode& n : p.nodes) {
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"label", n.label}});
      }
      j["params"] = {{"nodes", std::move(nodes)}};
      break;
    }
    case ClassicKind::knn: {
      const auto& p = std::get<KnnParams>(model.params);
      j["params"] = {{"train_features", array_json(p.train_features)},
                     {"train_labels", p.train_labels},
                     {"k", p.k}};
      break;
    }
    case ClassicKind::gnb: {
      const auto& p = std::get<GnbParams>(model.params);
      j["params"] = {{"means", p.means},
                     {"vars", p.vars},
                     {"priors", p.priors}};
      break;
    }
  }
  return j.dump(2);
}

ClassicModel load_classic_model(std::string_view text) {
  std::string kind;
  const json j = parse_envelope(text, &kind);
  const json& p = j.at("params");

  ClassicModel model;
  model.dim = j.at("dim").get<std::size_t>();
  if (kind == "logreg" || kind == "svm") {
    model.kind = kind == "logreg" ? ClassicKind::logreg : ClassicKind::svm;
    model.params = LinearParams{p.at("weights").get<std::vector<double>>(),
                                p.at("bias").get<double>()};
  } else if (kind == "dtree") {
    model.kind = ClassicKind::dtree;
    TreeParams tree;
    for (const json& n : p.at("nodes")) {
      tree.nodes.push_back(TreeNode{n.at("feature").get<int>(), n.at("threshold").get<double>(),
                                    n.at("left").get<int>(), n.at("right").get<int>(),
                                    n.at("label").get<int>()});
    }
    model.params = std::move(tree);
  } else if (kind == "knn") {
    model.kind = ClassicKind::knn;
    model.params = KnnParams{array_from_json(p.at("train_features")),
                             p.at("train_labels").get<std::vector<int>>(), p.at("k").get<int>()};
  } else if (kind == "gnb") {
    model.kind = ClassicKind::gnb;
    GnbParams gnb;
    gnb.means = p.at("means").get<std::array<std::vector<double>, 2>>();
    gnb.vars = p.at("vars").get<std::array<std::vector<double>, 2>>();
    gnb.priors = p.at("priors").get<std::array<double, 2>>();
    model.params = std::move(gnb);
  } else {
    throw ParseError("unknown classic model kind '" + kind + "'");
  }
  return model;
}

std::string save_model(const CnnModel& model) {
  json j = envelope(to_string(model.variant));
  j["dim"] = model.input_dim;
  j["params"] = {
      {"conv1", {{"kernels", array_json(model.conv1.kernels)}, {"bias", model.conv1.bias}}},
      {"conv2", {{"kernels", array_json(model.conv2.kernels)}, {"bias", model.conv2.bias}}},
      {"dense1", {{"weights", array_json(model.dense1.weights)}, {"bias", model.dense1.bias}}},
      {"dense2", {{"weights", array_json(model.dense2.weights)}, {"bias", model.dense2.bias}}},
      {"dropout_rate", model.dropout_rate},
  };
  return j.dump(2);
}

CnnModel load_cnn_model(std::string_view text) {
  std::string kind;
  const json j = parse_envelope(text, &kind);
  if (kind != "conv1d_1" && kind != "conv1d_2") {
    throw ParseError("unknown CNN variant '" + kind + "'");
  }
  const json& p = j.at("params");

  CnnModel model;
  model.variant = kind == "conv1d_1" ? CnnVariant::conv1d_1 : CnnVariant::conv1d_2;
  model.input_dim = j.at("dim").get<std::size_t>();
  if (model.variant == CnnVariant::conv1d_1) {
    model.pool1 = {2, 2, PoolMode::reduce};
    model.pool2 = {2, 2, PoolMode::reduce};
  } else {
    model.pool1 = {3, 1, PoolMode::preserve};
    model.pool2 = {3, 1, PoolMode::preserve};
  }
  model.conv1.kernels = array_from_json(p.at("conv1").at("kernels"));
  model.conv1.bias = p.at("conv1").at("bias").get<std::vector<double>>();
  model.conv2.kernels = array_from_json(p.at("conv2").at("kernels"));
  model.conv2.bias = p.at("conv2").at("bias").get<std::vector<double>>();
  model.dense1.weights = array_from_json(p.at("dense1").at("weights"));
  model.dense1.bias = p.at("dense1").at("bias").get<std::vector<double>>();
  model.dense2.weights = array_from_json(p.at("dense2").at("weights"));
  model.dense2.bias = p.at("dense2").at("bias").get<std::vector<double>>();
  model.dropout_rate = p.at("dropout_rate").get<double>();
  model.train_mode = false;
  return model;
}

}  // namespace sleepbench
