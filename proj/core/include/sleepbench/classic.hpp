#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "sleepbench/numarray.hpp"

namespace sleepbench {

enum class ClassicKind { logreg, dtree, knn, gnb, svm };

std::string_view to_string(ClassicKind kind);

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 300;
  double l2 = 1e-3;
  int k = 1;          // kNN
  int max_depth = 5;  // decision tree
  int min_leaf = 2;   // decision tree
  std::uint64_t seed = 0;
};

struct LinearParams {
  std::vector<double> weights;
  double bias = 0;
};

struct TreeNode {
  int feature = -1;     // split feature; -1 for leaves
  double threshold = 0; // rows with x[feature] <= threshold go left
  int left = -1;
  int right = -1;
  int label = -1;       // leaf class
  bool is_leaf() const { return feature < 0; }
};

struct TreeParams {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct KnnParams {
  NumArray train_features;
  std::vector<int> train_labels;
  int k = 1;
};

struct GnbParams {
  std::array<std::vector<double>, 2> means;
  std::array<std::vector<double>, 2> vars;  // floored at kGnbVarianceFloor
  std::array<double, 2> priors{};
};

inline constexpr double kGnbVarianceFloor = 1e-9;

struct ClassicModel {
  ClassicKind kind = ClassicKind::logreg;
  std::size_t dim = 0;
  std::variant<LinearParams, TreeParams, KnnParams, GnbParams> params;
};

struct LinearGrad {
  std::vector<double> d_weights;
  double d_bias = 0;
};

/// L2-regularized mean negative log-likelihood of logistic regression
/// (bias unregularized). Fills grad when non-null.
double logreg_objective(const NumArray& features, const std::vector<int>& labels,
                        std::span<const double> weights, double bias, double l2,
                        LinearGrad* grad = nullptr);

/// (l2/2)*||w||^2 + mean hinge loss with labels mapped to -1/+1. Subgradient
/// at margin exactly 1 takes the zero branch.
double svm_objective(const NumArray& features, const std::vector<int>& labels,
                     std::span<const double> weights, double bias, double l2,
                     LinearGrad* grad = nullptr);

// Trainers expect normalized features and labels in {0,1}. Gradient-trained
// models start from zero weights and run full-batch descent, so identical
// inputs give bit-identical models.
ClassicModel train_logreg(const NumArray& features, const std::vector<int>& labels,
                          const TrainConfig& cfg);
ClassicModel train_dtree(const NumArray& features, const std::vector<int>& labels,
                         const TrainConfig& cfg);
ClassicModel train_knn(const NumArray& features, const std::vector<int>& labels,
                       const TrainConfig& cfg);
ClassicModel train_gnb(const NumArray& features, const std::vector<int>& labels,
                       const TrainConfig& cfg);
ClassicModel train_svm(const NumArray& features, const std::vector<int>& labels,
                       const TrainConfig& cfg);

/// One label in {0,1} per row. Ties: probability exactly 0.5 -> 1 (logreg),
/// raw score 0 -> 1 (svm), kNN vote tie -> nearest neighbor's class, equal
/// GNB posteriors -> 0.
std::vector<int> predict(const ClassicModel& model, const NumArray& features);

}  // namespace sleepbench
