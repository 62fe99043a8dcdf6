#include "sleepbench/classic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sleepbench/errors.hpp"

namespace sleepbench {

namespace {

void check_training_input(const NumArray& features, const std::vector<int>& labels) {
  if (features.rank() != 2) {
    throw ShapeError("training features must be rank-2, got " + shape_to_string(features.shape()));
  }
  if (features.rows() != labels.size()) {
    throw ShapeError("feature rows (" + std::to_string(features.rows()) + ") != labels (" +
                     std::to_string(labels.size()) + ")");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw ParamError("labels must be in {0,1}, got " + std::to_string(y));
  }
}

// log(1 + exp(t)) without overflow.
double softplus(double t) {
  return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double dot_row(const NumArray& features, std::size_t row, std::span<const double> weights) {
  double z = 0;
  const std::span<const double> x = features.row(row);
  for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * x[j];
  return z;
}

double gini(std::size_t c0, std::size_t c1) {
  const double n = static_cast<double>(c0 + c1);
  if (n == 0) return 0;
  const double p0 = static_cast<double>(c0) / n;
  const double p1 = static_cast<double>(c1) / n;
  return 1.0 - p0 * p0 - p1 * p1;
}

struct TreeBuilder {
  const NumArray& features;
  const std::vector<int>& labels;
  const TrainConfig& cfg;
  std::vector<TreeNode> nodes;

  int build(std::vector<std::size_t> rows, int depth) {
    std::size_t c1 = 0;
    for (std::size_t r : rows) c1 += static_cast<std::size_t>(labels[r]);
    const std::size_t c0 = rows.size() - c1;

    const auto leaf = [&] {
      TreeNode node;
      node.label = c1 >= c0 ? 1 : 0;  // majority, ties to class 1
      nodes.push_back(node);
      return static_cast<int>(nodes.size() - 1);
    };
    if (c0 == 0 || c1 == 0 || depth >= cfg.max_depth) return leaf();

    // Exhaustive search over midpoint thresholds between consecutive sorted
    // unique values; ties in weighted Gini break toward the lowest feature
    // index, then the lowest threshold.
    const std::size_t d = features.cols();
    double best_gini = 0;
    int best_feature = -1;
    double best_threshold = 0;
    std::vector<std::size_t> sorted(rows);
    for (std::size_t f = 0; f < d; ++f) {
      std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        return features.at(a, f) < features.at(b, f);
      });
      std::size_t left_c1 = 0;
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        left_c1 += static_cast<std::size_t>(labels[sorted[i]]);
        const double lo = features.at(sorted[i], f);
        const double hi = features.at(sorted[i + 1], f);
        if (lo == hi) continue;
        const std::size_t nl = i + 1, nr = sorted.size() - nl;
        if (nl < static_cast<std::size_t>(cfg.min_leaf) ||
            nr < static_cast<std::size_t>(cfg.min_leaf)) {
          continue;
        }
        const std::size_t left_c0 = nl - left_c1;
        const std::size_t right_c1 = c1 - left_c1;
        const std::size_t right_c0 = nr - right_c1;
        const double weighted =
            (static_cast<double>(nl) * gini(left_c0, left_c1) +
             static_cast<double>(nr) * gini(right_c0, right_c1)) /
            static_cast<double>(sorted.size());
        if (best_feature < 0 || weighted < best_gini) {
          best_gini = weighted;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (lo + hi);
        }
      }
    }
    if (best_feature < 0) return leaf();

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
      (features.at(r, static_cast<std::size_t>(best_feature)) <= best_threshold ? left_rows
                                                                                : right_rows)
          .push_back(r);
    }
    const int index = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[index].feature = best_feature;
    nodes[index].threshold = best_threshold;
    nodes[index].left = build(std::move(left_rows), depth + 1);
    nodes[index].right = build(std::move(right_rows), depth + 1);
    return index;
  }
};

ClassicModel train_linear(const NumArray& features, const std::vector<int>& labels,
                          const TrainConfig& cfg, ClassicKind kind) {
  check_training_input(features, labels);
  if (cfg.learning_rate <= 0) throw ParamError("learning_rate must be > 0");
  if (cfg.epochs < 0) throw ParamError("epochs must be >= 0");
  if (cfg.l2 < 0) throw ParamError("l2 must be >= 0");

  LinearParams p;
  p.weights.assign(features.cols(), 0.0);
  LinearGrad grad;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double loss = kind == ClassicKind::logreg
                            ? logreg_objective(features, labels, p.weights, p.bias, cfg.l2, &grad)
                            : svm_objective(features, labels, p.weights, p.bias, cfg.l2, &grad);
    if (!std::isfinite(loss)) {
      throw DivergenceError(std::string(to_string(kind)) + " diverged at epoch " +
                            std::to_string(epoch) + " (learning rate " +
                            std::to_string(cfg.learning_rate) + ")");
    }
    for (std::size_t j = 0; j < p.weights.size(); ++j) {
      p.weights[j] -= cfg.learning_rate * grad.d_weights[j];
    }
    p.bias -= cfg.learning_rate * grad.d_bias;
  }

  ClassicModel model;
  model.kind = kind;
  model.dim = features.cols();
  model.params = std::move(p);
  return model;
}

}  // namespace

std::string_view to_string(ClassicKind kind) {
  switch (kind) {
    case ClassicKind::logreg: return "logreg";
    case ClassicKind::dtree: return "dtree";
    case ClassicKind::knn: return "knn";
    case ClassicKind::gnb: return "gnb";
    case ClassicKind::svm: return "svm";
  }
  return "?";
}

double logreg_objective(const NumArray& features, const std::vector<int>& labels,
                        std::span<const double> weights, double bias, double l2,
                        LinearGrad* grad) {
  const std::size_t n = features.rows(), d = features.cols();
  if (grad) {
    grad->d_weights.assign(d, 0.0);
    grad->d_bias = 0;
  }
  double loss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = dot_row(features, i, weights) + bias;
    loss += labels[i] == 1 ? softplus(-z) : softplus(z);
    if (grad) {
      const double residual = sigmoid(z) - static_cast<double>(labels[i]);
      const std::span<const double> x = features.row(i);
      for (std::size_t j = 0; j < d; ++j) grad->d_weights[j] += residual * x[j];
      grad->d_bias += residual;
    }
  }
  loss /= static_cast<double>(n);
  for (std::size_t j = 0; j < d; ++j) loss += 0.5 * l2 * weights[j] * weights[j];
  if (grad) {
    for (std::size_t j = 0; j < d; ++j) {
      grad->d_weights[j] = grad->d_weights[j] / static_cast<double>(n) + l2 * weights[j];
    }
    grad->d_bias /= static_cast<double>(n);
  }
  return loss;
}

double svm_objective(const NumArray& features, const std::vector<int>& labels,
                     std::span<const double> weights, double bias, double l2, LinearGrad* grad) {
  const std::size_t n = features.rows(), d = features.cols();
  if (grad) {
    grad->d_weights.assign(d, 0.0);
    grad->d_bias = 0;
  }
  double loss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = labels[i] == 1 ? 1.0 : -1.0;
    const double margin = y * (dot_row(features, i, weights) + bias);
    if (margin < 1) {
      loss += 1 - margin;
      if (grad) {
        const std::span<const double> x = features.row(i);
        for (std::size_t j = 0; j < d; ++j) grad->d_weights[j] -= y * x[j];
        grad->d_bias -= y;
      }
    }
  }
  loss /= static_cast<double>(n);
  for (std::size_t j = 0; j < d; ++j) loss += 0.5 * l2 * weights[j] * weights[j];
  if (grad) {
    for (std::size_t j = 0; j < d; ++j) {
      grad->d_weights[j] = grad->d_weights[j] / static_cast<double>(n) + l2 * weights[j];
    }
    grad->d_bias /= static_cast<double>(n);
  }
  return loss;
}

ClassicModel train_logreg(const NumArray& features, const std::vector<int>& labels,
                          const TrainConfig& cfg) {
  return train_linear(features, labels, cfg, ClassicKind::logreg);
}

ClassicModel train_svm(const NumArray& features, const std::vector<int>& labels,
                       const TrainConfig& cfg) {
  return train_linear(features, labels, cfg, ClassicKind::svm);
}

ClassicModel train_dtree(const NumArray& features, const std::vector<int>& labels,
                         const TrainConfig& cfg) {
  check_training_input(features, labels);
  if (cfg.max_depth < 1) throw ParamError("max_depth must be >= 1");
  if (cfg.min_leaf < 1) throw ParamError("min_leaf must be >= 1");

  TreeBuilder builder{features, labels, cfg, {}};
  std::vector<std::size_t> rows(features.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  builder.build(std::move(rows), 0);

  ClassicModel model;
  model.kind = ClassicKind::dtree;
  model.dim = features.cols();
  model.params = TreeParams{std::move(builder.nodes)};
  return model;
}

ClassicModel train_knn(const NumArray& features, const std::vector<int>& labels,
                       const TrainConfig& cfg) {
  check_training_input(features, labels);
  if (cfg.k < 1) throw ParamError("k must be >= 1");
  if (static_cast<std::size_t>(cfg.k) > features.rows()) {
    throw ParamError("k (" + std::to_string(cfg.k) + ") exceeds training rows (" +
                     std::to_string(features.rows()) + ")");
  }
  ClassicModel model;
  model.kind = ClassicKind::knn;
  model.dim = features.cols();
  model.params = KnnParams{features, labels, cfg.k};
  return model;
}

ClassicModel train_gnb(const NumArray& features, const std::vector<int>& labels,
                       const TrainConfig& cfg) {
  (void)cfg;
  check_training_input(features, labels);
  const std::size_t n = features.rows(), d = features.cols();
  std::array<std::size_t, 2> counts{};
  for (int y : labels) ++counts[static_cast<std::size_t>(y)];
  if (counts[0] == 0 || counts[1] == 0) throw DataError("GNB needs both classes in training data");

  GnbParams p;
  for (int c = 0; c < 2; ++c) {
    p.means[c].assign(d, 0.0);
    p.vars[c].assign(d, 0.0);
    p.priors[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int c = labels[i];
    for (std::size_t j = 0; j < d; ++j) p.means[c][j] += features.at(i, j);
  }
  for (int c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < d; ++j) p.means[c][j] /= static_cast<double>(counts[c]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int c = labels[i];
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = features.at(i, j) - p.means[c][j];
      p.vars[c][j] += diff * diff;
    }
  }
  for (int c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < d; ++j) {
      p.vars[c][j] = std::max(p.vars[c][j] / static_cast<double>(counts[c]), kGnbVarianceFloor);
    }
  }

  ClassicModel model;
  model.kind = ClassicKind::gnb;
  model.dim = d;
  model.params = std::move(p);
  return model;
}

std::vector<int> predict(const ClassicModel& model, const NumArray& features) {
  if (features.rank() != 2 || features.cols() != model.dim) {
    throw ShapeError("model expects " + std::to_string(model.dim) + " features, got shape " +
                     shape_to_string(features.shape()));
  }
  const std::size_t n = features.rows();
  std::vector<int> out(n);

  switch (model.kind) {
    case ClassicKind::logreg:
    case ClassicKind::svm: {
      const auto& p = std::get<LinearParams>(model.params);
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = dot_row(features, i, p.weights) + p.bias >= 0 ? 1 : 0;
      }
      break;
    }
    case ClassicKind::dtree: {
      const auto& p = std::get<TreeParams>(model.params);
      for (std::size_t i = 0; i < n; ++i) {
        const TreeNode* node = &p.nodes[0];
        while (!node->is_leaf()) {
          const double x = features.at(i, static_cast<std::size_t>(node->feature));
          node = &p.nodes[static_cast<std::size_t>(x <= node->threshold ? node->left : node->right)];
        }
        out[i] = node->label;
      }
      break;
    }
    case ClassicKind::knn: {
      const auto& p = std::get<KnnParams>(model.params);
      const std::size_t m = p.train_features.rows();
      std::vector<std::pair<double, std::size_t>> dist(m);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < m; ++t) {
          double sq = 0;
          for (std::size_t j = 0; j < model.dim; ++j) {
            const double diff = features.at(i, j) - p.train_features.at(t, j);
            sq += diff * diff;
          }
          dist[t] = {sq, t};
        }
        const auto k = static_cast<std::size_t>(p.k);
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
        int votes1 = 0;
        for (std::size_t t = 0; t < k; ++t) votes1 += p.train_labels[dist[t].second];
        const int votes0 = static_cast<int>(k) - votes1;
        if (votes1 > votes0) {
          out[i] = 1;
        } else if (votes0 > votes1) {
          out[i] = 0;
        } else {
          out[i] = p.train_labels[dist[0].second];  // tie: nearest neighbor decides
        }
      }
      break;
    }
    case ClassicKind::gnb: {
      const auto& p = std::get<GnbParams>(model.params);
      constexpr double kLog2Pi = 1.8378770664093453;
      for (std::size_t i = 0; i < n; ++i) {
        double score[2];
        for (int c = 0; c < 2; ++c) {
          double s = std::log(p.priors[c]);
          for (std::size_t j = 0; j < model.dim; ++j) {
            const double diff = features.at(i, j) - p.means[c][j];
            s -= 0.5 * (kLog2Pi + std::log(p.vars[c][j]) + diff * diff / p.vars[c][j]);
          }
          score[c] = s;
        }
        out[i] = score[1] > score[0] ? 1 : 0;  // tie goes to class 0
      }
      break;
    }
  }
  return out;
}

}  // namespace sleepbench
