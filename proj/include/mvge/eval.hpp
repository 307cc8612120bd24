#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mvge/graph.hpp"
#include "mvge/matrix.hpp"
#include "mvge/model.hpp"

namespace mvge {

enum class EvalTask { kNode, kLink, kPair };
std::string to_string(EvalTask t);

struct SplitSpec {
  EvalTask task = EvalTask::kNode;
  double train_fraction = 0.3;  // nodes for kNode, positives for kLink/kPair
  std::size_t repeats = 10;
  std::uint64_t seed = 0;

  static SplitSpec defaults(EvalTask task, std::uint64_t seed = 0);
  void validate() const;
};

struct LogRegHyper {
  double lr = 0.1;
  std::size_t iterations = 300;
  double l2 = 1e-4;
};

/// One-vs-rest logistic regression on standardized features. With two
/// classes a single binary classifier is trained.
struct LogRegModel {
  int num_classes = 0;
  int degenerate_class = -1;  // >= 0 when the training set held one class
  Matrix weights;             // D x K (K = 1 for binary)
  Matrix bias;                // 1 x K
  Matrix feature_mean;        // 1 x D
  Matrix feature_scale;       // 1 x D

  // Per-class scores (K columns); for binary models column 0 is P(class 1).
  Matrix decision(const Matrix& x) const;
  std::vector<int> predict(const Matrix& x) const;
  // Probability of class 1; binary models only.
  std::vector<double> positive_scores(const Matrix& x) const;
};

LogRegModel train_logreg_ovr(const Matrix& features, std::span<const int> labels,
                             std::span<const std::size_t> train_idx, int num_classes,
                             const LogRegHyper& hyper = {});

// Micro-averaged F1 over single-label predictions (equals accuracy).
double micro_f1(std::span<const int> pred, std::span<const int> truth);

// Rank-based AUC; ties receive average ranks.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

// Elementwise squared difference.
std::vector<double> pair_embed_l2(std::span<const double> e_u, std::span<const double> e_v);
Matrix pair_features_l2(const Matrix& h, std::span<const Edge> pairs);

struct EvalReport {
  std::string task;
  std::string metric;
  std::vector<double> scores;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation

  void finalize();
  std::string to_json() const;
  std::string to_csv() const;  // repeat,score
};

struct NodeSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
NodeSplit node_split(std::size_t num_nodes, double train_fraction, Rng& rng);

EvalReport node_classification_eval(const Matrix& h, const Labels& labels, const SplitSpec& spec,
                                    const LogRegHyper& hyper = {});

struct LinkSplit {
  Graph train_graph;
  std::vector<Edge> train_pos, train_neg, test_pos, test_neg;
};
LinkSplit link_split(const Graph& g, const SplitSpec& spec, Rng& rng);

struct LinkEvalOutput {
  EvalReport report;
  std::vector<LinkSplit> splits;  // one per repeat, for the split manifest
};

// Per repeat: split, retrain embeddings on the train graph, fit logistic
// regression on L2 pair features of train pairs, AUC on test pairs.
LinkEvalOutput link_prediction_eval(const Dataset& ds, const MVGEConfig& cfg,
                                    const SplitSpec& spec, const LogRegHyper& hyper = {});

struct PairSamples {
  std::vector<Edge> train_pos, train_neg, test_pos, test_neg;
};
// |E| same-class and |E| different-class node pairs, split per class by the
// spec's train fraction.
PairSamples sample_label_pairs(const Labels& labels, std::size_t per_class_count,
                               double train_fraction, Rng& rng);

EvalReport pairwise_eval(const Matrix& h, const Labels& labels, std::size_t num_pairs,
                         const SplitSpec& spec, const LogRegHyper& hyper = {});
// Trains one embedding on the full graph, then evaluates.
EvalReport pairwise_eval(const Dataset& ds, const MVGEConfig& cfg, const SplitSpec& spec,
                         const LogRegHyper& hyper = {});

struct GridSearchResult {
  double alpha = 0.0;
  double beta = 0.0;
  double best_score = 0.0;
  struct Entry {
    double alpha, beta, score;
  };
  std::vector<Entry> table;

  std::string to_csv() const;  // alpha,beta,micro_f1
};

/// Trains one model per (alpha, beta) on the grid {0, step, ..., 1}^2 and
/// scores Micro-F1 on a held-out validation split. Ties go to the lowest
/// alpha, then the lowest beta.
GridSearchResult grid_search_alpha_beta(const Dataset& ds, const MVGEConfig& cfg,
                                        double grid_step = 0.1, double val_fraction = 0.5,
                                        const LogRegHyper& hyper = {});

}  // namespace mvge
