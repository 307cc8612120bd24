#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mvge/augmentation.hpp"
#include "mvge/embedding.hpp"
#include "mvge/graph.hpp"
#include "mvge/numerics.hpp"

namespace mvge {

enum class MergeFn { kConcat, kSum, kMean };
enum class EgoEncoder { kLinear, kGcn };
enum class AdjLossMode { kAuto, kFull, kSampled };

std::string to_string(MergeFn m);
std::string to_string(EgoEncoder e);
std::string to_string(AdjLossMode m);
MergeFn parse_merge_fn(const std::string& s);
EgoEncoder parse_ego_encoder(const std::string& s);
AdjLossMode parse_adj_loss_mode(const std::string& s);

struct TaskMask {
  bool ego = true;
  bool agg = true;
  bool adj = true;

  // Parses "ego,agg,adj" style lists (any subset, at least one).
  static TaskMask parse(const std::string& csv);
  std::string to_string() const;
  bool operator==(const TaskMask&) const = default;
};

// Graphs above this size use the sampled adjacency loss in kAuto mode.
inline constexpr std::size_t kFullAdjLossMaxNodes = 5000;

struct MVGEConfig {
  std::size_t dim_ego = 64;
  std::size_t dim_agg = 64;
  std::size_t hidden_dim = 128;
  double alpha = 0.5;
  double beta = 0.8;
  std::size_t epochs = 200;
  double lr = 0.01;
  std::uint64_t seed = 0;
  std::vector<std::size_t> walk_lengths = {3, 5, 10};
  Aggr aggr = Aggr::kConcat;
  MergeFn merge_fn = MergeFn::kConcat;
  TaskMask task_mask;
  EgoEncoder ego_encoder = EgoEncoder::kLinear;
  AdjLossMode adj_loss_mode = AdjLossMode::kAuto;
  double sample_ratio = 1.0;  // negatives per positive in sampled mode
  bool mlp_bias = true;

  void validate() const;
  WalkConfig walk_config() const { return {walk_lengths, aggr, seed}; }
  AdjLossMode resolved_adj_mode(std::size_t num_nodes) const;
  // Branches that make up H: those whose feature task is active, or both
  // when only the adjacency task is on.
  bool uses_ego_branch() const { return task_mask.ego || !task_mask.agg; }
  bool uses_agg_branch() const { return task_mask.agg || !task_mask.ego; }
};

struct LossBreakdown {
  double ego = 0.0;
  double agg = 0.0;
  double adj = 0.0;
  double total = 0.0;
};

// L = beta * (alpha * l_ego + (1 - alpha) * l_agg) + (1 - beta) * l_adj, with
// masked tasks contributing zero.
double total_loss(double l_ego, double l_agg, double l_adj, double alpha, double beta,
                  const TaskMask& mask = {});

struct TaskWeights {
  double ego, agg, adj;
};
TaskWeights task_weights(double alpha, double beta, const TaskMask& mask = {});

// KL(softmax(target) || softmax(recon)) summed over rows. When `d_recon` is
// non-null it receives dL/d(recon) scaled by `scale`.
double kl_feature_loss(const Matrix& target, const Matrix& recon, Matrix* d_recon = nullptr,
                       double scale = 1.0);

// A node pair with a binary link target.
struct LabeledPair {
  NodeId u;
  NodeId v;
  double target;
};

// Full Eq.-9 style cross entropy over all N^2 ordered pairs of sigmoid(H H^T),
// diagonal targets 0, averaged by N^2.
double adjacency_loss_full(const Matrix& h, const Graph& g, Matrix* d_h = nullptr,
                           double scale = 1.0);
// Mean binary cross entropy over the given ordered pairs.
double adjacency_loss_sampled(const Matrix& h, std::span<const LabeledPair> pairs,
                              Matrix* d_h = nullptr, double scale = 1.0);
// All directed positive pairs plus round(ratio * positives) uniformly drawn non-edges.
std::vector<LabeledPair> sample_adjacency_pairs(const Graph& g, double ratio, Rng& rng);

Matrix merge_embeddings(const Matrix& h_ego, const Matrix& h_agg, MergeFn fn);

// Population standard deviation of each column. Needs at least two rows.
std::vector<double> embedding_dim_std(const Matrix& h);

/// Trainable parameters of both encoders and both feature decoders. The
/// adjacency decoder is the parameter-free inner product.
class MVGEModel {
 public:
  MVGEModel() = default;
  MVGEModel(std::size_t ego_features, std::size_t agg_features, const MVGEConfig& cfg);

  std::vector<Param*> parameters();
  std::vector<const Param*> parameters() const;
  Param* find(const std::string& name);

  const MVGEConfig& config() const { return cfg_; }
  std::size_t ego_features() const { return f_ego_; }
  std::size_t agg_features() const { return f_agg_; }

  // Encoder weights.
  Param ego_hidden_w, ego_hidden_b;  // linear: F -> hidden
  Param ego_gcn1_w, ego_gcn2_w;      // gcn variant: F -> hidden -> hidden
  Param ego_out_w, ego_out_b;        // (F + hidden) -> dim_ego
  Param agg_gcn1_w, agg_gcn2_w;      // F_agg -> hidden -> hidden
  Param agg_out_w, agg_out_b;        // (F_agg + hidden) -> dim_agg
  // Decoder weights.
  Param dec_ego_w, dec_ego_b;  // dim_ego -> F
  Param dec_agg_w, dec_agg_b;  // dim_agg -> F_agg

 private:
  MVGEConfig cfg_;
  std::size_t f_ego_ = 0;
  std::size_t f_agg_ = 0;
};

// h_ego for the linear encoder: concat(x, relu(x W + b)) W' + b'.
Matrix encode_ego(const MVGEModel& m, const Matrix& x_ego, const NormalizedAdjacency& s);
// h_agg: concat(x, relu(S relu(S x W1) W2)) W' + b'.
Matrix encode_agg(const MVGEModel& m, const Matrix& x_agg, const NormalizedAdjacency& s);

EmbeddingSet embed(const MVGEModel& m, const ViewPair& views, const NormalizedAdjacency& s);

/// Loss and gradient evaluator for a fixed graph and views.
class Objective {
 public:
  Objective(const Graph& g, const ViewPair& views, const MVGEConfig& cfg);

  // Evaluates the losses; with `with_grad` accumulates gradients into the
  // model parameters. `pairs` is used in sampled adjacency mode.
  LossBreakdown evaluate(MVGEModel& m, bool with_grad,
                         std::span<const LabeledPair> pairs = {}) const;

  const NormalizedAdjacency& propagation() const { return s_; }
  const ViewPair& views() const { return views_; }
  AdjLossMode adj_mode() const { return adj_mode_; }

 private:
  const Graph& g_;
  ViewPair views_;
  MVGEConfig cfg_;
  NormalizedAdjacency s_;
  AdjLossMode adj_mode_;
};

struct TrainTrace {
  std::vector<LossBreakdown> epochs;
};

struct TrainResult {
  MVGEModel model;
  EmbeddingSet embeddings;
  TrainTrace trace;
};

// Full-batch Adam training. Throws NumericalError (with the epoch index) when
// a loss turns non-finite.
TrainResult train(const Dataset& ds, const MVGEConfig& cfg);
TrainResult train_on_views(const Graph& g, const ViewPair& views, const MVGEConfig& cfg);

}  // namespace mvge
