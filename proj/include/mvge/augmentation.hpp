#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mvge/graph.hpp"
#include "mvge/matrix.hpp"
#include "mvge/rng.hpp"

namespace mvge {

enum class Aggr { kConcat, kMean, kSum };

std::string to_string(Aggr a);
Aggr parse_aggr(const std::string& s);

struct WalkConfig {
  std::vector<std::size_t> lengths = {3, 5, 10};
  Aggr aggr = Aggr::kConcat;
  std::uint64_t seed = 0;

  void validate() const;
  // Column count of x_agg for F input features.
  std::size_t output_dim(std::size_t num_features) const;
};

// The two input views: raw features and walk-aggregated features.
struct ViewPair {
  Matrix x_ego;
  Matrix x_agg;
};

// Unbiased walk of `length` steps from `start`; the start node itself is not
// included. Empty when `start` is isolated.
std::vector<NodeId> random_walk(const Graph& g, NodeId start, std::size_t length, Rng& rng);

/// For each node, one walk per configured length (drawn from a stream keyed by
/// (seed, node id)); each walk's visited-node features are averaged and the
/// per-walk averages combined by `aggr` (concat in ascending length order).
/// Isolated nodes use their own features for every walk.
Matrix walk_aggregate(const Graph& g, const Matrix& x, const WalkConfig& cfg);

ViewPair build_views(const Graph& g, const Matrix& x, const WalkConfig& cfg);

}  // namespace mvge
