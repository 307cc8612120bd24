#include "mvge/augmentation.hpp"

#include <algorithm>

#include "mvge/errors.hpp"

namespace mvge {

std::string to_string(Aggr a) {
  switch (a) {
    case Aggr::kConcat: return "concat";
    case Aggr::kMean: return "mean";
    case Aggr::kSum: return "sum";
  }
  return "?";
}

Aggr parse_aggr(const std::string& s) {
  if (s == "concat") return Aggr::kConcat;
  if (s == "mean") return Aggr::kMean;
  if (s == "sum") return Aggr::kSum;
  throw ValidationError("unknown aggr '" + s + "' (expected concat, mean or sum)");
}

void WalkConfig::validate() const {
  if (lengths.empty()) throw ValidationError("walk lengths must not be empty");
  for (auto l : lengths) {
    if (l < 1) throw ValidationError("walk lengths must be >= 1");
  }
}

std::size_t WalkConfig::output_dim(std::size_t num_features) const {
  return aggr == Aggr::kConcat ? num_features * lengths.size() : num_features;
}

std::vector<NodeId> random_walk(const Graph& g, NodeId start, std::size_t length, Rng& rng) {
  std::vector<NodeId> walk;
  if (g.degree(start) == 0) return walk;
  walk.reserve(length);
  NodeId cur = start;
  for (std::size_t step = 0; step < length; ++step) {
    auto nb = g.neighbors(cur);
    cur = nb[uniform_index(rng, nb.size())];
    walk.push_back(cur);
  }
  return walk;
}

Matrix walk_aggregate(const Graph& g, const Matrix& x, const WalkConfig& cfg) {
  cfg.validate();
  if (static_cast<std::size_t>(x.rows()) != g.num_nodes()) {
    throw ValidationError("walk_aggregate: feature rows do not match node count");
  }
  std::vector<std::size_t> lengths = cfg.lengths;
  std::sort(lengths.begin(), lengths.end());
  const Eigen::Index f = x.cols();
  Matrix out = Matrix::Zero(x.rows(), static_cast<Eigen::Index>(cfg.output_dim(static_cast<std::size_t>(f))));
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    Rng rng = make_rng(cfg.seed, Stream::kWalks, v);
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      RowVector avg;
      const auto walk = random_walk(g, v, lengths[i], rng);
      if (walk.empty()) {
        avg = x.row(v);
      } else {
        avg = RowVector::Zero(f);
        for (NodeId u : walk) avg += x.row(u);
        avg /= static_cast<double>(walk.size());
      }
      if (cfg.aggr == Aggr::kConcat) {
        out.block(v, static_cast<Eigen::Index>(i) * f, 1, f) = avg;
      } else {
        out.row(v) += avg;
      }
    }
    if (cfg.aggr == Aggr::kMean) out.row(v) /= static_cast<double>(lengths.size());
  }
  return out;
}

ViewPair build_views(const Graph& g, const Matrix& x, const WalkConfig& cfg) {
  return {x, walk_aggregate(g, x, cfg)};
}

}  // namespace mvge
