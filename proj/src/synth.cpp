#include "mvge/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "mvge/errors.hpp"
#include "mvge/rng.hpp"

namespace mvge {

void SynthSpec::validate() const {
  if (num_classes < 1) throw ValidationError("synth: num_classes must be >= 1");
  if (num_nodes < static_cast<std::size_t>(num_classes)) {
    throw ValidationError("synth: num_nodes must be >= num_classes");
  }
  if (!(target_homophily >= 0.0 && target_homophily <= 1.0)) {
    throw ValidationError("synth: target homophily must lie in [0, 1]");
  }
  if (!(avg_degree >= 0.0)) throw ValidationError("synth: avg_degree must be >= 0");
  const double n = static_cast<double>(num_nodes);
  if (avg_degree * n / 2.0 > n * (n - 1.0) / 2.0) {
    throw ValidationError("synth: infeasible degree, more edges than node pairs");
  }
  if (num_classes == 1 && target_homophily < 1.0 && avg_degree * n >= 2.0) {
    throw ValidationError("synth: a single class cannot produce inter-class edges (h < 1)");
  }
  if (feature_dim < static_cast<std::size_t>(num_classes)) {
    throw ValidationError("synth: feature_dim must be >= num_classes so class means stay separated");
  }
  if (!(noise_sigma >= 0.0) || !(class_separation >= 0.0)) {
    throw ValidationError("synth: noise_sigma and class_separation must be >= 0");
  }
}

std::string SynthSpec::to_json() const {
  nlohmann::json j = {{"num_nodes", num_nodes},
                      {"num_classes", num_classes},
                      {"target_homophily", target_homophily},
                      {"avg_degree", avg_degree},
                      {"feature_dim", feature_dim},
                      {"class_separation", class_separation},
                      {"noise_sigma", noise_sigma},
                      {"seed", seed}};
  return j.dump();
}

Dataset generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  Rng rng = make_rng(spec.seed, Stream::kSynth);
  const std::size_t n = spec.num_nodes;
  const auto c = static_cast<std::size_t>(spec.num_classes);

  Labels labels;
  labels.num_classes = spec.num_classes;
  labels.values.resize(n);
  for (std::size_t v = 0; v < n; ++v) labels.values[v] = static_cast<int>(v % c);
  std::shuffle(labels.values.begin(), labels.values.end(), rng);

  std::vector<std::vector<NodeId>> members(c);
  for (std::size_t v = 0; v < n; ++v) {
    members[static_cast<std::size_t>(labels.values[v])].push_back(static_cast<NodeId>(v));
  }

  const auto budget = static_cast<std::size_t>(std::floor(spec.avg_degree * static_cast<double>(n) / 2.0));
  std::vector<Edge> edges;
  edges.reserve(budget);
  std::unordered_set<std::uint64_t> seen;  // keys min*n+max
  seen.reserve(2 * budget);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const std::size_t max_attempts = 100 * budget + 10000;
  std::size_t attempts = 0;
  while (edges.size() < budget) {
    if (++attempts > max_attempts) {
      throw ValidationError("synth: could not place " + std::to_string(budget) +
                            " unique edges; lower the degree or adjust homophily");
    }
    const auto u = static_cast<NodeId>(uniform_index(rng, n));
    const auto& own = members[static_cast<std::size_t>(labels.values[u])];
    NodeId v;
    if (coin(rng) < spec.target_homophily) {
      v = own[uniform_index(rng, own.size())];
    } else {
      if (own.size() == n) continue;
      do {
        v = static_cast<NodeId>(uniform_index(rng, n));
      } while (labels.values[v] == labels.values[u]);
    }
    if (u == v) continue;
    const std::uint64_t key = static_cast<std::uint64_t>(std::min(u, v)) * n + std::max(u, v);
    if (!seen.insert(key).second) continue;
    edges.emplace_back(u, v);
  }

  Dataset ds;
  ds.name = "synthetic";
  ds.graph = Graph::from_edges(n, edges);
  ds.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(spec.feature_dim));
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto cls = static_cast<std::size_t>(labels.values[v]);
    for (std::size_t j = 0; j < spec.feature_dim; ++j) {
      const double mean = (j == cls % spec.feature_dim) ? spec.class_separation : 0.0;
      ds.features(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(j)) =
          mean + spec.noise_sigma * noise(rng);
    }
  }
  ds.labels = std::move(labels);
  return ds;
}

}  // namespace mvge
