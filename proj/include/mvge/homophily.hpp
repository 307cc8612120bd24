#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mvge/graph.hpp"

namespace mvge {

// Edge homophily ratio: intra-class undirected edges / all undirected edges.
// Throws ValidationError on an edgeless graph.
double global_homophily(const Graph& g, const Labels& y);

// Per-node fraction of same-label neighbors; nullopt for isolated nodes.
std::vector<std::optional<double>> local_homophily(const Graph& g, const Labels& y);

// Equal-width bins over [0, 1]; bin i is [i/b, (i+1)/b) except the last, which
// is closed on the right. Undefined entries are skipped.
std::vector<std::size_t> homophily_histogram(const std::vector<std::optional<double>>& local,
                                             std::size_t bins);

struct HomophilyReport {
  double global = 0.0;
  std::vector<std::optional<double>> local;
  std::vector<std::size_t> histogram;
  std::size_t num_undefined_local = 0;
};

HomophilyReport homophily_report(const Graph& g, const Labels& y, std::size_t bins = 10);

}  // namespace mvge
