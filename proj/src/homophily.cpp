#include "mvge/homophily.hpp"

#include <algorithm>

#include "mvge/errors.hpp"

namespace mvge {

double global_homophily(const Graph& g, const Labels& y) {
  y.validate(g.num_nodes());
  if (g.num_edges() == 0) throw ValidationError("global homophily: graph has no edges");
  std::size_t intra = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (u < v && y.values[u] == y.values[v]) ++intra;
    }
  }
  return static_cast<double>(intra) / static_cast<double>(g.num_edges());
}

std::vector<std::optional<double>> local_homophily(const Graph& g, const Labels& y) {
  y.validate(g.num_nodes());
  std::vector<std::optional<double>> out(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    auto nb = g.neighbors(v);
    if (nb.empty()) continue;
    const auto same = std::count_if(nb.begin(), nb.end(),
                                    [&](NodeId u) { return y.values[u] == y.values[v]; });
    out[v] = static_cast<double>(same) / static_cast<double>(nb.size());
  }
  return out;
}

std::vector<std::size_t> homophily_histogram(const std::vector<std::optional<double>>& local,
                                             std::size_t bins) {
  if (bins == 0) throw ValidationError("histogram: bins must be >= 1");
  std::vector<std::size_t> counts(bins, 0);
  for (const auto& h : local) {
    if (!h) continue;
    auto bin = static_cast<std::size_t>(*h * static_cast<double>(bins));
    counts[std::min(bin, bins - 1)]++;
  }
  return counts;
}

HomophilyReport homophily_report(const Graph& g, const Labels& y, std::size_t bins) {
  HomophilyReport r;
  r.global = global_homophily(g, y);
  r.local = local_homophily(g, y);
  r.histogram = homophily_histogram(r.local, bins);
  r.num_undefined_local =
      static_cast<std::size_t>(std::count(r.local.begin(), r.local.end(), std::nullopt));
  return r;
}

}  // namespace mvge
