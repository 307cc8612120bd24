#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mvge/matrix.hpp"

namespace mvge {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Counts of repairs applied while canonicalizing a raw edge list.
struct EdgeRepairs {
  std::size_t self_loops = 0;  // u == v lines dropped
  std::size_t duplicates = 0;  // lines whose unordered pair was already seen
  std::size_t one_sided = 0;   // unique edges given in only one direction
};

/// Undirected, unweighted graph in CSR form. Each undirected edge is stored in
/// both directions, neighbor lists are sorted, no self-loops, no duplicates.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t num_nodes) : offsets_(num_nodes + 1, 0) {}

  /// Builds the canonical graph from an arbitrary edge list. Endpoints must be
  /// < num_nodes (ValidationError otherwise).
  static Graph from_edges(std::size_t num_nodes, std::span<const Edge> edges,
                          EdgeRepairs* repairs = nullptr);

  std::size_t num_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_directed_entries() const { return neighbors_.size(); }
  std::size_t num_edges() const { return neighbors_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeId u, NodeId v) const;

  const std::vector<std::size_t>& offsets() const { return offsets_; }
  const std::vector<NodeId>& flat_neighbors() const { return neighbors_; }

  // Each undirected edge once, as (u, v) with u < v, sorted.
  std::vector<Edge> undirected_edges() const;

  // Throws ValidationError if any CSR invariant is broken.
  void validate() const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
};

struct Labels {
  std::vector<int> values;
  int num_classes = 0;

  std::size_t size() const { return values.size(); }
  void validate(std::size_t num_nodes) const;
};

struct Dataset {
  std::string name;
  Graph graph;
  Matrix features;
  std::optional<Labels> labels;

  std::size_t num_nodes() const { return graph.num_nodes(); }
  void validate() const;
};

struct LoadReport {
  EdgeRepairs repairs;
  bool labels_present = false;
};

// Reads edges.tsv, features.csv, meta.json and optional labels.txt.
Dataset load_dataset(const std::filesystem::path& dir, LoadReport* report = nullptr);

// Writes the same four files. Reals use 17 significant digits so that
// save-then-load is exact. `extra_meta` is a JSON object text merged into meta.json.
void save_dataset(const Dataset& ds, const std::filesystem::path& dir,
                  const std::string& extra_meta_json = "");

/// Symmetric GCN propagation operator D^-1/2 (A + I) D^-1/2 in CSR form, where
/// D counts the added self-loop. Rows are sorted by column, diagonal included.
struct NormalizedAdjacency {
  std::size_t n = 0;
  std::vector<std::size_t> offsets;
  std::vector<NodeId> cols;
  std::vector<double> weights;

  std::size_t nnz() const { return cols.size(); }
  double weight(NodeId row, NodeId col) const;  // 0 when absent
};

NormalizedAdjacency normalized_adjacency(const Graph& g);

}  // namespace mvge
