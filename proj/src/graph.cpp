#include "mvge/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mvge/errors.hpp"
#include "mvge/io_util.hpp"

namespace mvge {

namespace fs = std::filesystem;
using json = nlohmann::json;

Graph Graph::from_edges(std::size_t num_nodes, std::span<const Edge> edges,
                        EdgeRepairs* repairs) {
  EdgeRepairs rep;
  // (min, max, direction flag) so one-sided edges can be counted after sorting.
  std::vector<std::pair<Edge, int>> canon;
  canon.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u >= num_nodes || v >= num_nodes) {
      throw ValidationError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                            ") references a node id >= num_nodes " +
                            std::to_string(num_nodes));
    }
    if (u == v) {
      ++rep.self_loops;
      continue;
    }
    canon.push_back({{std::min(u, v), std::max(u, v)}, u < v ? 1 : 2});
  }
  std::sort(canon.begin(), canon.end());

  std::vector<Edge> unique;
  unique.reserve(canon.size());
  for (std::size_t i = 0; i < canon.size();) {
    std::size_t j = i;
    int dirs = 0;
    while (j < canon.size() && canon[j].first == canon[i].first) dirs |= canon[j++].second;
    rep.duplicates += (j - i) - 1;
    if (dirs != 3) ++rep.one_sided;
    unique.push_back(canon[i].first);
    i = j;
  }

  Graph g(num_nodes);
  for (const auto& [u, v] : unique) {
    ++g.offsets_[u + 1];
    ++g.offsets_[v + 1];
  }
  for (std::size_t i = 0; i < num_nodes; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.neighbors_.resize(2 * unique.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : unique) {
    g.neighbors_[cursor[u]++] = v;
    g.neighbors_[cursor[v]++] = u;
  }
  for (std::size_t v = 0; v < num_nodes; ++v) {
    std::sort(g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
              g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]));
  }
  if (repairs) *repairs = rep;
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::undirected_edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

void Graph::validate() const {
  const std::size_t n = num_nodes();
  if (offsets_.empty()) {
    if (!neighbors_.empty()) throw ValidationError("graph: neighbors without offsets");
    return;
  }
  if (offsets_.front() != 0 || offsets_.back() != neighbors_.size()) {
    throw ValidationError("graph: offsets do not span the neighbor array");
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (offsets_[v] > offsets_[v + 1]) throw ValidationError("graph: offsets decrease");
    auto nb = neighbors(static_cast<NodeId>(v));
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (nb[i] >= n) throw ValidationError("graph: neighbor id out of range");
      if (nb[i] == v) throw ValidationError("graph: self-loop at node " + std::to_string(v));
      if (i > 0 && nb[i] <= nb[i - 1]) {
        throw ValidationError("graph: unsorted or duplicate neighbors at node " +
                              std::to_string(v));
      }
      if (!has_edge(nb[i], static_cast<NodeId>(v))) {
        throw ValidationError("graph: asymmetric edge " + std::to_string(v) + "->" +
                              std::to_string(nb[i]));
      }
    }
  }
}

void Labels::validate(std::size_t num_nodes) const {
  if (values.size() != num_nodes) {
    throw ValidationError("labels: " + std::to_string(values.size()) + " labels for " +
                          std::to_string(num_nodes) + " nodes");
  }
  if (num_classes < 1) throw ValidationError("labels: num_classes must be >= 1");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0 || values[i] >= num_classes) {
      throw ValidationError("labels: label " + std::to_string(values[i]) + " of node " +
                            std::to_string(i) + " outside [0, " +
                            std::to_string(num_classes) + ")");
    }
  }
}

void Dataset::validate() const {
  graph.validate();
  if (static_cast<std::size_t>(features.rows()) != graph.num_nodes()) {
    throw ValidationError("features: " + std::to_string(features.rows()) + " rows for " +
                          std::to_string(graph.num_nodes()) + " nodes");
  }
  if (!features.allFinite()) throw ValidationError("features: non-finite value");
  if (labels) labels->validate(graph.num_nodes());
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <class F>
void for_each_line(const std::string& text, F&& f) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    ++line_no;
    f(std::string_view(text).substr(pos, end - pos), line_no);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

std::int64_t parse_int(std::string_view tok, const std::string& where) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ValidationError(where + ": not an integer: '" + std::string(tok) + "'");
  }
  return v;
}

double parse_real(std::string_view tok, const std::string& where) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ValidationError(where + ": not a number: '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace

Dataset load_dataset(const fs::path& dir, LoadReport* report) {
  for (const char* f : {"meta.json", "edges.tsv", "features.csv"}) {
    if (!fs::exists(dir / f)) throw ValidationError("missing file: " + (dir / f).string());
  }
  json meta;
  try {
    meta = json::parse(read_file(dir / "meta.json"));
  } catch (const json::exception& e) {
    throw ValidationError("meta.json: " + std::string(e.what()));
  }
  if (!meta.contains("num_nodes") || !meta["num_nodes"].is_number_integer() ||
      meta["num_nodes"].get<std::int64_t>() < 0) {
    throw ValidationError("meta.json: num_nodes missing or invalid");
  }
  const auto n = meta["num_nodes"].get<std::size_t>();

  Dataset ds;
  ds.name = meta.value("name", dir.filename().string());

  std::vector<Edge> edges;
  const std::string edge_text = read_file(dir / "edges.tsv");
  for_each_line(edge_text, [&](std::string_view line, std::size_t no) {
    line = trim(line);
    if (line.empty() || line.front() == '#') return;
    const std::string where = "edges.tsv line " + std::to_string(no);
    auto sep = line.find_first_of("\t ");
    if (sep == std::string_view::npos) throw ValidationError(where + ": expected two node ids");
    auto a = parse_int(trim(line.substr(0, sep)), where);
    auto b = parse_int(trim(line.substr(sep + 1)), where);
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n ||
        static_cast<std::size_t>(b) >= n) {
      throw ValidationError(where + ": node id outside [0, " + std::to_string(n) + ")");
    }
    edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
  });
  EdgeRepairs repairs;
  ds.graph = Graph::from_edges(n, edges, &repairs);

  std::vector<std::vector<double>> rows;
  const std::string feat_text = read_file(dir / "features.csv");
  for_each_line(feat_text, [&](std::string_view line, std::size_t no) {
    line = trim(line);
    if (line.empty()) return;
    const std::string where = "features.csv line " + std::to_string(no);
    std::vector<double> row;
    std::size_t pos = 0;
    while (true) {
      auto comma = line.find(',', pos);
      auto tok = trim(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos));
      row.push_back(parse_real(tok, where));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ValidationError(where + ": expected " + std::to_string(rows.front().size()) +
                            " columns, got " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  });
  if (rows.size() != n) {
    throw ValidationError("features.csv: " + std::to_string(rows.size()) +
                          " rows but num_nodes is " + std::to_string(n));
  }
  const std::size_t f = rows.empty() ? meta.value("num_features", std::size_t{0}) : rows[0].size();
  if (meta.contains("num_features") && meta["num_features"].get<std::size_t>() != f) {
    throw ValidationError("features.csv: " + std::to_string(f) +
                          " columns but meta.json num_features is " +
                          std::to_string(meta["num_features"].get<std::size_t>()));
  }
  ds.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(f));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < f; ++j) ds.features(i, j) = rows[i][j];
  }

  const fs::path label_path = dir / "labels.txt";
  if (fs::exists(label_path)) {
    Labels labels;
    const std::string text = read_file(label_path);
    for_each_line(text, [&](std::string_view line, std::size_t no) {
      line = trim(line);
      if (line.empty()) return;
      auto v = parse_int(line, "labels.txt line " + std::to_string(no));
      labels.values.push_back(static_cast<int>(v));
    });
    int max_label = -1;
    for (int v : labels.values) max_label = std::max(max_label, v);
    labels.num_classes = meta.value("num_classes", max_label + 1);
    labels.validate(n);
    ds.labels = std::move(labels);
  }
  ds.validate();
  if (report) {
    report->repairs = repairs;
    report->labels_present = ds.labels.has_value();
  }
  return ds;
}

void save_dataset(const Dataset& ds, const fs::path& dir, const std::string& extra_meta_json) {
  ds.validate();
  fs::create_directories(dir);

  std::string edges;
  for (const auto& [u, v] : ds.graph.undirected_edges()) {
    edges += std::to_string(u);
    edges += '\t';
    edges += std::to_string(v);
    edges += '\n';
  }
  write_file_atomic(dir / "edges.tsv", edges);

  std::string feats;
  for (Eigen::Index i = 0; i < ds.features.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.features.cols(); ++j) {
      if (j) feats += ',';
      feats += format_real(ds.features(i, j));
    }
    feats += '\n';
  }
  write_file_atomic(dir / "features.csv", feats);

  json meta = json::object();
  if (!extra_meta_json.empty()) meta = json::parse(extra_meta_json);
  meta["name"] = ds.name;
  meta["num_nodes"] = ds.num_nodes();
  meta["num_features"] = ds.features.cols();
  if (ds.labels) {
    meta["num_classes"] = ds.labels->num_classes;
    std::string labels;
    for (int v : ds.labels->values) {
      labels += std::to_string(v);
      labels += '\n';
    }
    write_file_atomic(dir / "labels.txt", labels);
  }
  write_file_atomic(dir / "meta.json", meta.dump(2) + "\n");
}

double NormalizedAdjacency::weight(NodeId row, NodeId col) const {
  auto first = cols.begin() + static_cast<std::ptrdiff_t>(offsets[row]);
  auto last = cols.begin() + static_cast<std::ptrdiff_t>(offsets[row + 1]);
  auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return 0.0;
  return weights[static_cast<std::size_t>(it - cols.begin())];
}

NormalizedAdjacency normalized_adjacency(const Graph& g) {
  NormalizedAdjacency s;
  s.n = g.num_nodes();
  s.offsets.assign(s.n + 1, 0);
  s.cols.reserve(g.num_directed_entries() + s.n);
  s.weights.reserve(g.num_directed_entries() + s.n);
  for (NodeId v = 0; v < s.n; ++v) {
    bool diag_done = false;
    auto emit = [&](NodeId u) {
      s.cols.push_back(u);
      const double dd = static_cast<double>(g.degree(v) + 1) * static_cast<double>(g.degree(u) + 1);
      s.weights.push_back(1.0 / std::sqrt(dd));
    };
    for (NodeId u : g.neighbors(v)) {
      if (!diag_done && u > v) {
        emit(v);
        diag_done = true;
      }
      emit(u);
    }
    if (!diag_done) emit(v);
    s.offsets[v + 1] = s.cols.size();
  }
  return s;
}

}  // namespace mvge
