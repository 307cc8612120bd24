#include "mvge/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "mvge/errors.hpp"
#include "mvge/io_util.hpp"

namespace mvge {

std::string to_string(EvalTask t) {
  switch (t) {
    case EvalTask::kNode: return "node";
    case EvalTask::kLink: return "link";
    case EvalTask::kPair: return "pair";
  }
  return "?";
}

SplitSpec SplitSpec::defaults(EvalTask task, std::uint64_t seed) {
  SplitSpec s;
  s.task = task;
  s.train_fraction = task == EvalTask::kNode ? 0.3 : 0.85;
  s.seed = seed;
  return s;
}

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValidationError("split: train fraction must lie in (0, 1)");
  }
  if (repeats < 1) throw ValidationError("split: repeats must be >= 1");
}

// ---------------------------------------------------------------------------
// Logistic regression

Matrix LogRegModel::decision(const Matrix& x) const {
  if (x.cols() != feature_mean.cols()) throw ValidationError("logreg: feature width mismatch");
  Matrix xs = (x.rowwise() - feature_mean.row(0)).array().rowwise() / feature_scale.row(0).array();
  Matrix logits = xs * weights;
  logits.rowwise() += bias.row(0);
  return sigmoid(logits);
}

std::vector<int> LogRegModel::predict(const Matrix& x) const {
  std::vector<int> out(static_cast<std::size_t>(x.rows()), degenerate_class);
  if (degenerate_class >= 0) return out;
  const Matrix scores = decision(x);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (scores.cols() == 1) {
      out[static_cast<std::size_t>(i)] = scores(i, 0) > 0.5 ? 1 : 0;
    } else {
      Eigen::Index best;
      scores.row(i).maxCoeff(&best);
      out[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
  }
  return out;
}

std::vector<double> LogRegModel::positive_scores(const Matrix& x) const {
  if (num_classes != 2) throw ValidationError("logreg: positive_scores needs a binary model");
  std::vector<double> out(static_cast<std::size_t>(x.rows()), degenerate_class == 1 ? 1.0 : 0.0);
  if (degenerate_class >= 0) return out;
  const Matrix s = decision(x);
  for (Eigen::Index i = 0; i < x.rows(); ++i) out[static_cast<std::size_t>(i)] = s(i, 0);
  return out;
}

LogRegModel train_logreg_ovr(const Matrix& features, std::span<const int> labels,
                             std::span<const std::size_t> train_idx, int num_classes,
                             const LogRegHyper& hyper) {
  if (train_idx.empty()) throw ValidationError("logreg: empty training set");
  if (num_classes < 1) throw ValidationError("logreg: num_classes must be >= 1");
  const auto d = features.cols();
  const auto n = static_cast<Eigen::Index>(train_idx.size());
  Matrix x(n, d);
  std::vector<int> y(train_idx.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto r = train_idx[static_cast<std::size_t>(i)];
    x.row(i) = features.row(static_cast<Eigen::Index>(r));
    y[static_cast<std::size_t>(i)] = labels[r];
    if (labels[r] < 0 || labels[r] >= num_classes) throw ValidationError("logreg: label out of range");
  }

  LogRegModel m;
  m.num_classes = num_classes;
  m.feature_mean = x.colwise().mean();
  m.feature_scale = Matrix::Ones(1, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double sd = std::sqrt((x.col(j).array() - m.feature_mean(0, j)).square().mean());
    if (sd > 1e-12) m.feature_scale(0, j) = sd;
  }
  const Eigen::Index k = num_classes == 2 ? 1 : num_classes;
  m.weights = Matrix::Zero(d, k);
  m.bias = Matrix::Zero(1, k);
  if (std::all_of(y.begin(), y.end(), [&](int v) { return v == y.front(); })) {
    m.degenerate_class = y.front();
    return m;
  }

  const Matrix xs =
      (x.rowwise() - m.feature_mean.row(0)).array().rowwise() / m.feature_scale.row(0).array();
  Matrix targets = Matrix::Zero(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = y[static_cast<std::size_t>(i)];
    if (k == 1) targets(i, 0) = c == 1 ? 1.0 : 0.0;
    else targets(i, c) = 1.0;
  }

  Param w("logreg.weight", d, k);
  Param b("logreg.bias", 1, k);
  Adam adam({.lr = hyper.lr});
  std::vector<Param*> params{&w, &b};
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t it = 0; it < hyper.iterations; ++it) {
    Matrix logits = xs * w.value;
    logits.rowwise() += b.value.row(0);
    const Matrix resid = sigmoid(logits) - targets;
    w.grad = inv_n * (xs.transpose() * resid) + hyper.l2 * w.value;
    b.grad = inv_n * column_sums(resid);
    adam.step(params);
  }
  m.weights = w.value;
  m.bias = b.value;
  return m;
}

// ---------------------------------------------------------------------------
// Metrics

double micro_f1(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) throw ValidationError("micro_f1: length mismatch");
  if (pred.empty()) throw ValidationError("micro_f1: empty input");
  // Single-label: every miss is one false positive (predicted class) and one
  // false negative (true class).
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] == truth[i]) {
      ++tp;
    } else {
      ++fp;
      ++fn;
    }
  }
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ValidationError("roc_auc: length mismatch");
  std::size_t n_pos = 0;
  for (int l : labels) n_pos += (l == 1);
  const std::size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw ValidationError("roc_auc: both classes must be present");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1) rank_sum += avg_rank;
    }
    i = j;
  }
  const double np = static_cast<double>(n_pos);
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

std::vector<double> pair_embed_l2(std::span<const double> e_u, std::span<const double> e_v) {
  if (e_u.size() != e_v.size()) throw ValidationError("pair_embed_l2: dimension mismatch");
  std::vector<double> out(e_u.size());
  for (std::size_t i = 0; i < e_u.size(); ++i) out[i] = (e_u[i] - e_v[i]) * (e_u[i] - e_v[i]);
  return out;
}

Matrix pair_features_l2(const Matrix& h, std::span<const Edge> pairs) {
  Matrix out(static_cast<Eigen::Index>(pairs.size()), h.cols());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) =
        (h.row(pairs[i].first) - h.row(pairs[i].second)).array().square();
  }
  return out;
}

void EvalReport::finalize() {
  if (scores.empty()) {
    mean = std = 0.0;
    return;
  }
  mean = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
  double ss = 0.0;
  for (double s : scores) ss += (s - mean) * (s - mean);
  std = std::sqrt(ss / static_cast<double>(scores.size()));
}

std::string EvalReport::to_json() const {
  nlohmann::json j = {{"task", task},   {"metric", metric}, {"repeats", scores.size()},
                      {"scores", scores}, {"mean", mean},   {"std", std}};
  return j.dump(2) + "\n";
}

std::string EvalReport::to_csv() const {
  std::string out = "repeat," + metric + "\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out += std::to_string(i) + "," + format_real(scores[i]) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Node classification

NodeSplit node_split(std::size_t num_nodes, double train_fraction, Rng& rng) {
  if (num_nodes < 2) throw ValidationError("node split: need at least two nodes");
  std::vector<std::size_t> perm(num_nodes);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(num_nodes)));
  n_train = std::clamp<std::size_t>(n_train, 1, num_nodes - 1);
  NodeSplit s;
  s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

EvalReport node_classification_eval(const Matrix& h, const Labels& labels, const SplitSpec& spec,
                                    const LogRegHyper& hyper) {
  spec.validate();
  labels.validate(static_cast<std::size_t>(h.rows()));
  std::set<int> classes(labels.values.begin(), labels.values.end());
  if (classes.size() < 2) throw ValidationError("node classification: fewer than two classes");
  EvalReport rep;
  rep.task = "node";
  rep.metric = "micro_f1";
  for (std::size_t r = 0; r < spec.repeats; ++r) {
    Rng rng = make_rng(spec.seed, Stream::kRepeat, r);
    const NodeSplit split = node_split(static_cast<std::size_t>(h.rows()), spec.train_fraction, rng);
    const auto model = train_logreg_ovr(h, labels.values, split.train, labels.num_classes, hyper);
    Matrix test(static_cast<Eigen::Index>(split.test.size()), h.cols());
    std::vector<int> truth(split.test.size());
    for (std::size_t i = 0; i < split.test.size(); ++i) {
      test.row(static_cast<Eigen::Index>(i)) = h.row(static_cast<Eigen::Index>(split.test[i]));
      truth[i] = labels.values[split.test[i]];
    }
    rep.scores.push_back(micro_f1(model.predict(test), truth));
  }
  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Pair sampling helpers

namespace {

std::uint64_t pair_key(NodeId u, NodeId v, std::size_t n) {
  return static_cast<std::uint64_t>(std::min(u, v)) * n + std::max(u, v);
}

// Draws `count` distinct unordered pairs u != v accepted by `ok`, out of
// `available` such pairs in total. Enumerates when the pool is small relative
// to the request, otherwise samples with rejection.
template <class Accept>
std::vector<Edge> draw_pairs(std::size_t n, std::size_t count, double available, Accept ok,
                             std::unordered_set<std::uint64_t>& taken, Rng& rng) {
  std::vector<Edge> out;
  if (count == 0) return out;
  out.reserve(count);
  if (available <= 4.0 * static_cast<double>(count) + 1024.0) {
    std::vector<Edge> pool;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (ok(u, v) && !taken.count(pair_key(u, v, n))) pool.emplace_back(u, v);
      }
    }
    if (pool.size() < count) throw ValidationError("pair sampling: not enough candidate pairs");
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(count);
    for (const auto& [u, v] : pool) taken.insert(pair_key(u, v, n));
    return pool;
  }
  while (out.size() < count) {
    auto u = static_cast<NodeId>(uniform_index(rng, n));
    auto v = static_cast<NodeId>(uniform_index(rng, n));
    if (u == v || !ok(u, v)) continue;
    if (!taken.insert(pair_key(u, v, n)).second) continue;
    out.emplace_back(std::min(u, v), std::max(u, v));
  }
  return out;
}

std::size_t test_count(std::size_t total, double train_fraction) {
  return static_cast<std::size_t>(
      std::ceil((1.0 - train_fraction) * static_cast<double>(total) - 1e-9));
}

double fit_and_score_pairs(const Matrix& h, const std::vector<Edge>& train_pos,
                           const std::vector<Edge>& train_neg, const std::vector<Edge>& test_pos,
                           const std::vector<Edge>& test_neg, const LogRegHyper& hyper) {
  std::vector<Edge> train = train_pos;
  train.insert(train.end(), train_neg.begin(), train_neg.end());
  std::vector<int> y(train.size(), 0);
  std::fill(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(train_pos.size()), 1);
  std::vector<std::size_t> idx(train.size());
  std::iota(idx.begin(), idx.end(), 0);
  const auto model = train_logreg_ovr(pair_features_l2(h, train), y, idx, 2, hyper);

  std::vector<Edge> test = test_pos;
  test.insert(test.end(), test_neg.begin(), test_neg.end());
  std::vector<int> ty(test.size(), 0);
  std::fill(ty.begin(), ty.begin() + static_cast<std::ptrdiff_t>(test_pos.size()), 1);
  return roc_auc(model.positive_scores(pair_features_l2(h, test)), ty);
}

}  // namespace

LinkSplit link_split(const Graph& g, const SplitSpec& spec, Rng& rng) {
  spec.validate();
  const std::size_t n = g.num_nodes();
  std::vector<Edge> edges = g.undirected_edges();
  const std::size_t e = edges.size();
  const std::size_t n_test = test_count(e, spec.train_fraction);
  if (n_test == 0 || n_test >= e) {
    throw ValidationError("link split: graph with " + std::to_string(e) +
                          " edges is too small for the requested split");
  }
  const double non_edges = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0 -
                           static_cast<double>(e);
  if (non_edges < static_cast<double>(e)) {
    throw ValidationError("link split: not enough non-edges for negative sampling");
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  LinkSplit s;
  s.test_pos.assign(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(n_test));
  s.train_pos.assign(edges.begin() + static_cast<std::ptrdiff_t>(n_test), edges.end());
  std::unordered_set<std::uint64_t> taken;
  auto non_edge = [&](NodeId u, NodeId v) { return !g.has_edge(u, v); };
  s.test_neg = draw_pairs(n, s.test_pos.size(), non_edges, non_edge, taken, rng);
  s.train_neg = draw_pairs(n, s.train_pos.size(), non_edges - static_cast<double>(n_test),
                           non_edge, taken, rng);
  s.train_graph = Graph::from_edges(n, s.train_pos);
  return s;
}

LinkEvalOutput link_prediction_eval(const Dataset& ds, const MVGEConfig& cfg,
                                    const SplitSpec& spec, const LogRegHyper& hyper) {
  spec.validate();
  LinkEvalOutput out;
  out.report.task = "link";
  out.report.metric = "roc_auc";
  for (std::size_t r = 0; r < spec.repeats; ++r) {
    Rng rng = make_rng(spec.seed, Stream::kSplit, r);
    LinkSplit split = link_split(ds.graph, spec, rng);
    MVGEConfig run_cfg = cfg;
    run_cfg.seed = derive_seed(cfg.seed, Stream::kRepeat, r);
    const auto trained = train_on_views(
        split.train_graph, build_views(split.train_graph, ds.features, run_cfg.walk_config()),
        run_cfg);
    out.report.scores.push_back(fit_and_score_pairs(trained.embeddings.merged, split.train_pos,
                                                    split.train_neg, split.test_pos,
                                                    split.test_neg, hyper));
    out.splits.push_back(std::move(split));
  }
  out.report.finalize();
  return out;
}

// ---------------------------------------------------------------------------
// Pairwise node classification

PairSamples sample_label_pairs(const Labels& labels, std::size_t per_class_count,
                               double train_fraction, Rng& rng) {
  const std::size_t n = labels.size();
  std::vector<std::size_t> sizes(static_cast<std::size_t>(labels.num_classes), 0);
  for (int c : labels.values) ++sizes[static_cast<std::size_t>(c)];
  double same = 0.0;
  for (auto s : sizes) same += static_cast<double>(s) * static_cast<double>(s > 0 ? s - 1 : 0) / 2.0;
  const double all = static_cast<double>(n) * static_cast<double>(n > 0 ? n - 1 : 0) / 2.0;
  const double diff = all - same;
  if (diff <= 0.0 || same <= 0.0) {
    throw ValidationError("pair sampling: need at least two classes and one same-class pair");
  }
  const double want = static_cast<double>(per_class_count);
  if (same < want || diff < want) {
    throw ValidationError("pair sampling: not enough distinct same-class or cross-class pairs");
  }
  std::unordered_set<std::uint64_t> taken;
  auto pos = draw_pairs(n, per_class_count, same,
                        [&](NodeId u, NodeId v) { return labels.values[u] == labels.values[v]; },
                        taken, rng);
  auto neg = draw_pairs(n, per_class_count, diff,
                        [&](NodeId u, NodeId v) { return labels.values[u] != labels.values[v]; },
                        taken, rng);
  const std::size_t n_test = test_count(per_class_count, train_fraction);
  if (n_test == 0 || n_test >= per_class_count) {
    throw ValidationError("pair sampling: too few pairs for the requested split");
  }
  PairSamples s;
  s.test_pos.assign(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(n_test));
  s.train_pos.assign(pos.begin() + static_cast<std::ptrdiff_t>(n_test), pos.end());
  s.test_neg.assign(neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(n_test));
  s.train_neg.assign(neg.begin() + static_cast<std::ptrdiff_t>(n_test), neg.end());
  return s;
}

EvalReport pairwise_eval(const Matrix& h, const Labels& labels, std::size_t num_pairs,
                         const SplitSpec& spec, const LogRegHyper& hyper) {
  spec.validate();
  labels.validate(static_cast<std::size_t>(h.rows()));
  EvalReport rep;
  rep.task = "pair";
  rep.metric = "roc_auc";
  for (std::size_t r = 0; r < spec.repeats; ++r) {
    Rng rng = make_rng(spec.seed, Stream::kPairs, r);
    const auto s = sample_label_pairs(labels, num_pairs, spec.train_fraction, rng);
    rep.scores.push_back(fit_and_score_pairs(h, s.train_pos, s.train_neg, s.test_pos, s.test_neg, hyper));
  }
  rep.finalize();
  return rep;
}

EvalReport pairwise_eval(const Dataset& ds, const MVGEConfig& cfg, const SplitSpec& spec,
                         const LogRegHyper& hyper) {
  if (!ds.labels) throw ValidationError("pairwise eval: dataset has no labels");
  const auto trained = train(ds, cfg);
  return pairwise_eval(trained.embeddings.merged, *ds.labels, ds.graph.num_edges(), spec, hyper);
}

// ---------------------------------------------------------------------------
// Grid search

std::string GridSearchResult::to_csv() const {
  std::string out = "alpha,beta,micro_f1\n";
  for (const auto& e : table) {
    out += format_real(e.alpha) + "," + format_real(e.beta) + "," + format_real(e.score) + "\n";
  }
  return out;
}

GridSearchResult grid_search_alpha_beta(const Dataset& ds, const MVGEConfig& cfg,
                                        double grid_step, double val_fraction,
                                        const LogRegHyper& hyper) {
  if (!ds.labels) throw ValidationError("grid search: dataset has no labels");
  if (!(grid_step > 0.0 && grid_step <= 1.0)) throw ValidationError("grid search: bad step");
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw ValidationError("grid search: validation fraction must lie in (0, 1)");
  }
  const auto steps = static_cast<int>(std::llround(1.0 / grid_step));
  const ViewPair views = build_views(ds.graph, ds.features, cfg.walk_config());
  Rng rng = make_rng(cfg.seed, Stream::kSplit, 0x67726964);
  const NodeSplit split = node_split(ds.num_nodes(), 1.0 - val_fraction, rng);
  std::vector<int> truth(split.test.size());
  for (std::size_t i = 0; i < split.test.size(); ++i) truth[i] = ds.labels->values[split.test[i]];

  GridSearchResult res;
  res.best_score = -1.0;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      MVGEConfig c = cfg;
      c.alpha = static_cast<double>(i) / steps;
      c.beta = static_cast<double>(j) / steps;
      const auto trained = train_on_views(ds.graph, views, c);
      const Matrix& h = trained.embeddings.merged;
      const auto model = train_logreg_ovr(h, ds.labels->values, split.train, ds.labels->num_classes, hyper);
      Matrix test(static_cast<Eigen::Index>(split.test.size()), h.cols());
      for (std::size_t k = 0; k < split.test.size(); ++k) {
        test.row(static_cast<Eigen::Index>(k)) = h.row(static_cast<Eigen::Index>(split.test[k]));
      }
      const double score = micro_f1(model.predict(test), truth);
      res.table.push_back({c.alpha, c.beta, score});
      if (score > res.best_score) {
        res.best_score = score;
        res.alpha = c.alpha;
        res.beta = c.beta;
      }
    }
  }
  return res;
}

}  // namespace mvge
