#include "mvge/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mvge/errors.hpp"

namespace mvge {

std::string to_string(MergeFn m) {
  switch (m) {
    case MergeFn::kConcat: return "concat";
    case MergeFn::kSum: return "sum";
    case MergeFn::kMean: return "mean";
  }
  return "?";
}

std::string to_string(EgoEncoder e) { return e == EgoEncoder::kLinear ? "linear" : "gcn"; }

std::string to_string(AdjLossMode m) {
  switch (m) {
    case AdjLossMode::kAuto: return "auto";
    case AdjLossMode::kFull: return "full";
    case AdjLossMode::kSampled: return "sampled";
  }
  return "?";
}

MergeFn parse_merge_fn(const std::string& s) {
  if (s == "concat") return MergeFn::kConcat;
  if (s == "sum") return MergeFn::kSum;
  if (s == "mean") return MergeFn::kMean;
  throw ValidationError("unknown merge function '" + s + "' (expected concat, sum or mean)");
}

EgoEncoder parse_ego_encoder(const std::string& s) {
  if (s == "linear") return EgoEncoder::kLinear;
  if (s == "gcn") return EgoEncoder::kGcn;
  throw ValidationError("unknown ego encoder '" + s + "' (expected linear or gcn)");
}

AdjLossMode parse_adj_loss_mode(const std::string& s) {
  if (s == "auto") return AdjLossMode::kAuto;
  if (s == "full") return AdjLossMode::kFull;
  if (s == "sampled") return AdjLossMode::kSampled;
  throw ValidationError("unknown adjacency loss mode '" + s + "' (expected auto, full or sampled)");
}

TaskMask TaskMask::parse(const std::string& csv) {
  TaskMask m{false, false, false};
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "ego") m.ego = true;
    else if (tok == "agg") m.agg = true;
    else if (tok == "adj") m.adj = true;
    else if (tok == "all") m = TaskMask{};
    else if (!tok.empty()) throw ValidationError("unknown task '" + tok + "' in task mask");
  }
  if (!m.ego && !m.agg && !m.adj) throw ValidationError("task mask must enable at least one task");
  return m;
}

std::string TaskMask::to_string() const {
  std::string s;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!s.empty()) s += ',';
    s += name;
  };
  add(ego, "ego");
  add(agg, "agg");
  add(adj, "adj");
  return s;
}

void MVGEConfig::validate() const {
  if (dim_ego == 0 || dim_agg == 0 || hidden_dim == 0) {
    throw ValidationError("config: dimensions must be positive");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("config: alpha must lie in [0, 1]");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ValidationError("config: beta must lie in [0, 1]");
  if (!(lr > 0.0)) throw ValidationError("config: lr must be positive");
  if (!(sample_ratio > 0.0)) throw ValidationError("config: sample_ratio must be positive");
  if (merge_fn != MergeFn::kConcat && dim_ego != dim_agg && uses_ego_branch() &&
      uses_agg_branch()) {
    throw ValidationError("config: sum/mean merge requires dim_ego == dim_agg");
  }
  if (!task_mask.ego && !task_mask.agg && !task_mask.adj) {
    throw ValidationError("config: task mask must enable at least one task");
  }
  walk_config().validate();
}

AdjLossMode MVGEConfig::resolved_adj_mode(std::size_t num_nodes) const {
  if (adj_loss_mode != AdjLossMode::kAuto) return adj_loss_mode;
  return num_nodes <= kFullAdjLossMaxNodes ? AdjLossMode::kFull : AdjLossMode::kSampled;
}

TaskWeights task_weights(double alpha, double beta, const TaskMask& mask) {
  return {mask.ego ? beta * alpha : 0.0, mask.agg ? beta * (1.0 - alpha) : 0.0,
          mask.adj ? 1.0 - beta : 0.0};
}

double total_loss(double l_ego, double l_agg, double l_adj, double alpha, double beta,
                  const TaskMask& mask) {
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0)) {
    throw ValidationError("total_loss: alpha and beta must lie in [0, 1]");
  }
  const auto w = task_weights(alpha, beta, mask);
  double l = 0.0;
  if (mask.ego) l += w.ego * l_ego;
  if (mask.agg) l += w.agg * l_agg;
  if (mask.adj) l += w.adj * l_adj;
  return l;
}

double kl_feature_loss(const Matrix& target, const Matrix& recon, Matrix* d_recon, double scale) {
  if (target.rows() != recon.rows() || target.cols() != recon.cols()) {
    throw ValidationError("kl_feature_loss: shape mismatch");
  }
  const Matrix log_p = log_softmax_rows(target);
  const Matrix log_q = log_softmax_rows(recon);
  const Matrix p = log_p.array().exp().matrix();
  double loss = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (p(i, j) > 0.0) loss += p(i, j) * (log_p(i, j) - log_q(i, j));
    }
  }
  if (d_recon) *d_recon = scale * (log_q.array().exp().matrix() - p);
  return loss;
}

double adjacency_loss_full(const Matrix& h, const Graph& g, Matrix* d_h, double scale) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  if (h.rows() != n) throw ValidationError("adjacency_loss: H rows do not match node count");
  if (n == 0) {
    if (d_h) *d_h = Matrix::Zero(h.rows(), h.cols());
    return 0.0;
  }
  const double inv = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  // H H^T is symmetric: fill the lower triangle only and reuse it in place
  // for the gradient G = sigmoid(H H^T) - A.
  Eigen::MatrixXd logits = Eigen::MatrixXd::Zero(n, n);
  logits.selfadjointView<Eigen::Lower>().rankUpdate(h);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      double& x = logits(i, j);
      const double e = std::exp(-std::abs(x));
      const double sp = std::max(x, 0.0) + std::log1p(e);
      sum += (i == j) ? sp : 2.0 * sp;
      x = x >= 0 ? 1.0 / (1.0 + e) : e / (1.0 + e);  // now sigmoid, logit lost
    }
  }
  // Edge logits are needed before being overwritten, so recompute them.
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (v < u) {
        sum -= 2.0 * h.row(u).dot(h.row(v));
        logits(u, v) -= 1.0;
      }
    }
  }
  if (d_h) {
    // G is symmetric, so dL/dH = (G + G^T) H = 2 G H.
    Matrix gh = logits.selfadjointView<Eigen::Lower>() * h;
    *d_h = (2.0 * scale * inv) * gh;
  }
  return sum * inv;
}

double adjacency_loss_sampled(const Matrix& h, std::span<const LabeledPair> pairs, Matrix* d_h,
                              double scale) {
  if (d_h) *d_h = Matrix::Zero(h.rows(), h.cols());
  if (pairs.empty()) return 0.0;
  const double inv = 1.0 / static_cast<double>(pairs.size());
  double sum = 0.0;
  for (const auto& p : pairs) {
    const double s = h.row(p.u).dot(h.row(p.v));
    sum += p.target * softplus(-s) + (1.0 - p.target) * softplus(s);
    if (d_h) {
      const double sig = s >= 0 ? 1.0 / (1.0 + std::exp(-s)) : std::exp(s) / (1.0 + std::exp(s));
      const double gsc = scale * inv * (sig - p.target);
      d_h->row(p.u) += gsc * h.row(p.v);
      d_h->row(p.v) += gsc * h.row(p.u);
    }
  }
  return sum * inv;
}

std::vector<LabeledPair> sample_adjacency_pairs(const Graph& g, double ratio, Rng& rng) {
  std::vector<LabeledPair> pairs;
  const std::size_t n = g.num_nodes();
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : g.neighbors(u)) pairs.push_back({u, v, 1.0});
  }
  const auto positives = pairs.size();
  const auto want = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(positives)));
  const double total_pairs = static_cast<double>(n) * static_cast<double>(n > 0 ? n - 1 : 0);
  if (n < 2 || static_cast<double>(positives) >= total_pairs) return pairs;
  std::size_t drawn = 0;
  std::size_t attempts = 0;
  while (drawn < want && attempts < 100 * want + 1000) {
    ++attempts;
    const auto u = static_cast<NodeId>(uniform_index(rng, n));
    const auto v = static_cast<NodeId>(uniform_index(rng, n));
    if (u == v || g.has_edge(u, v)) continue;
    pairs.push_back({u, v, 0.0});
    ++drawn;
  }
  return pairs;
}

Matrix merge_embeddings(const Matrix& h_ego, const Matrix& h_agg, MergeFn fn) {
  if (h_ego.rows() != h_agg.rows()) throw ValidationError("merge: row count mismatch");
  switch (fn) {
    case MergeFn::kConcat: return concat_cols(h_ego, h_agg);
    case MergeFn::kSum:
    case MergeFn::kMean:
      if (h_ego.cols() != h_agg.cols()) {
        throw ValidationError("merge: sum/mean need equal embedding widths");
      }
      return fn == MergeFn::kSum ? Matrix(h_ego + h_agg) : Matrix(0.5 * (h_ego + h_agg));
  }
  return {};
}

std::vector<double> embedding_dim_std(const Matrix& h) {
  if (h.rows() < 2) throw ValidationError("embedding_dim_std: need at least two rows");
  std::vector<double> out(static_cast<std::size_t>(h.cols()));
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    const double mean = h.col(j).mean();
    out[static_cast<std::size_t>(j)] =
        std::sqrt((h.col(j).array() - mean).square().sum() / static_cast<double>(h.rows()));
  }
  return out;
}

// ---------------------------------------------------------------------------

MVGEModel::MVGEModel(std::size_t ego_features, std::size_t agg_features, const MVGEConfig& cfg)
    : cfg_(cfg), f_ego_(ego_features), f_agg_(agg_features) {
  cfg.validate();
  const auto f = static_cast<Eigen::Index>(ego_features);
  const auto fa = static_cast<Eigen::Index>(agg_features);
  const auto hid = static_cast<Eigen::Index>(cfg.hidden_dim);
  const auto de = static_cast<Eigen::Index>(cfg.dim_ego);
  const auto da = static_cast<Eigen::Index>(cfg.dim_agg);
  ego_hidden_w = Param("ego.hidden.weight", f, hid);
  ego_hidden_b = Param("ego.hidden.bias", 1, hid);
  ego_gcn1_w = Param("ego.gcn1.weight", f, hid);
  ego_gcn2_w = Param("ego.gcn2.weight", hid, hid);
  ego_out_w = Param("ego.out.weight", f + hid, de);
  ego_out_b = Param("ego.out.bias", 1, de);
  agg_gcn1_w = Param("agg.gcn1.weight", fa, hid);
  agg_gcn2_w = Param("agg.gcn2.weight", hid, hid);
  agg_out_w = Param("agg.out.weight", fa + hid, da);
  agg_out_b = Param("agg.out.bias", 1, da);
  dec_ego_w = Param("dec_ego.weight", de, f);
  dec_ego_b = Param("dec_ego.bias", 1, f);
  dec_agg_w = Param("dec_agg.weight", da, fa);
  dec_agg_b = Param("dec_agg.bias", 1, fa);

  Rng rng = make_rng(cfg.seed, Stream::kInit);
  for (Param* p : {&ego_hidden_w, &ego_gcn1_w, &ego_gcn2_w, &ego_out_w, &agg_gcn1_w,
                   &agg_gcn2_w, &agg_out_w, &dec_ego_w, &dec_agg_w}) {
    glorot_uniform(*p, rng);
  }
}

std::vector<Param*> MVGEModel::parameters() {
  std::vector<Param*> ps;
  const bool bias = cfg_.mlp_bias;
  if (cfg_.ego_encoder == EgoEncoder::kLinear) {
    ps.push_back(&ego_hidden_w);
    if (bias) ps.push_back(&ego_hidden_b);
  } else {
    ps.push_back(&ego_gcn1_w);
    ps.push_back(&ego_gcn2_w);
  }
  ps.push_back(&ego_out_w);
  if (bias) ps.push_back(&ego_out_b);
  ps.push_back(&agg_gcn1_w);
  ps.push_back(&agg_gcn2_w);
  ps.push_back(&agg_out_w);
  if (bias) ps.push_back(&agg_out_b);
  ps.push_back(&dec_ego_w);
  if (bias) ps.push_back(&dec_ego_b);
  ps.push_back(&dec_agg_w);
  if (bias) ps.push_back(&dec_agg_b);
  return ps;
}

std::vector<const Param*> MVGEModel::parameters() const {
  auto ps = const_cast<MVGEModel*>(this)->parameters();
  return {ps.begin(), ps.end()};
}

Param* MVGEModel::find(const std::string& name) {
  for (Param* p : parameters()) {
    if (p->name == name) return p;
  }
  return nullptr;
}

namespace {

// Intermediate values of one encoder branch, kept for the backward pass.
struct BranchCache {
  Matrix pre1, act1;  // linear: x W + b, relu; gcn: S x W1, relu
  Matrix pre2, act2;  // gcn only: S act1 W2, relu
  Matrix skip;        // concat(x, last activation)
  Matrix out;
};

BranchCache forward_linear(const Matrix& x, const Param& w, const Param& b, const Param& ow,
                           const Param& ob) {
  BranchCache c;
  c.pre1 = add_row_bias(matmul(x, w.value), b.value);
  c.act1 = relu(c.pre1);
  c.skip = concat_cols(x, c.act1);
  c.out = add_row_bias(matmul(c.skip, ow.value), ob.value);
  return c;
}

void backward_linear(const Matrix& x, const BranchCache& c, const Matrix& d_out, Param& w,
                     Param& b, Param& ow, Param& ob) {
  ow.grad.noalias() += c.skip.transpose() * d_out;
  ob.grad += column_sums(d_out);
  const Matrix d_skip = d_out * ow.value.transpose();
  const Matrix d_act1 = d_skip.rightCols(c.act1.cols());
  const Matrix d_pre1 = relu_backward(c.pre1, d_act1);
  w.grad.noalias() += x.transpose() * d_pre1;
  b.grad += column_sums(d_pre1);
}

BranchCache forward_gcn(const Matrix& x, const NormalizedAdjacency& s, const Param& w1,
                        const Param& w2, const Param& ow, const Param& ob) {
  BranchCache c;
  c.pre1 = spmm(s, matmul(x, w1.value));
  c.act1 = relu(c.pre1);
  c.pre2 = spmm(s, matmul(c.act1, w2.value));
  c.act2 = relu(c.pre2);
  c.skip = concat_cols(x, c.act2);
  c.out = add_row_bias(matmul(c.skip, ow.value), ob.value);
  return c;
}

void backward_gcn(const Matrix& x, const NormalizedAdjacency& s, const BranchCache& c,
                  const Matrix& d_out, Param& w1, Param& w2, Param& ow, Param& ob) {
  ow.grad.noalias() += c.skip.transpose() * d_out;
  ob.grad += column_sums(d_out);
  const Matrix d_skip = d_out * ow.value.transpose();
  const Matrix d_act2 = d_skip.rightCols(c.act2.cols());
  const Matrix d_t2 = spmm_backward(s, relu_backward(c.pre2, d_act2));
  w2.grad.noalias() += c.act1.transpose() * d_t2;
  const Matrix d_act1 = d_t2 * w2.value.transpose();
  const Matrix d_t1 = spmm_backward(s, relu_backward(c.pre1, d_act1));
  w1.grad.noalias() += x.transpose() * d_t1;
}

BranchCache forward_ego(const MVGEModel& m, const Matrix& x, const NormalizedAdjacency& s) {
  if (static_cast<std::size_t>(x.cols()) != m.ego_features()) {
    throw ValidationError("encode_ego: expected " + std::to_string(m.ego_features()) +
                          " feature columns, got " + std::to_string(x.cols()));
  }
  if (m.config().ego_encoder == EgoEncoder::kLinear) {
    return forward_linear(x, m.ego_hidden_w, m.ego_hidden_b, m.ego_out_w, m.ego_out_b);
  }
  return forward_gcn(x, s, m.ego_gcn1_w, m.ego_gcn2_w, m.ego_out_w, m.ego_out_b);
}

BranchCache forward_agg(const MVGEModel& m, const Matrix& x, const NormalizedAdjacency& s) {
  if (static_cast<std::size_t>(x.cols()) != m.agg_features()) {
    throw ValidationError("encode_agg: expected " + std::to_string(m.agg_features()) +
                          " feature columns, got " + std::to_string(x.cols()));
  }
  return forward_gcn(x, s, m.agg_gcn1_w, m.agg_gcn2_w, m.agg_out_w, m.agg_out_b);
}

Matrix merged_from(const MVGEConfig& cfg, const Matrix& h_ego, const Matrix& h_agg) {
  if (cfg.uses_ego_branch() && cfg.uses_agg_branch()) {
    return merge_embeddings(h_ego, h_agg, cfg.merge_fn);
  }
  return cfg.uses_ego_branch() ? h_ego : h_agg;
}

}  // namespace

Matrix encode_ego(const MVGEModel& m, const Matrix& x_ego, const NormalizedAdjacency& s) {
  return forward_ego(m, x_ego, s).out;
}

Matrix encode_agg(const MVGEModel& m, const Matrix& x_agg, const NormalizedAdjacency& s) {
  return forward_agg(m, x_agg, s).out;
}

EmbeddingSet embed(const MVGEModel& m, const ViewPair& views, const NormalizedAdjacency& s) {
  EmbeddingSet e;
  e.ego = encode_ego(m, views.x_ego, s);
  e.agg = encode_agg(m, views.x_agg, s);
  e.merged = merged_from(m.config(), e.ego, e.agg);
  return e;
}

Objective::Objective(const Graph& g, const ViewPair& views, const MVGEConfig& cfg)
    : g_(g), views_(views), cfg_(cfg), s_(normalized_adjacency(g)),
      adj_mode_(cfg.resolved_adj_mode(g.num_nodes())) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  if (views.x_ego.rows() != n || views.x_agg.rows() != n) {
    throw ValidationError("objective: view rows do not match node count");
  }
}

LossBreakdown Objective::evaluate(MVGEModel& m, bool with_grad,
                                  std::span<const LabeledPair> pairs) const {
  const auto w = task_weights(cfg_.alpha, cfg_.beta, cfg_.task_mask);
  const bool use_ego = cfg_.uses_ego_branch();
  const bool use_agg = cfg_.uses_agg_branch();
  const bool need_ego = cfg_.task_mask.ego || (cfg_.task_mask.adj && use_ego);
  const bool need_agg = cfg_.task_mask.agg || (cfg_.task_mask.adj && use_agg);
  const bool ego_linear = cfg_.ego_encoder == EgoEncoder::kLinear;

  LossBreakdown lb;
  BranchCache ego, agg;
  if (need_ego) ego = forward_ego(m, views_.x_ego, s_);
  if (need_agg) agg = forward_agg(m, views_.x_agg, s_);

  Matrix d_ego, d_agg;
  if (with_grad) {
    if (need_ego) d_ego = Matrix::Zero(ego.out.rows(), ego.out.cols());
    if (need_agg) d_agg = Matrix::Zero(agg.out.rows(), agg.out.cols());
  }

  if (cfg_.task_mask.ego) {
    const Matrix z = add_row_bias(matmul(ego.out, m.dec_ego_w.value), m.dec_ego_b.value);
    Matrix d_z;
    lb.ego = kl_feature_loss(views_.x_ego, z, with_grad ? &d_z : nullptr, w.ego);
    if (with_grad) {
      m.dec_ego_w.grad.noalias() += ego.out.transpose() * d_z;
      m.dec_ego_b.grad += column_sums(d_z);
      d_ego.noalias() += d_z * m.dec_ego_w.value.transpose();
    }
  }
  if (cfg_.task_mask.agg) {
    const Matrix z = add_row_bias(matmul(agg.out, m.dec_agg_w.value), m.dec_agg_b.value);
    Matrix d_z;
    lb.agg = kl_feature_loss(views_.x_agg, z, with_grad ? &d_z : nullptr, w.agg);
    if (with_grad) {
      m.dec_agg_w.grad.noalias() += agg.out.transpose() * d_z;
      m.dec_agg_b.grad += column_sums(d_z);
      d_agg.noalias() += d_z * m.dec_agg_w.value.transpose();
    }
  }
  if (cfg_.task_mask.adj) {
    const Matrix h = merged_from(cfg_, ego.out, agg.out);
    Matrix d_h;
    if (adj_mode_ == AdjLossMode::kFull) {
      lb.adj = adjacency_loss_full(h, g_, with_grad ? &d_h : nullptr, w.adj);
    } else {
      lb.adj = adjacency_loss_sampled(h, pairs, with_grad ? &d_h : nullptr, w.adj);
    }
    if (with_grad) {
      if (use_ego && use_agg) {
        switch (cfg_.merge_fn) {
          case MergeFn::kConcat: {
            auto [de, da] = split_cols(d_h, ego.out.cols());
            d_ego += de;
            d_agg += da;
            break;
          }
          case MergeFn::kSum:
            d_ego += d_h;
            d_agg += d_h;
            break;
          case MergeFn::kMean:
            d_ego += 0.5 * d_h;
            d_agg += 0.5 * d_h;
            break;
        }
      } else if (use_ego) {
        d_ego += d_h;
      } else {
        d_agg += d_h;
      }
    }
  }

  if (with_grad) {
    if (need_ego) {
      if (ego_linear) {
        backward_linear(views_.x_ego, ego, d_ego, m.ego_hidden_w, m.ego_hidden_b, m.ego_out_w,
                        m.ego_out_b);
      } else {
        backward_gcn(views_.x_ego, s_, ego, d_ego, m.ego_gcn1_w, m.ego_gcn2_w, m.ego_out_w,
                     m.ego_out_b);
      }
    }
    if (need_agg) {
      backward_gcn(views_.x_agg, s_, agg, d_agg, m.agg_gcn1_w, m.agg_gcn2_w, m.agg_out_w,
                   m.agg_out_b);
    }
    if (!cfg_.mlp_bias) {
      for (Param* p : {&m.ego_hidden_b, &m.ego_out_b, &m.agg_out_b, &m.dec_ego_b, &m.dec_agg_b}) {
        p->zero_grad();
      }
    }
  }
  lb.total = total_loss(lb.ego, lb.agg, lb.adj, cfg_.alpha, cfg_.beta, cfg_.task_mask);
  return lb;
}

TrainResult train_on_views(const Graph& g, const ViewPair& views, const MVGEConfig& cfg) {
  cfg.validate();
  TrainResult res;
  res.model = MVGEModel(static_cast<std::size_t>(views.x_ego.cols()),
                        static_cast<std::size_t>(views.x_agg.cols()), cfg);
  Objective obj(g, views, cfg);
  Adam adam({.lr = cfg.lr});
  Rng pair_rng = make_rng(cfg.seed, Stream::kAdjSampling);
  const bool sampled = cfg.task_mask.adj && obj.adj_mode() == AdjLossMode::kSampled;
  auto params = res.model.parameters();
  res.trace.epochs.reserve(cfg.epochs);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<LabeledPair> pairs;
    if (sampled) pairs = sample_adjacency_pairs(g, cfg.sample_ratio, pair_rng);
    const LossBreakdown lb = obj.evaluate(res.model, true, pairs);
    if (!std::isfinite(lb.total) || !std::isfinite(lb.ego) || !std::isfinite(lb.agg) ||
        !std::isfinite(lb.adj)) {
      throw NumericalError("training diverged: non-finite loss at epoch " +
                               std::to_string(epoch + 1),
                           static_cast<std::ptrdiff_t>(epoch + 1));
    }
    res.trace.epochs.push_back(lb);
    adam.step(params);
  }
  res.embeddings = embed(res.model, views, obj.propagation());
  if (!res.embeddings.merged.allFinite() || !res.embeddings.ego.allFinite() ||
      !res.embeddings.agg.allFinite()) {
    throw NumericalError("training produced non-finite embeddings",
                         static_cast<std::ptrdiff_t>(cfg.epochs));
  }
  return res;
}

TrainResult train(const Dataset& ds, const MVGEConfig& cfg) {
  cfg.validate();
  const ViewPair views = build_views(ds.graph, ds.features, cfg.walk_config());
  return train_on_views(ds.graph, views, cfg);
}

}  // namespace mvge
