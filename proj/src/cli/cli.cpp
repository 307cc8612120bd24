#include "mvge/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mvge/config_json.hpp"
#include "mvge/embedding.hpp"
#include "mvge/errors.hpp"
#include "mvge/eval.hpp"
#include "mvge/homophily.hpp"
#include "mvge/io_util.hpp"
#include "mvge/model.hpp"
#include "mvge/synth.hpp"

namespace mvge {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct GlobalFlags {
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::string out;
  std::string config;
};

// Training overrides shared by embed / eval-* / gridsearch. Only options the
// user actually passed are applied.
struct ModelFlags {
  std::size_t epochs = 0, dim_ego = 0, dim_agg = 0, hidden = 0;
  double alpha = 0, beta = 0, lr = 0, sample_ratio = 0;
  std::vector<std::size_t> walk_lengths;
  std::string aggr, merge, task_mask, ego_encoder, adj_loss;
  std::vector<CLI::Option*> opts;

  void attach(CLI::App* app) {
    auto* g = app->add_option_group("model", "model and training options");
    opts = {
        g->add_option("--epochs", epochs, "training epochs"),
        g->add_option("--alpha", alpha, "ego vs agg weight in [0,1]"),
        g->add_option("--beta", beta, "feature vs adjacency weight in [0,1]"),
        g->add_option("--dim-ego", dim_ego, "ego embedding width"),
        g->add_option("--dim-agg", dim_agg, "agg embedding width"),
        g->add_option("--hidden", hidden, "hidden width"),
        g->add_option("--lr", lr, "Adam learning rate"),
        g->add_option("--walk-lengths", walk_lengths, "walk lengths, e.g. 3,5,10")->delimiter(','),
        g->add_option("--aggr", aggr, "walk aggregation: concat|mean|sum"),
        g->add_option("--merge", merge, "embedding merge: concat|sum|mean"),
        g->add_option("--task-mask", task_mask, "subset of ego,agg,adj"),
        g->add_option("--ego-encoder", ego_encoder, "linear|gcn"),
        g->add_option("--adj-loss", adj_loss, "auto|full|sampled"),
        g->add_option("--sample-ratio", sample_ratio, "negatives per positive (sampled mode)"),
    };
  }

  bool given(std::size_t i) const { return opts[i]->count() > 0; }

  MVGEConfig resolve(const GlobalFlags& global) const {
    MVGEConfig cfg;
    if (!global.config.empty()) cfg = load_config_file(global.config, cfg);
    if (global.seed_opt && global.seed_opt->count()) cfg.seed = global.seed;
    if (given(0)) cfg.epochs = epochs;
    if (given(1)) cfg.alpha = alpha;
    if (given(2)) cfg.beta = beta;
    if (given(3)) cfg.dim_ego = dim_ego;
    if (given(4)) cfg.dim_agg = dim_agg;
    if (given(5)) cfg.hidden_dim = hidden;
    if (given(6)) cfg.lr = lr;
    if (given(7)) cfg.walk_lengths = walk_lengths;
    if (given(8)) cfg.aggr = parse_aggr(aggr);
    if (given(9)) cfg.merge_fn = parse_merge_fn(merge);
    if (given(10)) cfg.task_mask = TaskMask::parse(task_mask);
    if (given(11)) cfg.ego_encoder = parse_ego_encoder(ego_encoder);
    if (given(12)) cfg.adj_loss_mode = parse_adj_loss_mode(adj_loss);
    if (given(13)) cfg.sample_ratio = sample_ratio;
    cfg.validate();
    return cfg;
  }
};

fs::path require_out(const GlobalFlags& g) {
  if (g.out.empty()) throw ValidationError("--out is required for this command");
  fs::create_directories(g.out);
  return g.out;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string dataset_checksum(const fs::path& dir) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char* f : {"meta.json", "edges.tsv", "features.csv", "labels.txt"}) {
    if (!fs::exists(dir / f)) continue;
    h = fnv1a64(f, h);
    h = fnv1a64(read_file(dir / f), h);
  }
  return hex64(h);
}

void write_manifest(const fs::path& path, const std::string& command, const fs::path& dataset,
                    const MVGEConfig& cfg, double seconds, json extra = json::object()) {
  json m = {{"tool", "mvge"},
            {"version", kToolVersion},
            {"command", command},
            {"dataset", dataset.string()},
            {"dataset_checksum", dataset_checksum(dataset)},
            {"seed", cfg.seed},
            {"config", config_to_json(cfg)},
            {"duration_seconds", seconds}};
  for (auto& [k, v] : extra.items()) m[k] = v;
  write_file_atomic(path, m.dump(2) + "\n");
}

std::string trace_csv(const TrainTrace& trace) {
  std::string out = "epoch,l_ego,l_agg,l_s,l_total\n";
  for (std::size_t i = 0; i < trace.epochs.size(); ++i) {
    const auto& e = trace.epochs[i];
    out += std::to_string(i + 1) + "," + format_real(e.ego) + "," + format_real(e.agg) + "," +
           format_real(e.adj) + "," + format_real(e.total) + "\n";
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const Labels& require_labels(const Dataset& ds, const fs::path& dir) {
  if (!ds.labels) throw ValidationError("missing file: " + (dir / "labels.txt").string());
  return *ds.labels;
}

void write_report(const fs::path& out, const EvalReport& rep, std::ostream& os) {
  write_file_atomic(out / "report.json", rep.to_json());
  write_file_atomic(out / "repeats.csv", rep.to_csv());
  os << rep.to_json();
}

// --- subcommands -----------------------------------------------------------

int cmd_stats(const GlobalFlags& g, const std::string& dataset, std::size_t bins,
              const std::string& per_node_csv, std::ostream& out) {
  const Dataset ds = load_dataset(dataset);
  const Labels& labels = require_labels(ds, dataset);
  const auto rep = homophily_report(ds.graph, labels, bins);
  json j = {{"name", ds.name},
            {"num_nodes", ds.num_nodes()},
            {"num_edges", ds.graph.num_edges()},
            {"num_features", ds.features.cols()},
            {"num_classes", labels.num_classes},
            {"global", rep.global},
            {"histogram", rep.histogram},
            {"num_undefined_local", rep.num_undefined_local}};
  const std::string text = j.dump(2) + "\n";
  if (!g.out.empty()) {
    fs::create_directories(g.out);
    write_file_atomic(fs::path(g.out) / "stats.json", text);
  }
  if (!per_node_csv.empty()) {
    std::string csv = "node,degree,local_homophily\n";
    for (std::size_t v = 0; v < rep.local.size(); ++v) {
      csv += std::to_string(v) + "," + std::to_string(ds.graph.degree(static_cast<NodeId>(v))) + ",";
      csv += rep.local[v] ? format_real(*rep.local[v]) : std::string("nan");
      csv += "\n";
    }
    write_file_atomic(per_node_csv, csv);
  }
  out << text;
  return kExitOk;
}

int cmd_synth(const GlobalFlags& g, SynthSpec spec, const std::string& name, std::ostream& out) {
  const fs::path dir = require_out(g);
  spec.seed = g.seed;
  Dataset ds = generate_synthetic(spec);
  ds.name = name;
  json extra = {{"synth", json::parse(spec.to_json())}};
  save_dataset(ds, dir, extra.dump());
  out << "wrote " << ds.num_nodes() << " nodes, " << ds.graph.num_edges() << " edges to "
      << dir.string() << "\n";
  return kExitOk;
}

int cmd_embed(const GlobalFlags& g, const ModelFlags& mf, const std::string& dataset,
              std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const MVGEConfig cfg = mf.resolve(g);
  const fs::path dir = require_out(g);
  const Dataset ds = load_dataset(dataset);
  const TrainResult res = train(ds, cfg);
  save_embedding_set(res.embeddings, dir);
  write_file_atomic(dir / "trace.csv", trace_csv(res.trace));
  write_manifest(dir / "manifest.json", "embed", dataset, cfg, seconds_since(t0),
                 {{"embedding_dim", res.embeddings.merged.cols()},
                  {"dim_ego", res.embeddings.ego.cols()},
                  {"dim_agg", res.embeddings.agg.cols()}});
  out << "embedded " << res.embeddings.merged.rows() << " nodes into "
      << res.embeddings.merged.cols() << " dims; outputs in " << dir.string() << "\n";
  return kExitOk;
}

int cmd_eval_node(const GlobalFlags& g, const ModelFlags& mf, const std::string& dataset,
                  const std::string& embeddings, SplitSpec spec, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = require_out(g);
  const MVGEConfig cfg = mf.resolve(g);
  const Dataset ds = load_dataset(dataset);
  const Labels& labels = require_labels(ds, dataset);
  Matrix h;
  if (!embeddings.empty()) {
    h = load_embeddings(embeddings);
    if (static_cast<std::size_t>(h.rows()) != ds.num_nodes()) {
      throw ValidationError("embeddings have " + std::to_string(h.rows()) + " rows, dataset has " +
                            std::to_string(ds.num_nodes()) + " nodes");
    }
  } else {
    h = train(ds, cfg).embeddings.merged;
  }
  spec.seed = cfg.seed;
  const EvalReport rep = node_classification_eval(h, labels, spec);
  write_report(dir, rep, out);
  write_manifest(dir / "manifest.json", "eval-node", dataset, cfg, seconds_since(t0),
                 {{"embeddings", embeddings}, {"train_fraction", spec.train_fraction}});
  return kExitOk;
}

int cmd_eval_link(const GlobalFlags& g, const ModelFlags& mf, const std::string& dataset,
                  SplitSpec spec, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = require_out(g);
  const MVGEConfig cfg = mf.resolve(g);
  const Dataset ds = load_dataset(dataset);
  spec.seed = cfg.seed;
  const LinkEvalOutput res = link_prediction_eval(ds, cfg, spec);
  std::string manifest = "repeat,set,u,v,label\n";
  for (std::size_t r = 0; r < res.splits.size(); ++r) {
    auto dump = [&](const std::vector<Edge>& pairs, const char* set, int label) {
      for (const auto& [u, v] : pairs) {
        manifest += std::to_string(r) + "," + set + "," + std::to_string(u) + "," +
                    std::to_string(v) + "," + std::to_string(label) + "\n";
      }
    };
    dump(res.splits[r].test_pos, "test", 1);
    dump(res.splits[r].test_neg, "test", 0);
  }
  write_file_atomic(dir / "splits.csv", manifest);
  write_report(dir, res.report, out);
  write_manifest(dir / "manifest.json", "eval-link", dataset, cfg, seconds_since(t0),
                 {{"train_fraction", spec.train_fraction}});
  return kExitOk;
}

int cmd_eval_pair(const GlobalFlags& g, const ModelFlags& mf, const std::string& dataset,
                  const std::string& embeddings, SplitSpec spec, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = require_out(g);
  const MVGEConfig cfg = mf.resolve(g);
  const Dataset ds = load_dataset(dataset);
  const Labels& labels = require_labels(ds, dataset);
  spec.seed = cfg.seed;
  EvalReport rep;
  if (!embeddings.empty()) {
    const Matrix h = load_embeddings(embeddings);
    if (static_cast<std::size_t>(h.rows()) != ds.num_nodes()) {
      throw ValidationError("embedding row count does not match the dataset");
    }
    rep = pairwise_eval(h, labels, ds.graph.num_edges(), spec);
  } else {
    rep = pairwise_eval(ds, cfg, spec);
  }
  write_report(dir, rep, out);
  write_manifest(dir / "manifest.json", "eval-pair", dataset, cfg, seconds_since(t0),
                 {{"embeddings", embeddings}, {"train_fraction", spec.train_fraction}});
  return kExitOk;
}

int cmd_gridsearch(const GlobalFlags& g, const ModelFlags& mf, const std::string& dataset,
                   double step, double val_fraction, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = require_out(g);
  const MVGEConfig cfg = mf.resolve(g);
  const Dataset ds = load_dataset(dataset);
  require_labels(ds, dataset);
  const auto res = grid_search_alpha_beta(ds, cfg, step, val_fraction);
  write_file_atomic(dir / "grid.csv", res.to_csv());
  json best = {{"alpha", res.alpha}, {"beta", res.beta}, {"micro_f1", res.best_score},
               {"grid_points", res.table.size()}};
  write_file_atomic(dir / "best.json", best.dump(2) + "\n");
  write_manifest(dir / "manifest.json", "gridsearch", dataset, cfg, seconds_since(t0),
                 {{"grid_step", step}, {"val_fraction", val_fraction}});
  out << best.dump(2) << "\n";
  return kExitOk;
}

int cmd_diag(const GlobalFlags& g, const std::string& embed_dir, std::ostream& out) {
  const fs::path dir = require_out(g);
  const EmbeddingSet e = load_embedding_set(embed_dir);
  const auto s_ego = embedding_dim_std(e.ego);
  const auto s_agg = embedding_dim_std(e.agg);
  std::string csv = "group,dim,sigma\n";
  double mean_ego = 0.0, mean_agg = 0.0;
  for (std::size_t i = 0; i < s_ego.size(); ++i) {
    csv += "ego," + std::to_string(i) + "," + format_real(s_ego[i]) + "\n";
    mean_ego += s_ego[i] / static_cast<double>(s_ego.size());
  }
  for (std::size_t i = 0; i < s_agg.size(); ++i) {
    csv += "agg," + std::to_string(i) + "," + format_real(s_agg[i]) + "\n";
    mean_agg += s_agg[i] / static_cast<double>(s_agg.size());
  }
  write_file_atomic(dir / "sigma.csv", csv);
  json j = {{"mean_sigma_ego", mean_ego}, {"mean_sigma_agg", mean_agg},
            {"dim_ego", s_ego.size()}, {"dim_agg", s_agg.size()}};
  write_file_atomic(dir / "diag.json", j.dump(2) + "\n");
  out << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-view unsupervised graph embedding toolkit", "mvge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  GlobalFlags g;
  g.seed_opt = app.add_option("--seed", g.seed, "master random seed");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--config", g.config, "config JSON (or a run manifest)");
  app.fallthrough();

  std::string dataset, embeddings, per_node_csv, embed_dir, name = "synthetic";
  std::size_t bins = 10;
  SynthSpec synth;
  double step = 0.1, val_fraction = 0.5;

  auto* stats = app.add_subcommand("stats", "homophily statistics of a dataset");
  stats->add_option("--dataset", dataset, "dataset directory")->required();
  stats->add_option("--bins", bins, "local homophily histogram bins");
  stats->add_option("--per-node-csv", per_node_csv, "write per-node local homophily CSV");

  auto* syn = app.add_subcommand("synth", "generate a synthetic dataset");
  syn->set_help_flag("--help", "print this help message and exit");  // frees --h
  syn->add_option("--n", synth.num_nodes, "nodes");
  syn->add_option("--c", synth.num_classes, "classes");
  syn->add_option("--h", synth.target_homophily, "target edge homophily in [0,1]")
      ->check(CLI::Range(0.0, 1.0));
  syn->add_option("--d", synth.avg_degree, "average degree");
  syn->add_option("--f", synth.feature_dim, "feature dimension");
  syn->add_option("--sep", synth.class_separation, "class mean scale");
  syn->add_option("--noise", synth.noise_sigma, "feature noise sigma");
  syn->add_option("--name", name, "dataset name");

  ModelFlags mf_embed, mf_node, mf_link, mf_pair, mf_grid;
  auto* emb = app.add_subcommand("embed", "train embeddings");
  emb->add_option("--dataset", dataset, "dataset directory")->required();
  mf_embed.attach(emb);

  SplitSpec node_spec = SplitSpec::defaults(EvalTask::kNode);
  auto* en = app.add_subcommand("eval-node", "node classification (Micro-F1)");
  en->add_option("--dataset", dataset, "dataset directory")->required();
  en->add_option("--embeddings", embeddings, "precomputed embeddings (.bin or .csv)");
  en->add_option("--repeats", node_spec.repeats, "random splits");
  en->add_option("--train-fraction", node_spec.train_fraction, "training share of nodes");
  mf_node.attach(en);

  SplitSpec link_spec = SplitSpec::defaults(EvalTask::kLink);
  auto* el = app.add_subcommand("eval-link", "link prediction (ROC-AUC)");
  el->add_option("--dataset", dataset, "dataset directory")->required();
  el->add_option("--repeats", link_spec.repeats, "random splits");
  el->add_option("--train-fraction", link_spec.train_fraction, "training share of edges");
  mf_link.attach(el);

  SplitSpec pair_spec = SplitSpec::defaults(EvalTask::kPair);
  auto* ep = app.add_subcommand("eval-pair", "pairwise node classification (ROC-AUC)");
  ep->add_option("--dataset", dataset, "dataset directory")->required();
  ep->add_option("--embeddings", embeddings, "precomputed embeddings (.bin or .csv)");
  ep->add_option("--repeats", pair_spec.repeats, "random splits");
  ep->add_option("--train-fraction", pair_spec.train_fraction, "training share of pairs");
  mf_pair.attach(ep);

  auto* gs = app.add_subcommand("gridsearch", "alpha/beta grid search on validation Micro-F1");
  gs->add_option("--dataset", dataset, "dataset directory")->required();
  gs->add_option("--step", step, "grid step");
  gs->add_option("--val-fraction", val_fraction, "held-out validation share of nodes");
  mf_grid.attach(gs);

  auto* dg = app.add_subcommand("diag", "per-dimension embedding standard deviations");
  dg->add_option("--embeddings-dir", embed_dir, "output directory of `embed`")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (stats->parsed()) return cmd_stats(g, dataset, bins, per_node_csv, out);
    if (syn->parsed()) return cmd_synth(g, synth, name, out);
    if (emb->parsed()) return cmd_embed(g, mf_embed, dataset, out);
    if (en->parsed()) return cmd_eval_node(g, mf_node, dataset, embeddings, node_spec, out);
    if (el->parsed()) return cmd_eval_link(g, mf_link, dataset, link_spec, out);
    if (ep->parsed()) return cmd_eval_pair(g, mf_pair, dataset, embeddings, pair_spec, out);
    if (gs->parsed()) return cmd_gridsearch(g, mf_grid, dataset, step, val_fraction, out);
    if (dg->parsed()) return cmd_diag(g, embed_dir, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitValidation;
}

}  // namespace mvge
