#include "mvge/config_json.hpp"

#include "mvge/errors.hpp"
#include "mvge/io_util.hpp"

namespace mvge {

using json = nlohmann::json;

json config_to_json(const MVGEConfig& cfg) {
  return {{"dim_ego", cfg.dim_ego},
          {"dim_agg", cfg.dim_agg},
          {"hidden_dim", cfg.hidden_dim},
          {"alpha", cfg.alpha},
          {"beta", cfg.beta},
          {"epochs", cfg.epochs},
          {"lr", cfg.lr},
          {"seed", cfg.seed},
          {"walk_lengths", cfg.walk_lengths},
          {"aggr", to_string(cfg.aggr)},
          {"merge_fn", to_string(cfg.merge_fn)},
          {"task_mask", cfg.task_mask.to_string()},
          {"ego_encoder", to_string(cfg.ego_encoder)},
          {"adj_loss_mode", to_string(cfg.adj_loss_mode)},
          {"sample_ratio", cfg.sample_ratio},
          {"mlp_bias", cfg.mlp_bias}};
}

MVGEConfig config_from_json(const json& in, MVGEConfig cfg) {
  const json& j = in.contains("config") && in["config"].is_object() ? in["config"] : in;
  if (!j.is_object()) throw ValidationError("config: expected a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "dim_ego") cfg.dim_ego = value.get<std::size_t>();
      else if (key == "dim_agg") cfg.dim_agg = value.get<std::size_t>();
      else if (key == "hidden_dim") cfg.hidden_dim = value.get<std::size_t>();
      else if (key == "alpha") cfg.alpha = value.get<double>();
      else if (key == "beta") cfg.beta = value.get<double>();
      else if (key == "epochs") cfg.epochs = value.get<std::size_t>();
      else if (key == "lr") cfg.lr = value.get<double>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "walk_lengths") cfg.walk_lengths = value.get<std::vector<std::size_t>>();
      else if (key == "aggr") cfg.aggr = parse_aggr(value.get<std::string>());
      else if (key == "merge_fn") cfg.merge_fn = parse_merge_fn(value.get<std::string>());
      else if (key == "task_mask") {
        if (value.is_array()) {
          std::string csv;
          for (const auto& t : value) csv += t.get<std::string>() + ",";
          cfg.task_mask = TaskMask::parse(csv);
        } else {
          cfg.task_mask = TaskMask::parse(value.get<std::string>());
        }
      }
      else if (key == "ego_encoder") cfg.ego_encoder = parse_ego_encoder(value.get<std::string>());
      else if (key == "adj_loss_mode") cfg.adj_loss_mode = parse_adj_loss_mode(value.get<std::string>());
      else if (key == "sample_ratio") cfg.sample_ratio = value.get<double>();
      else if (key == "mlp_bias") cfg.mlp_bias = value.get<bool>();
      else throw ValidationError("config: unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

MVGEConfig load_config_file(const std::filesystem::path& path, MVGEConfig base) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return config_from_json(j, base);
}

}  // namespace mvge
