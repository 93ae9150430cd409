#include "semcom/experiments/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "semcom/agents/baselines.hpp"

namespace semcom::experiments {

using nlohmann::json;

namespace {

// Reads keys out of one JSON object. Errors carry the dotted key path, and
// finish() rejects anything that was never read.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  template <class T>
  void read(const std::string& key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where(key) + ": wrong type (" + std::string(it->type_name()) + ")");
    }
  }

  void number(const std::string& key, double& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    if (!it->is_number()) throw ConfigError(where(key) + ": expected a number");
    out = it->get<double>();
  }

  template <class I>
  void integer(const std::string& key, I& out) {
    double v = static_cast<double>(out);
    number(key, v);
    if (v != std::floor(v) || std::abs(v) > 9.0e15) {
      throw ConfigError(where(key) + ": expected an integer");
    }
    out = static_cast<I>(v);
  }

  std::string where(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError("unknown config key: " + where(it.key()));
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key + ": " + what);
}

}  // namespace

void ExperimentConfig::validate() const {
  env.validate();
  sac.validate();
  dqn.validate();
  validate_agent_kind(agent, env.profile.max_depth());
  require(train.steps >= 0, "train.steps", "must be >= 0");
  require(train.eval_episodes >= 0, "train.eval_episodes", "must be >= 0");
  require(train.credit == "accrued" || train.credit == "completion", "train.credit",
          "must be \"accrued\" or \"completion\"");
  require(eval.episodes >= 1, "eval.episodes", "must be >= 1");
  require(!seeds.empty(), "run.seeds", "at least one seed required");
  require(!sweep.weight_c.empty(), "sweep.weight_c", "grid must be nonempty");
  require(!sweep.power_gain_db.empty(), "sweep.power_gain_db", "grid must be nonempty");
  require(!sweep.agents.empty(), "sweep.agents", "list must be nonempty");
  require(sweep.seeds_per_cell >= 1, "sweep.seeds_per_cell", "must be >= 1");
  for (double w : sweep.weight_c) {
    require(w >= 0.0 && w <= 1.0, "sweep.weight_c", "entries must lie in [0, 1]");
  }
  for (double g : sweep.power_gain_db) {
    require(std::isfinite(g), "sweep.power_gain_db", "entries must be finite");
  }
  for (const auto& a : sweep.agents) validate_agent_kind(a, env.profile.max_depth());
}

bool is_learning_agent(const std::string& kind) { return kind == "sac" || kind == "dqn"; }

void validate_agent_kind(const std::string& kind, int max_depth) {
  if (is_learning_agent(kind)) return;
  if (!agents::is_baseline(kind)) {
    throw ConfigError("agent: unknown kind '" + kind + "' (sac, dqn, random, greedy, fixed:<d>)");
  }
  agents::make_baseline(kind, max_depth);
}

void resolve_channel_scale(EnvConfig& env) {
  if (env.channel_scale <= 0.0) env.channel_scale = calibrate_channel_scale(env.network);
}

ExperimentConfig config_from_json(const json& root) {
  ExperimentConfig cfg;
  Section top(root, "");

  auto section = [&](const std::string& key, auto&& body) {
    if (!top.has(key)) return;
    Section s(top.raw(key), key);
    body(s);
    s.finish();
  };

  int schema = kConfigSchemaVersion;
  top.integer("schema_version", schema);
  if (schema != kConfigSchemaVersion) {
    throw ConfigError("schema_version: unsupported value " + std::to_string(schema));
  }

  section("network", [&](Section& s) {
    auto& n = cfg.env.network;
    s.integer("num_bs", n.num_bs);
    s.integer("num_users", n.num_users);
    s.number("area_side_m", n.area_side_m);
    s.number("path_loss_exponent", n.path_loss_exponent);
    s.number("power_gain_db", n.power_gain_db);
    s.number("bandwidth_hz", n.bandwidth_hz);
    s.number("slot_duration_s", n.slot_duration_s);
    s.number("reference_distance_m", n.reference_distance_m);
    s.read("rayleigh_fading", n.rayleigh_fading);
  });

  section("profile", [&](Section& s) {
    auto& p = cfg.env.profile;
    s.number("snr_ref_db", p.snr_ref_db);
    if (!s.has("depths")) return;
    const json& arr = s.raw("depths");
    if (!arr.is_array()) throw ConfigError("profile.depths: expected an array");
    p.entries.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Section e(arr[i], "profile.depths[" + std::to_string(i) + "]");
      DepthProfileEntry entry;
      entry.depth = static_cast<int>(i) + 1;
      e.number("gflops", entry.gflops);
      e.integer("payload_bits", entry.payload_bits);
      e.number("psnr_ref_db", entry.psnr_ref_db);
      e.number("psnr_slope_db_per_db", entry.psnr_slope_db_per_db);
      e.finish();
      p.entries.push_back(entry);
    }
  });

  section("env", [&](Section& s) {
    double weight_c = cfg.env.weights.compute();
    s.number("weight_c", weight_c);
    require(weight_c >= 0.0 && weight_c <= 1.0, "env.weight_c", "must lie in [0, 1]");
    cfg.env.weights = SccmWeights::from_compute_weight(weight_c);
    s.integer("l_max", cfg.env.l_max);
    s.number("psnr_min_db", cfg.env.psnr_min_db);
    s.integer("max_slots", cfg.env.max_slots);
    s.number("channel_scale", cfg.env.channel_scale);
  });

  section("traffic", [&](Section& s) {
    s.number("rate_per_slot", cfg.env.arrival.rate_per_slot);
    if (s.has("cap_per_user") && s.raw("cap_per_user").is_string()) {
      require(s.raw("cap_per_user").get<std::string>() == "unlimited", "traffic.cap_per_user",
              "expected an integer or \"unlimited\"");
      cfg.env.arrival.cap_per_user = ArrivalProcess::kUnlimited;
    } else {
      s.integer("cap_per_user", cfg.env.arrival.cap_per_user);
    }
    s.number("image_size_bytes", cfg.image_size_bytes);
  });

  section("agent", [&](Section& s) { s.read("kind", cfg.agent); });

  section("sac", [&](Section& s) {
    auto& c = cfg.sac;
    s.read("hidden", c.hidden);
    s.number("gamma", c.gamma);
    s.number("tau", c.tau);
    s.number("alpha", c.alpha);
    s.number("learning_rate", c.learning_rate);
    s.integer("batch_size", c.batch_size);
    s.integer("replay_capacity", c.replay_capacity);
    s.integer("warmup_steps", c.warmup_steps);
    s.integer("updates_per_step", c.updates_per_step);
    s.number("reward_scale", c.reward_scale);
  });

  section("dqn", [&](Section& s) {
    auto& c = cfg.dqn;
    s.read("hidden", c.hidden);
    s.number("gamma", c.gamma);
    s.number("learning_rate", c.learning_rate);
    s.integer("batch_size", c.batch_size);
    s.integer("replay_capacity", c.replay_capacity);
    s.integer("warmup_steps", c.warmup_steps);
    s.integer("updates_per_step", c.updates_per_step);
    s.integer("target_sync_interval", c.target_sync_interval);
    s.number("epsilon_start", c.epsilon_start);
    s.number("epsilon_end", c.epsilon_end);
    s.integer("epsilon_decay_steps", c.epsilon_decay_steps);
    s.integer("max_joint_actions", c.max_joint_actions);
    s.number("reward_scale", c.reward_scale);
  });

  section("train", [&](Section& s) {
    s.integer("steps", cfg.train.steps);
    s.integer("eval_episodes", cfg.train.eval_episodes);
    s.read("credit", cfg.train.credit);
  });

  section("eval", [&](Section& s) { s.integer("episodes", cfg.eval.episodes); });

  section("sweep", [&](Section& s) {
    s.read("weight_c", cfg.sweep.weight_c);
    s.read("power_gain_db", cfg.sweep.power_gain_db);
    s.read("agents", cfg.sweep.agents);
    s.integer("seeds_per_cell", cfg.sweep.seeds_per_cell);
  });

  section("run", [&](Section& s) {
    s.read("seeds", cfg.seeds);
    s.read("output_dir", cfg.output_dir);
  });

  top.finish();
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    ExperimentConfig cfg;
    cfg.validate();
    return cfg;
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

json to_json(const ExperimentConfig& cfg) {
  const auto& n = cfg.env.network;
  json depths = json::array();
  for (const auto& e : cfg.env.profile.entries) {
    depths.push_back({{"gflops", e.gflops},
                      {"payload_bits", e.payload_bits},
                      {"psnr_ref_db", e.psnr_ref_db},
                      {"psnr_slope_db_per_db", e.psnr_slope_db_per_db}});
  }
  json cap = cfg.env.arrival.cap_per_user == ArrivalProcess::kUnlimited
                 ? json("unlimited")
                 : json(cfg.env.arrival.cap_per_user);
  const auto& s = cfg.sac;
  const auto& d = cfg.dqn;
  return {
      {"schema_version", kConfigSchemaVersion},
      {"network",
       {{"num_bs", n.num_bs},
        {"num_users", n.num_users},
        {"area_side_m", n.area_side_m},
        {"path_loss_exponent", n.path_loss_exponent},
        {"power_gain_db", n.power_gain_db},
        {"bandwidth_hz", n.bandwidth_hz},
        {"slot_duration_s", n.slot_duration_s},
        {"reference_distance_m", n.reference_distance_m},
        {"rayleigh_fading", n.rayleigh_fading}}},
      {"profile", {{"snr_ref_db", cfg.env.profile.snr_ref_db}, {"depths", depths}}},
      {"env",
       {{"weight_c", cfg.env.weights.compute()},
        {"l_max", cfg.env.l_max},
        {"psnr_min_db", cfg.env.psnr_min_db},
        {"max_slots", cfg.env.max_slots},
        {"channel_scale", cfg.env.channel_scale}}},
      {"traffic",
       {{"rate_per_slot", cfg.env.arrival.rate_per_slot},
        {"cap_per_user", cap},
        {"image_size_bytes", cfg.image_size_bytes}}},
      {"agent", {{"kind", cfg.agent}}},
      {"sac",
       {{"hidden", s.hidden},
        {"gamma", s.gamma},
        {"tau", s.tau},
        {"alpha", s.alpha},
        {"learning_rate", s.learning_rate},
        {"batch_size", s.batch_size},
        {"replay_capacity", s.replay_capacity},
        {"warmup_steps", s.warmup_steps},
        {"updates_per_step", s.updates_per_step},
        {"reward_scale", s.reward_scale}}},
      {"dqn",
       {{"hidden", d.hidden},
        {"gamma", d.gamma},
        {"learning_rate", d.learning_rate},
        {"batch_size", d.batch_size},
        {"replay_capacity", d.replay_capacity},
        {"warmup_steps", d.warmup_steps},
        {"updates_per_step", d.updates_per_step},
        {"target_sync_interval", d.target_sync_interval},
        {"epsilon_start", d.epsilon_start},
        {"epsilon_end", d.epsilon_end},
        {"epsilon_decay_steps", d.epsilon_decay_steps},
        {"max_joint_actions", d.max_joint_actions},
        {"reward_scale", d.reward_scale}}},
      {"train", {{"steps", cfg.train.steps}, {"eval_episodes", cfg.train.eval_episodes},
                 {"credit", cfg.train.credit}}},
      {"eval", {{"episodes", cfg.eval.episodes}}},
      {"sweep",
       {{"weight_c", cfg.sweep.weight_c},
        {"power_gain_db", cfg.sweep.power_gain_db},
        {"agents", cfg.sweep.agents},
        {"seeds_per_cell", cfg.sweep.seeds_per_cell}}},
      {"run", {{"seeds", cfg.seeds}, {"output_dir", cfg.output_dir}}},
  };
}

std::string config_hash(const ExperimentConfig& cfg) {
  // The output location does not change results, so it stays out of the hash.
  json j = to_json(cfg);
  j["run"].erase("output_dir");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace semcom::experiments
