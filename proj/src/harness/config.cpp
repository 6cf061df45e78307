#include "xrsched/harness/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace xrsched {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for " + key + ": '" + value + "'");
  }
  if (pos != value.size()) {
    throw std::invalid_argument("config: trailing junk for " + key + ": '" + value + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw std::invalid_argument("config: " + key + " must be an integer, got '" + value + "'");
  }
  return i;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("config: " + key + " must be true/false, got '" + value + "'");
}

}  // namespace

Variant parse_variant(const std::string& name) {
  if (name == "cacrl") return Variant::kCacrl;
  if (name == "cacrl-minus") return Variant::kCacrlMinus;
  if (name == "cssca-crl") return Variant::kCsscaCrl;
  throw std::invalid_argument("unknown variant '" + name +
                              "' (expected cacrl, cacrl-minus or cssca-crl)");
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::kCacrl: return "cacrl";
    case Variant::kCacrlMinus: return "cacrl-minus";
    case Variant::kCsscaCrl: return "cssca-crl";
  }
  throw std::logic_error("variant_name: bad enum");
}

EnvConfig resolve_env(const ExperimentConfig& cfg) {
  EnvConfig env = cfg.env;
  if (env.deadlines.size() == 1 && env.num_users != 1) {
    env.deadlines.assign(static_cast<std::size_t>(env.num_users), env.deadlines[0]);
  }
  return env;
}

void ExperimentConfig::validate() const {
  resolve_env(*this).validate();
  schedule.validate(relaxed_schedule);
  if (iterations < 1) throw std::invalid_argument("config: iterations must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("config: batch_size must be >= 1");
  if (critic_steps < 1 || critic_steps > batch_size) {
    throw std::invalid_argument("config: critic_steps must be in [1, batch_size]");
  }
  if (context_window < 1) throw std::invalid_argument("config: context_window must be >= 1");
  if (num_action_samples < 1) {
    throw std::invalid_argument("config: num_action_samples must be >= 1");
  }
  if (pretrain_iterations < 0) {
    throw std::invalid_argument("config: pretrain_iterations must be >= 0");
  }
  if (latent_dim < 1) throw std::invalid_argument("config: latent_dim must be >= 1");
  if (policy_hidden < 1 || factor_hidden < 1 || trunk_width < 1 || head_width < 1) {
    throw std::invalid_argument("config: network widths must be >= 1");
  }
  if (!(theta_lo < theta_hi)) {
    throw std::invalid_argument("config: need theta_lo < theta_hi");
  }
  if (!(zeta > 0.0)) throw std::invalid_argument("config: zeta must be > 0");
  if (!(subproblem_tol > 0.0)) {
    throw std::invalid_argument("config: subproblem_tol must be > 0");
  }
  if (subproblem_max_iters < 1) {
    throw std::invalid_argument("config: subproblem_max_iters must be >= 1");
  }
  if (eval_interval < 1) throw std::invalid_argument("config: eval_interval must be >= 1");
  if (eval_slots < 1) throw std::invalid_argument("config: eval_slots must be >= 1");
  if (checkpoint_interval < 1) {
    throw std::invalid_argument("config: checkpoint_interval must be >= 1");
  }
  if (metrics_window < 1) throw std::invalid_argument("config: metrics_window must be >= 1");
}

void apply_traffic_preset(ExperimentConfig& cfg, const std::string& name) {
  TrafficRanges& t = cfg.env.traffic;
  if (name == "short") {
    t.prob_min = 0.6;
    t.prob_max = 0.8;
    t.mean_bits_min = 5000.0;
    t.mean_bits_max = 10000.0;
  } else if (name == "medium") {
    t.prob_min = 0.4;
    t.prob_max = 0.6;
    t.mean_bits_min = 10000.0;
    t.mean_bits_max = 15000.0;
  } else if (name == "large") {
    t.prob_min = 0.2;
    t.prob_max = 0.4;
    t.mean_bits_min = 15000.0;
    t.mean_bits_max = 20000.0;
  } else {
    throw std::invalid_argument("unknown traffic preset '" + name +
                                "' (expected short, medium or large)");
  }
}

void apply_strict_paper(ExperimentConfig& cfg) {
  cfg.schedule.rho1 = 0.6;
  cfg.schedule.rho2 = 0.7;
  cfg.schedule.rho3 = 0.3;
  cfg.exact_kl = false;
  cfg.relaxed_schedule = true;
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  // Environment.
  if (key == "env.num_users") cfg.env.num_users = to_int(key, value);
  else if (key == "env.deadline") cfg.env.deadlines.assign(1, to_int(key, value));
  else if (key == "env.slot_seconds") cfg.env.slot_seconds = to_double(key, value);
  else if (key == "env.bandwidth_hz") cfg.env.bandwidth_hz = to_double(key, value);
  else if (key == "env.noise_dbm_per_hz") cfg.env.noise_dbm_per_hz = to_double(key, value);
  else if (key == "env.drop_limit") cfg.env.drop_limit = to_double(key, value);
  else if (key == "env.power_cap") cfg.env.power_cap = to_double(key, value);
  else if (key == "env.eps_min") cfg.env.eps_min = to_double(key, value);
  else if (key == "env.eps_max") cfg.env.eps_max = to_double(key, value);
  else if (key == "env.qsi_scale") cfg.env.qsi_scale = to_double(key, value);
  else if (key == "env.mean_sojourn_slots") cfg.env.mean_sojourn_slots = to_double(key, value);
  // Channel.
  else if (key == "channel.num_antennas") cfg.env.channel.num_antennas = to_int(key, value);
  else if (key == "channel.num_paths") cfg.env.channel.num_paths = to_int(key, value);
  else if (key == "channel.gain_db_min") cfg.env.channel.gain_db_min = to_double(key, value);
  else if (key == "channel.gain_db_max") cfg.env.channel.gain_db_max = to_double(key, value);
  else if (key == "channel.angular_spread_deg") {
    cfg.env.channel.angular_spread_deg = to_double(key, value);
  }
  // Traffic.
  else if (key == "traffic.preset") apply_traffic_preset(cfg, value);
  else if (key == "traffic.prob_min") cfg.env.traffic.prob_min = to_double(key, value);
  else if (key == "traffic.prob_max") cfg.env.traffic.prob_max = to_double(key, value);
  else if (key == "traffic.mean_bits_min") cfg.env.traffic.mean_bits_min = to_double(key, value);
  else if (key == "traffic.mean_bits_max") cfg.env.traffic.mean_bits_max = to_double(key, value);
  // Step-size schedule.
  else if (key == "schedule.mu0") cfg.schedule.mu0 = to_double(key, value);
  else if (key == "schedule.eta0") cfg.schedule.eta0 = to_double(key, value);
  else if (key == "schedule.upsilon0") cfg.schedule.upsilon0 = to_double(key, value);
  else if (key == "schedule.rho1") cfg.schedule.rho1 = to_double(key, value);
  else if (key == "schedule.rho2") cfg.schedule.rho2 = to_double(key, value);
  else if (key == "schedule.rho3") cfg.schedule.rho3 = to_double(key, value);
  // Training geometry.
  else if (key == "iterations") cfg.iterations = to_int(key, value);
  else if (key == "batch_size") cfg.batch_size = to_int(key, value);
  else if (key == "critic_steps") cfg.critic_steps = to_int(key, value);
  else if (key == "context_window") cfg.context_window = to_int(key, value);
  else if (key == "num_action_samples") cfg.num_action_samples = to_int(key, value);
  else if (key == "pretrain_iterations") cfg.pretrain_iterations = to_int(key, value);
  else if (key == "freeze_encoder") cfg.freeze_encoder = to_bool(key, value);
  else if (key == "freeze_potentials") cfg.freeze_potentials = to_bool(key, value);
  // Networks.
  else if (key == "latent_dim") cfg.latent_dim = to_int(key, value);
  else if (key == "policy_hidden") cfg.policy_hidden = to_int(key, value);
  else if (key == "factor_hidden") cfg.factor_hidden = to_int(key, value);
  else if (key == "trunk_width") cfg.trunk_width = to_int(key, value);
  else if (key == "head_width") cfg.head_width = to_int(key, value);
  // Subproblem.
  else if (key == "theta_lo") cfg.theta_lo = to_double(key, value);
  else if (key == "theta_hi") cfg.theta_hi = to_double(key, value);
  else if (key == "zeta") cfg.zeta = to_double(key, value);
  else if (key == "subproblem_tol") cfg.subproblem_tol = to_double(key, value);
  else if (key == "subproblem_max_iters") cfg.subproblem_max_iters = to_int(key, value);
  // Bookkeeping.
  else if (key == "eval_interval") cfg.eval_interval = to_int(key, value);
  else if (key == "eval_slots") cfg.eval_slots = to_int(key, value);
  else if (key == "checkpoint_interval") cfg.checkpoint_interval = to_int(key, value);
  else if (key == "metrics_window") cfg.metrics_window = to_int(key, value);
  else if (key == "exact_kl") cfg.exact_kl = to_bool(key, value);
  else if (key == "relaxed_schedule") cfg.relaxed_schedule = to_bool(key, value);
  else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  " is not key=value: '" + line + "'");
    }
    apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

}  // namespace xrsched
