#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "xrsched/harness/agent.hpp"
#include "xrsched/harness/config.hpp"
#include "xrsched/harness/metrics.hpp"
#include "xrsched/harness/runner.hpp"

using namespace xrsched;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(static_cast<bool>(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

// Small enough that a training iteration is a few milliseconds, yet every
// phase (batch, critics, encoder, potentials, policy step) still runs.
ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.env.num_users = 2;
  cfg.env.deadlines = {2};
  cfg.env.channel.num_antennas = 2;
  cfg.env.channel.num_paths = 2;
  cfg.batch_size = 10;
  cfg.critic_steps = 2;
  cfg.context_window = 3;
  cfg.num_action_samples = 2;
  cfg.latent_dim = 2;
  cfg.policy_hidden = 6;
  cfg.factor_hidden = 6;
  cfg.trunk_width = 8;
  cfg.head_width = 4;
  cfg.subproblem_max_iters = 500;
  cfg.iterations = 4;
  cfg.eval_interval = 2;
  cfg.eval_slots = 50;
  cfg.checkpoint_interval = 3;
  cfg.metrics_window = 2;
  return cfg;
}

int mlp_params(int in, int hidden, int out) {
  return in * hidden + hidden + hidden * out + out;
}

}  // namespace

TEST_CASE("variant names round-trip and junk is rejected") {
  CHECK(parse_variant("cacrl") == Variant::kCacrl);
  CHECK(parse_variant("cacrl-minus") == Variant::kCacrlMinus);
  CHECK(parse_variant("cssca-crl") == Variant::kCsscaCrl);
  for (Variant v : {Variant::kCacrl, Variant::kCacrlMinus, Variant::kCsscaCrl}) {
    CHECK(parse_variant(variant_name(v)) == v);
  }
  CHECK_THROWS_AS(parse_variant("sac"), std::invalid_argument);
  CHECK_THROWS_AS(parse_variant(""), std::invalid_argument);
}

TEST_CASE("format_double prints compact round-trippable decimals") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.5) == "1.5");
  CHECK(format_double(-0.25) == "-0.25");
  CHECK(format_double(1e-9) == "1e-09");
  CHECK(format_double(12345.6789) == "12345.6789");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333");
}

TEST_CASE("indexed_columns numbers columns from the requested base") {
  CHECK(indexed_columns("f_hat_", 3) ==
        std::vector<std::string>{"f_hat_1", "f_hat_2", "f_hat_3"});
  CHECK(indexed_columns("td_resid_", 2, 0) ==
        std::vector<std::string>{"td_resid_0", "td_resid_1"});
}

TEST_CASE("csv writer emits header first and validates row width") {
  const fs::path dir = fresh_dir("xrsched_csv_test");
  const fs::path file = dir / "out.csv";
  {
    CsvWriter w(file.string(), {"a", "b", "c"});
    w.row({"1", "2", "3"});
    CHECK_THROWS_AS(w.row({"1", "2"}), std::invalid_argument);
    w.row({"x", "y", "z"});
    w.flush();
  }
  CHECK(read_file(file) == "a,b,c\n1,2,3\nx,y,z\n");
  CHECK_THROWS_AS(CsvWriter(file.string(), {}), std::invalid_argument);
  CHECK_THROWS_AS(CsvWriter((dir / "no/such/dir.csv").string(), {"a"}),
                  std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("config validation accepts the defaults and rejects bad fields") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());

  auto expect_throw = [](auto mutate) {
    ExperimentConfig c;
    mutate(c);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  };
  expect_throw([](ExperimentConfig& c) { c.iterations = 0; });
  expect_throw([](ExperimentConfig& c) { c.batch_size = 0; });
  expect_throw([](ExperimentConfig& c) { c.critic_steps = c.batch_size + 1; });
  expect_throw([](ExperimentConfig& c) { c.num_action_samples = 0; });
  expect_throw([](ExperimentConfig& c) { c.latent_dim = 0; });
  expect_throw([](ExperimentConfig& c) { c.theta_lo = c.theta_hi; });
  expect_throw([](ExperimentConfig& c) { c.zeta = 0.0; });
  expect_throw([](ExperimentConfig& c) { c.eval_interval = 0; });
  expect_throw([](ExperimentConfig& c) { c.env.drop_limit = 0.0; });

  // The schedule check honours the relaxed flag on the same config object.
  cfg.schedule.rho3 = 0.3;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.relaxed_schedule = true;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("traffic presets pin the regime sampling boxes") {
  ExperimentConfig cfg;
  apply_traffic_preset(cfg, "short");
  CHECK(cfg.env.traffic.prob_min == 0.6);
  CHECK(cfg.env.traffic.prob_max == 0.8);
  CHECK(cfg.env.traffic.mean_bits_min == 5000.0);
  CHECK(cfg.env.traffic.mean_bits_max == 10000.0);
  apply_traffic_preset(cfg, "medium");
  CHECK(cfg.env.traffic.prob_min == 0.4);
  CHECK(cfg.env.traffic.mean_bits_max == 15000.0);
  apply_traffic_preset(cfg, "large");
  CHECK(cfg.env.traffic.prob_min == 0.2);
  CHECK(cfg.env.traffic.prob_max == 0.4);
  CHECK(cfg.env.traffic.mean_bits_min == 15000.0);
  CHECK(cfg.env.traffic.mean_bits_max == 20000.0);
  CHECK_THROWS_AS(apply_traffic_preset(cfg, "huge"), std::invalid_argument);
}

TEST_CASE("strict schedule toggle selects the historic exponents") {
  ExperimentConfig cfg;
  apply_strict_paper(cfg);
  CHECK(cfg.schedule.rho1 == 0.6);
  CHECK(cfg.schedule.rho2 == 0.7);
  CHECK(cfg.schedule.rho3 == 0.3);
  CHECK(cfg.exact_kl == false);
  CHECK(cfg.relaxed_schedule == true);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("deadline broadcast is independent of key order") {
  ExperimentConfig a;
  apply_key(a, "env.deadline", "4");
  apply_key(a, "env.num_users", "3");
  ExperimentConfig b;
  apply_key(b, "env.num_users", "3");
  apply_key(b, "env.deadline", "4");
  const EnvConfig ea = resolve_env(a);
  const EnvConfig eb = resolve_env(b);
  REQUIRE(ea.deadlines.size() == 3);
  CHECK(ea.deadlines == std::vector<int>{4, 4, 4});
  CHECK(eb.deadlines == ea.deadlines);
  CHECK(ea.state_dim() == eb.state_dim());
}

TEST_CASE("config files load with comments and reject malformed input") {
  const fs::path dir = fresh_dir("xrsched_cfg_test");
  const fs::path good = dir / "good.cfg";
  {
    std::ofstream out(good);
    out << "# experiment setup\n"
        << "\n"
        << "iterations = 12   # inline comment\n"
        << "batch_size=33\n"
        << "traffic.preset = large\n"
        << "env.num_users = 3\n"
        << "env.deadline = 7\n"
        << "schedule.mu0 = 0.35\n"
        << "exact_kl = false\n"
        << "freeze_encoder = true\n";
  }
  const ExperimentConfig cfg = load_config(good.string());
  CHECK(cfg.iterations == 12);
  CHECK(cfg.batch_size == 33);
  CHECK(cfg.env.traffic.mean_bits_min == 15000.0);
  CHECK(cfg.env.num_users == 3);
  CHECK(resolve_env(cfg).deadlines == std::vector<int>{7, 7, 7});
  CHECK(cfg.schedule.mu0 == 0.35);
  CHECK(cfg.exact_kl == false);
  CHECK(cfg.freeze_encoder == true);

  auto write_and_load = [&](const std::string& text) {
    const fs::path bad = dir / "bad.cfg";
    std::ofstream(bad) << text;
    return load_config(bad.string());
  };
  CHECK_THROWS_AS(write_and_load("wat\n"), std::invalid_argument);
  CHECK_THROWS_AS(write_and_load("no.such.key = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(write_and_load("iterations = 3.5\n"), std::invalid_argument);
  CHECK_THROWS_AS(write_and_load("batch_size = many\n"), std::invalid_argument);
  CHECK_THROWS_AS(write_and_load("exact_kl = maybe\n"), std::invalid_argument);
  CHECK_THROWS_AS(write_and_load("iterations = 3 junk\n"), std::invalid_argument);
  CHECK_THROWS_AS(load_config((dir / "missing.cfg").string()), std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("agent dimensions track the variant") {
  const ExperimentConfig cfg = tiny_config();
  const int base = resolve_env(cfg).state_dim();
  CHECK(base == 2 * 4 + 2 * 2 * 2);

  const Agent with_ctx(cfg, Variant::kCacrl, 11);
  const Agent no_ctx(cfg, Variant::kCsscaCrl, 11);
  const int n_a = cfg.env.num_users + 1;
  CHECK(with_ctx.theta().size() ==
        mlp_params(base + cfg.latent_dim, cfg.policy_hidden, 2 * n_a));
  CHECK(no_ctx.theta().size() == mlp_params(base, cfg.policy_hidden, 2 * n_a));
  CHECK(with_ctx.psi().size() ==
        mlp_params(2 * base + n_a, cfg.factor_hidden, 2 * cfg.latent_dim));
  CHECK(with_ctx.critic_params().size() == static_cast<std::size_t>(n_a));
  CHECK(with_ctx.f_hat().size() == n_a);
  CHECK(with_ctx.iteration() == 0);
  CHECK(with_ctx.num_users() == 2);
  CHECK(with_ctx.variant() == Variant::kCacrl);
}

TEST_CASE("variant gates the encoder and potential codepaths") {
  const ExperimentConfig cfg = tiny_config();

  Agent plain(cfg, Variant::kCsscaCrl, 3);
  CHECK(plain.encoder_accesses() == 0);
  IterationRecord rec{};
  for (int i = 0; i < 2; ++i) rec = plain.run_iteration();
  CHECK(plain.encoder_accesses() == 0);
  CHECK(plain.potential_accesses() == 0);
  CHECK(rec.iteration == 2);
  CHECK(rec.shaping.isZero(0.0));
  CHECK(rec.encoder_kl == 0.0);
  CHECK(rec.potential_error == 0.0);

  Agent minus(cfg, Variant::kCacrlMinus, 3);
  for (int i = 0; i < 2; ++i) rec = minus.run_iteration();
  CHECK(minus.encoder_accesses() > 0);
  CHECK(minus.potential_accesses() == 0);
  CHECK(rec.shaping.isZero(0.0));
  CHECK(rec.encoder_kl != 0.0);
  CHECK(rec.potential_error == 0.0);

  Agent full(cfg, Variant::kCacrl, 3);
  for (int i = 0; i < 2; ++i) rec = full.run_iteration();
  CHECK(full.encoder_accesses() > 0);
  CHECK(full.potential_accesses() > 0);
  CHECK(rec.potential_error > 0.0);
}

TEST_CASE("training runs are reproducible for a fixed seed") {
  const ExperimentConfig cfg = tiny_config();
  Agent a(cfg, Variant::kCacrl, 17);
  Agent b(cfg, Variant::kCacrl, 17);
  IterationRecord ra{}, rb{};
  for (int i = 0; i < 2; ++i) {
    ra = a.run_iteration();
    rb = b.run_iteration();
  }
  CHECK(a.theta() == b.theta());
  CHECK(a.psi() == b.psi());
  CHECK(a.f_hat() == b.f_hat());
  CHECK(ra.mean_power == rb.mean_power);
  CHECK(ra.policy_checksum == rb.policy_checksum);
  CHECK(ra.branch == rb.branch);

  // A different seed must actually change the draw.
  Agent c(cfg, Variant::kCacrl, 18);
  c.run_iteration();
  CHECK(c.theta() != a.theta());
}

TEST_CASE("evaluation is pure and reproducible per eval index") {
  const ExperimentConfig cfg = tiny_config();
  Agent agent(cfg, Variant::kCacrl, 23);
  agent.run_iteration();

  const Eigen::VectorXd theta = agent.theta();
  const Eigen::VectorXd psi = agent.psi();
  const Eigen::VectorXd f_hat = agent.f_hat();

  const EvalRecord e0 = agent.evaluate(0, 60);
  const EvalRecord e0_again = agent.evaluate(0, 60);
  CHECK(e0.mean_power == e0_again.mean_power);
  CHECK(e0.slot_drop == e0_again.slot_drop);
  CHECK(e0.packet_drop == e0_again.packet_drop);
  CHECK(e0.slots == 60);
  CHECK(e0.iteration == 1);

  const EvalRecord e1 = agent.evaluate(1, 60);
  CHECK(e1.mean_power != e0.mean_power);  // fresh environment fork per index

  CHECK(agent.theta() == theta);
  CHECK(agent.psi() == psi);
  CHECK(agent.f_hat() == f_hat);
  CHECK(agent.iteration() == 1);

  // Rates and drops are sane for a 2-user run.
  CHECK(e0.mean_power >= 0.0);
  CHECK(e0.mean_power <= cfg.env.num_users * cfg.env.power_cap);
  for (int k = 0; k < 2; ++k) {
    CHECK(e0.slot_drop[k] >= 0.0);
    CHECK(e0.slot_drop[k] <= 1.0);
    CHECK(e0.packet_drop[k] >= 0.0);
    CHECK(e0.packet_drop[k] <= 1.0);
  }
}

TEST_CASE("snapshot and restore round-trip the training state") {
  const ExperimentConfig cfg = tiny_config();
  Agent a(cfg, Variant::kCacrl, 31);
  a.run_iteration();
  a.run_iteration();
  const auto snap = a.snapshot();

  // Same seed so that the eval rollout streams (forked from the construction
  // seed, not the checkpoint) line up; the training state itself differs.
  Agent b(cfg, Variant::kCacrl, 31);
  CHECK(b.theta() != a.theta());
  b.restore(snap);
  CHECK(b.theta() == a.theta());
  CHECK(b.psi() == a.psi());
  CHECK(b.f_hat() == a.f_hat());
  CHECK(b.iteration() == a.iteration());
  for (std::size_t k = 0; k < a.critic_params().size(); ++k) {
    CHECK(b.critic_params()[k] == a.critic_params()[k]);
  }

  // The restored policy scores identically on the shared eval stream.
  const EvalRecord ea = a.evaluate(0, 40);
  const EvalRecord eb = b.evaluate(0, 40);
  CHECK(ea.mean_power == eb.mean_power);
  CHECK(ea.slot_drop == eb.slot_drop);

  auto bad = snap;
  bad[1].values.conservativeResize(bad[1].values.size() - 1);
  CHECK_THROWS_AS(b.restore(bad), std::invalid_argument);
  auto missing = snap;
  missing.erase(missing.begin());
  CHECK_THROWS_AS(b.restore(missing), std::invalid_argument);
}

TEST_CASE("run_experiment writes the full record set") {
  const ExperimentConfig cfg = tiny_config();
  const fs::path dir = fresh_dir("xrsched_run_test");

  const RunSummary summary =
      run_experiment(cfg, Variant::kCacrl, 5, dir.string());
  CHECK(summary.iterations_completed == 4);
  CHECK_FALSE(summary.aborted);

  const auto metrics = lines_of(read_file(dir / "metrics.csv"));
  REQUIRE(metrics.size() == 5);  // header + one row per iteration
  CHECK(metrics[0] ==
        "iteration,branch,dual_iters,mu,eta,upsilon,f0_hat,mean_power,"
        "f_hat_1,f_hat_2,batch_drop_1,batch_drop_2,win_drop_1,win_drop_2,"
        "max_violation,surrogate_feasible,regime_id,encoder_kl,potential_err,"
        "td_resid_0,td_resid_1,td_resid_2,shaping_1,shaping_2,policy_fnv");
  for (int i = 1; i <= 4; ++i) {
    CHECK(metrics[static_cast<std::size_t>(i)].rfind(std::to_string(i) + ",", 0) == 0);
  }

  const auto eval = lines_of(read_file(dir / "eval.csv"));
  REQUIRE(eval.size() == 3);  // header + evals after iterations 2 and 4
  CHECK(eval[0] ==
        "iteration,slots,mean_power,slot_drop_1,slot_drop_2,pkt_drop_1,pkt_drop_2");
  CHECK(eval[1].rfind("2,50,", 0) == 0);
  CHECK(eval[2].rfind("4,50,", 0) == 0);

  const auto timing = lines_of(read_file(dir / "timing.csv"));
  CHECK(timing.size() == 5);
  CHECK(timing[0] == "iteration,wall_ms");

  const std::string log = read_file(dir / "run.log");
  CHECK(log.find("run variant=cacrl seed=5 iterations=4") != std::string::npos);
  CHECK(log.find("status complete") != std::string::npos);

  CHECK(fs::exists(dir / "ckpt_000003.bin"));
  CHECK_FALSE(fs::exists(dir / "ckpt_000001.bin"));
  CHECK(fs::exists(dir / "final.bin"));

  // The final checkpoint restores into a fresh agent.
  Agent fresh(cfg, Variant::kCacrl, 123);
  fresh.restore(load_checkpoint((dir / "final.bin").string()));
  CHECK(fresh.iteration() == 4);

  fs::remove_all(dir);
}

TEST_CASE("reruns with the same config and seed are byte-identical") {
  const ExperimentConfig cfg = tiny_config();
  const fs::path d1 = fresh_dir("xrsched_rerun_a");
  const fs::path d2 = fresh_dir("xrsched_rerun_b");
  run_experiment(cfg, Variant::kCacrlMinus, 77, d1.string());
  run_experiment(cfg, Variant::kCacrlMinus, 77, d2.string());
  CHECK(read_file(d1 / "metrics.csv") == read_file(d2 / "metrics.csv"));
  CHECK(read_file(d1 / "eval.csv") == read_file(d2 / "eval.csv"));
  CHECK(read_file(d1 / "final.bin") == read_file(d2 / "final.bin"));
  fs::remove_all(d1);
  fs::remove_all(d2);
}
