#include "xrsched/harness/runner.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "xrsched/harness/metrics.hpp"
#include "xrsched/nets/checkpoint.hpp"

namespace xrsched {
namespace {

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, v);
  return buf;
}

std::string pad6(std::int64_t i) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%06" PRId64, i);
  return buf;
}

void append_indexed(std::vector<std::string>& cols, const std::string& prefix,
                    int count, int first_index = 1) {
  for (const auto& c : indexed_columns(prefix, count, first_index)) cols.push_back(c);
}

void append_values(std::vector<std::string>& row, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(format_double(v[i]));
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& cfg, Variant variant,
                          std::uint64_t seed, const std::string& out_dir) {
  cfg.validate();
  std::filesystem::create_directories(out_dir);
  const int users = cfg.env.num_users;

  std::vector<std::string> mcols = {"iteration", "branch",  "dual_iters", "mu",
                                    "eta",       "upsilon", "f0_hat",     "mean_power"};
  append_indexed(mcols, "f_hat_", users);
  append_indexed(mcols, "batch_drop_", users);
  append_indexed(mcols, "win_drop_", users);
  mcols.insert(mcols.end(), {"max_violation", "surrogate_feasible", "regime_id",
                             "encoder_kl", "potential_err"});
  append_indexed(mcols, "td_resid_", users + 1, 0);
  append_indexed(mcols, "shaping_", users);
  mcols.push_back("policy_fnv");
  CsvWriter metrics(out_dir + "/metrics.csv", mcols);

  std::vector<std::string> ecols = {"iteration", "slots", "mean_power"};
  append_indexed(ecols, "slot_drop_", users);
  append_indexed(ecols, "pkt_drop_", users);
  CsvWriter eval_csv(out_dir + "/eval.csv", ecols);

  CsvWriter timing(out_dir + "/timing.csv", {"iteration", "wall_ms"});

  std::ofstream log(out_dir + "/run.log");
  log << "run variant=" << variant_name(variant) << " seed=" << seed
      << " iterations=" << cfg.iterations << "\n";

  Agent agent(cfg, variant, seed);
  RunSummary summary;
  int eval_count = 0;

  for (int i = 1; i <= cfg.iterations; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    IterationRecord rec;
    try {
      rec = agent.run_iteration();
    } catch (const std::exception& ex) {
      summary.aborted = true;
      summary.abort_reason = ex.what();
      log << "abort iteration=" << i << " reason=" << ex.what() << "\n";
      break;
    }
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();

    std::vector<std::string> row = {std::to_string(rec.iteration),
                                    std::string(1, rec.branch),
                                    std::to_string(rec.dual_iterations),
                                    format_double(rec.mu),
                                    format_double(rec.eta),
                                    format_double(rec.upsilon),
                                    format_double(rec.f_hat[0]),
                                    format_double(rec.mean_power)};
    append_values(row, rec.f_hat.tail(users));
    append_values(row, rec.batch_drop);
    append_values(row, rec.window_drop);
    row.push_back(format_double(rec.max_violation));
    row.push_back(rec.surrogate_feasible ? "1" : "0");
    row.push_back(std::to_string(rec.regime_id));
    row.push_back(format_double(rec.encoder_kl));
    row.push_back(format_double(rec.potential_error));
    append_values(row, rec.critic_residuals);
    append_values(row, rec.shaping);
    row.push_back(hex64(rec.policy_checksum));
    metrics.row(row);
    metrics.flush();

    timing.row({std::to_string(rec.iteration), format_double(wall_ms)});
    timing.flush();

    if (rec.branch == 'x') {
      log << "fallback iteration=" << i
          << " (objective subproblem did not converge; took the feasible step)\n";
    }
    summary.iterations_completed = rec.iteration;

    if (i % cfg.eval_interval == 0 || i == cfg.iterations) {
      const EvalRecord er = agent.evaluate(eval_count++, cfg.eval_slots);
      std::vector<std::string> erow = {std::to_string(er.iteration),
                                       std::to_string(er.slots),
                                       format_double(er.mean_power)};
      append_values(erow, er.slot_drop);
      append_values(erow, er.packet_drop);
      eval_csv.row(erow);
      eval_csv.flush();
    }

    if (i % cfg.checkpoint_interval == 0) {
      save_checkpoint(out_dir + "/ckpt_" + pad6(i) + ".bin", agent.snapshot());
    }
    log.flush();
  }

  save_checkpoint(out_dir + "/final.bin", agent.snapshot());
  log << (summary.aborted ? "status aborted\n" : "status complete\n");
  return summary;
}

}  // namespace xrsched
