#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xrsched/harness/config.hpp"
#include "xrsched/harness/runner.hpp"

namespace {

xrsched::ExperimentConfig make_config(const std::string& config_path,
                                      const std::vector<std::string>& sets,
                                      int iterations_override, bool strict) {
  xrsched::ExperimentConfig cfg;
  if (!config_path.empty()) cfg = xrsched::load_config(config_path);
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    }
    xrsched::apply_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (iterations_override > 0) cfg.iterations = iterations_override;
  if (strict) xrsched::apply_strict_paper(cfg);
  cfg.validate();
  return cfg;
}

bool parse_seed_range(const std::string& text, std::uint64_t& lo, std::uint64_t& hi) {
  try {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
      lo = hi = std::stoull(text);
      return true;
    }
    lo = std::stoull(text.substr(0, dots));
    hi = std::stoull(text.substr(dots + 2));
  } catch (const std::exception&) {
    return false;
  }
  return lo <= hi;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constraint-aware power scheduling trainer for XR downlinks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string variant_text = "cacrl";
  std::string out_dir;
  std::string seeds_text;
  std::uint64_t seed = 0;
  int iterations = 0;
  bool strict = false;
  std::vector<std::string> sets;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value config file");
    cmd->add_option("--variant", variant_text, "cacrl | cacrl-minus | cssca-crl");
    cmd->add_option("--out", out_dir, "output directory")->required();
    cmd->add_option("--iterations", iterations, "override the iteration count");
    cmd->add_flag("--strict-paper", strict,
                  "historical step-size exponents and the truncated KL gradient");
    cmd->add_option("--set", sets, "extra key=value override (repeatable)");
  };

  CLI::App* run = app.add_subcommand("run", "train one seed");
  add_common(run);
  run->add_option("--seed", seed, "rng seed")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "train a range of seeds");
  add_common(sweep);
  sweep->add_option("--seeds", seeds_text, "seed range a..b (inclusive)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const xrsched::Variant variant = xrsched::parse_variant(variant_text);
    const xrsched::ExperimentConfig cfg =
        make_config(config_path, sets, iterations, strict);

    if (app.got_subcommand(run)) {
      const xrsched::RunSummary s = xrsched::run_experiment(cfg, variant, seed, out_dir);
      std::cout << (s.aborted ? "aborted after " : "completed ")
                << s.iterations_completed << " iterations";
      if (s.aborted) std::cout << ": " << s.abort_reason;
      std::cout << "\n";
      return s.aborted ? 2 : 0;
    }

    std::uint64_t lo = 0, hi = 0;
    if (!parse_seed_range(seeds_text, lo, hi)) {
      std::cerr << "bad --seeds range '" << seeds_text << "'\n";
      return 1;
    }
    int aborted = 0;
    for (std::uint64_t s = lo; s <= hi; ++s) {
      const xrsched::RunSummary sum = xrsched::run_experiment(
          cfg, variant, s, out_dir + "/seed_" + std::to_string(s));
      std::cout << "seed " << s << ": " << (sum.aborted ? "aborted" : "completed")
                << " after " << sum.iterations_completed << " iterations\n";
      if (sum.aborted) ++aborted;
    }
    return aborted > 0 ? 2 : 0;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
