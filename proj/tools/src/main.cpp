#include <CLI11.hpp>

#include <iostream>
#include <thread>

#include "mgems_tools/config.hpp"
#include "mgems_tools/pipeline.hpp"

namespace {

using namespace mgems::tools;

struct Options {
  std::string config;
  std::string output;
  int threads = 0;
  std::vector<std::string> policies;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("-c,--config", o.config, "Experiment configuration (.toml) or run manifest (.json)")
      ->required();
  cmd->add_option("-o,--output", o.output, "Output directory (overrides output_dir)");
  cmd->add_option("-j,--threads", o.threads, "Worker threads for simulations (default: all cores)")
      ->check(CLI::NonNegativeNumber);
}

RunContext make_context(const Options& o) {
  RunContext ctx;
  ctx.config_path = o.config;
  ctx.cfg = load_config(o.config);
  ctx.out_dir = resolve_output_dir(ctx.cfg, o.output);
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  ctx.threads = o.threads > 0 ? o.threads : std::max(1, hw);
  ctx.policies = o.policies;
  return ctx;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Microgrid energy management benchmark: SDDP, MPC and rule-based control"};
  app.require_subcommand(1);
  app.set_version_flag("--version", MGEMS_VERSION);
  Options o;

  auto* gen = app.add_subcommand("generate", "Write scenario, weather and tariff files");
  add_common(gen, o);
  auto* tr = app.add_subcommand("train", "Train SDDP value functions on the optimization scenarios");
  add_common(tr, o);
  auto* as = app.add_subcommand("assess", "Simulate the policies on the assessment scenarios");
  add_common(as, o);
  as->add_option("-p,--policies", o.policies, "Subset of policies (sddp, mpc, rule_based)")
      ->delimiter(',')
      ->check(CLI::IsMember({"sddp", "mpc", "rule_based"}));
  auto* sw = app.add_subcommand("sweep", "Benchmark SDDP and MPC across solar uncertainty levels");
  add_common(sw, o);
  auto* val = app.add_subcommand("validate-config", "Check a configuration file and exit");
  val->add_option("config", o.config, "Configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (val->parsed()) {
      const auto cfg = load_config(o.config);
      build_instance(cfg);
      std::cout << o.config << ": ok (day " << mgems::to_string(cfg.day) << ", "
                << cfg.grid.horizon_steps << " steps, seed " << cfg.seed << ", hash "
                << content_hash(cfg.text) << ")\n";
      return kExitOk;
    }
    const auto ctx = make_context(o);
    if (gen->parsed()) return cmd_generate(ctx);
    if (tr->parsed()) return cmd_train(ctx);
    if (as->parsed()) return cmd_assess(ctx);
    return cmd_sweep(ctx);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "aborted: " << e.what() << '\n';
    return kExitAbort;
  }
}
