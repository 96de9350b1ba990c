#include <CLI11.hpp>
#include <iostream>

#include "gridsim/cli.hpp"
#include "gridsim/grid_text.hpp"

using namespace gridsim;

int main(int argc, char** argv) {
  CLI::App app{"Deterministic simulator for interacting machine grids"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Run a grid config and write its artifacts");
  std::string run_config;
  std::vector<std::string> run_inputs;
  uint64_t run_horizon = 0, run_seed = 0;
  std::string run_out_dir = ".";
  run_cmd->add_option("config", run_config, "grid config file")->required();
  auto* run_h = run_cmd->add_option("--horizon", run_horizon, "global tick budget");
  auto* run_s = run_cmd->add_option("--seed", run_seed, "seed override for a random schedule");
  run_cmd->add_option("--input", run_inputs, "per-machine input override, id=word");
  run_cmd->add_option("--out-dir", run_out_dir, "artifact directory");

  // construct
  auto* con_cmd = app.add_subcommand("construct", "Emit a built-in construction as a config");
  std::string con_name, con_oracle, con_out_dir;
  uint64_t con_horizon = 0;
  bool con_run = false;
  con_cmd->add_option("name", con_name, "construction name")->required();
  con_cmd->add_option("--oracle", con_oracle, "injected bit word");
  auto* con_h = con_cmd->add_option("--horizon", con_horizon, "horizon override");
  con_cmd->add_option("--out-dir", con_out_dir, "output directory (default ./<name>)");
  con_cmd->add_flag("--run", con_run, "run the construction after writing it");

  // classify
  auto* cls_cmd = app.add_subcommand("classify", "Print the interaction regime");
  std::string cls_config;
  cls_cmd->add_option("config", cls_config, "grid config file")->required();

  // flatten
  auto* flat_cmd = app.add_subcommand("flatten", "Report whether the config flattens");
  std::string flat_config;
  flat_cmd->add_option("config", flat_config, "grid config file")->required();

  // check-eq
  auto* eq_cmd = app.add_subcommand("check-eq", "Compare the grid run against its flat execution");
  std::string eq_config;
  uint64_t eq_horizon = 0;
  eq_cmd->add_option("config", eq_config, "grid config file")->required();
  auto* eq_h = eq_cmd->add_option("--horizon", eq_horizon, "global tick budget");

  // enumerate
  auto* enum_cmd = app.add_subcommand("enumerate", "Dovetail a machine over all input words");
  std::string enum_machine, enum_out;
  uint64_t enum_budget = 0;
  enum_cmd->add_option("machine", enum_machine, "machine description file")->required();
  enum_cmd->add_option("--budget", enum_budget, "diagonal budget")->required();
  enum_cmd->add_option("--out", enum_out, "certificate file (stdout when absent)");

  // diff-traces
  auto* diff_cmd = app.add_subcommand("diff-traces", "Compare two trace files");
  std::string diff_a, diff_b;
  diff_cmd->add_option("a", diff_a, "first trace")->required();
  diff_cmd->add_option("b", diff_b, "second trace")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : cli::kExitUsage;
  }

  if (run_cmd->parsed()) {
    cli::RunManifest manifest;
    manifest.config_path = run_config;
    manifest.out_dir = run_out_dir;
    if (run_h->count()) manifest.horizon = run_horizon;
    if (run_s->count()) manifest.seed = run_seed;
    for (const auto& kv : run_inputs) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::cerr << "error: usage: --input expects id=word\n";
        return cli::kExitUsage;
      }
      manifest.inputs[kv.substr(0, eq)] = parse_word_token(kv.substr(eq + 1));
    }
    return cli::cmd_run(manifest, std::cout, std::cerr);
  }
  if (con_cmd->parsed()) {
    std::optional<uint64_t> h;
    if (con_h->count()) h = con_horizon;
    std::string dir = con_out_dir.empty() ? con_name : con_out_dir;
    return cli::cmd_construct(con_name, con_oracle, h, dir, con_run, std::cout, std::cerr);
  }
  if (cls_cmd->parsed()) return cli::cmd_classify(cls_config, std::cout, std::cerr);
  if (flat_cmd->parsed()) return cli::cmd_flatten(flat_config, std::cout, std::cerr);
  if (eq_cmd->parsed()) {
    std::optional<uint64_t> h;
    if (eq_h->count()) h = eq_horizon;
    return cli::cmd_check_eq(eq_config, h, std::cout, std::cerr);
  }
  if (enum_cmd->parsed())
    return cli::cmd_enumerate(enum_machine, enum_budget, enum_out, std::cout, std::cerr);
  if (diff_cmd->parsed()) return cli::cmd_diff_traces(diff_a, diff_b, std::cout, std::cerr);
  return cli::kExitUsage;
}
