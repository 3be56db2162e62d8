#include "suita/cli/run.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using suita::cli::ConfigError;
using suita::cli::FlagValues;

struct CommonOptions {
  std::string config;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool cache = false;
  bool no_cache = false;
  std::vector<std::string> tolerances;
};

void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--config", o.config, "JSON config file; flags override it");
  sub->add_option("--out", o.out_dir, "output directory (default $SUITA_OUT_DIR, else ./suita_out)");
  sub->add_option("--seed", o.seed, "seed recorded with the run");
  sub->add_flag("--cache", o.cache, "reuse cached records for an identical config");
  sub->add_flag("--no-cache", o.no_cache, "always recompute");
  sub->add_option("--tol", o.tolerances, "tolerance override name=value (repeatable)");
}

int run_command(const std::string& command, const CommonOptions& common, const CLI::App* sub,
                const std::map<std::string, std::string>& values) {
  FlagValues flags;
  flags.command = command;
  for (const auto& [name, value] : values) {
    if (sub->get_option("--" + name)->count() > 0) flags.params[name] = value;
  }
  flags.tolerances = common.tolerances;
  if (sub->get_option("--out")->count() > 0) flags.out_dir = common.out_dir;
  if (sub->get_option("--seed")->count() > 0) flags.seed = common.seed;
  if (common.cache && common.no_cache) throw ConfigError("--cache and --no-cache are exclusive");
  if (common.cache) flags.cache = true;
  if (common.no_cache) flags.cache = false;

  std::optional<suita::cli::ConfigFile> file;
  if (!common.config.empty()) file = suita::cli::load_config_file(common.config);
  const auto cfg = suita::cli::resolve_config(flags, file);
  const auto outcome = suita::cli::execute(cfg);

  int failed = 0;
  for (const auto& r : outcome.result.records) failed += r.pass ? 0 : 1;
  std::cout << cfg.command << ": " << outcome.result.records.size() << " checks, " << failed << " failed"
            << (outcome.cached ? " (cached)" : "") << "\n";
  for (const auto& c : outcome.result.criteria) {
    std::cout << "  criterion " << c.id << " " << (c.pass ? "PASS" : "FAIL") << "  " << c.title << "\n";
  }
  std::cout << "report: " << outcome.json_path.string() << "\nsummary: " << outcome.csv_path.string() << "\n";
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Suita-type inequality toolkit: numeric checks with JSON/CSV reports"};
  app.require_subcommand(1);

  CommonOptions common;
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;

  for (const auto& spec : suita::cli::command_table()) {
    auto* sub = app.add_subcommand(spec.name, spec.help);
    add_common(sub, common);
    auto& slot = values[spec.name];
    for (const auto& p : spec.params) {
      slot[p.name];
      sub->add_option("--" + p.name, slot[p.name], p.help + " (default " + p.fallback + ")");
    }
    subs[spec.name] = sub;
  }
  auto* run = app.add_subcommand("run", "run the command named in --config");
  add_common(run, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      if (common.config.empty()) throw ConfigError("run needs --config");
      return run_command("", common, run, {});
    }
    for (const auto& [name, sub] : subs) {
      if (sub->parsed()) return run_command(name, common, sub, values[name]);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
