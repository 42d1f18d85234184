// Command-line runner. Flags mirror the config keys of each subcommand:
//
//   klab_cli identities --trials 1000 --seed 7 --out runs.csv
//
// Effective configuration is schema defaults, then --config FILE, then flags.
// Exit status: 0 all assertions pass, 1 an assertion failed, 2 usage/config error.

#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "klab/runner.hpp"

namespace kr = klab::runner;

int main(int argc, char** argv) {
  CLI::App app{"Kloosterman-fraction experiment runner"};
  app.require_subcommand(1);

  std::string config_path, out_path, json_path;
  bool table = false;
  // Flag values per subcommand; only the ones given on the command line are applied.
  std::map<std::string, std::map<std::string, std::string>> flags;

  for (const auto& spec : kr::subcommands()) {
    auto* sub = app.add_subcommand(spec.name, spec.help);
    sub->add_option("--config", config_path, "flat key=value config file");
    sub->add_option("--out", out_path, "append records to this CSV file");
    sub->add_option("--json", json_path, "append a JSON-lines mirror to this file");
    sub->add_flag("--table", table, "print every record as a table");
    for (const auto& opt : spec.options) {
      sub->add_option("--" + opt.key, flags[spec.name][opt.key], opt.help)->default_str(opt.default_value);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kr::kExitUsage;
  }

  const auto* sub = app.get_subcommands().front();
  try {
    const auto& spec = kr::find_subcommand(sub->get_name());
    kr::Config config(spec);
    if (!config_path.empty()) config.merge_file(config_path);
    for (const auto& opt : spec.options) {
      if (sub->count("--" + opt.key) > 0) config.set(opt.key, flags[spec.name][opt.key]);
    }

    const auto outcome = kr::run(config);
    if (!out_path.empty()) kr::append_csv(out_path, outcome.records);
    if (!json_path.empty()) kr::append_json(json_path, outcome.records);
    if (table) {
      kr::print_table(std::cout, outcome.records);
    } else {
      for (const auto& r : outcome.records) {
        for (const auto& [name, ok] : r.assertions) {
          std::cout << (ok ? "PASS " : "FAIL ") << spec.name << ' ' << r.label << ' ' << name << '\n';
        }
      }
    }
    std::cerr << spec.name << ": " << outcome.records.size() << " records, " << outcome.runtime_seconds << " s\n";
    return outcome.exit_code();
  } catch (const kr::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kr::kExitUsage;
  }
}
