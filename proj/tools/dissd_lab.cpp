// dissd-lab: experiment harness for the distributed semi-supervised debiased
// estimator family. Subcommands:
//   run <config|--preset name> [--key value ...]   Monte Carlo experiments
//   presets                                        list named parameter sets
//   ingest <csv> <config> [--key value ...]        fit real data, emit CIs
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dissd/errors.hpp"
#include "dissd/experiment.hpp"

namespace {

// Splits subcommand arguments into bare positionals and --key value pairs
// (kept in order), so overrides can follow or precede the config path.
struct ParsedArgs {
  std::vector<std::string> positionals;
  std::vector<std::pair<std::string, std::string>> overrides;
};

ParsedArgs split_args(const std::vector<std::string>& args) {
  ParsedArgs out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) == 0) {
      if (i + 1 >= args.size()) {
        throw dissd::ConfigError("option " + a + " is missing a value");
      }
      out.overrides.emplace_back(a.substr(2), args[++i]);
    } else {
      out.positionals.push_back(a);
    }
  }
  return out;
}

int run_command(const std::vector<std::string>& args) {
  const ParsedArgs parsed = split_args(args);
  dissd::ExperimentConfig cfg;
  bool have_source = false;
  std::vector<std::pair<std::string, std::string>> overrides;
  for (const auto& [key, value] : parsed.overrides) {
    if (key == "preset") {
      cfg = dissd::preset(value);
      have_source = true;
    } else {
      overrides.emplace_back(key, value);
    }
  }
  if (!parsed.positionals.empty()) {
    if (parsed.positionals.size() > 1) {
      throw dissd::ConfigError("run: expected at most one config file");
    }
    if (have_source) {
      throw dissd::ConfigError("run: give either a config file or --preset, not both");
    }
    cfg = dissd::parse_config_file(parsed.positionals.front());
    have_source = true;
  }
  if (!have_source) {
    throw dissd::ConfigError("run: give a config file or --preset <name>");
  }
  for (const auto& [key, value] : overrides) {
    dissd::apply_override(cfg, key, value);
  }
  dissd::run_experiment(cfg, &std::cout);
  std::cout << "wrote " << cfg.out_path << "\n";
  return 0;
}

int presets_command() {
  for (const auto& [name, description] : dissd::preset_descriptions()) {
    std::printf("%-18s %s\n", name.c_str(), description.c_str());
  }
  return 0;
}

int ingest_command(const std::vector<std::string>& args) {
  const ParsedArgs parsed = split_args(args);
  if (parsed.positionals.size() != 2) {
    throw dissd::ConfigError("ingest: expected <csv> <config>");
  }
  dissd::ExperimentConfig cfg = dissd::parse_config_file(parsed.positionals[1]);
  for (const auto& [key, value] : parsed.overrides) {
    dissd::apply_override(cfg, key, value);
  }
  const dissd::IngestResult result =
      dissd::run_ingest(parsed.positionals[0], cfg);
  dissd::write_coefficients_csv(cfg.out_path, result);
  std::cout << "wrote " << cfg.out_path << " (" << result.beta_bar.size()
            << " coordinates)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed semi-supervised debiased estimation lab"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "run a Monte Carlo experiment");
  run->allow_extras();
  CLI::App* presets = app.add_subcommand("presets", "list named parameter sets");
  CLI::App* ingest = app.add_subcommand("ingest", "fit a labeled/unlabeled CSV");
  ingest->allow_extras();

  try {
    app.parse(argc, argv);
    if (run->parsed()) return run_command(run->remaining());
    if (presets->parsed()) return presets_command();
    if (ingest->parsed()) return ingest_command(ingest->remaining());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const dissd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const dissd::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
