#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "dipolatt/cli.hpp"

namespace {

// options supplied on the command line override the config file
struct KeyCollector {
  std::map<std::string, std::string> values;

  void attach(CLI::App* sub, const std::string& name) {
    sub->add_option_function<std::string>(
        "--" + name, [this, name](const std::string& v) { values[name] = v; });
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dipole-dipole optical-lattice gate designer"};
  app.require_subcommand(0, 1);

  std::string config_path, out_path, format;
  unsigned long long seed = 0;
  int workers = 0;
  app.add_option("--config", config_path, "JSON config file")->expected(1);
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--format", format, "csv or json");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--workers", workers, "sweep worker threads");
  app.set_version_flag("--version", dipolatt::cli::kVersion);

  const std::map<std::string, std::vector<std::string>> sub_keys = {
      {"fom", {"geometry", "eta", "eta_perp", "eta_par", "zbar", "q", "method",
               "retardation"}},
      {"sweep", {"geometry", "eta", "eta_perp", "eta_par", "zbar", "q", "method",
                 "retardation", "param", "range"}},
      {"gate", {"protocol", "geometry", "eta", "eta_perp", "eta_par", "zbar", "q",
                "s", "vc", "gamma_c", "gamma", "pulse_duration", "nuclear_spin",
                "f"}},
      {"fidelity", {"f", "gamma_over_recoil", "intensity_ratio", "c", "n",
                    "detuning", "include_entangling_time"}},
      {"ensemble", {"sites", "fill", "f_true", "p_control_lost", "p_target_lost",
                    "p_both_lost", "p_wrong_state", "unpaired_flip", "cycles"}},
  };

  std::map<std::string, CLI::App*> subs;
  std::map<std::string, KeyCollector> collectors;
  for (const auto& [name, keys] : sub_keys) {
    CLI::App* sub = app.add_subcommand(name);
    subs[name] = sub;
    auto& collector = collectors[name];
    for (const auto& k : keys) collector.attach(sub, k);
  }

  CLI11_PARSE(app, argc, argv);

  dipolatt::cli::RunConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "io error: cannot read '" << config_path << "'\n";
      return dipolatt::cli::kExitIo;
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
      cfg = dipolatt::cli::config_from_json_text(text.str());
    } catch (const std::exception& e) {
      std::cerr << "validation error: " << e.what() << "\n";
      return dipolatt::cli::kExitValidation;
    }
  }

  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) {
      if (!cfg.subcommand.empty() && cfg.subcommand != name) {
        std::cerr << "validation error: subcommand '" << name
                  << "' conflicts with config subcommand '" << cfg.subcommand
                  << "'\n";
        return dipolatt::cli::kExitValidation;
      }
      cfg.subcommand = name;
      for (const auto& [k, v] : collectors[name].values) cfg.parameters[k] = v;
    }
  }
  if (cfg.subcommand.empty()) {
    std::cerr << "validation error: no subcommand given\n";
    return dipolatt::cli::kExitValidation;
  }
  if (!out_path.empty()) cfg.output_path = out_path;
  if (!format.empty()) cfg.output_format = format;
  if (app.count("--seed")) cfg.seed = seed;
  if (workers > 0) cfg.workers = workers;

  return dipolatt::cli::run(cfg, std::cout, std::cerr);
}
