// Command-line front end over the C interface.
//
// Exit codes: 0 pass, 2 fail, 1 configuration, runtime or usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "vnsf.h"

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  bool quiet = false;
  double threshold = 0.9;
};

int report_error(const char* what) {
  std::cerr << "error: " << what << ": " << vnsf_last_error() << "\n";
  return 1;
}

bool write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  return static_cast<bool>(f);
}

int run_subcommand(const std::string& name, vnsf_experiment kind, const Options& opt) {
  vnsf_config* cfg = nullptr;
  const vnsf_status st = opt.config_path.empty() ? vnsf_config_parse("", &cfg)
                                                 : vnsf_config_load(opt.config_path.c_str(), &cfg);
  if (st != VNSF_OK) return report_error("configuration");
  for (size_t i = 0; i < vnsf_config_warning_count(cfg); ++i) {
    std::cerr << "warning: " << vnsf_config_warning(cfg, i) << "\n";
  }

  std::string out_dir = opt.out_dir;
  if (kind == VNSF_EXPERIMENT_SIMULATE && out_dir.empty()) out_dir = vnsf_config_out_dir(cfg);

  vnsf_report* rep = nullptr;
  const vnsf_status rs = vnsf_run_experiment(cfg, kind, out_dir.c_str(), opt.threshold, &rep);
  vnsf_config_free(cfg);
  if (rs != VNSF_OK) return report_error(name.c_str());

  if (!opt.quiet) std::cout << vnsf_report_text(rep);
  const std::string csv = vnsf_report_csv(rep);
  int code = vnsf_report_passed(rep) ? 0 : 2;
  if (kind != VNSF_EXPERIMENT_SIMULATE && !opt.out_dir.empty() && !csv.empty()) {
    const auto path = std::filesystem::path(opt.out_dir) / (std::string(vnsf_report_name(rep)) + ".csv");
    if (!write_file(path, csv)) {
      std::cerr << "error: cannot write '" << path.string() << "'\n";
      code = 1;
    }
  }
  vnsf_report_free(rep);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chemotaxis compressible Navier-Stokes simulator and audits", "vnsf"};
  app.require_subcommand(1);

  Options opt;
  struct Entry {
    const char* name;
    const char* help;
    vnsf_experiment kind;
  };
  const Entry entries[] = {
      {"simulate", "Run the configured problem; write energy.csv and snapshots", VNSF_EXPERIMENT_SIMULATE},
      {"energy-audit", "Audit the discrete energy inequality over refined time steps", VNSF_EXPERIMENT_ENERGY_AUDIT},
      {"sugiyama-check", "Check the interpolation exponents and the random-field constant", VNSF_EXPERIMENT_SUGIYAMA_CHECK},
      {"mms-convergence", "Manufactured-solution refinement table and observed order", VNSF_EXPERIMENT_MMS_CONVERGENCE},
      {"relenergy-audit", "Audit the relative energy inequality of a coarse run", VNSF_EXPERIMENT_RELENERGY_AUDIT},
      {"weak-strong", "Relative energy decay of coarse runs against a fine run", VNSF_EXPERIMENT_WEAK_STRONG},
  };
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", opt.config_path, "Configuration file (key = value lines)");
    sub->add_option("--out", opt.out_dir, "Output directory");
    sub->add_flag("--quiet", opt.quiet, "Suppress the report on standard output");
    if (e.kind == VNSF_EXPERIMENT_MMS_CONVERGENCE) {
      sub->add_option("--threshold", opt.threshold, "Required observed order")->capture_default_str();
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  for (const auto& e : entries) {
    if (app.got_subcommand(e.name)) return run_subcommand(e.name, e.kind, opt);
  }
  std::cerr << app.help();
  return 1;
}
