// Command line front end. Subcommands map onto the cmd_* entry points; all
// option plumbing funnels into a single Config so that --set can override
// anything a dedicated flag can set.

#include "CLI11.hpp"

#include "nlcauchy/commands.hpp"
#include "nlcauchy/config.hpp"
#include "nlcauchy/csv.hpp"

#include <cstddef>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

namespace nlc = nlcauchy;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  int workers = 0;
  double mu = 0.0;
  std::vector<std::string> sets;

  CLI::Option* config_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* workers_opt = nullptr;
  CLI::Option* mu_opt = nullptr;
};

void attach_common(CLI::App& sub, CommonFlags& flags) {
  flags.config_opt =
      sub.add_option("--config", flags.config_path, "Config file (key = value lines)");
  flags.out_opt = sub.add_option("--out", flags.out_path, "Output CSV path");
  flags.workers_opt =
      sub.add_option("--workers", flags.workers, "Worker thread count (0 = auto)");
  flags.mu_opt = sub.add_option("--mu", flags.mu, "Quadratic functional weight");
  sub.add_option("--set", flags.sets, "Extra key=value override, applied last")
      ->take_all();
}

// Flag precedence: config file first, then dedicated flags, then --set pairs.
nlc::Config build_config(const CommonFlags& flags) {
  nlc::Config cfg;
  if (flags.config_opt->count() > 0) cfg = nlc::Config::parse_file(flags.config_path);
  if (flags.out_opt->count() > 0) cfg.set("output.csv", flags.out_path);
  if (flags.workers_opt->count() > 0) cfg.set("workers", std::to_string(flags.workers));
  if (flags.mu_opt->count() > 0) cfg.set("functional.mu", nlc::fmt_g17(flags.mu));
  for (const std::string& pair : flags.sets) {
    const std::size_t eq = pair.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw nlc::config_error("--set expects key=value, got '" + pair + "'");
    }
    cfg.set(pair.substr(0, eq), pair.substr(eq + 1));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal abstract Cauchy problem solver"};
  app.require_subcommand(1);

  CLI::App* sub_expm =
      app.add_subcommand("expm", "Operator exponential accuracy sweep");
  CLI::App* sub_solve =
      app.add_subcommand("solve", "Solve one nonlocal problem instance");
  CLI::App* sub_table1 =
      app.add_subcommand("table1", "Reproduce the reference convergence table");
  CLI::App* sub_converge =
      app.add_subcommand("converge", "Error sweep over quadrature and collocation sizes");
  CLI::App* sub_bench = app.add_subcommand("bench", "Thread scaling benchmark");

  CommonFlags f_expm, f_solve, f_table1, f_converge, f_bench;
  attach_common(*sub_expm, f_expm);
  attach_common(*sub_solve, f_solve);
  attach_common(*sub_table1, f_table1);
  attach_common(*sub_converge, f_converge);
  attach_common(*sub_bench, f_bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? nlc::kExitOk : nlc::kExitUsage;
  }

  try {
    if (app.got_subcommand(sub_expm)) return nlc::cmd_expm(build_config(f_expm), std::cout);
    if (app.got_subcommand(sub_solve)) return nlc::cmd_solve(build_config(f_solve), std::cout);
    if (app.got_subcommand(sub_table1)) {
      return nlc::cmd_table1(build_config(f_table1), std::cout);
    }
    if (app.got_subcommand(sub_converge)) {
      return nlc::cmd_converge(build_config(f_converge), std::cout);
    }
    if (app.got_subcommand(sub_bench)) return nlc::cmd_bench(build_config(f_bench), std::cout);
  } catch (const nlc::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return nlc::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return nlc::kExitUsage;
}
