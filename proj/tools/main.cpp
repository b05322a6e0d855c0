#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lptrans/errors.hpp"
#include "suites.hpp"

namespace {

void print_summary(const cli::SuiteReport& r) {
  std::cout << r.suite << " (seed " << r.seed << ")\n";
  for (const auto& a : r.assertions) {
    std::cout << "  " << (a.pass ? "PASS " : "FAIL ") << a.id << ": " << a.value << " vs " << a.bound << "  [" << a.description
              << "]\n";
  }
  std::cout << (r.pass() ? "PASS" : "FAIL") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Littlewood-Paley kernels, transference checks and analytic measures"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  std::map<std::string, std::string> flags;
  app.add_option("--config", config_file, "key=value file; command-line flags take precedence");

  const std::map<std::string, std::string> help = {
      {"seed", "base RNG seed (default 7)"},
      {"delta", "grid spacing"},
      {"window", "grid half-width W; samples cover [-W, W)"},
      {"blocks", "top block index N"},
      {"neg-blocks", "bottom block index -M"},
      {"trials", "random trials or instances"},
      {"tol", "main tolerance of the suite"},
      {"csv", "directory for CSV output"},
      {"json", "path of the JSON report"},
      {"group", "finite group, e.g. Z8 or Z2xZ4"},
      {"dim", "representation dimension"},
      {"rep", "JSON file with a fixed representation"},
      {"signals", "number of test signals"},
      {"sets", "number of test sets"},
      {"alpha", "phase frequency for the co-countable variant"}};

  auto add_common = [&](CLI::App* sub) {
    for (const auto& key : cli::Config::known_keys()) {
      std::string names = "--" + key;
      if (key == "blocks") names += ",--N";
      if (key == "neg-blocks") names += ",--M";
      sub->add_option_function<std::string>(names, [&flags, key](const std::string& v) { flags[key] = v; }, help.at(key));
    }
  };

  auto* kernels = app.add_subcommand("kernels", "kernel bank partitions, closed forms, multiplier bounds");
  auto* lp = app.add_subcommand("lp-verify", "VdP identity, reconstruction, unconditional ratios");
  auto* transfer = app.add_subcommand("transfer-verify", "transference bound on finite group models");
  auto* analytic = app.add_subcommand("analytic-demo", "analytic measures on the line model");
  auto* counter = app.add_subcommand("counterexample", "Gaussian and co-countable counterexamples");
  std::string which = "both";
  counter->add_option("which", which, "gaussian | cocountable | both");
  auto* all = app.add_subcommand("all", "every suite");
  for (auto* s : {kernels, lp, transfer, analytic, counter, all}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cli::Config cfg;
    if (!config_file.empty()) cfg.load_file(config_file);
    for (const auto& [k, v] : flags) cfg.set(k, v);

    const auto json_path = cfg.raw("json");
    if (json_path) cli::ensure_writable_file(*json_path);
    if (auto dir = cfg.csv_dir()) cli::ensure_writable_dir(*dir);

    cli::SuiteReport report;
    if (kernels->parsed()) report = cli::run_kernels(cfg);
    else if (lp->parsed()) report = cli::run_lp_verify(cfg);
    else if (transfer->parsed()) report = cli::run_transfer_verify(cfg);
    else if (analytic->parsed()) report = cli::run_analytic_demo(cfg);
    else if (counter->parsed()) report = cli::run_counterexample(cfg, which);
    else report = cli::run_all(cfg);

    if (json_path) {
      std::ofstream out(*json_path);
      if (!out) throw cli::ConfigError("cannot write report " + *json_path);
      out << report.to_json().dump(2) << "\n";
    }
    print_summary(report);
    return report.pass() ? 0 : 1;
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const lpt::PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
