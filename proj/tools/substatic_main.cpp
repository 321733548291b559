#include <iostream>

#include <CLI11.hpp>

#include "substatic/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Torsion-problem identities on warped-product manifolds"};
  app.require_subcommand(1, 1);

  std::string config;
  std::string out_dir;
  double tol = 0.0;
  bool as_json = false, as_csv = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "run configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides [run] out)");
    sub->add_option("--tol", tol, "identity tolerance override")->check(CLI::PositiveNumber);
    auto* j = sub->add_flag("--json", as_json, "write the JSON report (default)");
    auto* c = sub->add_flag("--csv", as_csv, "write CSV tables");
    j->excludes(c);
  };
  auto* check = app.add_subcommand("check-model", "curvature conditions, horizon data and c");
  auto* solve = app.add_subcommand("solve", "solve at the finest resolution and check the field");
  auto* verify = app.add_subcommand("verify", "solve and verify the integral identities");
  auto* sweep = app.add_subcommand("sweep", "convergence sweep over the configured resolutions");
  for (auto* s : {check, solve, verify, sweep}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  substatic::CliOptions opt;
  if (!out_dir.empty()) opt.out_dir = out_dir;
  if (tol > 0.0) opt.tolerance = tol;
  opt.csv = as_csv;
  opt.json = !as_csv;

  const std::string verb = app.get_subcommands().front()->get_name();
  return substatic::run(substatic::verb_from_string(verb), config, opt, std::cout, std::cerr);
}
