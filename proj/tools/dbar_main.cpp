#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dbar/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Integral solution operators for the d-bar equation on product domains"};
  app.require_subcommand(1, 1);
  std::string config_path, out_path;
  std::vector<std::string> overrides;
  for (const std::string& mode : dbar::run_modes()) {
    CLI::App* sub = app.add_subcommand(mode, "run the '" + mode + "' experiment");
    sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--override", overrides, "key=value on a top-level scalar field (repeatable)");
    sub->add_option("--out", out_path, "report path (default: output.path or stdout)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dbar::kExitValidation;
  }
  const std::string mode = app.get_subcommands().front()->get_name();
  return dbar::execute(mode, config_path, overrides, out_path, std::cout, std::cerr);
}
