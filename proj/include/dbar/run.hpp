#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "dbar/config.hpp"

namespace dbar {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2, kExitTolerance = 3 };

/// Flat table behind the CSV output.
struct Table {
  using Cell = std::variant<std::string, double, long long>;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

/// Doubles with 17 significant digits; strings quoted when needed.
std::string to_csv(const Table& table);

struct RunResult {
  int exit_code = kExitOk;
  json report;
  Table table;
};

/// Runs one configured experiment. Checks that fail set kExitTolerance;
/// errors propagate as exceptions.
RunResult run(const RunConfig& config);

/// Whole command: load, override, run, write. Errors are reported on `err`
/// and mapped to exit codes 1 (validation/parse) and 2 (numerical).
int execute(const std::string& mode, const std::string& config_path, const std::vector<std::string>& overrides,
            const std::string& out_path, std::ostream& out, std::ostream& err);

/// Renders the report in the configured format.
std::string render(const RunConfig& config, const RunResult& result);

}  // namespace dbar
