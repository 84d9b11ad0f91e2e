#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace mfotto::cli {

enum ExitCode : int {
  kOk = 0,
  kParameterError = 2,
  kValidationFailure = 3,
  kNumericFailure = 4,
};

/// One swept variable: `count` equally spaced values from start to stop.
struct Sweep {
  std::string var;
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  [[nodiscard]] std::vector<double> values() const;
};

/// Parses "<var>:<start>:<stop>:<count>"; throws ParameterError.
[[nodiscard]] Sweep parse_sweep(const std::string& text);

using Cell = std::variant<double, long long, std::string>;

/// A result table: column names plus rows of cells, and key/value metadata.
struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, std::ostream& out);

/// Entry point shared by the executable and the tests. Writes results to
/// --out (or `out`) and diagnostics to `err`; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mfotto::cli
