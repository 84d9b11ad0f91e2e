#pragma once

#include <string>
#include <vector>

namespace mfotto {

/// One named comparison: the largest deviation seen over its sample set.
struct Check {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;

  [[nodiscard]] bool passed() const { return max_deviation <= tolerance; }
};

struct Report {
  std::vector<Check> checks;

  [[nodiscard]] bool passed() const;
};

struct ValidationOptions {
  double perturb = 0.0;  ///< added to the numeric ground energy (negative control)
  bool oracle = true;    ///< four-site closed forms vs numeric path
  bool invariants = true;
  int jobs = 1;
};

inline constexpr double kOracleTolerance = 1e-8;
inline constexpr double kOracleChiTolerance = 1e-4;
/// Susceptibility deviations are relative; the floor only guards chi == 0.
inline constexpr double kChiFloor = 1e-12;

/// Four-site oracle grid: j in {0.5, 1, 2}, b in {0, 1, 2}, d in {0, 1, 5},
/// t in {1, 10, 30, 100}.
[[nodiscard]] Report oracle_suite(double perturb = 0.0, int jobs = 1);

/// Structural invariants: Hermiticity, Sz conservation, Gibbs/density-matrix
/// validity, concurrence range, fidelity identities, entropy monotonicity.
[[nodiscard]] Report invariant_suite();

[[nodiscard]] Report run_validation(const ValidationOptions& options);

}  // namespace mfotto
