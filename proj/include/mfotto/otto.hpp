#pragma once

#include <string>
#include <vector>

#include "mfotto/correlations.hpp"

namespace mfotto {

enum class CycleMode {
  QuantumAdiabatic,        ///< level populations frozen on the field strokes
  ThermodynamicAdiabatic,  ///< both isochores end in equilibrium at either field
};

/// Otto cycle: hot isochore at (t_hot, p_high), cold isochore at
/// (t_cold, p_low); the adiabats change the electric field only. The
/// e_field of `params` is ignored.
struct CycleSpec {
  ChainParams params;
  double t_hot = 30.0;
  double t_cold = 10.0;
  double p_high = 10.0;
  double p_low = 3.5;
  CycleMode mode = CycleMode::ThermodynamicAdiabatic;

  void validate() const;
};

struct CycleResult {
  double q_in = 0.0;
  double q_out = 0.0;
  double work = 0.0;
  double efficiency = 0.0;  ///< NaN when q_in == 0
  double carnot = 0.0;
  bool absorbs_heat = false;   ///< q_in > 0
  bool produces_work = false;  ///< work >= 0

  [[nodiscard]] bool is_engine() const { return absorbs_heat && produces_work; }
};

[[nodiscard]] CycleResult run_cycle(const CycleSpec& spec);

struct SweepRow {
  double p = 0.0;
  double ratio = 0.0;  ///< p / p_low
  CycleResult quantum;
  CycleResult thermo;
  bool quantum_ok = true;  ///< false if level continuation failed
  std::string quantum_error;
  double tau2_hot = 0.0;
  double tau1_hot = 0.0;
};

/// One row per hot-side field in `p_grid`; spec.mode and spec.p_high are ignored.
[[nodiscard]] std::vector<SweepRow> efficiency_sweep(const CycleSpec& spec, const std::vector<double>& p_grid,
                                                     int jobs = 1);

struct SizeRow {
  int n = 0;
  CycleResult result;
};

/// Efficiency for every ring size in `n_list` (each within [2, 10]).
[[nodiscard]] std::vector<SizeRow> size_scaling(const CycleSpec& spec, const std::vector<int>& n_list, int jobs = 1);

}  // namespace mfotto
