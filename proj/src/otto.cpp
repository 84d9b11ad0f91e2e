#include "mfotto/otto.hpp"

#include <cmath>
#include <limits>

#include "mfotto/errors.hpp"
#include "mfotto/parallel.hpp"

namespace mfotto {

namespace {

CycleResult finish(double q_in, double q_out, const CycleSpec& spec) {
  CycleResult r;
  r.q_in = q_in;
  r.q_out = q_out;
  r.work = q_in - q_out;
  r.efficiency = q_in != 0.0 ? r.work / q_in : std::numeric_limits<double>::quiet_NaN();
  r.carnot = 1.0 - spec.t_cold / spec.t_hot;
  r.absorbs_heat = q_in > 0.0;
  r.produces_work = r.work >= 0.0;
  return r;
}

}  // namespace

void CycleSpec::validate() const {
  params.validate();
  if (!(t_cold > 0.0) || !(t_hot > t_cold) || !std::isfinite(t_hot)) {
    throw ParameterError("cycle: need t_hot > t_cold > 0");
  }
  if (!(p_high >= 0.0) || !(p_low >= 0.0) || !std::isfinite(p_high) || !std::isfinite(p_low)) {
    throw ParameterError("cycle: fields must be finite and non-negative");
  }
}

CycleResult run_cycle(const CycleSpec& spec) {
  spec.validate();
  const SpectrumPtr hot = solve(spec.params.with_e_field(spec.p_high));
  const SpectrumPtr cold = solve(spec.params.with_e_field(spec.p_low));
  const Eigen::VectorXd& e_hot = hot->energies;
  const Eigen::VectorXd& e_cold = cold->energies;

  if (spec.mode == CycleMode::ThermodynamicAdiabatic) {
    const double q_in = e_hot.dot(gibbs_populations(e_hot, spec.t_hot) - gibbs_populations(e_hot, spec.t_cold));
    const double q_out = e_cold.dot(gibbs_populations(e_cold, spec.t_hot) - gibbs_populations(e_cold, spec.t_cold));
    return finish(q_in, q_out, spec);
  }

  // cold equilibrium -> field raised with frozen populations -> hot equilibrium -> field lowered
  const LevelMap up = continue_levels(spec.params, spec.p_low, spec.p_high,
                                      default_continuation_steps(spec.p_low, spec.p_high));
  const Eigen::VectorXd p_a = gibbs_populations(e_cold, spec.t_cold);
  const Eigen::VectorXd p_c = gibbs_populations(e_hot, spec.t_hot);
  Eigen::VectorXd p_b(p_a.size());
  Eigen::VectorXd p_d(p_a.size());
  for (Eigen::Index i = 0; i < p_a.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(up(static_cast<int>(i)));
    p_b(k) = p_a(i);
    p_d(i) = p_c(k);
  }
  const double q_in = e_hot.dot(p_c - p_b);
  const double q_out = e_cold.dot(p_d - p_a);
  return finish(q_in, q_out, spec);
}

std::vector<SweepRow> efficiency_sweep(const CycleSpec& spec, const std::vector<double>& p_grid, int jobs) {
  if (p_grid.empty()) throw ParameterError("efficiency_sweep: empty field grid");
  for (double p : p_grid) {
    if (!(p > 0.0) || !std::isfinite(p)) throw ParameterError("efficiency_sweep: fields must be positive");
  }
  spec.validate();
  std::vector<SweepRow> rows(p_grid.size());
  parallel_for(p_grid.size(), jobs, [&](std::size_t i) {
    SweepRow& row = rows[i];
    CycleSpec point = spec;
    point.p_high = p_grid[i];
    row.p = p_grid[i];
    row.ratio = spec.p_low > 0.0 ? row.p / spec.p_low : std::numeric_limits<double>::quiet_NaN();
    point.mode = CycleMode::ThermodynamicAdiabatic;
    row.thermo = run_cycle(point);
    point.mode = CycleMode::QuantumAdiabatic;
    try {
      row.quantum = run_cycle(point);
    } catch (const ContinuationError& e) {
      row.quantum_ok = false;
      row.quantum_error = e.what();
      row.quantum.efficiency = std::numeric_limits<double>::quiet_NaN();
    }
    const DensityMatrix rho = density_matrix(gibbs(solve(spec.params.with_e_field(row.p)), spec.t_hot));
    row.tau2_hot = two_tangle(rho, spec.params.n);
    row.tau1_hot = one_tangle(rho);
  });
  return rows;
}

std::vector<SizeRow> size_scaling(const CycleSpec& spec, const std::vector<int>& n_list, int jobs) {
  for (int n : n_list) {
    if (n < 2 || n > 10) throw ParameterError("size_scaling: ring sizes must lie in [2, 10]");
  }
  std::vector<SizeRow> rows(n_list.size());
  parallel_for(n_list.size(), jobs, [&](std::size_t i) {
    CycleSpec point = spec;
    point.params = spec.params.with_n(n_list[i]);
    rows[i] = {n_list[i], run_cycle(point)};
  });
  return rows;
}

}  // namespace mfotto
