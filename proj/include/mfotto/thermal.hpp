#pragma once

#include "mfotto/spectra.hpp"

namespace mfotto {

/// Canonical (Gibbs) state at temperature `temperature` (k_B = 1).
///
/// Boltzmann weights are evaluated relative to the ground energy, so
/// `z_shifted` = Z * exp(E_min / T) and `log_z` = ln Z.
struct GibbsState {
  double temperature = 1.0;
  double z_shifted = 1.0;
  double log_z = 0.0;
  Eigen::VectorXd populations;
  SpectrumPtr spectrum;

  [[nodiscard]] double beta() const { return 1.0 / temperature; }
};

/// Gibbs populations of `spec` at temperature t > 0; throws ParameterError otherwise.
[[nodiscard]] GibbsState gibbs(SpectrumPtr spec, double t);

/// Populations only, for callers that hold a bare energy vector.
[[nodiscard]] Eigen::VectorXd gibbs_populations(const Eigen::VectorXd& energies, double t);

/// U = sum_n E_n P_n.
[[nodiscard]] double internal_energy(const GibbsState& g);

/// F = -T ln Z.
[[nodiscard]] double free_energy(const Spectrum& spec, double t);
[[nodiscard]] double free_energy(const Eigen::VectorXd& energies, double t);

/// S = (U - F) / T.
[[nodiscard]] double entropy(const Spectrum& spec, double t);
[[nodiscard]] double entropy(const Eigen::VectorXd& energies, double t);

}  // namespace mfotto
