#pragma once

#include <span>
#include <vector>

#include "mfotto/thermal.hpp"

namespace mfotto {

/// Density matrix over an ordered list of chain sites. The first entry of
/// `sites` is the most significant bit of the matrix index.
struct DensityMatrix {
  Eigen::MatrixXcd entries;
  std::vector<int> sites;

  [[nodiscard]] Eigen::Index dim() const { return entries.rows(); }
};

/// rho = sum_n P_n |psi_n><psi_n| over all sites of the chain.
[[nodiscard]] DensityMatrix density_matrix(const GibbsState& g);

/// Trace out every site not listed in `keep`; the result is ordered like `keep`.
/// Throws ParameterError on empty, duplicate or unknown sites.
[[nodiscard]] DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// Wootters concurrence of a two-site state.
[[nodiscard]] double concurrence(const DensityMatrix& rho_pair);

/// Concurrence between site 0 and site r for r = 1 .. floor(n/2).
[[nodiscard]] std::vector<double> concurrence_by_distance(const DensityMatrix& rho);

/// tau_2 = sum_r m_r C(r)^2 with ring multiplicities m_r = 2, except
/// m_{n/2} = 1 for even n. Reduces to 2 C_12^2 + C_13^2 for four sites.
[[nodiscard]] double two_tangle(const DensityMatrix& rho, int n);

/// tau_1 = 4 det(rho_0), rho_0 the single-site state of site 0.
[[nodiscard]] double one_tangle(const DensityMatrix& rho);

/// Re tr(rho K).
[[nodiscard]] double chirality_expectation(const DensityMatrix& rho, const OperatorMatrix& k);

inline constexpr double kTwoTangleZero = 1e-12;
inline constexpr double kThresholdResolution = 1e-3;

/// Temperature above which tau_2 vanishes, bracketed by [t_lo, t_hi] with
/// tau_2(t_lo) > 0 and tau_2(t_hi) == 0 (below 1e-12). Bisection to 1e-3.
/// Throws NoThresholdError if the bracket does not hold.
[[nodiscard]] double threshold_temperature(const ChainParams& params, double t_lo, double t_hi);

/// tau_2 of the thermal state of `spec` at temperature t.
[[nodiscard]] double thermal_two_tangle(SpectrumPtr spec, int n, double t);

}  // namespace mfotto
