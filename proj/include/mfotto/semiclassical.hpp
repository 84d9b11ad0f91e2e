#pragma once

#include <array>

#include "mfotto/analytic4.hpp"

namespace mfotto {

/// Field-free four-site levels used by the high-temperature expansion in
/// the electric field. `special` lists the zero-based labels of E2, E6, E7
/// and E12, the levels carrying the second-order weight.
struct ScConfig {
  double j = 1.0;
  double b = 1.0;
  analytic4::Levels energies{};
  std::array<int, 4> special{1, 5, 6, 11};

  [[nodiscard]] static ScConfig make(double j, double b);
};

/// Value plus a flag that is false outside the perturbative domain.
struct ScValue {
  double value = 0.0;
  bool valid = true;
};

/// Fraction of the leading term above which the field correction counts as
/// non-perturbative.
inline constexpr double kScValidityFraction = 0.2;

/// F = F0 - 16 p^2 (e2 + e12 + e6 + e7) / (T Z0).
[[nodiscard]] ScValue free_energy_sc(double t, double p, const ScConfig& cfg);

/// S = -dF/dT of the expression above; flagged invalid when negative.
[[nodiscard]] ScValue entropy_sc(double t, double p, const ScConfig& cfg);

inline constexpr double kScDerivativeStep = 1e-3;
inline constexpr double kScQuadratureTolerance = 1e-8;

/// 1 - int T dS(T,p)/dT dT / int T dS(T,p1)/dT dT over [t_l, t_h].
/// Throws NumericError when the denominator vanishes.
[[nodiscard]] double efficiency_sc(double t_l, double t_h, double p, double p1, const ScConfig& cfg);

}  // namespace mfotto
