#pragma once

#include <functional>

#include "mfotto/correlations.hpp"

namespace mfotto {

enum class Field { Magnetic, Electric };

/// Uhlmann fidelity tr sqrt(sqrt(rho0) rho1 sqrt(rho0)), evaluated as the
/// trace norm of sqrt(rho0) sqrt(rho1). Throws ParameterError on mismatched
/// dimensions.
[[nodiscard]] double uhlmann_fidelity(const DensityMatrix& rho0, const DensityMatrix& rho1);

/// Finite-difference step used for a field of magnitude `zeta`.
[[nodiscard]] double susceptibility_step(double zeta);

/// -d^2F/dzeta^2 from free-energy increments delta_f(h) = F(zeta + h) - F(zeta):
/// central second difference with step h and one Richardson level.
[[nodiscard]] double second_difference(const std::function<double(double)>& delta_f, double h);

/// chi(zeta) = -d^2F/dzeta^2 at temperature t for the chain `params`.
[[nodiscard]] double susceptibility(const ChainParams& params, Field field, double t);

/// Leading-order fidelity exp(-beta dzeta^2 chi / 8).
[[nodiscard]] double fidelity_quadratic_approx(double beta, double dzeta, double chi);

}  // namespace mfotto
