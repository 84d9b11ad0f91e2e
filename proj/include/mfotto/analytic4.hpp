#pragma once

#include <array>
#include <complex>

namespace mfotto::analytic4 {

/// Closed-form energies E1..E16 of the four-site ring with J1 = j, J2 = -j,
/// in the fixed labelling of the eigenfunction table (index 0 holds E1).
using Levels = std::array<double, 16>;

[[nodiscard]] Levels spectrum4(double j, double b, double d);

/// Which printed form of d2 to use. `Corrected` follows from the eigenvectors;
/// `AsPrinted` reproduces the published expression and exists for diagnostics.
enum class D2Form { Corrected, AsPrinted };

/// Everything the closed forms need at one (j, b, d, t) point. Exponentials
/// are exp(-(E_n - E_min)/t), shared by all sums, so `z` is the shifted
/// partition sum and the coefficients carry the same factor exp(E_min/t).
struct Derived {
  double j = 1.0, b = 0.0, d = 0.0, t = 1.0;
  double alpha2 = 0.0, gamma2 = 0.0;
  double alpha2_mu = 0.0, alpha2_mu2 = 0.0;    ///< alpha^2 mu, alpha^2 mu^2
  double gamma2_lambda = 0.0, gamma2_lambda2 = 0.0;
  Levels energies{};
  Levels weights{};
  double e_min = 0.0;
  double a1 = 0.0, b1 = 0.0, d1 = 0.0;
  std::complex<double> c1;
  double a2 = 0.0, b2 = 0.0, c2 = 0.0, d2 = 0.0;
  double q = 0.0;
  double z = 0.0;

  [[nodiscard]] double log_z() const;
};

/// Coefficient functions at temperature t > 0; |d| < 1e-12 uses the
/// field-free eigenvectors.
[[nodiscard]] Derived coeffs4(double j, double b, double d, double t, D2Form form = D2Form::Corrected);

struct PairConcurrences {
  double c12 = 0.0;  ///< nearest neighbours (equal to C14)
  double c13 = 0.0;  ///< next-nearest neighbours
};

[[nodiscard]] PairConcurrences concurrences4(const Derived& der);
[[nodiscard]] double two_tangle4(const Derived& der);
[[nodiscard]] double one_tangle4(const Derived& der);
[[nodiscard]] double chirality4(const Derived& der);

/// -d^2F/dB^2 and -d^2F/dd^2 in closed form.
[[nodiscard]] double chi_b4(double j, double b, double d, double t);
[[nodiscard]] double chi_e4(double j, double b, double d, double t);

}  // namespace mfotto::analytic4
