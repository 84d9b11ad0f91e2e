#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace mfotto {

using cplx = std::complex<double>;
using OperatorMatrix = Eigen::MatrixXcd;

inline constexpr int kMinSites = 2;
inline constexpr int kMaxSites = 14;

/// Dimensionless parameters of the periodic J1-J2 chain with an electric
/// field coupled to the z vector chirality.
///
/// Energies are in units of the exchange J; `b` is the Zeeman energy and
/// `e_field` the chirality coupling d (electric field times magnetoelectric
/// constant). The defaults follow the frustrated convention J1 = -J2 = 1.
struct ChainParams {
  int n = 4;
  double j1 = 1.0;
  double j2 = -1.0;
  double b = 0.0;
  double e_field = 0.0;

  /// Throws ParameterError unless 2 <= n <= 14 and all couplings are finite.
  void validate() const;

  [[nodiscard]] ChainParams with_e_field(double d) const {
    ChainParams p = *this;
    p.e_field = d;
    return p;
  }
  [[nodiscard]] ChainParams with_b(double field) const {
    ChainParams p = *this;
    p.b = field;
    return p;
  }
  [[nodiscard]] ChainParams with_n(int sites) const {
    ChainParams p = *this;
    p.n = sites;
    return p;
  }
};

/// Basis convention: site 0 is the most significant bit of the state index,
/// bit value 0 is spin up (sigma^z = +1).
[[nodiscard]] inline int site_bit(std::uint32_t state, int site, int n) {
  return static_cast<int>((state >> (n - 1 - site)) & 1U);
}

/// H = -J1 sum s_i.s_{i+1} - J2 sum s_i.s_{i+2} - B sum s^z_i - d K with
/// Pauli matrices and periodic indices.
[[nodiscard]] OperatorMatrix build_hamiltonian(const ChainParams& params);

/// K = sum_i (s_i x s_{i+1})_z over the periodic ring.
[[nodiscard]] OperatorMatrix build_chirality_operator(int n);

/// Diagonal matrix of sum_i s^z_i.
[[nodiscard]] OperatorMatrix build_total_sz(int n);

/// Cyclic one-site translation |s_0 s_1 ... s_{n-1}> -> |s_{n-1} s_0 ...>.
[[nodiscard]] OperatorMatrix build_translation(int n);

/// Total sigma^z eigenvalue of a computational basis state.
[[nodiscard]] int magnetization(std::uint32_t state, int n);

/// max_ij |M - M^dagger|_ij
[[nodiscard]] double hermiticity_defect(const OperatorMatrix& m);

}  // namespace mfotto
