#pragma once

#include <memory>
#include <vector>

#include "mfotto/model.hpp"

namespace mfotto {

/// Eigen-decomposition of a chain Hamiltonian.
///
/// Columns of `states` are orthonormal eigenvectors ordered like `energies`
/// (ascending). With sector blocking each eigenvector lives in one total-Sz
/// sector whose eigenvalue is stored in `sz_sector`.
struct Spectrum {
  Eigen::VectorXd energies;
  Eigen::MatrixXcd states;
  std::vector<int> sz_sector;

  [[nodiscard]] Eigen::Index size() const { return energies.size(); }
  [[nodiscard]] double ground_energy() const { return energies.size() ? energies(0) : 0.0; }
};

using SpectrumPtr = std::shared_ptr<const Spectrum>;

enum class Blocking {
  Sectors,  ///< diagonalize each Sz block separately (default, required for n > 8)
  Dense,    ///< one dense eigensolve; sector labels from rounded <Sz>
};

/// Diagonalize `h`, which must be Hermitian and commute with the diagonal
/// operator `sz`. Throws NumericError on violated preconditions.
[[nodiscard]] Spectrum diagonalize(const OperatorMatrix& h, const OperatorMatrix& sz,
                                   Blocking blocking = Blocking::Sectors);

/// Build and diagonalize the chain Hamiltonian for `params`.
[[nodiscard]] SpectrumPtr solve(const ChainParams& params);

/// Permutation from level indices at e_field = d_from to level indices at
/// e_field = d_to (map[i_from] = i_to).
struct LevelMap {
  std::vector<int> permutation;

  [[nodiscard]] int operator()(int level) const { return permutation.at(level); }
  [[nodiscard]] LevelMap inverse() const;
  [[nodiscard]] LevelMap then(const LevelMap& next) const;
  [[nodiscard]] bool is_identity() const;
};

inline constexpr double kMinContinuationOverlap = 0.7;
inline constexpr int kMaxContinuationRefinement = 10;
inline constexpr int kDefaultStepsPerUnitField = 64;

/// Default number of continuation steps between two field values.
[[nodiscard]] int default_continuation_steps(double d_from, double d_to);

/// Follow every level adiabatically while the electric coupling changes from
/// d_from to d_to in `steps` equal increments. Consecutive eigenvectors are
/// matched within each Sz sector by maximal overlap; an increment whose
/// matching has an overlap below 0.7 is subdivided (up to 2^10 times).
/// Throws ContinuationError when a crossing cannot be resolved.
[[nodiscard]] LevelMap continue_levels(const ChainParams& params, double d_from, double d_to,
                                       int steps);

}  // namespace mfotto
