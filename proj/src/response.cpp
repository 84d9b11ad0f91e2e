#include "mfotto/response.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "mfotto/errors.hpp"

namespace mfotto {

namespace {

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (m + m.adjoint()));
  if (solver.info() != Eigen::Success) throw NumericError("fidelity: eigensolver failed");
  const Eigen::VectorXd roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
}

// F(E') - F(E) = -T ln sum_n P_n exp(-(E'_n - E_n)/T) for any pairing of levels.
double free_energy_shift(const Eigen::VectorXd& populations, const Eigen::VectorXd& shift, double t) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < populations.size(); ++i) s += populations(i) * std::expm1(-shift(i) / t);
  return -t * std::log1p(s);
}

// Index groups of the connected components of the joint nonzero pattern.
// Thermal states that conserve Sz split into one group per sector.
std::vector<std::vector<Eigen::Index>> blocks_of(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const auto dim = a.rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(dim));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  const auto find = [&](Eigen::Index i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
    return i;
  };
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < c; ++r) {
      if (a(r, c) != 0.0 || b(r, c) != 0.0) parent[static_cast<std::size_t>(find(r))] = find(c);
    }
  }
  std::vector<std::vector<Eigen::Index>> groups(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) groups[static_cast<std::size_t>(find(i))].push_back(i);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return groups;
}

}  // namespace

double uhlmann_fidelity(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  if (rho0.dim() != rho1.dim() || rho0.entries.cols() != rho1.entries.cols()) {
    throw ParameterError("uhlmann_fidelity: dimension mismatch");
  }
  double total = 0.0;
  for (const auto& idx : blocks_of(rho0.entries, rho1.entries)) {
    const Eigen::MatrixXcd product = psd_sqrt(rho0.entries(idx, idx)) * psd_sqrt(rho1.entries(idx, idx));
    // BDCSVD can return NaN on nearly rank-one products; Jacobi is robust here
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(product);
    total += svd.singularValues().sum();
  }
  return total;
}

double susceptibility_step(double zeta) { return 1e-3 * std::max(1.0, std::abs(zeta)); }

double second_difference(const std::function<double(double)>& delta_f, double h) {
  const auto d2 = [&](double step) { return (delta_f(step) + delta_f(-step)) / (step * step); };
  const double richardson = (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
  return -richardson;
}

double susceptibility(const ChainParams& params, Field field, double t) {
  params.validate();
  if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("susceptibility: temperature must be positive");
  const SpectrumPtr spec = solve(params);
  const Eigen::VectorXd p = gibbs(spec, t).populations;

  if (field == Field::Magnetic) {
    // H commutes with Sz, so E_n(B + h) = E_n(B) - h m_n exactly
    Eigen::VectorXd m(spec->size());
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = spec->sz_sector[static_cast<std::size_t>(i)];
    const auto delta_f = [&](double h) { return free_energy_shift(p, -h * m, t); };
    return second_difference(delta_f, susceptibility_step(params.b));
  }

  const auto delta_f = [&](double h) {
    const SpectrumPtr shifted = solve(params.with_e_field(params.e_field + h));
    return free_energy_shift(p, shifted->energies - spec->energies, t);
  };
  return second_difference(delta_f, susceptibility_step(params.e_field));
}

double fidelity_quadratic_approx(double beta, double dzeta, double chi) {
  if (!(beta > 0.0)) throw ParameterError("fidelity_quadratic_approx: beta must be positive");
  return std::exp(-beta * dzeta * dzeta * chi / 8.0);
}

}  // namespace mfotto
