#include "mfotto/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>

#include "mfotto/errors.hpp"

namespace mfotto {

namespace {

// Principal square root of a positive semidefinite matrix; eigenvalues down
// to -1e-10 are treated as round-off and clamped to zero.
Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (m + m.adjoint()));
  if (solver.info() != Eigen::Success) throw NumericError("matrix square root: eigensolver failed");
  const Eigen::VectorXd roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace

DensityMatrix density_matrix(const GibbsState& g) {
  if (!g.spectrum) throw ParameterError("density_matrix: Gibbs state without spectrum");
  const Eigen::MatrixXcd& v = g.spectrum->states;
  DensityMatrix rho;
  rho.entries = v * g.populations.cast<cplx>().asDiagonal() * v.adjoint();
  const auto dim = v.rows();
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  rho.sites.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) rho.sites[static_cast<std::size_t>(i)] = i;
  return rho;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int k = static_cast<int>(rho.sites.size());
  if (keep.empty()) throw ParameterError("partial_trace: keep list is empty");
  if (std::set<int>(keep.begin(), keep.end()).size() != keep.size()) {
    throw ParameterError("partial_trace: duplicate sites in keep list");
  }
  // bit position (from the most significant end) of every kept site
  std::vector<int> kept_pos;
  for (int site : keep) {
    const auto it = std::find(rho.sites.begin(), rho.sites.end(), site);
    if (it == rho.sites.end()) throw ParameterError("partial_trace: site " + std::to_string(site) + " not present");
    kept_pos.push_back(static_cast<int>(it - rho.sites.begin()));
  }
  std::vector<int> traced_pos;
  for (int p = 0; p < k; ++p) {
    if (std::find(kept_pos.begin(), kept_pos.end(), p) == kept_pos.end()) traced_pos.push_back(p);
  }

  const int nk = static_cast<int>(kept_pos.size());
  const int nt = static_cast<int>(traced_pos.size());
  const auto compose = [&](std::uint32_t a, std::uint32_t t) {
    std::uint32_t full = 0;
    for (int q = 0; q < nk; ++q) {
      const std::uint32_t bit = (a >> (nk - 1 - q)) & 1U;
      full |= bit << (k - 1 - kept_pos[static_cast<std::size_t>(q)]);
    }
    for (int q = 0; q < nt; ++q) {
      const std::uint32_t bit = (t >> (nt - 1 - q)) & 1U;
      full |= bit << (k - 1 - traced_pos[static_cast<std::size_t>(q)]);
    }
    return static_cast<Eigen::Index>(full);
  };

  const auto dk = Eigen::Index{1} << nk;
  const auto dt = Eigen::Index{1} << nt;
  std::vector<Eigen::Index> index(static_cast<std::size_t>(dk * dt));
  for (Eigen::Index a = 0; a < dk; ++a) {
    for (Eigen::Index t = 0; t < dt; ++t) {
      index[static_cast<std::size_t>(a * dt + t)] = compose(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(t));
    }
  }
  DensityMatrix out;
  out.entries = Eigen::MatrixXcd::Zero(dk, dk);
  out.sites.assign(keep.begin(), keep.end());
  for (Eigen::Index b = 0; b < dk; ++b) {
    for (Eigen::Index a = 0; a < dk; ++a) {
      cplx sum{};
      for (Eigen::Index t = 0; t < dt; ++t) {
        sum += rho.entries(index[static_cast<std::size_t>(a * dt + t)], index[static_cast<std::size_t>(b * dt + t)]);
      }
      out.entries(a, b) = sum;
    }
  }
  return out;
}

double concurrence(const DensityMatrix& rho_pair) {
  if (rho_pair.dim() != 4 || rho_pair.entries.cols() != 4) {
    throw ParameterError("concurrence: expected a 4x4 two-site density matrix");
  }
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  // sqrt of the eigenvalues of sqrt(rho) rho~ sqrt(rho) are the singular values
  // of sqrt(rho) sqrt(rho~), which avoids square roots of round-off
  const Eigen::Matrix4cd root = psd_sqrt(rho_pair.entries);
  const Eigen::Matrix4cd flipped_root = yy * root.conjugate() * yy;
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(root * flipped_root);
  Eigen::Vector4d s = svd.singularValues();
  std::sort(s.data(), s.data() + 4, std::greater<>());
  return std::clamp(s(0) - s(1) - s(2) - s(3), 0.0, 1.0);
}

std::vector<double> concurrence_by_distance(const DensityMatrix& rho) {
  const int n = static_cast<int>(rho.sites.size());
  std::vector<double> out;
  for (int r = 1; r <= n / 2; ++r) {
    const int pair[2] = {rho.sites[0], rho.sites[static_cast<std::size_t>(r)]};
    out.push_back(concurrence(partial_trace(rho, pair)));
  }
  return out;
}

double two_tangle(const DensityMatrix& rho, int n) {
  if (static_cast<int>(rho.sites.size()) != n) throw ParameterError("two_tangle: expected the full chain state");
  const auto c = concurrence_by_distance(rho);
  double tau = 0.0;
  for (int r = 1; r <= n / 2; ++r) {
    const double multiplicity = (n % 2 == 0 && r == n / 2) ? 1.0 : 2.0;
    tau += multiplicity * c[static_cast<std::size_t>(r - 1)] * c[static_cast<std::size_t>(r - 1)];
  }
  return tau;
}

double one_tangle(const DensityMatrix& rho) {
  const int site[1] = {0};
  const auto single = partial_trace(rho, site);
  const cplx det = single.entries(0, 0) * single.entries(1, 1) - single.entries(0, 1) * single.entries(1, 0);
  return std::clamp(4.0 * det.real(), 0.0, 1.0);
}

double chirality_expectation(const DensityMatrix& rho, const OperatorMatrix& k) {
  if (k.rows() != rho.dim()) throw ParameterError("chirality_expectation: dimension mismatch");
  // tr(rho K) = sum_ij rho_ij K_ji
  return (rho.entries.transpose().cwiseProduct(k)).sum().real();
}

double thermal_two_tangle(SpectrumPtr spec, int n, double t) {
  return two_tangle(density_matrix(gibbs(std::move(spec), t)), n);
}

double threshold_temperature(const ChainParams& params, double t_lo, double t_hi) {
  params.validate();
  if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw ParameterError("threshold_temperature: need 0 < t_lo < t_hi");
  const SpectrumPtr spec = solve(params);
  const auto entangled = [&](double t) { return thermal_two_tangle(spec, params.n, t) > kTwoTangleZero; };
  if (!entangled(t_lo) || entangled(t_hi)) {
    throw NoThresholdError("threshold_temperature: two-tangle does not vanish inside [" + std::to_string(t_lo) +
                           ", " + std::to_string(t_hi) + "]");
  }
  double lo = t_lo;
  double hi = t_hi;
  while (hi - lo > kThresholdResolution) {
    const double mid = 0.5 * (lo + hi);
    (entangled(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace mfotto
