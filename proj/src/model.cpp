#include "mfotto/model.hpp"

#include <cmath>
#include <string>

#include "mfotto/errors.hpp"

namespace mfotto {

namespace {

void check_sites(int n) {
  if (n < kMinSites || n > kMaxSites) {
    throw ParameterError("site count must lie in [" + std::to_string(kMinSites) + ", " +
                         std::to_string(kMaxSites) + "], got " + std::to_string(n));
  }
}

Eigen::Index dimension(int n) { return Eigen::Index{1} << n; }

// Adds coupling * (s_i . s_j) to h. Same-site pairs (possible for n = 2 with
// next-nearest bonds) reduce to 3 * identity.
void add_exchange(OperatorMatrix& h, int n, int i, int j, double coupling) {
  const auto dim = dimension(n);
  for (Eigen::Index s = 0; s < dim; ++s) {
    const auto state = static_cast<std::uint32_t>(s);
    if (i == j) {
      h(s, s) += 3.0 * coupling;
      continue;
    }
    const int bi = site_bit(state, i, n);
    const int bj = site_bit(state, j, n);
    if (bi == bj) {
      h(s, s) += coupling;
    } else {
      h(s, s) -= coupling;
      const std::uint32_t flipped = state ^ (1U << (n - 1 - i)) ^ (1U << (n - 1 - j));
      h(static_cast<Eigen::Index>(flipped), s) += 2.0 * coupling;
    }
  }
}

// (s_i x s_j)_z = 2i (s+_i s-_j - s-_i s+_j), s+ = |up><down|.
void add_chirality_bond(OperatorMatrix& k, int n, int i, int j, double coupling) {
  if (i == j) return;
  const auto dim = dimension(n);
  for (Eigen::Index s = 0; s < dim; ++s) {
    const auto state = static_cast<std::uint32_t>(s);
    const int bi = site_bit(state, i, n);
    const int bj = site_bit(state, j, n);
    if (bi == bj) continue;
    const std::uint32_t flipped = state ^ (1U << (n - 1 - i)) ^ (1U << (n - 1 - j));
    // bi == 1 (i down, j up): s+_i s-_j acts with +2i.
    const cplx amp = bi == 1 ? cplx{0.0, 2.0} : cplx{0.0, -2.0};
    k(static_cast<Eigen::Index>(flipped), s) += coupling * amp;
  }
}

}  // namespace

void ChainParams::validate() const {
  check_sites(n);
  if (!std::isfinite(j1) || !std::isfinite(j2) || !std::isfinite(b) || !std::isfinite(e_field)) {
    throw ParameterError("chain couplings must be finite");
  }
}

int magnetization(std::uint32_t state, int n) {
  int m = 0;
  for (int i = 0; i < n; ++i) m += site_bit(state, i, n) == 0 ? 1 : -1;
  return m;
}

OperatorMatrix build_hamiltonian(const ChainParams& params) {
  params.validate();
  const int n = params.n;
  const auto dim = dimension(n);
  OperatorMatrix h = OperatorMatrix::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    add_exchange(h, n, i, (i + 1) % n, -params.j1);
    add_exchange(h, n, i, (i + 2) % n, -params.j2);
  }
  for (Eigen::Index s = 0; s < dim; ++s) {
    h(s, s) -= params.b * magnetization(static_cast<std::uint32_t>(s), n);
  }
  if (params.e_field != 0.0) {
    for (int i = 0; i < n; ++i) add_chirality_bond(h, n, i, (i + 1) % n, -params.e_field);
  }
  return h;
}

OperatorMatrix build_chirality_operator(int n) {
  check_sites(n);
  const auto dim = dimension(n);
  OperatorMatrix k = OperatorMatrix::Zero(dim, dim);
  for (int i = 0; i < n; ++i) add_chirality_bond(k, n, i, (i + 1) % n, 1.0);
  return k;
}

OperatorMatrix build_total_sz(int n) {
  check_sites(n);
  const auto dim = dimension(n);
  OperatorMatrix sz = OperatorMatrix::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) sz(s, s) = magnetization(static_cast<std::uint32_t>(s), n);
  return sz;
}

OperatorMatrix build_translation(int n) {
  check_sites(n);
  const auto dim = dimension(n);
  OperatorMatrix t = OperatorMatrix::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    const auto state = static_cast<std::uint32_t>(s);
    // Site i moves to site i + 1: the last site's bit becomes the leading bit.
    const std::uint32_t last = state & 1U;
    const std::uint32_t shifted = (state >> 1) | (last << (n - 1));
    t(static_cast<Eigen::Index>(shifted), s) = 1.0;
  }
  return t;
}

double hermiticity_defect(const OperatorMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace mfotto
