#include "mfotto/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>
#include <utility>

#include "mfotto/errors.hpp"

namespace mfotto {

namespace {

double matrix_scale(const OperatorMatrix& h) {
  return h.size() ? std::max(1.0, h.cwiseAbs().maxCoeff()) : 1.0;
}

void check_inputs(const OperatorMatrix& h, const OperatorMatrix& sz) {
  if (h.rows() != h.cols() || sz.rows() != h.rows() || sz.cols() != h.cols()) {
    throw NumericError("diagonalize: Hamiltonian and Sz must be square and of equal size");
  }
  const double tol = 1e-10 * matrix_scale(h);
  if (hermiticity_defect(h) > tol) throw NumericError("diagonalize: Hamiltonian is not Hermitian");
  const auto dim = h.rows();
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (i != j && sz(i, j) != cplx{}) throw NumericError("diagonalize: Sz must be diagonal");
      if (std::abs(sz(i, i).real() - sz(j, j).real()) > 0.5 && std::abs(h(i, j)) > tol) {
        throw NumericError("diagonalize: Hamiltonian does not conserve Sz");
      }
    }
  }
}

struct Level {
  double energy;
  int sector;
  Eigen::VectorXcd vector;
};

Spectrum assemble(std::vector<Level> levels, Eigen::Index dim) {
  std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) {
    return std::tie(a.energy, a.sector) < std::tie(b.energy, b.sector);
  });
  Spectrum out;
  out.energies.resize(dim);
  out.states.resize(dim, dim);
  out.sz_sector.resize(static_cast<std::size_t>(dim));
  for (Eigen::Index k = 0; k < dim; ++k) {
    auto& level = levels[static_cast<std::size_t>(k)];
    out.energies(k) = level.energy;
    out.states.col(k) = std::move(level.vector);
    out.sz_sector[static_cast<std::size_t>(k)] = level.sector;
  }
  return out;
}

Spectrum diagonalize_sectors(const OperatorMatrix& h, const OperatorMatrix& sz) {
  const auto dim = h.rows();
  std::map<int, std::vector<Eigen::Index>> sectors;
  for (Eigen::Index i = 0; i < dim; ++i) {
    sectors[static_cast<int>(std::lround(sz(i, i).real()))].push_back(i);
  }
  std::vector<Level> levels;
  levels.reserve(static_cast<std::size_t>(dim));
  for (const auto& [label, basis] : sectors) {
    const auto k = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd block(k, k);
    for (Eigen::Index c = 0; c < k; ++c) {
      for (Eigen::Index r = 0; r < k; ++r) block(r, c) = h(basis[r], basis[c]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(block);
    if (solver.info() != Eigen::Success) throw NumericError("diagonalize: eigensolver did not converge");
    for (Eigen::Index c = 0; c < k; ++c) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
      for (Eigen::Index r = 0; r < k; ++r) v(basis[r]) = solver.eigenvectors()(r, c);
      levels.push_back({solver.eigenvalues()(c), label, std::move(v)});
    }
  }
  return assemble(std::move(levels), dim);
}

Spectrum diagonalize_dense(const OperatorMatrix& h, const OperatorMatrix& sz) {
  const auto dim = h.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericError("diagonalize: eigensolver did not converge");
  const Eigen::VectorXd szd = sz.diagonal().real();
  std::vector<Level> levels;
  levels.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index c = 0; c < dim; ++c) {
    const Eigen::VectorXcd v = solver.eigenvectors().col(c);
    const double m = v.cwiseAbs2().dot(szd);
    levels.push_back({solver.eigenvalues()(c), static_cast<int>(std::lround(m)), v});
  }
  return assemble(std::move(levels), dim);
}

// Consecutive levels closer than this are treated as one degenerate cluster.
bool degenerate(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

std::vector<std::vector<int>> clusters_of(const Spectrum& s, const std::vector<int>& levels) {
  std::vector<std::vector<int>> out;
  for (int level : levels) {
    if (!out.empty() && degenerate(s.energies(out.back().back()), s.energies(level))) {
      out.back().push_back(level);
    } else {
      out.push_back({level});
    }
  }
  return out;
}

// Matches every level of `prev` to a level of `next` sector by sector.
// Returns false when some level cannot be matched with overlap >= 0.7.
// Degenerate clusters of `next` are rotated onto the matched `prev` states.
bool match_levels(const Spectrum& prev, Spectrum& next, std::vector<int>& map) {
  const auto dim = prev.size();
  const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(dim))));
  map.assign(static_cast<std::size_t>(dim), -1);
  std::map<int, std::pair<std::vector<int>, std::vector<int>>> sectors;
  for (Eigen::Index k = 0; k < dim; ++k) {
    sectors[prev.sz_sector[static_cast<std::size_t>(k)]].first.push_back(static_cast<int>(k));
    sectors[next.sz_sector[static_cast<std::size_t>(k)]].second.push_back(static_cast<int>(k));
  }
  const double min_weight = kMinContinuationOverlap * kMinContinuationOverlap;
  for (const auto& [label, lists] : sectors) {
    const auto& [from, to] = lists;
    if (from.size() != to.size()) return false;
    const auto prev_clusters = clusters_of(prev, from);
    const auto next_clusters = clusters_of(next, to);
    const auto np = prev_clusters.size();
    const auto nn = next_clusters.size();

    // Overlaps restricted to the sector's basis states.
    std::vector<Eigen::Index> rows;
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (magnetization(static_cast<std::uint32_t>(r), n) == label) rows.push_back(r);
    }
    const auto k = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXcd vp(k, static_cast<Eigen::Index>(from.size()));
    Eigen::MatrixXcd vn(k, static_cast<Eigen::Index>(to.size()));
    for (Eigen::Index r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < from.size(); ++c) {
        vp(r, static_cast<Eigen::Index>(c)) = prev.states(rows[r], from[c]);
        vn(r, static_cast<Eigen::Index>(c)) = next.states(rows[r], to[c]);
      }
    }
    const Eigen::MatrixXd overlap2 = (vp.adjoint() * vn).cwiseAbs2();
    std::map<int, Eigen::Index> pos_from, pos_to;
    for (std::size_t c = 0; c < from.size(); ++c) pos_from[from[c]] = static_cast<Eigen::Index>(c);
    for (std::size_t c = 0; c < to.size(); ++c) pos_to[to[c]] = static_cast<Eigen::Index>(c);

    struct Pair {
      double weight;
      std::size_t p, c;
    };
    std::vector<Pair> pairs;
    for (std::size_t p = 0; p < np; ++p) {
      for (std::size_t c = 0; c < nn; ++c) {
        double w = 0.0;
        for (int i : prev_clusters[p]) {
          for (int j : next_clusters[c]) w += overlap2(pos_from.at(i), pos_to.at(j));
        }
        if (w >= min_weight) pairs.push_back({w, p, c});
      }
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
      if (a.weight != b.weight) return a.weight > b.weight;
      return std::tie(a.p, a.c) < std::tie(b.p, b.c);
    });

    std::vector<std::size_t> cap_p(np), cap_c(nn);
    for (std::size_t p = 0; p < np; ++p) cap_p[p] = prev_clusters[p].size();
    for (std::size_t c = 0; c < nn; ++c) cap_c[c] = next_clusters[c].size();
    std::vector<std::vector<std::size_t>> flow(np, std::vector<std::size_t>(nn, 0));
    for (const auto& pr : pairs) {
      // each matched level needs at least min_weight of overlap mass
      const auto units = static_cast<std::size_t>(std::floor(pr.weight + (1.0 - min_weight)));
      const auto f = std::min({units, cap_p[pr.p], cap_c[pr.c]});
      flow[pr.p][pr.c] += f;
      cap_p[pr.p] -= f;
      cap_c[pr.c] -= f;
    }
    if (std::any_of(cap_p.begin(), cap_p.end(), [](std::size_t c) { return c != 0; })) return false;

    // members of a prev cluster go to the next cluster they overlap most
    std::vector<std::vector<int>> incoming(nn);
    for (std::size_t p = 0; p < np; ++p) {
      struct Candidate {
        double weight;
        std::size_t member, c;
      };
      std::vector<Candidate> cand;
      for (std::size_t m = 0; m < prev_clusters[p].size(); ++m) {
        for (std::size_t c = 0; c < nn; ++c) {
          if (flow[p][c] == 0) continue;
          double w = 0.0;
          for (int j : next_clusters[c]) w += overlap2(pos_from.at(prev_clusters[p][m]), pos_to.at(j));
          cand.push_back({w, m, c});
        }
      }
      std::stable_sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) { return a.weight > b.weight; });
      std::vector<bool> placed(prev_clusters[p].size(), false);
      for (const auto& cd : cand) {
        if (placed[cd.member] || flow[p][cd.c] == 0) continue;
        placed[cd.member] = true;
        --flow[p][cd.c];
        incoming[cd.c].push_back(prev_clusters[p][cd.member]);
      }
    }

    // rotate each degenerate cluster onto the incoming vectors so that the
    // states keep their identity through exact crossings
    for (std::size_t c = 0; c < nn; ++c) {
      const auto& members = next_clusters[c];
      const auto m = static_cast<Eigen::Index>(members.size());
      if (static_cast<Eigen::Index>(incoming[c].size()) != m) return false;
      if (m > 1) {
        Eigen::MatrixXcd vn_c(dim, m), vp_s(dim, m);
        for (Eigen::Index q = 0; q < m; ++q) {
          vn_c.col(q) = next.states.col(members[static_cast<std::size_t>(q)]);
          vp_s.col(q) = prev.states.col(incoming[c][static_cast<std::size_t>(q)]);
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vn_c.adjoint() * vp_s, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Eigen::MatrixXcd aligned = vn_c * (svd.matrixU() * svd.matrixV().adjoint());
        for (Eigen::Index q = 0; q < m; ++q) next.states.col(members[static_cast<std::size_t>(q)]) = aligned.col(q);
      }
      for (Eigen::Index q = 0; q < m; ++q) {
        map[static_cast<std::size_t>(incoming[c][static_cast<std::size_t>(q)])] = members[static_cast<std::size_t>(q)];
      }
    }
  }
  return std::none_of(map.begin(), map.end(), [](int v) { return v < 0; });
}

std::pair<LevelMap, Spectrum> advance(const ChainParams& params, const Spectrum& current, double from,
                                      double to, int depth, const OperatorMatrix& sz) {
  Spectrum next = diagonalize(build_hamiltonian(params.with_e_field(to)), sz);
  LevelMap step;
  if (match_levels(current, next, step.permutation)) return {std::move(step), std::move(next)};
  if (depth >= kMaxContinuationRefinement) {
    throw ContinuationError("continue_levels: unresolved level crossing between e_field=" +
                            std::to_string(from) + " and " + std::to_string(to));
  }
  const double mid = 0.5 * (from + to);
  auto [first, mid_spectrum] = advance(params, current, from, mid, depth + 1, sz);
  auto [second, end_spectrum] = advance(params, mid_spectrum, mid, to, depth + 1, sz);
  return {first.then(second), std::move(end_spectrum)};
}

}  // namespace

Spectrum diagonalize(const OperatorMatrix& h, const OperatorMatrix& sz, Blocking blocking) {
  check_inputs(h, sz);
  return blocking == Blocking::Sectors ? diagonalize_sectors(h, sz) : diagonalize_dense(h, sz);
}

SpectrumPtr solve(const ChainParams& params) {
  return std::make_shared<const Spectrum>(diagonalize(build_hamiltonian(params), build_total_sz(params.n)));
}

LevelMap LevelMap::inverse() const {
  LevelMap out;
  out.permutation.assign(permutation.size(), -1);
  for (std::size_t i = 0; i < permutation.size(); ++i) {
    out.permutation[static_cast<std::size_t>(permutation[i])] = static_cast<int>(i);
  }
  return out;
}

LevelMap LevelMap::then(const LevelMap& next) const {
  LevelMap out;
  out.permutation.resize(permutation.size());
  for (std::size_t i = 0; i < permutation.size(); ++i) {
    out.permutation[i] = next.permutation.at(static_cast<std::size_t>(permutation[i]));
  }
  return out;
}

bool LevelMap::is_identity() const {
  for (std::size_t i = 0; i < permutation.size(); ++i) {
    if (permutation[i] != static_cast<int>(i)) return false;
  }
  return true;
}

int default_continuation_steps(double d_from, double d_to) {
  return std::max(1, static_cast<int>(std::ceil(kDefaultStepsPerUnitField * std::abs(d_to - d_from))));
}

LevelMap continue_levels(const ChainParams& params, double d_from, double d_to, int steps) {
  params.validate();
  if (steps < 1) throw ParameterError("continue_levels: steps must be >= 1");
  if (!std::isfinite(d_from) || !std::isfinite(d_to)) throw ParameterError("continue_levels: non-finite field");
  LevelMap total;
  total.permutation.resize(std::size_t{1} << params.n);
  std::iota(total.permutation.begin(), total.permutation.end(), 0);
  if (d_from == d_to) return total;

  const OperatorMatrix sz = build_total_sz(params.n);
  Spectrum current = diagonalize(build_hamiltonian(params.with_e_field(d_from)), sz);
  for (int k = 0; k < steps; ++k) {
    const double a = d_from + (d_to - d_from) * k / steps;
    const double b = k + 1 == steps ? d_to : d_from + (d_to - d_from) * (k + 1) / steps;
    auto [step, next] = advance(params, current, a, b, 0, sz);
    total = total.then(step);
    current = std::move(next);
  }
  return total;
}

}  // namespace mfotto
