#include "mfotto/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "mfotto/analytic4.hpp"
#include "mfotto/parallel.hpp"
#include "mfotto/response.hpp"

namespace mfotto {

namespace {

double mixed(double x, double ref, double floor = 1.0) { return std::abs(x - ref) / std::max(floor, std::abs(ref)); }

struct Accumulator {
  std::vector<std::string> order;
  std::map<std::string, Check> checks;

  void add(const std::string& name, double deviation, double tolerance) {
    auto [it, inserted] = checks.try_emplace(name, Check{name, 0.0, tolerance, 0});
    if (inserted) order.push_back(name);
    Check& c = it->second;
    // NaN must fail the check
    if (std::isnan(deviation)) deviation = std::numeric_limits<double>::infinity();
    c.max_deviation = std::max(c.max_deviation, deviation);
    ++c.samples;
  }
  void merge(const Accumulator& other) {
    for (const auto& name : other.order) {
      const Check& c = other.checks.at(name);
      auto [it, inserted] = checks.try_emplace(name, Check{name, 0.0, c.tolerance, 0});
      if (inserted) order.push_back(name);
      it->second.max_deviation = std::max(it->second.max_deviation, c.max_deviation);
      it->second.samples += c.samples;
    }
  }
  Report report() const {
    Report r;
    for (const auto& name : order) r.checks.push_back(checks.at(name));
    return r;
  }
};

Eigen::Matrix4cd analytic_pair(const std::complex<double>& off, double a, double b, double c, double d, double z) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  m(3, 3) = d;
  m(1, 2) = off;
  m(2, 1) = std::conj(off);
  return m / z;
}

void oracle_point(double j, double b, double d, double t, double perturb, Accumulator& acc) {
  const ChainParams params{4, j, -j, b, d};
  auto numeric = std::make_shared<Spectrum>(*solve(params));
  numeric->energies(0) += perturb;
  const SpectrumPtr spec = numeric;
  const auto der = analytic4::coeffs4(j, b, d, t);

  auto closed = der.energies;
  std::sort(closed.begin(), closed.end());
  double dev = 0.0;
  for (std::size_t i = 0; i < 16; ++i) dev = std::max(dev, mixed(spec->energies(static_cast<Eigen::Index>(i)), closed[i]));
  acc.add("spectrum", dev, kOracleTolerance);

  const GibbsState g = gibbs(spec, t);
  acc.add("partition_function", std::abs(g.log_z - der.log_z()), kOracleTolerance);

  const DensityMatrix rho = density_matrix(g);
  const int near[2] = {0, 1};
  const int next[2] = {0, 2};
  const DensityMatrix r12 = partial_trace(rho, near);
  const DensityMatrix r13 = partial_trace(rho, next);
  const Eigen::Matrix4cd a12 = analytic_pair(der.c1, der.a1, der.b1, der.b1, der.d1, der.z);
  const Eigen::Matrix4cd a13 = analytic_pair(der.d2, der.a2, der.c2, der.c2, der.b2, der.z);
  acc.add("reduced_coefficients",
          std::max((r12.entries - a12).cwiseAbs().maxCoeff(), (r13.entries - a13).cwiseAbs().maxCoeff()),
          kOracleTolerance);

  const auto c = analytic4::concurrences4(der);
  const auto by_distance = concurrence_by_distance(rho);
  acc.add("concurrence_c12", mixed(by_distance[0], c.c12), kOracleTolerance);
  acc.add("concurrence_c13", mixed(by_distance[1], c.c13), kOracleTolerance);
  acc.add("one_tangle", mixed(one_tangle(rho), analytic4::one_tangle4(der)), kOracleTolerance);
  acc.add("two_tangle", mixed(two_tangle(rho, 4), analytic4::two_tangle4(der)), kOracleTolerance);
  acc.add("chirality", mixed(chirality_expectation(rho, build_chirality_operator(4)), analytic4::chirality4(der)),
          kOracleTolerance);

  acc.add("chi_magnetic", mixed(susceptibility(params, Field::Magnetic, t), analytic4::chi_b4(j, b, d, t), kChiFloor),
          kOracleChiTolerance);
  acc.add("chi_electric", mixed(susceptibility(params, Field::Electric, t), analytic4::chi_e4(j, b, d, t), kChiFloor),
          kOracleChiTolerance);
}

ChainParams random_params(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return {n, u(rng), u(rng), u(rng), u(rng)};
}

double commutator_norm(const OperatorMatrix& a, const OperatorMatrix& b) {
  return (a * b - b * a).cwiseAbs().maxCoeff();
}

// Largest violation of the density-matrix conditions (trace, Hermiticity, PSD).
double density_defect(const DensityMatrix& rho) {
  const double trace = std::abs(rho.entries.trace() - cplx{1.0, 0.0});
  const double herm = hermiticity_defect(rho.entries);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.entries, Eigen::EigenvaluesOnly);
  const double negative = std::max(0.0, -solver.eigenvalues().minCoeff() - 1e-10);
  return std::max({trace, herm, negative});
}

// |ln F_exact - ln F_quadratic| / dzeta^2 at one step size
double fidelity_order(const ChainParams& params, Field field, double t, double dzeta) {
  const double chi = susceptibility(params, field, t);
  const ChainParams moved =
      field == Field::Magnetic ? params.with_b(params.b + dzeta) : params.with_e_field(params.e_field + dzeta);
  const DensityMatrix rho0 = density_matrix(gibbs(solve(params), t));
  const DensityMatrix rho1 = density_matrix(gibbs(solve(moved), t));
  const double exact = std::log(uhlmann_fidelity(rho0, rho1));
  const double approx = std::log(fidelity_quadratic_approx(1.0 / t, dzeta, chi));
  return std::abs(exact - approx) / (dzeta * dzeta);
}

}  // namespace

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
}

Report oracle_suite(double perturb, int jobs) {
  const double js[] = {0.5, 1.0, 2.0};
  const double bs[] = {0.0, 1.0, 2.0};
  const double ds[] = {0.0, 1.0, 5.0};
  const double ts[] = {1.0, 10.0, 30.0, 100.0};
  struct Point {
    double j, b, d, t;
  };
  std::vector<Point> points;
  for (double j : js) {
    for (double b : bs) {
      for (double d : ds) {
        for (double t : ts) points.push_back({j, b, d, t});
      }
    }
  }
  std::vector<Accumulator> partial(points.size());
  parallel_for(points.size(), jobs, [&](std::size_t i) {
    const Point& p = points[i];
    oracle_point(p.j, p.b, p.d, p.t, perturb, partial[i]);
  });
  Accumulator total;
  for (const auto& a : partial) total.merge(a);
  return total.report();
}

Report invariant_suite() {
  Accumulator acc;
  std::mt19937_64 rng(20240601);
  constexpr double tight = 1e-12;

  for (int n = 2; n <= 8; ++n) {
    for (int draw = 0; draw < 3; ++draw) {
      const ChainParams params = random_params(rng, n);
      const OperatorMatrix h = build_hamiltonian(params);
      const OperatorMatrix k = build_chirality_operator(n);
      const OperatorMatrix sz = build_total_sz(n);
      const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
      acc.add("hamiltonian_hermitian", hermiticity_defect(h), tight * scale);
      acc.add("chirality_hermitian", hermiticity_defect(k), tight);
      acc.add("hamiltonian_conserves_sz", commutator_norm(h, sz), tight * scale);
      acc.add("chirality_conserves_sz", commutator_norm(k, sz), tight);
      acc.add("field_linearity", (h - build_hamiltonian(params.with_e_field(0.0)) + params.e_field * k).cwiseAbs().maxCoeff(),
              1e-14 * scale);
      acc.add("translation_invariance", commutator_norm(h, build_translation(n)), tight * scale);

      const SpectrumPtr spec = std::make_shared<const Spectrum>(diagonalize(h, sz));
      const auto& v = spec->states;
      acc.add("spectrum_reconstruction", (h - v * spec->energies.cast<cplx>().asDiagonal() * v.adjoint()).cwiseAbs().maxCoeff(),
              1e-9 * scale);
      acc.add("eigenvectors_orthonormal",
              (v.adjoint() * v - Eigen::MatrixXcd::Identity(v.rows(), v.cols())).cwiseAbs().maxCoeff(), 1e-10);
      if (n <= 6) {
        const Spectrum dense = diagonalize(h, sz, Blocking::Dense);
        acc.add("sector_vs_dense_energies", (dense.energies - spec->energies).cwiseAbs().maxCoeff(), 1e-10 * scale);
      }

      for (double t : {0.3, 3.0, 30.0}) {
        const GibbsState g = gibbs(spec, t);
        double monotone = 0.0;
        for (Eigen::Index i = 1; i < g.populations.size(); ++i) {
          monotone = std::max(monotone, g.populations(i) - g.populations(i - 1));
        }
        acc.add("gibbs_normalized", std::abs(g.populations.sum() - 1.0), tight);
        acc.add("gibbs_nonnegative", std::max(0.0, -g.populations.minCoeff()), 0.0);
        acc.add("gibbs_monotone", monotone, tight);
        const DensityMatrix rho = density_matrix(g);
        acc.add("density_matrix_valid", density_defect(rho), 1e-10);
        acc.add("fidelity_self", std::abs(uhlmann_fidelity(rho, rho) - 1.0), 1e-9);
        acc.add("thermodynamic_identity",
                std::abs(free_energy(*spec, t) - (internal_energy(g) - t * entropy(*spec, t))), 1e-10 * scale);
        if (n >= 3) {
          double out_of_range = 0.0;
          for (double c : concurrence_by_distance(rho)) out_of_range = std::max({out_of_range, -c, c - 1.0});
          acc.add("concurrence_range", out_of_range, 0.0);
        }
      }
    }
  }

  // fidelity symmetry between nearby thermal states
  {
    const ChainParams p{4, 1.0, -1.0, 1.0, 1.0};
    const DensityMatrix a = density_matrix(gibbs(solve(p), 5.0));
    const DensityMatrix b = density_matrix(gibbs(solve(p.with_e_field(1.3)), 5.0));
    acc.add("fidelity_symmetric", std::abs(uhlmann_fidelity(a, b) - uhlmann_fidelity(b, a)), 1e-9);
  }

  // leading-order fidelity: the scaled residual may not grow as the step shrinks
  for (Field field : {Field::Magnetic, Field::Electric}) {
    const ChainParams p{4, 1.0, -1.0, 1.0, 1.0};
    const double coarse = fidelity_order(p, field, 5.0, 1e-2);
    const double fine = fidelity_order(p, field, 5.0, 1e-3);
    acc.add(field == Field::Magnetic ? "fidelity_order_magnetic" : "fidelity_order_electric",
            std::max(0.0, fine - 2.0 * coarse), 1e-6);
  }

  // entropy non-decreasing in T on [0.1, 100]
  for (double d : {0.0, 1.0, 10.0}) {
    const SpectrumPtr spec = solve({4, 1.0, -1.0, 1.0, d});
    double drop = 0.0;
    double previous = entropy(*spec, 0.1);
    for (int i = 1; i <= 400; ++i) {
      const double t = 0.1 * std::pow(1000.0, i / 400.0);
      const double s = entropy(*spec, t);
      drop = std::max(drop, previous - s);
      previous = s;
    }
    acc.add("entropy_monotone", drop, tight);
  }
  return acc.report();
}

Report run_validation(const ValidationOptions& options) {
  Report total;
  if (options.oracle) {
    const Report r = oracle_suite(options.perturb, options.jobs);
    total.checks.insert(total.checks.end(), r.checks.begin(), r.checks.end());
  }
  if (options.invariants) {
    const Report r = invariant_suite();
    total.checks.insert(total.checks.end(), r.checks.begin(), r.checks.end());
  }
  return total;
}

}  // namespace mfotto
