#include <doctest.h>

#include <cmath>

#include "mfotto/analytic4.hpp"
#include "mfotto/errors.hpp"
#include "mfotto/otto.hpp"
#include "oracles.hpp"

using namespace mfotto;

namespace {

CycleSpec base(CycleMode mode, double p_high = 10.0) {
  CycleSpec s;
  s.params = {4, 1.0, -1.0, 1.0, 0.0};
  s.p_high = p_high;
  s.mode = mode;
  return s;
}

Eigen::VectorXd kron_levels(int n, double b, double d) {
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::hamiltonian(n, 1.0, -1.0, b, d), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double mean_energy(const Eigen::VectorXd& e, double t) {
  Eigen::VectorXd w = (-(e.array() - e.minCoeff()) / t).exp();
  return w.dot(e) / w.sum();
}

// frozen populations follow the closed-form labels, which are smooth in the field
std::pair<double, double> labelled_quantum_heats(double b, double p_low, double p_high, double t_hot, double t_cold) {
  const auto lo = analytic4::spectrum4(1.0, b, p_low);
  const auto hi = analytic4::spectrum4(1.0, b, p_high);
  const auto pops = [](const analytic4::Levels& e, double t) {
    Eigen::VectorXd v(16);
    for (int i = 0; i < 16; ++i) v(i) = e[static_cast<std::size_t>(i)];
    Eigen::VectorXd w = (-(v.array() - v.minCoeff()) / t).exp();
    return std::pair{v, Eigen::VectorXd(w / w.sum())};
  };
  const auto [e_lo, p_a] = pops(lo, t_cold);
  const auto [e_hi, p_c] = pops(hi, t_hot);
  return {e_hi.dot(p_c - p_a), e_lo.dot(p_c - p_a)};
}

}  // namespace

TEST_CASE("cycle bookkeeping") {
  for (CycleMode mode : {CycleMode::ThermodynamicAdiabatic, CycleMode::QuantumAdiabatic}) {
    const CycleResult r = run_cycle(base(mode, 13.0));
    CHECK(r.carnot == doctest::Approx(2.0 / 3.0));
    CHECK(r.work == doctest::Approx(r.q_in - r.q_out).epsilon(1e-15));
    CHECK(r.efficiency == doctest::Approx(r.work / r.q_in).epsilon(1e-15));
    CHECK(r.absorbs_heat == (r.q_in > 0.0));
    CHECK(r.is_engine() == (r.q_in > 0.0 && r.work >= 0.0));
  }
  CHECK(run_cycle(base(CycleMode::ThermodynamicAdiabatic, 13.0)).is_engine());
}

TEST_CASE("no field change, no work") {
  for (CycleMode mode : {CycleMode::ThermodynamicAdiabatic, CycleMode::QuantumAdiabatic}) {
    const CycleResult r = run_cycle(base(mode, 3.5));
    CHECK(std::abs(r.work) < 1e-12);
    CHECK(std::abs(r.efficiency) < 1e-12);
  }
}

TEST_CASE("two-site ring: chirality cancels, efficiency zero") {
  for (CycleMode mode : {CycleMode::ThermodynamicAdiabatic, CycleMode::QuantumAdiabatic}) {
    CycleSpec s = base(mode);
    s.params.n = 2;
    const CycleResult r = run_cycle(s);
    CHECK(r.q_in > 0.0);
    CHECK(std::abs(r.efficiency) < 1e-12);
  }
}

TEST_CASE("thermodynamic heats from Kronecker-built spectra") {
  for (int n : {3, 4, 5}) {
    for (double p : {5.0, 20.0}) {
      CycleSpec s = base(CycleMode::ThermodynamicAdiabatic, p);
      s.params.n = n;
      const CycleResult r = run_cycle(s);
      const Eigen::VectorXd hot = kron_levels(n, 1.0, p);
      const Eigen::VectorXd cold = kron_levels(n, 1.0, 3.5);
      CHECK(r.q_in == doctest::Approx(mean_energy(hot, 30.0) - mean_energy(hot, 10.0)).epsilon(1e-10));
      CHECK(r.q_out == doctest::Approx(mean_energy(cold, 30.0) - mean_energy(cold, 10.0)).epsilon(1e-10));
    }
  }
}

TEST_CASE("quantum heats follow the closed-form level labels") {
  for (double p : {1.0, 5.0, 10.0, 13.0, 35.0}) {
    const CycleResult r = run_cycle(base(CycleMode::QuantumAdiabatic, p));
    const auto [q_in, q_out] = labelled_quantum_heats(1.0, 3.5, p, 30.0, 10.0);
    CAPTURE(p);
    CHECK(r.q_in == doctest::Approx(q_in).epsilon(1e-10));
    CHECK(r.q_out == doctest::Approx(q_out).epsilon(1e-10));
  }
}

TEST_CASE("sweep") {
  CycleSpec s = base(CycleMode::ThermodynamicAdiabatic);
  const std::vector<double> grid{3.5, 7.0, 14.0, 28.0};
  const auto serial = efficiency_sweep(s, grid, 1);
  const auto threaded = efficiency_sweep(s, grid, 3);
  REQUIRE(serial.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(serial[i].p == grid[i]);
    CHECK(serial[i].ratio == doctest::Approx(grid[i] / 3.5));
    CHECK(serial[i].quantum_ok);
    CHECK(serial[i].thermo.efficiency == threaded[i].thermo.efficiency);
    CHECK(serial[i].quantum.efficiency == threaded[i].quantum.efficiency);
    CHECK(serial[i].tau1_hot > 0.9);
    CHECK(serial[i].tau1_hot <= 1.0);
    s.p_high = grid[i];
    s.mode = CycleMode::ThermodynamicAdiabatic;
    CHECK(serial[i].thermo.efficiency == run_cycle(s).efficiency);
  }
  CHECK_THROWS_AS((void)efficiency_sweep(s, {}, 1), ParameterError);
  CHECK_THROWS_AS((void)efficiency_sweep(s, {-1.0}, 1), ParameterError);
}

TEST_CASE("size scaling") {
  const auto rows = size_scaling(base(CycleMode::ThermodynamicAdiabatic), {2, 3, 4}, 2);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].n == 2);
  CHECK(std::abs(rows[0].result.efficiency) < 1e-12);
  CHECK(rows[2].result.efficiency == run_cycle(base(CycleMode::ThermodynamicAdiabatic)).efficiency);
  CHECK_THROWS_AS((void)size_scaling(base(CycleMode::ThermodynamicAdiabatic), {11}, 1), ParameterError);
  CHECK_THROWS_AS((void)size_scaling(base(CycleMode::ThermodynamicAdiabatic), {1}, 1), ParameterError);
}

TEST_CASE("invalid cycles") {
  CycleSpec s = base(CycleMode::ThermodynamicAdiabatic);
  s.t_hot = 5.0;
  CHECK_THROWS_AS((void)run_cycle(s), ParameterError);
  s = base(CycleMode::ThermodynamicAdiabatic);
  s.t_cold = 0.0;
  CHECK_THROWS_AS((void)run_cycle(s), ParameterError);
  s = base(CycleMode::ThermodynamicAdiabatic);
  s.p_low = NAN;
  CHECK_THROWS_AS((void)run_cycle(s), ParameterError);
}
