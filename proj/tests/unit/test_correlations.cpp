#include <doctest.h>

#include <cmath>
#include <random>

#include "mfotto/analytic4.hpp"
#include "mfotto/correlations.hpp"
#include "mfotto/errors.hpp"
#include "oracles.hpp"

using namespace mfotto;

namespace {

DensityMatrix thermal(const ChainParams& p, double t) { return density_matrix(gibbs(solve(p), t)); }

DensityMatrix pure_pair(const Eigen::Vector4cd& psi) {
  DensityMatrix rho;
  rho.entries = psi * psi.adjoint();
  rho.sites = {0, 1};
  return rho;
}

// T at which the closed-form tau_2 vanishes, by bisection on the closed form
double closed_form_threshold(double d, analytic4::D2Form form) {
  double lo = 0.1, hi = 200.0;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (analytic4::two_tangle4(analytic4::coeffs4(1.0, 1.0, d, mid, form)) > kTwoTangleZero ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("thermal density matrix") {
  const ChainParams p{5, 1.0, -1.0, 0.4, 1.5};
  const SpectrumPtr s = solve(p);
  const GibbsState g = gibbs(s, 2.0);
  const DensityMatrix rho = density_matrix(g);
  const OperatorMatrix h = build_hamiltonian(p);
  CHECK(rho.sites == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(std::abs(rho.entries.trace() - 1.0) < 1e-10);
  CHECK(hermiticity_defect(rho.entries) < 1e-12);
  CHECK((rho.entries * h - h * rho.entries).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((rho.entries * h).trace().real() == doctest::Approx(internal_energy(g)).epsilon(1e-10));
  CHECK((rho.entries - oracle::thermal_state(h, 2.0)).cwiseAbs().maxCoeff() < 1e-10);
  const DensityMatrix hot = thermal(p, 1e12);
  CHECK((hot.entries - Eigen::MatrixXcd::Identity(32, 32) / 32.0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("partial trace") {
  const DensityMatrix rho = thermal({5, 1.0, -1.0, 0.4, 1.5}, 1.5);
  SUBCASE("matches explicit summation, any ordering") {
    for (const std::vector<int>& keep : {std::vector<int>{0, 1}, {3, 1}, {4}, {2, 0, 4}}) {
      const DensityMatrix r = partial_trace(rho, keep);
      CHECK((r.entries - oracle::partial_trace(rho.entries, 5, keep)).cwiseAbs().maxCoeff() < 1e-14);
      CHECK(std::abs(r.entries.trace() - 1.0) < 1e-10);
      CHECK(r.sites == keep);
    }
  }
  SUBCASE("keeping every site is the identity") {
    const std::vector<int> all{0, 1, 2, 3, 4};
    CHECK((partial_trace(rho, all).entries - rho.entries).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("product state") {
    Eigen::Matrix2cd a;
    a << 0.7, cplx(0.1, 0.2), cplx(0.1, -0.2), 0.3;
    Eigen::Matrix2cd b;
    b << 0.4, 0.05, 0.05, 0.6;
    DensityMatrix ab;
    ab.entries = oracle::kron(a, b);
    ab.sites = {0, 1};
    const int first[1] = {0};
    const int second[1] = {1};
    CHECK((partial_trace(ab, first).entries - a).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((partial_trace(ab, second).entries - b).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("bad site lists") {
    CHECK_THROWS_AS((void)partial_trace(rho, std::vector<int>{}), ParameterError);
    CHECK_THROWS_AS((void)partial_trace(rho, std::vector<int>{1, 1}), ParameterError);
    CHECK_THROWS_AS((void)partial_trace(rho, std::vector<int>{5}), ParameterError);
    CHECK_THROWS_AS((void)partial_trace(rho, std::vector<int>{-1}), ParameterError);
  }
}

TEST_CASE("four-site reduced matrices follow the closed-form pattern") {
  const DensityMatrix rho = thermal({4, 1.0, -1.0, 1.0, 1.0}, 10.0);
  const auto der = analytic4::coeffs4(1.0, 1.0, 1.0, 10.0);
  const DensityMatrix r12 = partial_trace(rho, std::vector<int>{0, 1});
  const Eigen::Matrix4cd m = r12.entries * der.z;
  CHECK(std::abs(m(0, 0) - der.a1) < 1e-10);
  CHECK(std::abs(m(1, 1) - der.b1) < 1e-10);
  CHECK(std::abs(m(2, 2) - der.b1) < 1e-10);
  CHECK(std::abs(m(3, 3) - der.d1) < 1e-10);
  CHECK(std::abs(m(1, 2) - der.c1) < 1e-10);
  CHECK(std::abs(m(0, 3)) < 1e-12);
  const Eigen::Matrix4cd n = partial_trace(rho, std::vector<int>{0, 2}).entries * der.z;
  CHECK(std::abs(n(0, 0) - der.a2) < 1e-10);
  CHECK(std::abs(n(1, 1) - der.c2) < 1e-10);
  CHECK(std::abs(n(1, 2) - der.d2) < 1e-10);
  CHECK(std::abs(n(3, 3) - der.b2) < 1e-10);
}

TEST_CASE("concurrence") {
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(concurrence(pure_pair(Eigen::Vector4cd(0.0, r, -r, 0.0))) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(concurrence(pure_pair(Eigen::Vector4cd(1.0, 0.0, 0.0, 0.0))) == doctest::Approx(0.0));
  // product of two single-qubit states
  Eigen::Vector2cd u(0.6, cplx(0.0, 0.8));
  Eigen::Vector2cd v(cplx(0.28, 0.96), 0.0);
  Eigen::Vector4cd prod;
  prod << u(0) * v(0), u(0) * v(1), u(1) * v(0), u(1) * v(1);
  CHECK(concurrence(pure_pair(prod)) < 1e-7);

  SUBCASE("random mixed states against the non-Hermitian definition") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int draw = 0; draw < 50; ++draw) {
      Eigen::Matrix4cd a;
      for (int i = 0; i < 16; ++i) a(i / 4, i % 4) = cplx(g(rng), g(rng));
      const int rank = 1 + draw % 4;
      const Eigen::MatrixXcd cols = a.leftCols(rank);
      DensityMatrix rho;
      rho.entries = cols * cols.adjoint();
      rho.entries /= rho.entries.trace();
      rho.sites = {0, 1};
      const double c = concurrence(rho);
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
      CHECK(c == doctest::Approx(oracle::wootters(rho.entries)).epsilon(1e-6));
    }
  }
  SUBCASE("closed form at p = 20, B = 1, T = 10") {
    const DensityMatrix rho = thermal({4, 1.0, -1.0, 1.0, 20.0}, 10.0);
    const auto c = analytic4::concurrences4(analytic4::coeffs4(1.0, 1.0, 20.0, 10.0));
    const auto by_r = concurrence_by_distance(rho);
    CHECK(by_r[0] == doctest::Approx(c.c12).epsilon(1e-10));
    CHECK(by_r[1] == doctest::Approx(c.c13).epsilon(1e-10));
    CHECK(c.c12 > 0.0);
  }
  CHECK_THROWS_AS((void)concurrence(thermal({3, 1.0, -1.0, 0.0, 0.0}, 1.0)), ParameterError);
}

TEST_CASE("C12 equals C14 on the four-site ring") {
  for (double d : {0.0, 2.0, 10.0, 20.0}) {
    for (double t : {0.5, 5.0, 20.0}) {
      const DensityMatrix rho = thermal({4, 1.0, -1.0, 1.0, d}, t);
      const double c12 = concurrence(partial_trace(rho, std::vector<int>{0, 1}));
      const double c14 = concurrence(partial_trace(rho, std::vector<int>{0, 3}));
      CHECK(c12 == doctest::Approx(c14).epsilon(1e-10));
    }
  }
}

TEST_CASE("two-tangle") {
  // above threshold and at infinite temperature
  CHECK(two_tangle(thermal({4, 1.0, -1.0, 1.0, 1.0}, 7.5), 4) == 0.0);
  CHECK(two_tangle(thermal({4, 1.0, -1.0, 1.0, 1.0}, 1e12), 4) == 0.0);
  CHECK(two_tangle(thermal({6, 1.0, -1.0, 1.0, 3.0}, 1e12), 6) == 0.0);

  SUBCASE("definition for n = 4") {
    const DensityMatrix rho = thermal({4, 1.0, -1.0, 1.0, 20.0}, 10.0);
    const auto c = concurrence_by_distance(rho);
    CHECK(two_tangle(rho, 4) == doctest::Approx(2.0 * c[0] * c[0] + c[1] * c[1]).epsilon(1e-14));
    CHECK(two_tangle(rho, 4) ==
          doctest::Approx(analytic4::two_tangle4(analytic4::coeffs4(1.0, 1.0, 20.0, 10.0))).epsilon(1e-10));
  }
  SUBCASE("ring multiplicities for odd n") {
    const DensityMatrix rho = thermal({5, 1.0, -1.0, 0.0, 6.0}, 1.0);
    const auto c = concurrence_by_distance(rho);
    CHECK(two_tangle(rho, 5) == doctest::Approx(2.0 * c[0] * c[0] + 2.0 * c[1] * c[1]));
  }
  SUBCASE("closed form on a (p, B, T) grid") {
    for (double d : {0.0, 2.5, 5.0, 10.0, 20.0}) {
      for (double b : {0.0, 0.5, 1.0, 1.5, 2.0}) {
        for (double t : {0.5, 2.0, 5.0, 15.0, 40.0}) {
          const double numeric = two_tangle(thermal({4, 1.0, -1.0, b, d}, t), 4);
          const double closed = analytic4::two_tangle4(analytic4::coeffs4(1.0, b, d, t));
          CHECK(std::abs(numeric - closed) <= 1e-8 * std::max(1.0, closed));
        }
      }
    }
  }
  SUBCASE("entanglement decreases with B") {
    for (double d : {5.0, 10.0, 20.0}) {
      for (double t : {1.0, 5.0, 10.0}) {
        double previous = two_tangle(thermal({4, 1.0, -1.0, 0.0, d}, t), 4);
        for (int i = 1; i <= 12; ++i) {
          const double now = two_tangle(thermal({4, 1.0, -1.0, 0.25 * i, d}, t), 4);
          CAPTURE(d);
          CAPTURE(t);
          CHECK(now <= previous + 1e-12);
          previous = now;
        }
      }
    }
  }
  CHECK_THROWS_AS((void)two_tangle(thermal({4, 1.0, -1.0, 1.0, 1.0}, 1.0), 5), ParameterError);
}

TEST_CASE("one-tangle") {
  CHECK(one_tangle(thermal({4, 1.0, -1.0, 1.0, 1.0}, 1e4)) == doctest::Approx(1.0).epsilon(1e-3));
  // fully polarized ground state
  CHECK(one_tangle(thermal({4, 1.0, -1.0, 10.0, 0.0}, 1e-3)) < 1e-12);
  const auto der = analytic4::coeffs4(1.0, 1.0, 5.0, 20.0);
  CHECK(one_tangle(thermal({4, 1.0, -1.0, 1.0, 5.0}, 20.0)) ==
        doctest::Approx(4.0 * der.q / (der.z * der.z)).epsilon(1e-12));
}

TEST_CASE("chirality expectation") {
  const OperatorMatrix k = build_chirality_operator(4);
  for (double b : {0.0, 1.0}) {
    for (double t : {0.5, 5.0}) {
      CHECK(std::abs(chirality_expectation(thermal({4, 1.0, -1.0, b, 0.0}, t), k)) < 1e-12);
      const double plus = chirality_expectation(thermal({4, 1.0, -1.0, b, 3.0}, t), k);
      const double minus = chirality_expectation(thermal({4, 1.0, -1.0, b, -3.0}, t), k);
      CHECK(plus == doctest::Approx(-minus).epsilon(1e-12));
      CHECK(plus > 0.0);
    }
  }
  const auto der = analytic4::coeffs4(1.0, 1.0, 1.0, 5.0);
  CHECK(chirality_expectation(thermal({4, 1.0, -1.0, 1.0, 1.0}, 5.0), k) ==
        doctest::Approx(analytic4::chirality4(der)).epsilon(1e-12));
  // strong field, low temperature: 4 sqrt(2)
  const double strong = chirality_expectation(thermal({4, 1.0, -1.0, 1.0, 1e3}, 1e-3), k);
  CHECK(strong == doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-5));
  CHECK(analytic4::chirality4(analytic4::coeffs4(1.0, 1.0, 1e3, 1e-3)) == doctest::Approx(strong).epsilon(1e-10));
  // agrees with the Kronecker-product operator
  const DensityMatrix rho = thermal({5, 1.0, -1.0, 0.2, 2.0}, 3.0);
  CHECK(chirality_expectation(rho, build_chirality_operator(5)) ==
        doctest::Approx((rho.entries * oracle::chirality(5)).trace().real()).epsilon(1e-12));
  CHECK_THROWS_AS((void)chirality_expectation(rho, k), ParameterError);
}

TEST_CASE("threshold temperature") {
  SUBCASE("reference values for p = 10 and p = 20") {
    CHECK(threshold_temperature({4, 1.0, -1.0, 1.0, 10.0}, 1.0, 100.0) == doctest::Approx(22.31).epsilon(0.02));
    CHECK(threshold_temperature({4, 1.0, -1.0, 1.0, 20.0}, 1.0, 100.0) == doctest::Approx(44.45).epsilon(0.02));
  }
  SUBCASE("closed-form oracle for p = 1") {
    const double numeric = threshold_temperature({4, 1.0, -1.0, 1.0, 1.0}, 0.5, 50.0);
    CHECK(numeric == doctest::Approx(closed_form_threshold(1.0, analytic4::D2Form::Corrected)).epsilon(2e-4));
    // the printed d2 expression is what moves the threshold to 7.37
    CHECK(closed_form_threshold(1.0, analytic4::D2Form::AsPrinted) == doctest::Approx(7.37).epsilon(0.002));
  }
  SUBCASE("resolution") {
    const ChainParams p{4, 1.0, -1.0, 1.0, 10.0};
    const double tc = threshold_temperature(p, 1.0, 100.0);
    const SpectrumPtr s = solve(p);
    CHECK(thermal_two_tangle(s, 4, tc - 1e-3) > 0.0);
    CHECK(thermal_two_tangle(s, 4, tc + 1e-3) <= kTwoTangleZero);
  }
  SUBCASE("bracket violations") {
    CHECK_THROWS_AS((void)threshold_temperature({4, 1.0, -1.0, 1.0, 10.0}, 30.0, 100.0), NoThresholdError);
    CHECK_THROWS_AS((void)threshold_temperature({4, 1.0, -1.0, 1.0, 10.0}, 1.0, 5.0), NoThresholdError);
    CHECK_THROWS_AS((void)threshold_temperature({4, 1.0, -1.0, 1.0, 10.0}, 5.0, 1.0), ParameterError);
  }
}
