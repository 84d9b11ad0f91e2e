#include <doctest.h>

#include <random>

#include "mfotto/analytic4.hpp"
#include "mfotto/errors.hpp"
#include "mfotto/model.hpp"
#include "mfotto/spectra.hpp"
#include "oracles.hpp"

using namespace mfotto;

namespace {

double max_abs(const OperatorMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("hamiltonian matches the Kronecker-product construction") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n = 2; n <= 6; ++n) {
    const ChainParams p{n, u(rng), u(rng), u(rng), u(rng)};
    CHECK(max_abs(build_hamiltonian(p) - oracle::hamiltonian(n, p.j1, p.j2, p.b, p.e_field)) < 1e-12);
    CHECK(max_abs(build_chirality_operator(n) - oracle::chirality(n)) < 1e-12);
  }
}

TEST_CASE("fully polarized diagonal element") {
  const OperatorMatrix h = build_hamiltonian({4, 1.0, -1.0, 1.0, 0.37});
  CHECK(h(0, 0).real() == doctest::Approx(-4.0).epsilon(1e-14));
  CHECK(h(0, 0).imag() == 0.0);
}

TEST_CASE("zero couplings give the zero matrix") {
  CHECK(max_abs(build_hamiltonian({4, 0.0, 0.0, 0.0, 0.0})) == 0.0);
}

TEST_CASE("four-site spectrum agrees with the closed form") {
  const auto closed = analytic4::spectrum4(1.0, 1.0, 1.0);
  std::vector<double> expected(closed.begin(), closed.end());
  std::sort(expected.begin(), expected.end());
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(build_hamiltonian({4, 1.0, -1.0, 1.0, 1.0}));
  for (int i = 0; i < 16; ++i) CHECK(es.eigenvalues()(i) == doctest::Approx(expected[i]).epsilon(1e-10));
}

TEST_CASE("chirality operator") {
  for (int n = 2; n <= 8; ++n) {
    const OperatorMatrix k = build_chirality_operator(n);
    CAPTURE(n);
    CHECK(std::abs(k.trace()) < 1e-12);
    CHECK(hermiticity_defect(k) < 1e-12);
    CHECK(k.real().cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(k(0, 0)) == 0.0);
  }
  // spectrum symmetric about zero
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(build_chirality_operator(4));
  const Eigen::VectorXd e = es.eigenvalues();
  for (Eigen::Index i = 0; i < e.size(); ++i) CHECK(e(i) == doctest::Approx(-e(e.size() - 1 - i)).epsilon(1e-12));
}

TEST_CASE("total Sz") {
  const OperatorMatrix sz = build_total_sz(2);
  CHECK(sz(0, 0).real() == 2.0);
  CHECK(sz(1, 1).real() == 0.0);
  CHECK(sz(2, 2).real() == 0.0);
  CHECK(sz(3, 3).real() == -2.0);
  CHECK(max_abs(sz - sz.diagonal().asDiagonal().toDenseMatrix()) == 0.0);
}

TEST_CASE("structural properties for random parameters") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int draw = 0; draw < 12; ++draw) {
    const int n = 2 + draw % 7;
    const ChainParams p{n, u(rng), u(rng), u(rng), u(rng)};
    const OperatorMatrix h = build_hamiltonian(p);
    const OperatorMatrix k = build_chirality_operator(n);
    const OperatorMatrix sz = build_total_sz(n);
    const OperatorMatrix shift = build_translation(n);
    CAPTURE(n);
    CHECK(hermiticity_defect(h) <= 1e-12);
    CHECK(max_abs(h * sz - sz * h) <= 1e-12);
    CHECK(max_abs(k * sz - sz * k) <= 1e-12);
    CHECK(max_abs(h * shift - shift * h) <= 1e-12);
    // linearity in the electric field
    CHECK(max_abs(h - build_hamiltonian(p.with_e_field(0.0)) + p.e_field * k) <= 1e-14);
  }
}

TEST_CASE("translation is the cyclic shift") {
  const OperatorMatrix t = build_translation(3);
  // |s0 s1 s2> = |100> (index 4) -> |010> (index 2)
  CHECK(t(2, 4).real() == 1.0);
  CHECK(max_abs(t * t * t - OperatorMatrix::Identity(8, 8)) == 0.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((void)build_hamiltonian({1, 1.0, -1.0, 0.0, 0.0}), ParameterError);
  CHECK_THROWS_AS((void)build_hamiltonian({15, 1.0, -1.0, 0.0, 0.0}), ParameterError);
  CHECK_THROWS_AS((void)build_chirality_operator(0), ParameterError);
  CHECK_THROWS_AS((void)build_total_sz(20), ParameterError);
  CHECK_THROWS_AS((void)build_hamiltonian({4, std::nan(""), -1.0, 0.0, 0.0}), ParameterError);
  CHECK_THROWS_AS((void)build_hamiltonian({4, 1.0, -1.0, INFINITY, 0.0}), ParameterError);
}
