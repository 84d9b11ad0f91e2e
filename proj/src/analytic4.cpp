#include "mfotto/analytic4.hpp"

#include <algorithm>
#include <cmath>

#include "mfotto/errors.hpp"

namespace mfotto::analytic4 {

namespace {

constexpr double kZeroField = 1e-12;

void check_temperature(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("analytic4: temperature must be positive and finite");
}

struct Mixing {
  double a = 0.0;  // 4 J2 - J1
  double s = 0.0;  // sqrt(a^2 + 8 d^2)
  double alpha2 = 0.0, alpha2_mu = 0.0, alpha2_mu2 = 0.0;
  double gamma2 = 0.0, gamma2_lambda = 0.0, gamma2_lambda2 = 0.0;
};

Mixing mixing(double j, double d) {
  Mixing m;
  m.a = -4.0 * j - j;
  m.s = std::sqrt(m.a * m.a + 8.0 * d * d);
  if (std::abs(d) < kZeroField) {
    // mu -> -inf, lambda -> 0 for a < 0 and the other way round for a > 0
    if (m.a <= 0.0) {
      m.alpha2_mu2 = 0.5;
      m.gamma2 = 0.25;
    } else {
      m.alpha2 = 0.25;
      m.gamma2_lambda2 = 0.5;
    }
    return m;
  }
  // the cancelling root is rewritten through mu * lambda = -2
  const double mu = m.a >= 0.0 ? -4.0 * d / (m.a + m.s) : (m.a - m.s) / (2.0 * d);
  const double lambda = m.a <= 0.0 ? -4.0 * d / (m.a - m.s) : (m.a + m.s) / (2.0 * d);
  m.alpha2 = 1.0 / (4.0 + 2.0 * mu * mu);
  m.alpha2_mu = mu * m.alpha2;
  m.alpha2_mu2 = mu * mu * m.alpha2;
  m.gamma2 = 1.0 / (4.0 + 2.0 * lambda * lambda);
  m.gamma2_lambda = lambda * m.gamma2;
  m.gamma2_lambda2 = lambda * lambda * m.gamma2;
  return m;
}

// Boltzmann weights exp(-(E - E_min)/t)
Levels weights(const Levels& e, double t, double& e_min) {
  e_min = *std::min_element(e.begin(), e.end());
  Levels w{};
  for (std::size_t i = 0; i < e.size(); ++i) w[i] = std::exp(-(e[i] - e_min) / t);
  return w;
}

// beta Var(E') - <E''> with the variance as a pairwise sum of squares
double curvature(const Levels& e, const Levels& first, const Levels& second, double t) {
  double e_min = 0.0;
  const Levels w = weights(e, t, e_min);
  double z = 0.0;
  double mean_second = 0.0;
  for (std::size_t i = 0; i < 16; ++i) {
    z += w[i];
    mean_second += second[i] * w[i];
  }
  double pairs = 0.0;
  for (std::size_t n = 0; n < 16; ++n) {
    for (std::size_t m = n + 1; m < 16; ++m) {
      const double diff = first[n] - first[m];
      pairs += diff * diff * w[n] * w[m];
    }
  }
  return pairs / (t * z * z) - mean_second / z;
}

}  // namespace

Levels spectrum4(double j, double b, double d) {
  const double j1 = j;
  const double j2 = -j;
  const double s = std::sqrt(j1 * j1 + 16.0 * j2 * j2 - 8.0 * j1 * j2 + 8.0 * d * d);
  return {-4 * j1 - 4 * j2 - 4 * b,
          4 * j2 - 2 * b - 4 * d,
          4 * j2 - 2 * b + 4 * d,
          4 * j1 - 4 * j2 - 2 * b,
          -4 * j1 - 4 * j2 - 2 * b,
          2 * j1 + 4 * j2 + 2 * s,
          2 * j1 + 4 * j2 - 2 * s,
          -4 * j1 - 4 * j2,
          8 * j1 - 4 * j2,
          4 * j2,
          4 * j2,
          4 * j2 + 2 * b + 4 * d,
          4 * j2 + 2 * b - 4 * d,
          -4 * j1 - 4 * j2 + 2 * b,
          4 * j1 - 4 * j2 + 2 * b,
          -4 * j1 - 4 * j2 + 4 * b};
}

double Derived::log_z() const { return std::log(z) - e_min / t; }

Derived coeffs4(double j, double b, double d, double t, D2Form form) {
  check_temperature(t);
  Derived r;
  r.j = j;
  r.b = b;
  r.d = d;
  r.t = t;
  const Mixing m = mixing(j, d);
  r.alpha2 = m.alpha2;
  r.alpha2_mu = m.alpha2_mu;
  r.alpha2_mu2 = m.alpha2_mu2;
  r.gamma2 = m.gamma2;
  r.gamma2_lambda = m.gamma2_lambda;
  r.gamma2_lambda2 = m.gamma2_lambda2;
  r.energies = spectrum4(j, b, d);
  r.weights = weights(r.energies, t, r.e_min);

  // one-based access to match the level labels
  const auto e = [&](int level) { return r.weights[static_cast<std::size_t>(level - 1)]; };
  const double e2345 = e(2) + e(3) + e(4) + e(5);
  const double e12_15 = e(12) + e(13) + e(14) + e(15);
  const double a2 = m.alpha2, g2 = m.gamma2;

  r.a1 = e(1) + 0.5 * e2345 + a2 * e(6) + g2 * e(7) + e(8) / 6.0 + e(9) / 12.0 + e(10) / 2.0;
  r.b1 = 0.25 * e2345 + (a2 + m.alpha2_mu2) * e(6) + (g2 + m.gamma2_lambda2) * e(7) + e(8) / 3.0 +
         5.0 / 12.0 * e(9) + e(11) / 2.0 + 0.25 * e12_15;
  r.c1 = std::complex<double>(-0.25 * (e(4) - e(5)) + (e(8) - e(9)) / 3.0 + 0.25 * (e(14) - e(15)),
                              0.25 * (e(2) - e(3)) + 2.0 * m.alpha2_mu * e(6) + 2.0 * m.gamma2_lambda * e(7) -
                                  0.25 * (e(12) - e(13)));
  r.d1 = a2 * e(6) + g2 * e(7) + e(8) / 6.0 + e(9) / 12.0 + e(10) / 2.0 + 0.5 * e12_15 + e(16);

  r.a2 = e(1) + 0.5 * e2345 + m.alpha2_mu2 * e(6) + m.gamma2_lambda2 * e(7) + e(8) / 6.0 + e(9) / 3.0;
  r.b2 = m.alpha2_mu2 * e(6) + m.gamma2_lambda2 * e(7) + e(8) / 6.0 + e(9) / 3.0 + 0.5 * e12_15 + e(16);
  r.c2 = 0.25 * e2345 + 2.0 * a2 * e(6) + 2.0 * g2 * e(7) + e(8) / 3.0 + e(9) / 6.0 + e(10) / 2.0 + e(11) / 2.0 +
         0.25 * e12_15;
  if (form == D2Form::Corrected) {
    r.d2 = -0.25 * (e(2) + e(3)) + 0.25 * (e(4) + e(5)) - 2.0 * a2 * e(6) - 2.0 * g2 * e(7) + e(8) / 3.0 +
           e(9) / 6.0 - 0.25 * (e(12) + e(13)) + 0.25 * (e(14) + e(15));
  } else {
    r.d2 = -0.25 * (e(2) + e(3)) + 0.25 * (e(4) + e(5)) - 2.0 * a2 * e(6) - 2.0 * g2 * e(7) +
           (e(8) + e(9)) / 3.0 - 0.25 * (e(12) + e(13)) - 0.25 * (e(14) - e(15));
  }

  const double mixed6 = (2.0 * a2 + m.alpha2_mu2) * e(6);
  const double mixed7 = (2.0 * g2 + m.gamma2_lambda2) * e(7);
  const double e8_11 = e(8) + e(9) + e(10) + e(11);
  const double up = e(1) + 0.75 * e2345 + mixed6 + mixed7 + 0.5 * e8_11 + 0.25 * e12_15;
  const double down = 0.25 * e2345 + mixed6 + mixed7 + 0.5 * e8_11 + 0.75 * e12_15 + e(16);
  r.q = up * down;

  r.z = 0.0;
  for (double w : r.weights) r.z += w;
  return r;
}

PairConcurrences concurrences4(const Derived& der) {
  PairConcurrences c;
  c.c12 = 2.0 / der.z * std::max(std::abs(der.c1) - std::sqrt(der.a1 * der.d1), 0.0);
  c.c13 = 2.0 / der.z * std::max(std::abs(der.d2) - std::sqrt(der.a2 * der.b2), 0.0);
  return c;
}

double two_tangle4(const Derived& der) {
  const double x = std::abs(der.c1) - std::sqrt(der.a1 * der.d1);
  const double y = std::abs(der.d2) - std::sqrt(der.a2 * der.b2);
  const double z2 = der.z * der.z;
  if (x > 0.0 && y > 0.0) return (8.0 * x * x + 4.0 * y * y) / z2;
  if (x > 0.0) return 8.0 * x * x / z2;
  if (y > 0.0) return 4.0 * y * y / z2;
  return 0.0;
}

double one_tangle4(const Derived& der) { return 4.0 * der.q / (der.z * der.z); }

double chirality4(const Derived& der) {
  const auto e = [&](int level) { return der.weights[static_cast<std::size_t>(level - 1)]; };
  return 4.0 / der.z *
         (e(2) - e(3) + 8.0 * der.alpha2_mu * e(6) + 8.0 * der.gamma2_lambda * e(7) - e(12) + e(13));
}

double chi_b4(double j, double b, double d, double t) {
  check_temperature(t);
  const Levels first = {-4, -2, -2, -2, -2, 0, 0, 0, 0, 0, 0, 2, 2, 2, 2, 4};
  const Levels second{};
  return curvature(spectrum4(j, b, d), first, second, t);
}

double chi_e4(double j, double b, double d, double t) {
  check_temperature(t);
  const double a = -5.0 * j;
  const double s = std::sqrt(a * a + 8.0 * d * d);
  Levels first{};
  Levels second{};
  first[1] = -4.0;
  first[2] = 4.0;
  first[11] = 4.0;
  first[12] = -4.0;
  if (s > 0.0) {
    first[5] = 16.0 * d / s;
    first[6] = -16.0 * d / s;
    second[5] = 16.0 * a * a / (s * s * s);
    second[6] = -second[5];
  }
  return curvature(spectrum4(j, b, d), first, second, t);
}

}  // namespace mfotto::analytic4
