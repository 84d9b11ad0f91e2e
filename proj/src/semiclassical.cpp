#include "mfotto/semiclassical.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mfotto/errors.hpp"

namespace mfotto {

namespace {

struct Sums {
  double e_min = 0.0;
  double z = 0.0;        // sum exp(-(E - E_min)/T)
  double ze = 0.0;       // sum (E - E_min) exp(...)
  double g = 0.0;        // special-level part of z
  double ge = 0.0;       // special-level part of ze
};

Sums sums(double t, const ScConfig& cfg) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("semiclassical: temperature must be positive");
  Sums s;
  s.e_min = *std::min_element(cfg.energies.begin(), cfg.energies.end());
  for (std::size_t i = 0; i < cfg.energies.size(); ++i) {
    const double shifted = cfg.energies[i] - s.e_min;
    const double w = std::exp(-shifted / t);
    s.z += w;
    s.ze += shifted * w;
    if (std::find(cfg.special.begin(), cfg.special.end(), static_cast<int>(i)) != cfg.special.end()) {
      s.g += w;
      s.ge += shifted * w;
    }
  }
  return s;
}

double heat(double t_l, double t_h, double p, const ScConfig& cfg) {
  const double h = kScDerivativeStep;
  const auto integrand = [&](double t) {
    return t * (entropy_sc(t + h, p, cfg).value - entropy_sc(t - h, p, cfg).value) / (2.0 * h);
  };
  using boost::math::quadrature::gauss_kronrod;
  // absolute tolerance: scale the relative target by a coarse estimate
  const double coarse = gauss_kronrod<double, 15>::integrate(integrand, t_l, t_h, 0);
  const double rel = kScQuadratureTolerance / std::max(std::abs(coarse), 1e-300);
  return gauss_kronrod<double, 31>::integrate(integrand, t_l, t_h, 15, rel);
}

}  // namespace

ScConfig ScConfig::make(double j, double b) {
  ScConfig cfg;
  cfg.j = j;
  cfg.b = b;
  cfg.energies = analytic4::spectrum4(j, b, 0.0);
  return cfg;
}

ScValue free_energy_sc(double t, double p, const ScConfig& cfg) {
  const Sums s = sums(t, cfg);
  const double leading = s.e_min - t * std::log(s.z);
  const double correction = -16.0 * p * p * s.g / (t * s.z);
  return {leading + correction, std::abs(correction) <= kScValidityFraction * std::abs(leading)};
}

ScValue entropy_sc(double t, double p, const ScConfig& cfg) {
  const Sums s = sums(t, cfg);
  const double s0 = std::log(s.z) + s.ze / (t * s.z);
  // derivative of the special-level fraction g/Z with respect to T, times T^2
  const double spread = s.ge / s.z - s.g * s.ze / (s.z * s.z);
  const double value = s0 - 16.0 * p * p * (s.g / (t * t * s.z) - spread / (t * t * t));
  return {value, value >= 0.0};
}

double efficiency_sc(double t_l, double t_h, double p, double p1, const ScConfig& cfg) {
  if (!(t_l > 0.0) || !(t_h > t_l)) throw ParameterError("efficiency_sc: need t_h > t_l > 0");
  const double numerator = heat(t_l, t_h, p, cfg);
  const double denominator = heat(t_l, t_h, p1, cfg);
  if (!(std::abs(denominator) > 1e-14) || !std::isfinite(denominator)) {
    throw NumericError("efficiency_sc: vanishing heat integral at p1");
  }
  return 1.0 - numerator / denominator;
}

}  // namespace mfotto
