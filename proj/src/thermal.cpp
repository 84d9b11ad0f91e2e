#include "mfotto/thermal.hpp"

#include <cmath>
#include <string>

#include "mfotto/errors.hpp"

namespace mfotto {

namespace {

void check_temperature(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw ParameterError("temperature must be positive and finite, got " + std::to_string(t));
  }
}

struct Weights {
  Eigen::VectorXd w;  // exp(-(E - E_min)/T)
  double sum = 0.0;
  double e_min = 0.0;
};

Weights boltzmann(const Eigen::VectorXd& energies, double t) {
  check_temperature(t);
  if (energies.size() == 0) throw ParameterError("empty spectrum");
  Weights out;
  out.e_min = energies.minCoeff();
  out.w = ((energies.array() - out.e_min) / -t).exp().matrix();
  out.sum = out.w.sum();
  return out;
}

}  // namespace

Eigen::VectorXd gibbs_populations(const Eigen::VectorXd& energies, double t) {
  const Weights w = boltzmann(energies, t);
  return w.w / w.sum;
}

GibbsState gibbs(SpectrumPtr spec, double t) {
  if (!spec) throw ParameterError("gibbs: null spectrum");
  const Weights w = boltzmann(spec->energies, t);
  GibbsState g;
  g.temperature = t;
  g.z_shifted = w.sum;
  g.log_z = std::log(w.sum) - w.e_min / t;
  g.populations = w.w / w.sum;
  g.spectrum = std::move(spec);
  return g;
}

double internal_energy(const GibbsState& g) { return g.populations.dot(g.spectrum->energies); }

double free_energy(const Eigen::VectorXd& energies, double t) {
  const Weights w = boltzmann(energies, t);
  return w.e_min - t * std::log(w.sum);
}

double free_energy(const Spectrum& spec, double t) { return free_energy(spec.energies, t); }

double entropy(const Eigen::VectorXd& energies, double t) {
  const Weights w = boltzmann(energies, t);
  // S = (U - F)/T with both measured from E_min
  const double u_shifted = w.w.dot((energies.array() - w.e_min).matrix()) / w.sum;
  return u_shifted / t + std::log(w.sum);
}

double entropy(const Spectrum& spec, double t) { return entropy(spec.energies, t); }

}  // namespace mfotto
