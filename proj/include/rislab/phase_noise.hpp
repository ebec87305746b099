#ifndef RISLAB_PHASE_NOISE_HPP
#define RISLAB_PHASE_NOISE_HPP

#include <cmath>
#include <string>

#include "random.hpp"
#include "types.hpp"

namespace rislab {

enum class PhaseNoiseKind { VonMises, Uniform, None };

inline std::string to_string(PhaseNoiseKind kind) {
  switch (kind) {
    case PhaseNoiseKind::VonMises: return "von_mises";
    case PhaseNoiseKind::Uniform: return "uniform";
    case PhaseNoiseKind::None: return "none";
  }
  return "none";
}

inline PhaseNoiseKind phase_noise_kind_from_string(const std::string& s) {
  if (s == "von_mises") return PhaseNoiseKind::VonMises;
  if (s == "uniform") return PhaseNoiseKind::Uniform;
  if (s == "none") return PhaseNoiseKind::None;
  throw InvalidParameter("unknown phase noise kind '" + s + "' (expected von_mises, uniform or none)");
}

/// I1(x)/I0(x) for x >= 0. Direct Bessel evaluation overflows past a few
/// hundred, so large arguments use the asymptotic expansion.
inline double bessel_ratio_i1_i0(double x) {
  require(x >= 0.0, "bessel ratio needs a non-negative argument");
  if (x == 0.0) return 0.0;
  if (x <= 500.0) return std::cyl_bessel_i(1.0, x) / std::cyl_bessel_i(0.0, x);
  const double t = 1.0 / x;
  return 1.0 - t * (0.5 + t * (0.125 + t * (0.125 + t * (25.0 / 128.0 + t * (13.0 / 32.0)))));
}

struct PhaseNoiseModel {
  PhaseNoiseKind kind = PhaseNoiseKind::VonMises;
  double variance = 0.0;  // sigma_p^2 in rad^2

  double concentration() const { return variance > 0.0 ? 1.0 / variance : INFINITY; }
  double half_width() const { return std::sqrt(3.0 * variance); }

  void validate() const {
    require(variance >= 0.0, "phase noise variance must be non-negative");
    if (kind == PhaseNoiseKind::Uniform)
      require(half_width() <= kPi, "uniform phase noise half-width exceeds pi (variance > pi^2/3)");
  }

  /// Draw one phase error in radians.
  double sample(Rng& rng) const {
    if (kind == PhaseNoiseKind::None || variance == 0.0) return 0.0;
    if (kind == PhaseNoiseKind::Uniform) {
      const double w = half_width();
      return rng.uniform(-w, w);
    }
    return rng.von_mises(concentration());
  }
};

/// Characteristic function of the phase error at 1: E{exp(j theta)}.
inline double phase_deviation_factor(const PhaseNoiseModel& model) {
  model.validate();
  if (model.kind == PhaseNoiseKind::None || model.variance == 0.0) return 1.0;
  if (model.kind == PhaseNoiseKind::Uniform) {
    const double w = model.half_width();
    return std::sin(w) / w;
  }
  return bessel_ratio_i1_i0(model.concentration());
}

}  // namespace rislab

#endif  // RISLAB_PHASE_NOISE_HPP
