#ifndef RISLAB_RANDOM_HPP
#define RISLAB_RANDOM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "types.hpp"

namespace rislab {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Tags for the independent random streams derived from one master seed.
enum class Stream : std::uint64_t {
  Geometry = 1,
  LosAngles = 2,
  ChannelBlock = 3,
  PilotBlock = 4,
  EveBlock = 5,
  Scratch = 6,
};

/// Counter-based substream key: the same (master, tag, index) always yields
/// the same seed, so work units can run in any order or thread.
inline std::uint64_t substream_seed(std::uint64_t master, Stream tag, std::uint64_t index) {
  std::uint64_t h = detail::splitmix64(master);
  h = detail::splitmix64(h ^ static_cast<std::uint64_t>(tag));
  return detail::splitmix64(h ^ (index * 0xd1342543de82ef95ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, Stream tag, std::uint64_t index) : engine_(substream_seed(master, tag, index)) {}

  double uniform() { return unit_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit_(engine_); }
  double normal() { return normal_(engine_); }

  /// CN(0,1) sample.
  Complex cnormal() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    constexpr double h = 0.70710678118654752440;
    return {re * h, im * h};
  }

  CVector cnormal_vector(Eigen::Index n) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cnormal();
    return v;
  }

  CMatrix cnormal_matrix(Eigen::Index rows, Eigen::Index cols) {
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cnormal();
    return m;
  }

  /// Exact von Mises(0, kappa) draw by Best-Fisher rejection.
  double von_mises(double kappa) {
    if (kappa < 1e-8) return kPi * (2.0 * uniform() - 1.0);
    double s;
    if (kappa < 1e-5) {
      s = 1.0 / kappa + kappa;
    } else {
      const double r = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
      const double rho = (r - std::sqrt(2.0 * r)) / (2.0 * kappa);
      s = (1.0 + rho * rho) / (2.0 * rho);
    }
    double w;
    for (;;) {
      const double u = uniform();
      const double z = std::cos(kPi * u);
      w = (1.0 + s * z) / (s + z);
      const double y = kappa * (s - w);
      const double v = uniform();
      if (v <= 0.0) continue;
      if (y * (2.0 - y) - v >= 0.0 || std::log(y / v) + 1.0 - y >= 0.0) break;
    }
    w = std::clamp(w, -1.0, 1.0);
    const double angle = std::acos(w);
    return uniform() < 0.5 ? -angle : angle;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rislab

#endif  // RISLAB_RANDOM_HPP
