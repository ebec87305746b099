#ifndef RISLAB_TESTS_SUPPORT_HPP
#define RISLAB_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>

#include "rislab/rislab.hpp"

namespace rislab::testing {

/// Path losses of order one for both paths: beta_1 = 1/N, beta_I, beta_2 in [0.5, 1.5].
inline LargeScaleFading random_fading(int k, int n, Rng& rng) {
  LargeScaleFading f;
  f.beta_1 = 1.0 / n;
  for (int i = 0; i < k; ++i) {
    f.beta_I.push_back(rng.uniform(0.5, 1.5));
    f.beta_2.push_back(rng.uniform(0.5, 1.5));
  }
  f.beta_3 = rng.uniform(0.5, 1.5);
  f.beta_IE = rng.uniform(0.5, 1.5);
  return f;
}

inline SystemDimensions dims_of(int m, int nh, int nv, int k, int me) {
  SystemDimensions d;
  d.bs_antennas = m;
  d.ris_horizontal = nh;
  d.ris_vertical = nv;
  d.users = k;
  d.eve_antennas = me;
  d.pilot_length = k;
  return d;
}

struct Built {
  SystemDimensions dims;
  CorrelationSpec corr;
  LargeScaleFading fading;
  HardwareProfile hw;
  ChannelStatistics st;
  PilotConfig pilots;
  EstimatorStatistics es;
};

inline Built build(const SystemDimensions& dims, const HardwareProfile& hw, double rho, std::uint64_t seed,
                   CorrelationSpec corr = {}, const LargeScaleFading* fading = nullptr) {
  Built b;
  b.dims = dims;
  b.corr = corr;
  b.hw = hw;
  Rng rng(seed, Stream::Scratch, 99);
  b.fading = fading ? *fading : random_fading(dims.users, dims.ris_elements(), rng);
  b.st = build_statistics(dims, corr, b.fading, hw, seed);
  b.pilots = PilotConfig::dft(dims.pilot_length, dims.users, rho);
  b.es = estimator_statistics(b.st, hw, b.pilots);
  return b;
}

inline double rel_fro(const CMatrix& a, const CMatrix& ref) { return (a - ref).norm() / ref.norm(); }

inline double rel(double a, double ref) { return std::abs(a - ref) / std::abs(ref); }

/// I_1(x)/I_0(x) from the defining power series, in long double.
inline double bessel_ratio_series(double x) {
  long double i0 = 0, i1 = 0, term0 = 1, term1 = x / 2.0L;
  const long double q = static_cast<long double>(x) * x / 4.0L;
  for (int k = 0; k < 400; ++k) {
    i0 += term0;
    i1 += term1;
    term0 *= q / ((k + 1.0L) * (k + 1.0L));
    term1 *= q / ((k + 1.0L) * (k + 2.0L));
  }
  return static_cast<double>(i1 / i0);
}

}  // namespace rislab::testing

#endif  // RISLAB_TESTS_SUPPORT_HPP
