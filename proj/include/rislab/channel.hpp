#ifndef RISLAB_CHANNEL_HPP
#define RISLAB_CHANNEL_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "phase_noise.hpp"
#include "random.hpp"
#include "types.hpp"

namespace rislab {

struct SystemDimensions {
  int bs_antennas = 64;     // M
  int ris_horizontal = 10;  // N_H
  int ris_vertical = 10;    // N_V
  int users = 6;            // K
  int eve_antennas = 4;     // M_E
  int pilot_length = 6;     // tau_u

  int ris_elements() const { return ris_horizontal * ris_vertical; }

  void validate() const {
    require(bs_antennas >= 1 && users >= 1, "need at least one BS antenna and one user");
    require(ris_horizontal >= 1 && ris_vertical >= 1, "RIS dimensions must be positive");
    require(eve_antennas >= 1, "Eve needs at least one antenna");
    if (users >= bs_antennas)
      throw DegenerateConfig("null-space artificial noise needs M > K (M=" + std::to_string(bs_antennas) +
                             ", K=" + std::to_string(users) + ")");
    require(pilot_length >= users, "pilot length must be at least K");
  }
};

struct CorrelationSpec {
  double bs_index = 0.6;      // l
  double wavelength = 1.0;    // lambda
  double ris_spacing_h = 0.5; // d_H
  double ris_spacing_v = 0.5; // d_V
  double bs_spacing = 0.5;    // d_BS (LoS model)
  double ris_spacing = 0.25;  // d_RIS (LoS model)
  bool correlated_ris = true; // false: R_I = I_N

  void validate() const {
    require(bs_index >= 0.0 && bs_index < 1.0, "BS correlation index must be in [0,1)");
    require(wavelength > 0.0 && ris_spacing_h > 0.0 && ris_spacing_v > 0.0, "spacings and wavelength must be positive");
  }
};

struct LargeScaleFading {
  double beta_1 = 1.0;            // BS-RIS
  std::vector<double> beta_I;     // RIS-user k
  std::vector<double> beta_2;     // BS-user k
  double beta_3 = 1.0;            // BS-Eve
  double beta_IE = 1.0;           // RIS-Eve

  void validate(int users) const {
    require(static_cast<int>(beta_I.size()) == users && static_cast<int>(beta_2.size()) == users,
            "need one RIS and one direct path loss per user");
    require(beta_1 > 0.0 && beta_3 >= 0.0 && beta_IE >= 0.0, "path losses must be positive");
    for (int k = 0; k < users; ++k) require(beta_I[k] >= 0.0 && beta_2[k] >= 0.0, "path losses must be positive");
  }
};

/// Distortion factors, noise powers and RIS phase noise.
struct HardwareProfile {
  double kappa_t_ue = 0.0;  // uplink transmit (user)
  double kappa_r_bs = 0.0;  // uplink receive (BS)
  double kappa_t_bs = 0.0;  // downlink transmit (BS)
  double kappa_r_ue = 0.0;  // downlink receive (user)
  double sigma_u2 = 1.0;    // uplink noise power
  double sigma_k2 = 1.0;    // downlink user noise power
  PhaseNoiseModel phase_noise{};

  static HardwareProfile uniform_kappa(double kappa) {
    HardwareProfile hw;
    hw.kappa_t_ue = hw.kappa_r_bs = hw.kappa_t_bs = hw.kappa_r_ue = kappa;
    return hw;
  }

  void validate() const {
    require(kappa_t_ue >= 0.0 && kappa_r_bs >= 0.0 && kappa_t_bs >= 0.0 && kappa_r_ue >= 0.0,
            "distortion factors must be non-negative");
    require(sigma_u2 >= 0.0 && sigma_k2 >= 0.0, "noise powers must be non-negative");
    phase_noise.validate();
  }
};

/// beta = J0 (d/J1)^(-exponent).
inline double path_loss(double distance, double exponent, double j0 = 0.01, double j1 = 1.0) {
  require(distance > 0.0, "distance must be positive");
  return j0 * std::pow(distance / j1, -exponent);
}

inline double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}

/// Exponential model [R_B]_ij = l^|i-j|.
inline CMatrix build_bs_correlation(int m, double l) {
  require(l >= 0.0 && l < 1.0, "BS correlation index must be in [0,1)");
  require(m >= 1, "need at least one antenna");
  CMatrix r(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) r(i, j) = std::pow(l, std::abs(i - j));
  return r;
}

/// Planar-array sinc correlation, elements indexed row-major over N_H columns.
inline CMatrix build_ris_correlation(const SystemDimensions& dims, const CorrelationSpec& spec) {
  spec.validate();
  const int n = dims.ris_elements();
  const int nh = dims.ris_horizontal;
  if (!spec.correlated_ris) return CMatrix::Identity(n, n);
  CMatrix r(n, n);
  for (int x = 0; x < n; ++x) {
    const double hx = (x % nh) * spec.ris_spacing_h;
    const double vx = (x / nh) * spec.ris_spacing_v;
    for (int y = 0; y < n; ++y) {
      const double hy = (y % nh) * spec.ris_spacing_h;
      const double vy = (y / nh) * spec.ris_spacing_v;
      const double dist = std::hypot(hx - hy, vx - vy);
      r(x, y) = sinc(2.0 * dist / spec.wavelength);
    }
  }
  return r;
}

/// Deterministic BS-RIS LoS matrix. One (theta, phi) pair is drawn per index
/// i < max(M, N); column b uses pair b on the BS side and row a uses pair a on
/// the RIS side, with theta_2 = pi - theta_1 and phi_2 = pi + phi_1.
inline CMatrix build_los_channel(const SystemDimensions& dims, const CorrelationSpec& spec, double beta_1,
                                 std::uint64_t seed) {
  require(beta_1 >= 0.0, "beta_1 must be non-negative");
  const int m = dims.bs_antennas;
  const int n = dims.ris_elements();
  const int len = std::max(m, n);
  Rng rng(seed, Stream::LosAngles, 0);
  std::vector<double> s(len);
  for (int i = 0; i < len; ++i) {
    const double theta = rng.uniform(0.0, kPi);
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    s[i] = std::sin(theta) * std::sin(phi);
  }
  const double k = 2.0 * kPi / spec.wavelength;
  const double amp = std::sqrt(beta_1);
  CMatrix h(m, n);
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < m; ++a) {
      // sin(pi - t) sin(pi + p) = -sin(t) sin(p)
      const double phase = k * (a * spec.bs_spacing * s[b] - b * spec.ris_spacing * s[a]);
      h(a, b) = std::polar(amp, phase);
    }
  return h;
}

/// rho^2 R + beta (1 - rho^2) I, with R = beta * R_I.
inline CMatrix effective_ris_correlation(const CMatrix& r_ik, double beta_ik, double rho) {
  require(rho >= 0.0 && rho <= 1.0, "phase deviation factor must be in [0,1]");
  const double r2 = rho * rho;
  CMatrix out = r2 * r_ik;
  out.diagonal().array() += beta_ik * (1.0 - r2);
  return out;
}

/// R_B,k + H1 Phi Rt Phi^H H1^H.
inline CMatrix aggregate_covariance(const CMatrix& r_bk, const CMatrix& h1, const CVector& phi,
                                    const CMatrix& r_tilde) {
  const CMatrix g = h1 * phi.asDiagonal();
  CMatrix r = r_bk + g * r_tilde * g.adjoint();
  make_hermitian(r);
  return r;
}

inline CVector uniform_phase_shifts(int n, double angle = kPi / 4.0) {
  return CVector::Constant(n, std::polar(1.0, angle));
}

/// Deterministic second-order description of every link.
struct ChannelStatistics {
  int m = 0, n = 0, k = 0, me = 0;
  CMatrix r_b;        // unit-gain BS correlation, tr = M
  CMatrix r_i;        // unit-gain RIS correlation, tr = N
  CMatrix h1;         // LoS BS-RIS
  CVector phi;        // RIS phase shifts (diagonal)
  double rho = 1.0;   // phase deviation factor
  LargeScaleFading fading;
  std::vector<CMatrix> r_k;  // aggregate covariances
  CMatrix q_e;               // Eve aggregate covariance (per antenna)
  CMatrix sqrt_r_b, sqrt_r_i;
  bool ris_identity = false;  // R_I = I; r_i and sqrt_r_i are left empty

  const CMatrix& user_cov(int user) const { return r_k.at(user); }
};

/// Square roots needed only by the sampler.
inline void prepare_sampling(ChannelStatistics& st) {
  if (st.sqrt_r_b.size() == 0) st.sqrt_r_b = hermitian_sqrt(st.r_b);
  if (!st.ris_identity && st.sqrt_r_i.size() == 0) st.sqrt_r_i = hermitian_sqrt(st.r_i);
}

/// Builds R_k and Q_E from two shared Gram matrices so the N x N blend is
/// never formed per user.
inline ChannelStatistics build_statistics(const SystemDimensions& dims, const CorrelationSpec& spec,
                                          const LargeScaleFading& fading, const HardwareProfile& hw,
                                          std::uint64_t los_seed, const CVector* phase_shifts = nullptr,
                                          bool sampling_factors = true) {
  dims.validate();
  spec.validate();
  hw.validate();
  fading.validate(dims.users);
  ChannelStatistics st;
  st.m = dims.bs_antennas;
  st.n = dims.ris_elements();
  st.k = dims.users;
  st.me = dims.eve_antennas;
  st.r_b = build_bs_correlation(st.m, spec.bs_index);
  st.ris_identity = !spec.correlated_ris;
  if (!st.ris_identity) st.r_i = build_ris_correlation(dims, spec);
  st.h1 = build_los_channel(dims, spec, fading.beta_1, los_seed);
  st.phi = phase_shifts ? *phase_shifts : uniform_phase_shifts(st.n);
  require(st.phi.size() == st.n, "phase shift vector has wrong length");
  st.rho = phase_deviation_factor(hw.phase_noise);
  st.fading = fading;

  const CMatrix g = st.h1 * st.phi.asDiagonal();
  CMatrix gram_los = st.h1 * st.h1.adjoint();
  // unit-modulus phases cancel when R_I = I
  CMatrix gram_corr = st.ris_identity ? gram_los : CMatrix(g * st.r_i * g.adjoint());
  const double r2 = st.rho * st.rho;
  CMatrix ris_part = r2 * gram_corr + (1.0 - r2) * gram_los;
  make_hermitian(ris_part);

  st.r_k.reserve(st.k);
  for (int u = 0; u < st.k; ++u) {
    CMatrix r = fading.beta_2[u] * st.r_b + fading.beta_I[u] * ris_part;
    make_hermitian(r);
    st.r_k.push_back(std::move(r));
  }
  st.q_e = fading.beta_3 * st.r_b + fading.beta_IE * ris_part;
  make_hermitian(st.q_e);
  if (sampling_factors) prepare_sampling(st);
  return st;
}

/// One coherence block of small-scale fading and RIS phase errors.
struct ChannelRealization {
  std::vector<CVector> h_i;  // RIS-user, N
  std::vector<CVector> h_b;  // BS-user, M
  CMatrix h_ie;              // RIS-Eve, N x M_E
  CMatrix h_be;              // BS-Eve, M x M_E
  CVector theta;             // diag of Theta, unit modulus
  CMatrix h;                 // M x K aggregate user channels
  CMatrix h_e;               // M x M_E aggregate Eve channel
};

inline ChannelRealization sample_realization(const ChannelStatistics& st, const PhaseNoiseModel& noise, Rng& rng,
                                             bool with_eve = true) {
  require(st.sqrt_r_b.size() > 0, "channel statistics were built without sampling factors");
  ChannelRealization out;
  out.theta.resize(st.n);
  for (int i = 0; i < st.n; ++i) out.theta(i) = std::polar(1.0, noise.sample(rng));
  const CMatrix cascade = st.h1 * (st.phi.cwiseProduct(out.theta)).asDiagonal();
  out.h.resize(st.m, st.k);
  for (int u = 0; u < st.k; ++u) {
    CVector hi = std::sqrt(st.fading.beta_I[u]) * (st.ris_identity ? rng.cnormal_vector(st.n)
                                                                 : CVector(st.sqrt_r_i * rng.cnormal_vector(st.n)));
    CVector hb = std::sqrt(st.fading.beta_2[u]) * (st.sqrt_r_b * rng.cnormal_vector(st.m));
    out.h.col(u) = cascade * hi + hb;
    out.h_i.push_back(std::move(hi));
    out.h_b.push_back(std::move(hb));
  }
  if (with_eve) {
    out.h_ie = std::sqrt(st.fading.beta_IE) * (st.ris_identity ? rng.cnormal_matrix(st.n, st.me)
                                                      : CMatrix(st.sqrt_r_i * rng.cnormal_matrix(st.n, st.me)));
    out.h_be = std::sqrt(st.fading.beta_3) * (st.sqrt_r_b * rng.cnormal_matrix(st.m, st.me));
    out.h_e = cascade * out.h_ie + out.h_be;
  }
  return out;
}

}  // namespace rislab

#endif  // RISLAB_CHANNEL_HPP
