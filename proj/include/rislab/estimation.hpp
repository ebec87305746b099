#ifndef RISLAB_ESTIMATION_HPP
#define RISLAB_ESTIMATION_HPP

#include <cmath>
#include <string>
#include <vector>

#include "channel.hpp"
#include "linalg.hpp"
#include "random.hpp"
#include "types.hpp"

namespace rislab {

inline constexpr double kConditionWarning = 1e12;

struct PilotConfig {
  int length = 0;      // tau_u
  double power = 1.0;  // rho
  CMatrix sequences;   // tau_u x K, orthogonal unit-modulus columns

  /// First K columns of the tau_u-point DFT basis.
  static PilotConfig dft(int tau, int users, double power) {
    require(tau >= users && users >= 1, "pilot length must be at least K");
    require(power >= 0.0, "pilot power must be non-negative");
    PilotConfig p;
    p.length = tau;
    p.power = power;
    p.sequences.resize(tau, users);
    for (int t = 0; t < tau; ++t)
      for (int k = 0; k < users; ++k) p.sequences(t, k) = std::polar(1.0, -2.0 * kPi * t * k / tau);
    return p;
  }
};

/// Pilot observation covariance for every user:
/// tau rho R_k + rho kt sum R_i + rho kr sum I o R_i + sigma_u^2 I.
inline std::vector<CMatrix> build_psi(const ChannelStatistics& st, const HardwareProfile& hw, const PilotConfig& pilots) {
  const double rho = pilots.power;
  CMatrix sum_r = CMatrix::Zero(st.m, st.m);
  for (const auto& r : st.r_k) sum_r += r;
  CMatrix common = rho * hw.kappa_t_ue * sum_r;
  common.diagonal() += rho * hw.kappa_r_bs * sum_r.diagonal();
  common.diagonal().array() += hw.sigma_u2;
  std::vector<CMatrix> psi;
  psi.reserve(st.k);
  for (int u = 0; u < st.k; ++u) {
    CMatrix p = pilots.length * rho * st.r_k[u] + common;
    make_hermitian(p);
    psi.push_back(std::move(p));
  }
  return psi;
}

/// C_k = R_k - tau rho R_k Psi_k^{-1} R_k.
inline CMatrix error_covariance(const CMatrix& r, const HermitianFactor& psi, double rho, int tau) {
  CMatrix a = r * psi.solve(r);
  make_hermitian(a);
  CMatrix c = r - tau * rho * a;
  make_hermitian(c);
  return c;
}

inline double nmse(const CMatrix& r, const CMatrix& c) {
  const double tr = real_trace(r);
  if (tr <= 0.0) throw DegenerateConfig("channel covariance has zero trace");
  return std::clamp(real_trace(c) / tr, 0.0, 1.0);
}

/// Everything the estimator and the rate expressions need per user.
struct EstimatorStatistics {
  int tau = 0;
  double rho = 0.0;
  std::vector<CMatrix> psi;
  std::vector<HermitianFactor> psi_factor;
  std::vector<CMatrix> gain;  // R_k Psi_k^{-1}, maps y_k to h_hat_k / sqrt(rho)
  std::vector<CMatrix> a;     // R_k Psi_k^{-1} R_k
  std::vector<double> zeta;   // tr(A_k)
  std::vector<CMatrix> c;     // error covariance
  std::vector<double> nmse;
  std::vector<double> condition;
  std::vector<std::string> warnings;
};

inline EstimatorStatistics estimator_statistics(const ChannelStatistics& st, const HardwareProfile& hw,
                                                const PilotConfig& pilots) {
  EstimatorStatistics es;
  es.tau = pilots.length;
  es.rho = pilots.power;
  es.psi = build_psi(st, hw, pilots);
  for (int u = 0; u < st.k; ++u) {
    HermitianFactor f(es.psi[u], "pilot covariance of user " + std::to_string(u));
    if (f.condition() > kConditionWarning)
      es.warnings.push_back("pilot covariance of user " + std::to_string(u) + " has condition number " +
                            std::to_string(f.condition()));
    // Psi and R_k are Hermitian, so R_k Psi^{-1} = (Psi^{-1} R_k)^H.
    CMatrix g = f.solve(st.r_k[u]).adjoint();
    CMatrix a = g * st.r_k[u];
    make_hermitian(a);
    CMatrix c = st.r_k[u] - es.tau * es.rho * a;
    make_hermitian(c);
    es.zeta.push_back(real_trace(a));
    es.nmse.push_back(nmse(st.r_k[u], c));
    es.condition.push_back(f.condition());
    es.gain.push_back(std::move(g));
    es.a.push_back(std::move(a));
    es.c.push_back(std::move(c));
    es.psi_factor.push_back(std::move(f));
  }
  return es;
}

struct ChannelEstimate {
  CVector h_hat;
  double condition = 0.0;
  bool ill_conditioned = false;
};

/// h_hat = sqrt(rho) R Psi^{-1} y, via the Psi factorization.
inline ChannelEstimate lmmse_estimate(const CVector& y, const CMatrix& r, const HermitianFactor& psi, double rho) {
  ChannelEstimate e;
  e.h_hat = std::sqrt(rho) * (r * psi.solve(y));
  e.condition = psi.condition();
  e.ill_conditioned = e.condition > kConditionWarning;
  return e;
}

struct PilotObservation {
  CMatrix received;  // Y_p, M x tau
  CMatrix despread;  // columns y_k = Y_p phi_k
};

/// One impaired uplink training phase for a fixed channel draw.
inline PilotObservation simulate_pilot_phase(const CMatrix& h, const PilotConfig& pilots, const HardwareProfile& hw,
                                             Rng& rng) {
  const Eigen::Index m = h.rows();
  const Eigen::Index k = h.cols();
  const int tau = pilots.length;
  const double rho = pilots.power;
  PilotObservation out;
  CMatrix x = std::sqrt(rho) * pilots.sequences.adjoint();  // K x tau, row i is sqrt(rho) phi_i^H
  if (hw.kappa_t_ue > 0.0) x += std::sqrt(rho * hw.kappa_t_ue) * rng.cnormal_matrix(k, tau);
  out.received = h * x;
  if (hw.kappa_r_bs > 0.0) {
    RVector dr = h.cwiseAbs2().rowwise().sum();
    CMatrix eta = rng.cnormal_matrix(m, tau);
    out.received += ((rho * hw.kappa_r_bs) * dr).cwiseSqrt().asDiagonal() * eta;
  }
  if (hw.sigma_u2 > 0.0) out.received += std::sqrt(hw.sigma_u2) * rng.cnormal_matrix(m, tau);
  out.despread = out.received * pilots.sequences;
  return out;
}

/// Estimates of all users from one pilot observation.
inline CMatrix estimate_all(const PilotObservation& obs, const EstimatorStatistics& es) {
  const Eigen::Index k = obs.despread.cols();
  CMatrix h_hat(obs.despread.rows(), k);
  const double s = std::sqrt(es.rho);
  for (Eigen::Index u = 0; u < k; ++u) h_hat.col(u) = s * (es.gain[u] * obs.despread.col(u));
  return h_hat;
}

/// High pilot power NMSE floor of user k; zero for ideal uplink hardware.
inline double nmse_high_power_limit(const ChannelStatistics& st, const HardwareProfile& hw, int tau, int user) {
  if (hw.kappa_t_ue == 0.0 && hw.kappa_r_bs == 0.0) return 0.0;
  CMatrix sum_r = CMatrix::Zero(st.m, st.m);
  for (const auto& r : st.r_k) sum_r += r;
  CMatrix psi = tau * st.r_k[user] + hw.kappa_t_ue * sum_r;
  psi.diagonal() += hw.kappa_r_bs * sum_r.diagonal();
  make_hermitian(psi);
  HermitianFactor f(psi, "high-power pilot covariance");
  const CMatrix& r = st.r_k[user];
  CMatrix c = r - tau * (r * f.solve(r));
  return real_trace(c) / real_trace(r);
}

/// Large-N NMSE with identity correlations: 1 - G / (G + sigma^2/(tau rho)),
/// G = beta_2 + beta_I beta_1 N.
inline double nmse_large_n_limit(double beta_2, double beta_i, double beta_1, int n, double rho, int tau,
                                 double sigma_u2) {
  require(rho > 0.0 && tau > 0, "pilot power and length must be positive");
  const double g = beta_2 + beta_i * beta_1 * n;
  const double floor = sigma_u2 / (tau * rho);
  return floor / (g + floor);
}

}  // namespace rislab

#endif  // RISLAB_ESTIMATION_HPP
