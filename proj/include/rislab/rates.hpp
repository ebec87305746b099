#ifndef RISLAB_RATES_HPP
#define RISLAB_RATES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "channel.hpp"
#include "estimation.hpp"
#include "precoding.hpp"
#include "types.hpp"

namespace rislab {

inline double log2_1p(double x) { return std::log1p(x) / std::log(2.0); }

/// The scalar traces every closed form needs for one target user.
struct TraceSummary {
  int m = 0, k = 0, me = 0, tau = 0;
  double rho = 0.0;      // pilot power
  double zeta = 0.0;     // tr(A_k), A_k = R_k Psi_k^{-1} R_k
  double tr_r = 0.0;     // tr(R_k)
  double tr_c = 0.0;     // tr(C_k)
  double variance = 0.0; // tr(C_k A_k) / zeta_k
  double interference = 0.0;  // sum_{i != k} tr(R_k A_i) / zeta_i
  double tr_aq = 0.0;    // tr(A_k Q_E)
  double tr_q = 0.0;     // tr(Q_E)
  double tr_q2 = 0.0;    // tr(Q_E^2)
};

inline TraceSummary trace_summary(const ChannelStatistics& st, const EstimatorStatistics& es, int user) {
  require(user >= 0 && user < st.k, "user index out of range");
  TraceSummary t;
  t.m = st.m;
  t.k = st.k;
  t.me = st.me;
  t.tau = es.tau;
  t.rho = es.rho;
  t.zeta = es.zeta[user];
  if (!(t.zeta > 0.0)) throw DegenerateConfig("estimate power tr(R Psi^-1 R) is zero for user " + std::to_string(user));
  const CMatrix& r = st.r_k[user];
  t.tr_r = real_trace(r);
  t.tr_c = real_trace(es.c[user]);
  t.variance = real_trace_product(es.c[user], es.a[user]) / t.zeta;
  for (int i = 0; i < st.k; ++i)
    if (i != user) t.interference += real_trace_product(r, es.a[i]) / es.zeta[i];
  t.tr_aq = real_trace_product(es.a[user], st.q_e);
  t.tr_q = real_trace(st.q_e);
  t.tr_q2 = st.q_e.cwiseAbs2().sum();
  return t;
}

/// Numerator and the five denominator contributions of the user SINR.
struct UserRateTerms {
  double signal = 0.0;         // S_k
  double interference = 0.0;   // multiuser interference power
  double variance = 0.0;       // beamforming gain uncertainty
  double an_leakage = 0.0;     // AN leaking through estimation error
  double tx_distortion = 0.0;  // BS transmit distortion
  double rx_distortion = 0.0;  // user receive distortion
  double noise = 0.0;
  double denominator = 0.0;    // I_k
  double sinr = 0.0;
  double rate = 0.0;
};

inline UserRateTerms user_rate(const TraceSummary& t, const PowerAllocation& alloc, const HardwareProfile& hw) {
  UserRateTerms r;
  const double p = alloc.p();
  const double q = alloc.q();
  r.signal = p * t.tau * t.rho * t.zeta;
  r.interference = p * t.interference;
  r.variance = p * t.variance;
  r.an_leakage = q * (t.m - t.k) / t.m * t.tr_c;
  r.tx_distortion = hw.kappa_t_bs * alloc.total / t.m * t.tr_r;
  r.rx_distortion = hw.kappa_r_ue * alloc.total / t.m * t.tr_r;
  r.noise = hw.sigma_k2;
  r.denominator = r.interference + r.variance + r.an_leakage + r.tx_distortion + r.rx_distortion + r.noise;
  if (r.signal == 0.0) return r;
  if (!(r.denominator > 0.0)) throw DegenerateConfig("user SINR denominator is zero");
  r.sinr = r.signal / r.denominator;
  r.rate = log2_1p(r.sinr);
  return r;
}

/// Eve capacity upper bound and the moment-matched Wishart parameters.
struct EveBound {
  double interference_power = 0.0;  // q(M-K) + kappa_t^BS P_t
  double s_e = 0.0;
  double i_e = 0.0;
  double chi = 0.0;
  double phi_w = 0.0;     // scale
  double eta_w = 0.0;     // degrees of freedom
  double sinr = 0.0;
  double sinr_wishart = 0.0;  // same quantity through phi_w, eta_w
  double capacity = 0.0;
  bool inverse_mean_margin = false;  // eta_w > M_E + 1
};

inline EveBound eve_capacity_bound(const TraceSummary& t, const PowerAllocation& alloc, const HardwareProfile& hw) {
  EveBound e;
  const double p = alloc.p();
  const double q = alloc.q();
  const double kp = hw.kappa_t_bs * alloc.total;
  const double mk = static_cast<double>(t.m - t.k);
  const double w = q * mk + kp;
  e.interference_power = w;
  if (!(w > 0.0))
    throw InfiniteCapacity("no artificial noise and no transmit distortion: Eve sees no interference");
  // second-moment functional of the interference
  const double b = q * q * t.m * mk + 2.0 * q * mk * kp + kp * kp;
  e.s_e = p * t.me * t.m * w * t.tr_aq * t.tr_q;
  e.chi = w * w * t.tr_q * t.tr_q - t.me * b * t.tr_q2;
  e.i_e = e.chi * t.zeta;
  e.phi_w = t.tr_q2 * b / (t.m * t.tr_q * w);
  e.eta_w = t.tr_q * t.tr_q * w * w / (t.tr_q2 * b);
  e.inverse_mean_margin = e.eta_w > t.me + 1.0;
  if (!(e.eta_w > t.me))
    throw BoundInvalid("Wishart degrees of freedom " + std::to_string(e.eta_w) + " do not exceed M_E = " +
                       std::to_string(t.me) + "; inverse mean undefined");
  e.sinr = e.s_e / e.i_e;
  e.sinr_wishart = p * t.me * t.tr_aq / (e.phi_w * (e.eta_w - t.me) * t.zeta);
  e.capacity = log2_1p(e.sinr);
  return e;
}

/// Eve bound without artificial noise; independent of P_t.
inline double eve_capacity_no_an(const TraceSummary& t, const HardwareProfile& hw) {
  if (!(hw.kappa_t_bs > 0.0))
    throw InfiniteCapacity("no artificial noise and no transmit distortion: Eve sees no interference");
  const double den = hw.kappa_t_bs * t.zeta * t.k * (t.tr_q * t.tr_q - t.me * t.tr_q2);
  if (!(den > 0.0)) throw BoundInvalid("[tr Q]^2 <= M_E tr(Q^2): no-AN Eve bound undefined");
  return log2_1p(t.me * t.m * t.tr_aq * t.tr_q / den);
}

/// Terms of the xi-parameterized secrecy rate (no dependence on xi unless noted).
struct AnTerms {
  double s_dd = 0.0;   // tau rho zeta
  double i_dd = 0.0;   // interference + variance, per unit p
  double n_dd = 0.0;   // HWI + noise without AN
  double psi = 0.0;    // i_dd - K/M tr(C)
  double d_dd = 0.0;   // K/M (tr C + (kt + kr) tr R) + sigma^2 K / P
  double lambda = 0.0; // tr(AQ) tr(Q) / zeta
  double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0, a5 = 0.0;
  double l1 = 0.0;
  double kappa = 0.0;  // kappa_t^BS
  int m = 0, k = 0, me = 0;
  double tr_q = 0.0, tr_q2 = 0.0;

  double upsilon(double xi) const { return 1.0 - xi + kappa; }
  double chi_dd(double xi) const {
    const double v = upsilon(xi);
    const double s = 1.0 - xi;
    return (m * s * s / (m - k) + 2.0 * s * kappa + kappa * kappa) / v;
  }
};

inline AnTerms an_terms(const TraceSummary& t, const HardwareProfile& hw, double total_power) {
  require(total_power > 0.0, "transmit power must be positive");
  AnTerms a;
  a.m = t.m;
  a.k = t.k;
  a.me = t.me;
  a.kappa = hw.kappa_t_bs;
  a.tr_q = t.tr_q;
  a.tr_q2 = t.tr_q2;
  const double kr = static_cast<double>(t.k) / t.m;
  a.s_dd = t.tau * t.rho * t.zeta;
  a.i_dd = t.interference + t.variance;
  a.n_dd = (hw.kappa_t_bs + hw.kappa_r_ue) * total_power * t.tr_r / t.m + hw.sigma_k2;
  a.psi = a.i_dd - kr * t.tr_c;
  a.d_dd = kr * (t.tr_c + (hw.kappa_t_bs + hw.kappa_r_ue) * t.tr_r) + hw.sigma_k2 * t.k / total_power;
  a.lambda = t.tr_aq * t.tr_q / t.zeta;
  a.a1 = t.me * t.m * a.lambda;
  a.a2 = t.k * t.tr_q * t.tr_q;
  a.a3 = static_cast<double>(t.me) * t.m * t.k / (t.m - t.k) * t.tr_q2;
  a.a4 = 2.0 * t.me * t.k * a.kappa * t.tr_q2;
  a.a5 = t.me * t.k * a.kappa * (a.kappa + 2.0) * t.tr_q2;
  a.l1 = t.tr_q * t.tr_q - static_cast<double>(t.me) * t.m / (t.m - t.k) * t.tr_q2;
  return a;
}

/// Both halves of the xi-parameterized form, unclipped.
struct XiForm {
  double user_sinr = 0.0;
  double eve_sinr = 0.0;
  double user_rate = 0.0;
  double eve_capacity = 0.0;
  double difference = 0.0;
};

inline XiForm secrecy_xi_form(const AnTerms& a, double xi) {
  require(xi >= 0.0 && xi <= 1.0, "power fraction must lie in [0,1]");
  XiForm f;
  f.user_sinr = xi * a.s_dd / (xi * a.psi + a.d_dd);
  const double v = a.upsilon(xi);
  if (!(v > 0.0)) throw InfiniteCapacity("no artificial noise and no transmit distortion: Eve sees no interference");
  const double den = a.k * v * a.tr_q * a.tr_q - static_cast<double>(a.me) * a.k * a.chi_dd(xi) * a.tr_q2;
  if (!(den > 0.0)) throw BoundInvalid("Eve SINR denominator is not positive");
  f.eve_sinr = xi * a.a1 / den;
  f.user_rate = log2_1p(f.user_sinr);
  f.eve_capacity = log2_1p(f.eve_sinr);
  f.difference = f.user_rate - f.eve_capacity;
  return f;
}

/// The same quantity written with the optimizer constants A_1..A_5.
inline double secrecy_a_form(const AnTerms& a, double xi) {
  const double v = a.upsilon(xi);
  const double g = v * v * a.a2 - (1.0 - xi) * (1.0 - xi) * a.a3 + xi * a.a4 - a.a5;
  if (!(g > 0.0)) throw BoundInvalid("Eve SINR denominator is not positive");
  return log2_1p(xi * a.s_dd / (xi * a.psi + a.d_dd)) - log2_1p(xi * v * a.a1 / g);
}

struct SecrecyReport {
  UserRateTerms user;
  EveBound eve;
  double difference = 0.0;  // R_k - C_E before clipping
  double r_sec = 0.0;
  double difference_xi_form = 0.0;
  double r_sec_xi_form = 0.0;
};

inline SecrecyReport secrecy_rate(const TraceSummary& t, const PowerAllocation& alloc, const HardwareProfile& hw) {
  SecrecyReport s;
  s.user = user_rate(t, alloc, hw);
  s.eve = eve_capacity_bound(t, alloc, hw);
  s.difference = s.user.rate - s.eve.capacity;
  s.r_sec = std::max(0.0, s.difference);
  if (alloc.total > 0.0 && alloc.xi > 0.0) {
    s.difference_xi_form = secrecy_xi_form(an_terms(t, hw, alloc.total), alloc.xi).difference;
    s.r_sec_xi_form = std::max(0.0, s.difference_xi_form);
  }
  return s;
}

/// No-AN secrecy rate, unclipped, from the q = 0 decomposition.
inline double secrecy_no_an_difference(const TraceSummary& t, const HardwareProfile& hw, double total_power) {
  const AnTerms a = an_terms(t, hw, total_power);
  const double user = log2_1p(total_power * a.s_dd / t.k / (total_power * a.i_dd / t.k + a.n_dd));
  return user - eve_capacity_no_an(t, hw);
}

/// Normalized Eve antenna count at which the no-AN secrecy rate vanishes.
inline double max_eve_antennas_no_an(const TraceSummary& t, const HardwareProfile& hw, double total_power) {
  if (hw.kappa_t_bs == 0.0) return 0.0;
  const AnTerms a = an_terms(t, hw, total_power);
  const double kap = hw.kappa_t_bs;
  const double num = a.s_dd * kap * t.k / t.m * t.tr_q;
  const double den = kap * a.s_dd * t.k * t.tr_q2 / t.tr_q +
                     t.m / t.zeta * (a.i_dd + t.k * a.n_dd / total_power) * t.tr_aq;
  return num / den;
}

/// Normalized Eve antenna count below which a small AN-assisted power split
/// still gives a positive secrecy rate.
inline double max_eve_antennas_an(const TraceSummary& t, const HardwareProfile& hw, double total_power) {
  const AnTerms a = an_terms(t, hw, total_power);
  const double kap = hw.kappa_t_bs;
  const double m = t.m;
  const double bracket = (m / (m - t.k) + 2.0 * kap + kap * kap) / (1.0 + kap);
  const double num = a.s_dd * t.k * (1.0 + kap) * t.tr_q * t.tr_q;
  const double den = m * m * a.lambda * a.d_dd + a.s_dd * t.k * m * bracket * t.tr_q2;
  return num / den;
}

/// Uncorrelated fading with ideal uplink hardware. Only H1 H1^H enters.
struct UncorrelatedInputs {
  CMatrix gram_los;  // H1 H1^H
  LargeScaleFading fading;
  int m = 0, k = 0, me = 0, tau = 0;
  double rho = 1.0;  // pilot power
};

inline SecrecyReport secrecy_uncorrelated(const UncorrelatedInputs& in, const PowerAllocation& alloc,
                                          const HardwareProfile& hw, int user) {
  const int m = in.m;
  auto cov = [&](double b_direct, double b_ris) {
    CMatrix r = b_ris * in.gram_los;
    r.diagonal().array() += b_direct;
    make_hermitian(r);
    return r;
  };
  std::vector<CMatrix> r(in.k), ups(in.k);
  std::vector<double> tr_ups(in.k);
  for (int i = 0; i < in.k; ++i) {
    r[i] = cov(in.fading.beta_2[i], in.fading.beta_I[i]);
    CMatrix psi = in.tau * in.rho * r[i];
    psi.diagonal().array() += hw.sigma_u2;
    HermitianFactor f(psi, "pilot covariance");
    ups[i] = r[i] * f.solve(r[i]);
    make_hermitian(ups[i]);
    tr_ups[i] = real_trace(ups[i]);
  }
  const CMatrix q_e = cov(in.fading.beta_3, in.fading.beta_IE);
  const CMatrix& rk = r[user];
  const CMatrix& uk = ups[user];
  const double p = alloc.p();
  const double q = alloc.q();
  const double mk = m - in.k;
  const double kp = hw.kappa_t_bs * alloc.total;

  double i_tilde = 0.0;
  for (int i = 0; i < in.k; ++i)
    if (i != user) i_tilde += real_trace_product(rk, ups[i]) / tr_ups[i];
  const CMatrix err = rk - in.tau * in.rho * uk;
  i_tilde += real_trace_product(err, uk) / tr_ups[user];

  SecrecyReport s;
  s.user.signal = p * in.tau * in.rho * tr_ups[user];
  s.user.denominator = p * i_tilde + q * mk / m * real_trace(err) +
                       (hw.kappa_t_bs + hw.kappa_r_ue) * alloc.total / m * real_trace(rk) + hw.sigma_k2;
  s.user.sinr = s.user.signal / s.user.denominator;
  s.user.rate = log2_1p(s.user.sinr);

  const double w = q * mk + kp;
  if (!(w > 0.0)) throw InfiniteCapacity("no artificial noise and no transmit distortion: Eve sees no interference");
  const double varpi = in.me * kp * kp + q * q * in.me * m * mk + 2.0 * q * in.me * mk * kp;
  const double tr_q = real_trace(q_e);
  const double tr_q2 = q_e.cwiseAbs2().sum();
  const double den = w * w * tr_q * tr_q - varpi * tr_q2;
  if (!(den > 0.0)) throw BoundInvalid("Eve SINR denominator is not positive");
  s.eve.interference_power = w;
  s.eve.sinr = p * in.me * m * w * tr_q * real_trace_product(q_e, uk) / tr_ups[user] / den;
  s.eve.capacity = log2_1p(s.eve.sinr);
  s.difference = s.user.rate - s.eve.capacity;
  s.r_sec = std::max(0.0, s.difference);
  return s;
}

/// Scalar large-N model: H1 H1^H -> beta_1 N I.
struct LargeNInputs {
  double beta_1 = 1.0, beta_i = 1.0, beta_2 = 0.0, beta_3 = 0.0, beta_ie = 1.0;
  int n = 1, m = 2, k = 1, me = 1, tau = 1;
  double rho = 1.0;
};

struct LimitReport {
  double user_sinr = 0.0;
  double eve_sinr = 0.0;
  double user_rate = 0.0;
  double eve_capacity = 0.0;
  double difference = 0.0;
  double r_sec = 0.0;
};

inline LimitReport finish_limit(double user_sinr, double eve_sinr) {
  LimitReport r;
  r.user_sinr = user_sinr;
  r.eve_sinr = eve_sinr;
  r.user_rate = log2_1p(user_sinr);
  r.eve_capacity = log2_1p(eve_sinr);
  r.difference = r.user_rate - r.eve_capacity;
  r.r_sec = std::max(0.0, r.difference);
  return r;
}

inline LimitReport secrecy_large_n(const LargeNInputs& in, const PowerAllocation& alloc, const HardwareProfile& hw) {
  const double pt = alloc.total;
  const double xi = alloc.xi;
  const double g = in.beta_2 + in.beta_i * in.beta_1 * in.n;
  const double gamma = g * g / (g + hw.sigma_u2 / (in.tau * in.rho));
  const double xi_k = in.k * g - gamma;
  const double user_num = xi * pt * in.m * gamma / in.k;
  const double user_den = xi * pt * xi_k / in.k + (1.0 - xi) * pt * (g - gamma) +
                          (hw.kappa_t_bs + hw.kappa_r_ue) * pt * g + hw.sigma_k2;

  const double p = alloc.p();
  const double q = alloc.q();
  const double mk = in.m - in.k;
  const double kp = hw.kappa_t_bs * pt;
  const double w = q * mk + kp;
  if (!(w > 0.0)) throw InfiniteCapacity("no artificial noise and no transmit distortion: undefined limit");
  const double varpi = in.me * kp * kp + q * q * in.me * in.m * mk + 2.0 * q * in.me * mk * kp;
  const double ge = in.beta_3 + in.beta_ie * in.beta_1 * in.n;
  const double den = in.m * w * w * ge * ge - varpi * ge * ge;
  if (!(den > 0.0)) throw BoundInvalid("Eve SINR denominator is not positive");
  return finish_limit(user_num / user_den, p * in.me * in.m * w * ge * ge / den);
}

/// Limit under P_t = E_u / N as N grows.
inline LimitReport secrecy_power_scaled(double e_u, double beta_i, double beta_1, int m, int k, int me, double xi,
                                        const HardwareProfile& hw) {
  const double g = beta_i * beta_1;
  const double user = (xi * e_u * m * g / k) /
                      (xi * e_u * (k - 1) * g / k + (hw.kappa_t_bs + hw.kappa_r_ue) * e_u * g + hw.sigma_k2);
  const double kap = hw.kappa_t_bs;
  const double v = 1.0 - xi + kap;
  if (!(v > 0.0)) throw InfiniteCapacity("no artificial noise and no transmit distortion: undefined limit");
  const double s = 1.0 - xi;
  const double den = m * v * v - me * (kap * kap + m * s * s / (m - k) + 2.0 * s * kap);
  if (!(den > 0.0)) throw BoundInvalid("Eve SINR denominator is not positive");
  return finish_limit(user, xi * me * m * v / k / den);
}

/// Limit for M >> K, M >> M_E, N -> infinity.
inline LimitReport secrecy_limit(int m, int k, int me, double xi, const HardwareProfile& hw) {
  const double kap = hw.kappa_t_bs;
  const double v = 1.0 - xi + kap;
  if (!(v > 0.0)) throw InfiniteCapacity("no artificial noise and no transmit distortion: undefined limit");
  const double user = (xi * m / k) / (xi * (k - 1.0) / k + hw.kappa_t_bs + hw.kappa_r_ue);
  return finish_limit(user, xi * me / (k * v));
}

}  // namespace rislab

#endif  // RISLAB_RATES_HPP
