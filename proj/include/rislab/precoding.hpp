#ifndef RISLAB_PRECODING_HPP
#define RISLAB_PRECODING_HPP

#include <cmath>
#include <string>

#include "estimation.hpp"
#include "linalg.hpp"
#include "types.hpp"

namespace rislab {

/// Split of P_t between K data streams and M - K artificial-noise directions.
struct PowerAllocation {
  double total = 1.0;  // P_t
  double xi = 0.5;     // information fraction
  int m = 2;
  int k = 1;

  PowerAllocation() = default;
  PowerAllocation(double total_power, double fraction, int antennas, int users)
      : total(total_power), xi(fraction), m(antennas), k(users) {
    validate();
  }

  void validate() const {
    require(total >= 0.0, "transmit power must be non-negative");
    require(xi >= 0.0 && xi <= 1.0, "power fraction must lie in [0,1]");
    if (k >= m) throw DegenerateConfig("power allocation needs M > K");
  }

  double p() const { return xi * total / k; }
  double q() const { return (1.0 - xi) * total / (m - k); }
};

/// Columns h_hat_k / sqrt(tau rho zeta_k): unit power on average, not per draw.
inline CMatrix mrt_precoder(const CMatrix& h_hat, const EstimatorStatistics& es) {
  CMatrix w(h_hat.rows(), h_hat.cols());
  for (Eigen::Index u = 0; u < h_hat.cols(); ++u) {
    const double norm2 = es.tau * es.rho * es.zeta[u];
    if (!(norm2 > 0.0)) throw DegenerateConfig("MRT normalizer is zero for user " + std::to_string(u));
    w.col(u) = h_hat.col(u) / std::sqrt(norm2);
  }
  return w;
}

struct AnPrecoder {
  CMatrix v;  // M x (M - rank)
  bool rank_deficient = false;
  std::string warning;
};

inline AnPrecoder null_space_an(const CMatrix& h_hat) {
  if (h_hat.cols() >= h_hat.rows()) throw DegenerateConfig("artificial noise needs M > K");
  NullSpace ns = null_space(h_hat);
  AnPrecoder out;
  out.v = std::move(ns.basis);
  out.rank_deficient = ns.rank_deficient;
  if (ns.rank_deficient)
    out.warning = "estimated channel matrix has rank " + std::to_string(ns.rank) + ", noise subspace has dimension " +
                  std::to_string(out.v.cols());
  return out;
}

struct TransmitStatistics {
  CMatrix t;                  // p W W^H + q V V^H
  RVector distortion_diag;    // diag of kappa_t^BS diag(T)
};

inline TransmitStatistics transmit_statistics(const CMatrix& w, const CMatrix& v, const PowerAllocation& alloc,
                                              const HardwareProfile& hw) {
  TransmitStatistics out;
  out.t = alloc.p() * (w * w.adjoint());
  if (alloc.xi < 1.0 && v.cols() > 0) out.t += alloc.q() * (v * v.adjoint());
  out.distortion_diag = hw.kappa_t_bs * out.t.diagonal().real();
  return out;
}

/// Receive-distortion power kappa_r^UE h^H T h of one user.
inline double receive_distortion_power(const CVector& h, const TransmitStatistics& tx, const HardwareProfile& hw) {
  return hw.kappa_r_ue * h.dot(tx.t * h).real();
}

}  // namespace rislab

#endif  // RISLAB_PRECODING_HPP
