#ifndef RISLAB_MONTECARLO_HPP
#define RISLAB_MONTECARLO_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "channel.hpp"
#include "estimation.hpp"
#include "parallel.hpp"
#include "precoding.hpp"
#include "random.hpp"
#include "rates.hpp"
#include "types.hpp"

namespace rislab {

struct TrialPlan {
  std::size_t blocks = 1000;  // independent coherence blocks
  std::uint64_t seed = 1;     // master seed
  int batches = 20;           // batch count for the rate standard error
  bool downlink = true;       // false: pilot phase only (NMSE)
  bool eve = true;            // evaluate Eve's per-block SINR
  bool regularize = true;     // allow sigma_E^2 in the singular corner
  int threads = 0;            // 0: worker_count()

  void validate() const {
    require(blocks >= 2, "need at least two blocks");
    require(batches >= 2 && static_cast<std::size_t>(batches) <= blocks, "batch count must lie in [2, blocks]");
  }
};

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

/// Per-user oracle values; powers are the SINR terms including p or q.
struct UserOracle {
  Estimate nmse;
  Estimate signal;
  Estimate variance;
  Estimate interference;
  Estimate an_leakage;      // q E{h^H V V^H h}
  Estimate an_leakage_raw;  // E{h^H V V^H h}
  Estimate tx_distortion;
  Estimate rx_distortion;
  double noise = 0.0;
  double sinr = 0.0;
  Estimate rate;
  Estimate eve_capacity;
};

struct WishartOracle {
  Estimate first;     // E{tr X} / M_E
  Estimate second;    // mean entry variance of X
  Estimate upsilon;   // mean diagonal of the transmit distortion covariance
};

struct OracleEstimates {
  std::vector<UserOracle> users;
  WishartOracle wishart;
  std::size_t blocks = 0;
  bool regularized = false;
  double sigma_e2 = 0.0;
  std::size_t rank_deficient_blocks = 0;
};

struct OracleSetup {
  const ChannelStatistics* stats = nullptr;
  HardwareProfile hw;
  PilotConfig pilots;
  const EstimatorStatistics* est = nullptr;
  PowerAllocation alloc;
};

namespace detail {

inline double column_mean(const std::vector<double>& s, std::size_t cols, std::size_t col, std::size_t begin,
                          std::size_t end) {
  return pairwise_sum(begin, end, [&](std::size_t b) { return s[b * cols + col]; }) / static_cast<double>(end - begin);
}

inline Estimate column_estimate(const std::vector<double>& s, std::size_t cols, std::size_t col, std::size_t n) {
  Estimate e;
  e.mean = column_mean(s, cols, col, 0, n);
  const double var = pairwise_sum(0, n, [&](std::size_t b) {
                       const double d = s[b * cols + col] - e.mean;
                       return d * d;
                     }) / static_cast<double>(n - 1);
  e.se = std::sqrt(var / static_cast<double>(n));
  return e;
}

}  // namespace detail

/// Draws plan.blocks independent coherence blocks (channel, phase errors,
/// pilot phase, precoders) and estimates every expectation the closed forms
/// predict. Block b uses substream (seed, ChannelBlock, b), and all
/// reductions run in block order.
inline OracleEstimates run_oracle(const OracleSetup& setup, const TrialPlan& plan) {
  plan.validate();
  const ChannelStatistics& st = *setup.stats;
  const EstimatorStatistics& es = *setup.est;
  const HardwareProfile& hw = setup.hw;
  const PowerAllocation& alloc = setup.alloc;
  const int k = st.k;
  const int me = st.me;
  const bool downlink = plan.downlink;
  const bool eve = downlink && plan.eve;
  const double p = alloc.p();
  const double q = alloc.q();

  OracleEstimates out;
  out.blocks = plan.blocks;
  const bool singular_corner = eve && q == 0.0 && hw.kappa_t_bs == 0.0;
  if (singular_corner) {
    if (!plan.regularize)
      throw IllConditioned("Eve interference matrix is singular: no artificial noise and no transmit distortion",
                           INFINITY);
    out.regularized = true;
    out.sigma_e2 = 1e-12 * alloc.total;
  }
  const double sigma_e2 = out.sigma_e2;

  // per user: err2 pow2 g_re g_im interf an tx rx eve_log
  constexpr std::size_t kPerUser = 9;
  const std::size_t user_cols = kPerUser * k;
  const std::size_t wish_cols = eve ? 4 + 2 * me * me : 0;
  const std::size_t cols = user_cols + wish_cols;
  std::vector<double> samples(plan.blocks * cols, 0.0);
  std::vector<unsigned char> deficient(plan.blocks, 0);

  auto block = [&](std::size_t b) {
    Rng rng(plan.seed, Stream::ChannelBlock, b);
    const ChannelRealization real = sample_realization(st, hw.phase_noise, rng, eve);
    const PilotObservation obs = simulate_pilot_phase(real.h, setup.pilots, hw, rng);
    const CMatrix hh = estimate_all(obs, es);
    double* row = &samples[b * cols];
    for (int u = 0; u < k; ++u) {
      row[kPerUser * u + 0] = (real.h.col(u) - hh.col(u)).squaredNorm();
      row[kPerUser * u + 1] = real.h.col(u).squaredNorm();
    }
    if (!downlink) return;
    const CMatrix w = mrt_precoder(hh, es);
    const AnPrecoder an = null_space_an(hh);
    deficient[b] = an.rank_deficient ? 1 : 0;
    const CMatrix& v = an.v;
    const CMatrix hw_gain = real.h.adjoint() * w;  // (k, i) = h_k^H w_i
    const CMatrix hv = real.h.adjoint() * v;
    RVector diag_t = p * w.cwiseAbs2().rowwise().sum();
    if (q > 0.0) diag_t += q * v.cwiseAbs2().rowwise().sum();
    const RVector upsilon = hw.kappa_t_bs * diag_t;
    for (int u = 0; u < k; ++u) {
      double* r = row + kPerUser * u;
      const Complex g = hw_gain(u, u);
      const double total = hw_gain.row(u).squaredNorm();
      const double leak = hv.row(u).squaredNorm();
      r[2] = g.real();
      r[3] = g.imag();
      r[4] = total - std::norm(g);
      r[5] = leak;
      r[6] = real.h.col(u).cwiseAbs2().dot(upsilon);
      r[7] = hw.kappa_r_ue * (p * total + q * leak);
    }
    if (!eve) return;
    const CMatrix& he = real.h_e;
    CMatrix x = he.adjoint() * upsilon.cast<Complex>().asDiagonal() * he;
    if (q > 0.0) {
      const CMatrix bv = he.adjoint() * v;
      x += q * (bv * bv.adjoint());
    }
    make_hermitian(x);
    double* wr = row + user_cols;
    wr[0] = real_trace(x) / me;
    wr[1] = x.squaredNorm() / (static_cast<double>(me) * me);
    wr[2] = upsilon.mean();
    for (int i = 0; i < me; ++i)
      for (int j = 0; j < me; ++j) {
        wr[4 + 2 * (i * me + j)] = x(i, j).real();
        wr[5 + 2 * (i * me + j)] = x(i, j).imag();
      }
    if (sigma_e2 > 0.0) x.diagonal().array() += sigma_e2;
    Eigen::LLT<CMatrix> llt(x);
    if (llt.info() != Eigen::Success) throw IllConditioned("Eve interference matrix is not positive definite", INFINITY);
    const CMatrix f = he.adjoint() * w;
    const CMatrix sol = llt.solve(f);
    for (int u = 0; u < k; ++u) {
      const double gamma = p * f.col(u).dot(sol.col(u)).real();
      row[kPerUser * u + 8] = log2_1p(std::max(gamma, 0.0));
    }
  };
  parallel_for(plan.blocks, block, plan.threads > 0 ? plan.threads : worker_count());

  const std::size_t n = plan.blocks;
  for (unsigned char d : deficient) out.rank_deficient_blocks += d;
  out.users.resize(k);
  for (int u = 0; u < k; ++u) {
    UserOracle& o = out.users[u];
    const std::size_t c0 = kPerUser * u;
    // ratio estimator for the NMSE with a delta-method standard error
    const Estimate e2 = detail::column_estimate(samples, cols, c0, n);
    const Estimate h2 = detail::column_estimate(samples, cols, c0 + 1, n);
    const double ratio = e2.mean / h2.mean;
    const double lin = pairwise_sum(0, n, [&](std::size_t b) {
                         const double d = samples[b * cols + c0] - ratio * samples[b * cols + c0 + 1];
                         return d * d;
                       }) / static_cast<double>(n - 1);
    o.nmse = {ratio, std::sqrt(lin / n) / h2.mean};
    if (!downlink) continue;

    const Estimate gr = detail::column_estimate(samples, cols, c0 + 2, n);
    const Estimate gi = detail::column_estimate(samples, cols, c0 + 3, n);
    const double g_abs = std::hypot(gr.mean, gi.mean);
    auto centered = [&](std::size_t b) {
      const double dr = samples[b * cols + c0 + 2] - gr.mean;
      const double di = samples[b * cols + c0 + 3] - gi.mean;
      return dr * dr + di * di;
    };
    const double var_g = pairwise_sum(0, n, centered) / static_cast<double>(n - 1);
    const double var_var = pairwise_sum(0, n, [&](std::size_t b) {
                             const double d = centered(b) - var_g;
                             return d * d;
                           }) / static_cast<double>(n - 1);
    o.signal = {p * g_abs * g_abs, p * 2.0 * g_abs * std::sqrt(var_g / n)};
    o.variance = {p * var_g, p * std::sqrt(var_var / n)};
    const Estimate intf = detail::column_estimate(samples, cols, c0 + 4, n);
    o.interference = {p * intf.mean, p * intf.se};
    o.an_leakage_raw = detail::column_estimate(samples, cols, c0 + 5, n);
    o.an_leakage = {q * o.an_leakage_raw.mean, q * o.an_leakage_raw.se};
    o.tx_distortion = detail::column_estimate(samples, cols, c0 + 6, n);
    o.rx_distortion = detail::column_estimate(samples, cols, c0 + 7, n);
    o.noise = hw.sigma_k2;

    auto sinr_of = [&](std::size_t begin, std::size_t end) {
      const double m = static_cast<double>(end - begin);
      const double br = detail::column_mean(samples, cols, c0 + 2, begin, end);
      const double bi = detail::column_mean(samples, cols, c0 + 3, begin, end);
      const double vg = pairwise_sum(begin, end, [&](std::size_t b) {
                          const double dr = samples[b * cols + c0 + 2] - br;
                          const double di = samples[b * cols + c0 + 3] - bi;
                          return dr * dr + di * di;
                        }) / (m - 1.0);
      const double den = p * detail::column_mean(samples, cols, c0 + 4, begin, end) + p * vg +
                         q * detail::column_mean(samples, cols, c0 + 5, begin, end) +
                         detail::column_mean(samples, cols, c0 + 6, begin, end) +
                         detail::column_mean(samples, cols, c0 + 7, begin, end) + hw.sigma_k2;
      return p * (br * br + bi * bi) / den;
    };
    o.sinr = sinr_of(0, n);
    o.rate.mean = log2_1p(o.sinr);
    const int nb = plan.batches;
    std::vector<double> batch_rates(nb);
    for (int i = 0; i < nb; ++i) {
      const std::size_t lo = n * i / nb;
      const std::size_t hi = n * (i + 1) / nb;
      batch_rates[i] = log2_1p(sinr_of(lo, hi));
    }
    const double bm = pairwise_sum(0, nb, [&](std::size_t i) { return batch_rates[i]; }) / nb;
    const double bv = pairwise_sum(0, nb, [&](std::size_t i) {
                        const double d = batch_rates[i] - bm;
                        return d * d;
                      }) / (nb - 1.0);
    o.rate.se = std::sqrt(bv / nb);
    if (eve) o.eve_capacity = detail::column_estimate(samples, cols, c0 + 8, n);
  }
  if (eve) {
    const std::size_t w0 = user_cols;
    out.wishart.first = detail::column_estimate(samples, cols, w0, n);
    const Estimate fro = detail::column_estimate(samples, cols, w0 + 1, n);
    double mean_sq = 0.0;
    for (int e = 0; e < me * me; ++e) {
      const double re = detail::column_mean(samples, cols, w0 + 4 + 2 * e, 0, n);
      const double im = detail::column_mean(samples, cols, w0 + 5 + 2 * e, 0, n);
      mean_sq += re * re + im * im;
    }
    out.wishart.second = {fro.mean - mean_sq / (static_cast<double>(me) * me), fro.se};
    out.wishart.upsilon = detail::column_estimate(samples, cols, w0 + 2, n);
  }
  return out;
}

}  // namespace rislab

#endif  // RISLAB_MONTECARLO_HPP
