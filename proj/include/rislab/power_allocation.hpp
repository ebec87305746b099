#ifndef RISLAB_POWER_ALLOCATION_HPP
#define RISLAB_POWER_ALLOCATION_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rates.hpp"
#include "types.hpp"

namespace rislab {

/// Exact derivative of the A-form secrecy difference with respect to xi.
inline double secrecy_derivative_exact(const AnTerms& a, double xi) {
  const double ln2 = std::log(2.0);
  const double x = xi * a.psi + a.d_dd;
  const double user = a.s_dd * a.d_dd / (ln2 * x * (x + xi * a.s_dd));
  const double v = a.upsilon(xi);
  const double g = v * v * a.a2 - (1.0 - xi) * (1.0 - xi) * a.a3 + xi * a.a4 - a.a5;
  const double dg = a.a2 * (2.0 * xi - 2.0 - 2.0 * a.kappa) - a.a3 * (2.0 * xi - 2.0) + a.a4;
  const double num = a.a1 * (1.0 - 2.0 * xi + a.kappa) * g - xi * v * a.a1 * dg;
  return user - num / (ln2 * g * (g + xi * v * a.a1));
}

/// Derivative with the Eve denominator simplified for M_E K / M^2 << 1.
inline double secrecy_derivative(const AnTerms& a, double xi) {
  const double ln2 = std::log(2.0);
  const double x = xi * a.psi + a.d_dd;
  const double user = a.s_dd * a.d_dd / (ln2 * x * (x + xi * a.s_dd));
  const double v = a.upsilon(xi);
  return user - (1.0 + a.kappa) * a.a1 / (ln2 * (v * v * a.k * a.l1 + xi * v * a.a1));
}

struct XiSolution {
  double xi = 0.0;
  double a = 0.0, b = 0.0, c = 0.0;
  double discriminant = 0.0;
  double other_root = std::numeric_limits<double>::quiet_NaN();
  double derivative_at_solution = 0.0;
  double derivative_near_zero = 0.0;
  bool valid = false;      // xi in (0, 1]
  bool in_regime = false;  // M_E K / M^2 <= 0.01
  std::string note;
};

/// Root of a xi^2 - b xi + c = 0 that zeroes the simplified derivative.
inline XiSolution optimal_xi(const AnTerms& t) {
  XiSolution s;
  const double k1 = 1.0 + t.kappa;
  const double sd = t.s_dd * t.d_dd;
  s.a = sd * (t.l1 * t.k - t.a1) - (t.psi * t.psi + t.psi * t.s_dd) * k1 * t.a1;
  s.b = k1 * (2.0 * sd * t.l1 * t.k - sd * t.a1 + t.d_dd * t.a1 * (2.0 * t.psi + t.s_dd));
  s.c = k1 * k1 * sd * t.l1 * t.k - k1 * t.d_dd * t.d_dd * t.a1;
  s.in_regime = static_cast<double>(t.me) * t.k / (static_cast<double>(t.m) * t.m) <= 0.01;
  const double scale = std::max({std::abs(s.a), std::abs(s.b), std::abs(s.c)});
  if (scale == 0.0 || !std::isfinite(scale)) throw NoRealRoot("power-split quadratic is degenerate");
  if (std::abs(s.a) <= 1e-14 * scale) {
    if (s.b == 0.0) throw NoRealRoot("power-split equation has no solution");
    s.xi = s.c / s.b;
    s.note = "linear case";
  } else {
    s.discriminant = s.b * s.b - 4.0 * s.a * s.c;
    if (s.discriminant < 0.0) throw NoRealRoot("power-split quadratic has negative discriminant");
    const double root = std::sqrt(s.discriminant);
    // (b - sqrt(D)) / (2a) written without cancellation
    s.xi = (s.b + root != 0.0) ? 2.0 * s.c / (s.b + root) : (s.b - root) / (2.0 * s.a);
    s.other_root = (s.b + root) / (2.0 * s.a);
  }
  s.valid = s.xi > 0.0 && s.xi <= 1.0;
  if (!s.valid) s.note += (s.note.empty() ? "" : "; ") + std::string("root outside (0,1], use the grid search");
  if (!s.in_regime) s.note += (s.note.empty() ? "" : "; ") + std::string("outside M_E K / M^2 <= 0.01, use the grid search");
  s.derivative_near_zero = secrecy_derivative(t, 1e-9);
  if (s.valid) s.derivative_at_solution = secrecy_derivative(t, s.xi);
  return s;
}

struct GridSearch {
  std::vector<double> xi;
  std::vector<double> difference;  // unclipped
  std::vector<double> r_sec;       // clipped
  double best_xi = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  int local_maxima = 0;
};

/// Evaluates the xi form on {step, 2 step, ..., 1}. Points where the Eve
/// bound is undefined are recorded as NaN and skipped.
inline GridSearch grid_search_xi(const AnTerms& t, double step) {
  require(step > 0.0 && step <= 0.05, "grid step must lie in (0, 0.05]");
  GridSearch g;
  const int n = static_cast<int>(std::llround(1.0 / step));
  for (int i = 1; i <= n; ++i) {
    const double xi = std::min(1.0, i * step);
    double d = std::numeric_limits<double>::quiet_NaN();
    try {
      d = secrecy_xi_form(t, xi).difference;
    } catch (const Error&) {
    }
    g.xi.push_back(xi);
    g.difference.push_back(d);
    g.r_sec.push_back(std::isnan(d) ? d : std::max(0.0, d));
    if (!std::isnan(d) && d > g.best) {
      g.best = d;
      g.best_xi = xi;
    }
  }
  for (std::size_t i = 0; i < g.difference.size(); ++i) {
    const double d = g.difference[i];
    if (std::isnan(d)) continue;
    const bool left = i == 0 || std::isnan(g.difference[i - 1]) || g.difference[i - 1] < d;
    const bool right = i + 1 == g.difference.size() || std::isnan(g.difference[i + 1]) || g.difference[i + 1] < d;
    if (left && right) ++g.local_maxima;
  }
  return g;
}

}  // namespace rislab

#endif  // RISLAB_POWER_ALLOCATION_HPP
