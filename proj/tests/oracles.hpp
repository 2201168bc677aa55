#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the library code it is meant to check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

// Scalar Q-learning step written out directly.
struct TdResult {
  double delta;
  double q_after;
};

inline TdResult td_step(double q, double reward, double gamma, double max_next, double alpha) {
  const double delta = reward + gamma * max_next - q;
  return {delta, q + alpha * delta};
}

// SplitMix64 re-typed from its published description.
struct SplitMix {
  std::uint64_t s;
  std::uint64_t next() {
    s += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = s;
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }
  double unit() { return std::ldexp(static_cast<double>(next() >> 11), -53); }
  std::uint64_t bounded(std::uint64_t n) {
    // High word of the 128-bit product, via 32-bit halves.
    const std::uint64_t x = next();
    const std::uint64_t x_lo = x & 0xFFFFFFFFULL, x_hi = x >> 32;
    const std::uint64_t n_lo = n & 0xFFFFFFFFULL, n_hi = n >> 32;
    const std::uint64_t lo_lo = x_lo * n_lo;
    const std::uint64_t hi_lo = x_hi * n_lo;
    const std::uint64_t lo_hi = x_lo * n_hi;
    const std::uint64_t hi_hi = x_hi * n_hi;
    const std::uint64_t cross = (lo_lo >> 32) + (hi_lo & 0xFFFFFFFFULL) + (lo_hi & 0xFFFFFFFFULL);
    return hi_hi + (hi_lo >> 32) + (lo_hi >> 32) + (cross >> 32);
  }
};

// Zero-order-hold mean over [start, end] by summing 1 ms cells. Samples are
// (timestamp, value) pairs with strictly increasing integer timestamps.
inline double zoh_riemann_mean(const std::vector<std::pair<std::int64_t, double>>& samples,
                               std::int64_t start, std::int64_t end) {
  if (end <= start) return 0.0;
  double sum = 0.0;
  std::size_t next = 0;
  double held = 0.0;
  for (std::int64_t t = start; t < end; ++t) {
    while (next < samples.size() && samples[next].first <= t) held = samples[next++].second;
    sum += held;
  }
  return sum / static_cast<double>(end - start);
}

// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fm, fb, whole, tol, 60);
}

// Student-t density and two-tailed p by integrating the density over [0, |t|].
inline double t_density(double x, double nu) {
  const double log_norm = std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
                          0.5 * std::log(nu * std::numbers::pi);
  return std::exp(log_norm - (nu + 1.0) / 2.0 * std::log1p(x * x / nu));
}

inline double t_two_tailed_p(double t, double nu) {
  const double at = std::fabs(t);
  if (at == 0.0) return 1.0;
  // Split the range so the adaptive rule sees the peak.
  double mass = 0.0;
  double lo = 0.0;
  for (double hi : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 64.0}) {
    const double top = std::fmin(hi, at);
    if (top > lo) mass += integrate([nu](double x) { return t_density(x, nu); }, lo, top);
    lo = top;
    if (lo >= at) break;
  }
  if (at > lo) mass += integrate([nu](double x) { return t_density(x, nu); }, lo, at);
  return 1.0 - 2.0 * mass;
}

// Paired t statistic, written as a direct textbook formula.
struct PairedT {
  double t;
  double df;
  double p;
};

inline PairedT paired_t(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  std::vector<double> d;
  for (std::size_t i = 0; i < xs.size(); ++i) d.push_back(xs[i] - ys[i]);
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : d) var += (v - mean) * (v - mean);
  var /= (n - 1.0);
  const double t = mean / std::sqrt(var / n);
  return {t, n - 1.0, t_two_tailed_p(t, n - 1.0)};
}

}  // namespace oracle
