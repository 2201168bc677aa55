#pragma once

#include <cstddef>
#include <span>

namespace tdteach::stats {

/// Regularized incomplete beta I_x(a, b), evaluated with the modified Lentz
/// continued fraction (at most kBetaMaxIterations terms, relative tolerance
/// kBetaTolerance). Requires a, b > 0 and x in [0, 1].
double incomplete_beta(double a, double b, double x);

inline constexpr int kBetaMaxIterations = 300;
inline constexpr double kBetaTolerance = 1e-10;

/// Two-tailed p-value of Student's t with `df` degrees of freedom:
/// I_{df/(df+t^2)}(df/2, 1/2).
double p_from_t(double t, std::size_t df);

struct TTestResult {
  double t = 0.0;
  std::size_t df = 0;
  double p_two_tailed = 1.0;
  double mean_diff = 0.0;
  /// Zero-variance differences with a nonzero mean: t is +/-inf and p is 0.
  bool degenerate = false;
};

/// Paired t-test on d_i = xs_i - ys_i (sample sd, n-1 denominator).
/// With xs = mechanical and ys = human-like scores, higher human-like scores
/// give a negative t.
TTestResult paired_t_test(std::span<const double> xs, std::span<const double> ys);

}  // namespace tdteach::stats
