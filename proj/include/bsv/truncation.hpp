#pragma once

#include "bsv/measures.hpp"
#include "bsv/spectrum.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace bsv {

/// Probability mass outside n + m <= n_max:
/// eps = x^{n_max+1} (n_max + 2 - x (n_max + 1)), x = tanh^2 = N0/(N0+1).
inline double epsilon_from_cutoff(GainParameter g, int n_max) {
  if (n_max < 0) throw std::domain_error("n_max must be >= 0");
  const double x = g.ratio();
  if (x == 0.0) return 0.0;
  const double nm = static_cast<double>(n_max);
  return std::exp((nm + 1.0) * g.log_ratio()) * (nm + 2.0 - x * (nm + 1.0));
}

/// Number of (n, m) pairs with n + m <= n_max, i.e. the beam dimension.
inline std::int64_t truncated_dimension(int n_max) {
  const auto n = static_cast<std::int64_t>(n_max);
  return (n + 1) * (n + 2) / 2;
}

inline constexpr int kMaxTruncationCutoff = 1'000'000;

/// Smallest n_max with epsilon_from_cutoff <= target (bisection on the monotone closed form).
inline int cutoff_for_epsilon(GainParameter g, double target) {
  if (!(target > 0.0 && target < 1.0)) throw std::domain_error("epsilon target must lie in (0, 1)");
  if (epsilon_from_cutoff(g, 0) <= target) return 0;
  int lo = 0, hi = 1;
  while (epsilon_from_cutoff(g, hi) > target) {
    lo = hi;
    if (hi >= kMaxTruncationCutoff) throw std::out_of_range("epsilon target unreachable below the hard cutoff cap");
    hi = std::min(2 * hi, kMaxTruncationCutoff);
  }
  // invariant: eps(lo) > target >= eps(hi)
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (epsilon_from_cutoff(g, mid) > target ? lo : hi) = mid;
  }
  return hi;
}

/// Root alpha > 0 of e^{-alpha} (alpha + 1) = epsilon.
inline double alpha_from_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("epsilon must lie in (0, 1)");
  // g(a) = log(1 + a) - a - log(eps), decreasing on a > 0 from -log(eps) > 0.
  const double log_eps = std::log(epsilon);
  auto g = [&](double a) { return std::log1p(a) - a - log_eps; };
  double lo = 0.0, hi = 1.0;
  while (g(hi) > 0.0) hi *= 2.0;
  double a = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double ga = g(a);
    if (ga > 0.0) lo = a;
    else hi = a;
    const double step = ga / (-a / (1.0 + a));
    double next = a - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - a) <= 1e-16 * std::max(1.0, a)) {
      a = next;
      break;
    }
    a = next;
  }
  return a;
}

/// Effective Schmidt number of the renormalized state restricted to n + m <= n_max:
/// (1 - eps)^2 / sum_{n+m<=n_max} lambda_n^2 lambda_m^2.
inline double truncated_kbar(GainParameter g, int n_max) {
  if (n_max < 0) throw std::domain_error("n_max must be >= 0");
  const double x = g.ratio();
  if (x == 0.0) return 1.0;
  // lambda_n lambda_m = (1-x)^2 x^{n+m}; the sector n+m = s has s+1 members.
  const double log_w = 2.0 * g.log_vacuum_weight();
  double sum = 0.0, c = 0.0;
  for (int s = 0; s <= n_max; ++s) {
    const double term = (s + 1.0) * std::exp(2.0 * (log_w + s * g.log_ratio()));
    if (term == 0.0) break;
    const double y = term - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  const double keep = 1.0 - epsilon_from_cutoff(g, n_max);
  return keep * keep / sum;
}

struct TruncationReport {
  double gamma = 0.0;
  double n0 = 0.0;
  int n_max = 0;
  double epsilon = 0.0;
  std::int64_t d = 1;
  double alpha = 0.0;  ///< alpha(epsilon); NaN when epsilon is 0
  double kbar_t = 1.0;
  double ratio_kt_over_d = 1.0;

  /// ((1-eps)/(1+eps))^2 K <= K^T < (1-eps) K, with equality allowed at eps = 0.
  bool bounds_hold(double rel_tol = 1e-12) const {
    const double k = effective_schmidt_number_analytic(GainParameter(gamma));
    const double lower = std::pow((1.0 - epsilon) / (1.0 + epsilon), 2) * k;
    const double upper = (1.0 - epsilon) * k;
    if (kbar_t < lower * (1.0 - rel_tol)) return false;
    // Below rel_tol the gap between K^T and (1-eps) K is not resolvable in double.
    if (epsilon > rel_tol) return kbar_t < upper;
    return kbar_t <= upper * (1.0 + rel_tol);
  }
};

inline TruncationReport truncation_report(GainParameter g, int n_max) {
  TruncationReport r;
  r.gamma = g.value();
  r.n0 = g.mean_photons();
  r.n_max = n_max;
  r.epsilon = epsilon_from_cutoff(g, n_max);
  r.d = truncated_dimension(n_max);
  r.alpha = (r.epsilon > 0.0 && r.epsilon < 1.0) ? alpha_from_epsilon(r.epsilon) : std::nan("");
  r.kbar_t = truncated_kbar(g, n_max);
  r.ratio_kt_over_d = r.kbar_t / static_cast<double>(r.d);
  return r;
}

struct TruncationScanRow {
  double epsilon = 0.0;  ///< requested truncation parameter
  double n0 = 0.0;
  double ratio = 1.0;    ///< K^T/d on the curve through the achieved (eps, K^T/d) points
  int n_max = 0;         ///< cutoff_for_epsilon(epsilon)
  std::int64_t d = 1;
  double epsilon_achieved = 0.0;
  double ratio_step = 1.0;  ///< K^T/d at n_max itself
};

/// K^T/d against epsilon. The integer cutoff makes K^T/d at a fixed requested
/// epsilon jump between neighbouring n_max; `ratio` instead follows the curve
/// through the achieved points (eps(N), K^T(N)/d(N)), linear in log(eps)
/// between N-1 and N, which is what makes curves for different N0 comparable.
inline std::vector<TruncationScanRow> truncation_scan(const std::vector<double>& n0_list, const std::vector<double>& epsilon_grid) {
  if (n0_list.empty() || epsilon_grid.empty()) throw std::invalid_argument("truncation scan grids must be nonempty");
  std::vector<TruncationScanRow> rows;
  for (double n0 : n0_list) {
    const GainParameter g = GainParameter::from_mean_photons(n0);
    for (double eps : epsilon_grid) {
      TruncationScanRow row;
      row.epsilon = eps;
      row.n0 = n0;
      row.n_max = cutoff_for_epsilon(g, eps);
      row.d = truncated_dimension(row.n_max);
      row.epsilon_achieved = epsilon_from_cutoff(g, row.n_max);
      row.ratio_step = truncated_kbar(g, row.n_max) / static_cast<double>(row.d);
      row.ratio = row.ratio_step;
      if (row.n_max > 0 && row.epsilon_achieved > 0.0) {
        const int prev = row.n_max - 1;
        const double eps_prev = epsilon_from_cutoff(g, prev);
        const double r_prev = truncated_kbar(g, prev) / static_cast<double>(truncated_dimension(prev));
        const double w = (std::log(eps) - std::log(row.epsilon_achieved)) /
                         (std::log(eps_prev) - std::log(row.epsilon_achieved));
        row.ratio = row.ratio_step + w * (r_prev - row.ratio_step);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace bsv
