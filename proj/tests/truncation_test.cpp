#include <bsv/truncation.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace bsv;

namespace {

// Direct double sum of lambda_n lambda_m over the excluded region n + m > n_max.
double epsilon_by_double_sum(double n0, int n_max) {
  const long double x = n0 / (n0 + 1.0L);
  const long double w = 1.0L / (n0 + 1.0L);
  long double tail = 0.0L;
  const int reach = n_max + 200 + static_cast<int>(60.0 * (n0 + 1.0));
  for (int n = 0; n <= reach; ++n) {
    const long double ln = w * std::pow(x, (long double)n);
    for (int m = std::max(0, n_max + 1 - n); n + m <= reach; ++m) tail += ln * w * std::pow(x, (long double)m);
  }
  return static_cast<double>(tail);
}

}  // namespace

TEST(epsilon, closed_form_against_double_sum) {
  const auto g = GainParameter::from_mean_photons(1.0);
  const double brute = epsilon_by_double_sum(1.0, 10);
  EXPECT_NEAR(epsilon_from_cutoff(g, 10), brute, 1e-12 * brute);

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> n0d(0.05, 3.0);
  std::uniform_int_distribution<int> nd(0, 40);
  for (int i = 0; i < 25; ++i) {
    const double n0 = n0d(rng);
    const int n = nd(rng);
    const double b = epsilon_by_double_sum(n0, n);
    EXPECT_NEAR(epsilon_from_cutoff(GainParameter::from_mean_photons(n0), n), b, 1e-12 * b) << n0 << " " << n;
  }
}

TEST(epsilon, vacuum_and_monotonicity) {
  for (int n : {0, 1, 7}) EXPECT_EQ(epsilon_from_cutoff(GainParameter(0.0), n), 0.0);
  const auto g = GainParameter::from_mean_photons(5.0);
  double prev = 1.0;
  for (int n = 0; n < 400; ++n) {
    const double e = epsilon_from_cutoff(g, n);
    EXPECT_LT(e, prev);
    prev = e;
  }
  EXPECT_THROW(epsilon_from_cutoff(g, -1), std::domain_error);
}

TEST(cutoff_for_epsilon, smallest_cutoff) {
  for (double n0 : {0.5, 3.0, 10.0, 100.0}) {
    const auto g = GainParameter::from_mean_photons(n0);
    for (double target : {1e-12, 1e-6, 0.01, 0.3, 0.9}) {
      const int n = cutoff_for_epsilon(g, target);
      EXPECT_LE(epsilon_from_cutoff(g, n), target);
      if (n > 0) {
        EXPECT_GT(epsilon_from_cutoff(g, n - 1), target);
      }
    }
  }
  EXPECT_LE(cutoff_for_epsilon(GainParameter::from_mean_photons(10.0), 0.999), 1);
}

TEST(cutoff_for_epsilon, errors) {
  const auto g = GainParameter::from_mean_photons(1e5);
  EXPECT_THROW(cutoff_for_epsilon(g, 1e-300), std::out_of_range);
  EXPECT_THROW(cutoff_for_epsilon(g, 0.0), std::domain_error);
  EXPECT_THROW(cutoff_for_epsilon(g, 1.0), std::domain_error);
}

TEST(cutoff_for_epsilon, linear_in_mean_photons) {
  for (double eps : {1e-12, 1e-2, 1e-1}) {
    const double alpha = alpha_from_epsilon(eps);
    double lo = 1e9, hi = 0.0;
    for (double n0 : {10.0, 20.0, 50.0, 100.0}) {
      const double slope = cutoff_for_epsilon(GainParameter::from_mean_photons(n0), eps) / n0;
      lo = std::min(lo, slope);
      hi = std::max(hi, slope);
    }
    EXPECT_LT(hi / lo - 1.0, 0.05) << eps;
    EXPECT_NEAR(cutoff_for_epsilon(GainParameter::from_mean_photons(100.0), eps) / 100.0, alpha, 0.5);
  }
}

TEST(alpha, values_and_residual) {
  EXPECT_NEAR(alpha_from_epsilon(1e-12), 31.0, 0.5);
  EXPECT_NEAR(alpha_from_epsilon(1e-2), 7.0, 0.5);
  EXPECT_NEAR(alpha_from_epsilon(1e-1), 4.0, 0.5);
  double prev = 1e9;
  for (double e = 1e-15; e < 1.0; e *= 3.0) {
    const double a = alpha_from_epsilon(e);
    EXPECT_LT(std::abs(std::exp(-a) * (a + 1.0) - e), 1e-12 * std::max(e, 1e-3)) << e;
    EXPECT_LT(a, prev);
    prev = a;
  }
  EXPECT_THROW(alpha_from_epsilon(0.0), std::domain_error);
  EXPECT_THROW(alpha_from_epsilon(1.0), std::domain_error);
}

TEST(dimension, counts_pairs) {
  for (int n = 0; n < 40; ++n) {
    std::int64_t count = 0;
    for (int a = 0; a <= n; ++a)
      for (int b = 0; a + b <= n; ++b) ++count;
    EXPECT_EQ(truncated_dimension(n), count);
  }
}

TEST(dimension, quadratic_in_mean_photons) {
  for (double eps : {1e-2, 1e-1}) {
    const double a = alpha_from_epsilon(eps);
    for (double n0 : {20.0, 50.0, 100.0}) {
      const double d = static_cast<double>(truncated_dimension(cutoff_for_epsilon(GainParameter::from_mean_photons(n0), eps)));
      const double r = d / (a * a * n0 * n0 / 2.0);
      EXPECT_GE(r, 0.8);
      EXPECT_LE(r, 1.2);
    }
  }
}

TEST(truncated_kbar, limits_and_bounds) {
  EXPECT_EQ(truncated_kbar(GainParameter(0.0), 5), 1.0);
  const auto g = GainParameter::from_mean_photons(10.0);
  const double k = effective_schmidt_number_analytic(g);
  EXPECT_NEAR(truncated_kbar(g, 2000), k, 1e-9 * k);

  const auto r = truncation_report(g, cutoff_for_epsilon(g, 0.5));
  EXPECT_LE(r.epsilon, 0.5);
  EXPECT_TRUE(r.bounds_hold());
  EXPECT_EQ(r.d, truncated_dimension(r.n_max));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> n0d(0.01, 200.0);
  std::uniform_int_distribution<int> nd(0, 3000);
  for (int i = 0; i < 200; ++i) {
    const auto gi = GainParameter::from_mean_photons(n0d(rng));
    EXPECT_TRUE(truncation_report(gi, nd(rng)).bounds_hold());
  }
}

TEST(truncation_scan, shape) {
  const auto rows = truncation_scan({10.0}, {1e-12, 0.999});
  EXPECT_LT(rows[0].ratio, 0.05);
  EXPECT_NEAR(rows[1].ratio, 1.0, 1e-3);
  EXPECT_THROW(truncation_scan({}, {0.1}), std::invalid_argument);
  EXPECT_THROW(truncation_scan({10.0}, {}), std::invalid_argument);
}

TEST(truncation_scan, curve_independent_of_mean_photons) {
  const std::vector<double> eps{0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  const auto rows = truncation_scan({10.0, 100.0}, eps);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const auto& a = rows[i];
    const auto& b = rows[i + eps.size()];
    EXPECT_EQ(a.epsilon, b.epsilon);
    EXPECT_LT(std::abs(a.ratio / b.ratio - 1.0), 0.01) << a.epsilon;
    EXPECT_LE(a.epsilon_achieved, a.epsilon);
  }
}
