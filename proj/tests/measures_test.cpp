#include <bsv/measures.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace bsv;

namespace {

double n0_of(double g) { return std::sinh(g) * std::sinh(g); }

SchmidtSpectrum fine_spectrum(double g, double tail = 1e-13) {
  const GainParameter gain(g);
  return SchmidtSpectrum(gain, cutoff_for_tail(gain, tail));
}

}  // namespace

TEST(schmidt_number, closed_form) {
  for (double g : {0.2, 0.5, 1.0}) {
    const double expect = std::pow(1.0 + 2.0 * n0_of(g), 2);
    EXPECT_NEAR(effective_schmidt_number(fine_spectrum(g)), expect, 1e-6 * expect);
    EXPECT_NEAR(effective_schmidt_number(fine_spectrum(g), false), std::sqrt(expect), 1e-6 * expect);
  }
  EXPECT_EQ(effective_schmidt_number(schmidt_spectrum(0.0, 3)), 1.0);
  const double n0 = n0_of(4.0);
  EXPECT_NEAR(effective_schmidt_number_analytic(GainParameter(4.0)) / (4.0 * n0 * n0), 1.0, 2e-3);
}

TEST(schmidt_number, errors) {
  EXPECT_THROW(effective_schmidt_number(schmidt_spectrum(400.0, 3)), std::domain_error);
  EXPECT_THROW(effective_schmidt_number(schmidt_spectrum(1.0, 5)), std::domain_error);
}

TEST(schmidt_number, purity_of_reduced_state) {
  const auto spec = fine_spectrum(0.7, 1e-10);
  double s2 = 0.0;
  for (double l : spec.renormalized()) s2 += l * l;
  EXPECT_NEAR(inverse_purity(pair_coefficients(spec)), 1.0 / s2, 1e-10);
  const auto small = schmidt_spectrum(0.7, 4);
  const auto state = build_bell_state(BellLabel::PsiMinus, GainParameter(0.7), 4);
  const double pair = inverse_purity(pair_coefficients(small));
  EXPECT_NEAR(inverse_purity(four_mode_coefficients(state)), pair * pair, 1e-10);
}

TEST(negativity, pt_spectrum_structure) {
  const auto spec = schmidt_spectrum(0.6, 6);
  Eigen::VectorXd dense = partial_transpose_eigenvalues(pair_coefficients(spec));
  std::sort(dense.begin(), dense.end());
  const auto exact = pair_pt_spectrum(spec);
  ASSERT_EQ(static_cast<std::size_t>(dense.size()), exact.size());
  for (std::size_t i = 0; i < exact.size(); ++i) EXPECT_NEAR(dense(static_cast<Eigen::Index>(i)), exact[i], 1e-14);

  double root_sum = 0.0, abs_sum = 0.0;
  for (double l : spec.renormalized()) root_sum += std::sqrt(l);
  for (double e : exact) abs_sum += std::abs(e);
  EXPECT_NEAR(abs_sum, root_sum * root_sum, 1e-13);
}

TEST(negativity, trace_norm_factorizes) {
  const auto state = build_bell_state(BellLabel::PsiPlus, GainParameter(0.8), 3);
  const double pair = trace_norm_dense(pair_coefficients(schmidt_spectrum(0.8, 3)));
  EXPECT_NEAR(trace_norm_dense(four_mode_coefficients(state)), pair * pair, 1e-8);
}

TEST(negativity, numeric_matches_closed_form) {
  const auto r = negativity_numeric(schmidt_spectrum(0.5, 25));
  EXPECT_TRUE(r.dense);
  EXPECT_NEAR(r.pair_trace_norm, std::exp(1.0), 1e-5 * std::exp(1.0));
  EXPECT_NEAR(r.four_mode_negativity, std::expm1(2.0), 1e-4 * std::expm1(2.0));
  EXPECT_NEAR(negativity_analytic(GainParameter(0.5)), std::expm1(2.0), 1e-14);

  const auto big = negativity_numeric(schmidt_spectrum(1.5, 400));
  EXPECT_FALSE(big.dense);
  EXPECT_NEAR(big.four_mode_negativity, std::expm1(6.0), 1e-6 * std::expm1(6.0));

  EXPECT_EQ(negativity_numeric(schmidt_spectrum(0.0, 4)).four_mode_negativity, 0.0);
  EXPECT_THROW(negativity_numeric(schmidt_spectrum(1.0, 5)), std::domain_error);
}

TEST(negativity, large_gain_asymptote) {
  const double n0 = n0_of(3.0);
  const double ratio = negativity_analytic(GainParameter(3.0)) / (16.0 * n0 * n0);
  EXPECT_GE(ratio, 0.95);
  EXPECT_LE(ratio, 1.05);
}

TEST(log_negativity, copies) {
  EXPECT_EQ(log_negativity(GainParameter(0.0)), 0.0);
  EXPECT_NEAR(log_negativity(GainParameter(1.0), 2), 4.0 / std::numbers::ln2, 1e-14);
  EXPECT_NEAR(log_negativity(GainParameter(1.0), 1), 2.0 / std::numbers::ln2, 1e-14);
  EXPECT_THROW(log_negativity(GainParameter(1.0), 3), std::domain_error);
  const auto r = negativity_numeric(schmidt_spectrum(0.5, 25));
  EXPECT_NEAR(std::log2(r.pair_trace_norm * r.pair_trace_norm), log_negativity(GainParameter(0.5), 2), 1e-4);
  EXPECT_NEAR(std::log2(r.pair_trace_norm), log_negativity(GainParameter(0.5), 1), 1e-4);
}

TEST(distributions, marginal_and_conditional) {
  const double g = 0.9;
  const auto spec = fine_spectrum(g);
  const auto d = photon_number_distributions(spec);
  double sum = 0.0, mean = 0.0;
  for (std::size_t n = 0; n < d.marginal.probabilities.size(); ++n) {
    sum += d.marginal.probabilities[n];
    mean += static_cast<double>(n) * d.marginal.probabilities[n];
  }
  EXPECT_NEAR(sum, 1.0, 1e-10);
  EXPECT_NEAR(mean, n0_of(g), 1e-10);
  EXPECT_NEAR(d.marginal.mean(), n0_of(g), 1e-10);

  const auto& c3 = d.conditional.at(3);
  EXPECT_EQ(c3.condition, 3);
  for (std::size_t n = 0; n < c3.probabilities.size(); ++n) EXPECT_EQ(c3.probabilities[n], n == 3 ? 1.0 : 0.0);
  EXPECT_EQ(c3.stddev(), 0.0);
  EXPECT_THROW(conditional_distribution(spec, spec.cutoff() + 1), std::out_of_range);

  const auto vac = marginal_distribution(schmidt_spectrum(0.0, 4));
  EXPECT_EQ(vac.probabilities[0], 1.0);
}

TEST(fedorov, conventions) {
  const double g = 1.1, n0 = n0_of(g);
  const auto spec = fine_spectrum(g);
  // brute-force standard deviation of the geometric law
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t n = 0; n < spec.lambdas().size(); ++n) {
    m1 += static_cast<double>(n) * spec.lambdas()[n];
    m2 += static_cast<double>(n * n) * spec.lambdas()[n];
  }
  const double sd = std::sqrt(m2 - m1 * m1);
  EXPECT_NEAR(sd, std::sqrt(n0 * (n0 + 1.0)), 1e-9);
  EXPECT_NEAR(fedorov_ratio(spec, WidthConvention::StdDev).per_pair, sd, 1e-9);
  EXPECT_NEAR(fedorov_ratio(spec, WidthConvention::SqrtTwoStdDev).per_pair, std::numbers::sqrt2 * sd, 1e-9);
  const auto r = fedorov_ratio_analytic(GainParameter(g));
  EXPECT_NEAR(r.four_mode, r.per_pair * r.per_pair, 1e-12);
  EXPECT_EQ(fedorov_ratio(schmidt_spectrum(0.0, 3)).four_mode, 0.0);

  const double big = n0_of(4.0);
  EXPECT_NEAR(fedorov_ratio_analytic(GainParameter(4.0)).per_pair / (std::numbers::sqrt2 * big), 1.0, 1e-3);
  EXPECT_EQ(parse_width_convention("sqrt2-stddev"), WidthConvention::SqrtTwoStdDev);
  EXPECT_FALSE(parse_width_convention("fwhm"));
}

TEST(measures_scan, rows) {
  const auto rows = measures_scan({0.0, 1.0, 1e4});
  EXPECT_EQ(rows[0].negativity, 0.0);
  EXPECT_EQ(rows[0].kbar, 1.0);
  EXPECT_EQ(rows[0].fedorov, 0.0);
  EXPECT_NEAR(rows[1].kbar, 9.0, 1e-12);
  const auto& far = rows[2];
  EXPECT_GT(far.negativity, far.kbar);
  EXPECT_GT(far.kbar, far.fedorov);
  EXPECT_NEAR(far.negativity / far.kbar, 4.0, 1e-3);
  EXPECT_NEAR(far.kbar / far.fedorov, 2.0, 1e-3);
  EXPECT_THROW(measures_scan({}), std::invalid_argument);
  EXPECT_THROW(measures_scan({-1.0}), std::domain_error);
}

TEST(measures, monotone_in_gain) {
  // mid-range gains would route through large dense eigensolves; skip them here
  MeasureReport prev = measure_report(GainParameter(0.05));
  for (double g : {0.1, 0.2, 0.3, 1.2, 1.5, 1.8}) {
    const MeasureReport r = measure_report(GainParameter(g));
    EXPECT_GT(r.kbar_numeric, prev.kbar_numeric);
    EXPECT_GT(r.negativity_numeric, prev.negativity_numeric);
    EXPECT_GT(r.fedorov_ratio, prev.fedorov_ratio);
    EXPECT_NEAR(r.kbar_numeric, r.kbar_analytic, 1e-9 * r.kbar_analytic);
    EXPECT_NEAR(r.negativity_numeric, r.negativity_analytic, 1e-9 * r.negativity_analytic);
    prev = r;
  }
}
