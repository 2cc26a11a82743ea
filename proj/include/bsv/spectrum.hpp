#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bsv {

/// Dimensionless parametric gain of the down-conversion source.
class GainParameter {
public:
  GainParameter() = default;
  explicit GainParameter(double gamma) : gamma_(gamma) {
    if (!std::isfinite(gamma)) throw std::domain_error("gain must be finite");
    if (gamma < 0.0) throw std::domain_error("gain must be non-negative, got " + std::to_string(gamma));
  }

  /// Gain producing a mean photon number `n0` per mode.
  static GainParameter from_mean_photons(double n0) {
    if (!std::isfinite(n0) || n0 < 0.0) throw std::domain_error("mean photon number must be finite and >= 0");
    return GainParameter(std::asinh(std::sqrt(n0)));
  }

  double value() const noexcept { return gamma_; }
  /// Mean photon number per mode, sinh^2.
  double mean_photons() const noexcept {
    const double s = std::sinh(gamma_);
    return s * s;
  }
  /// Geometric ratio tanh^2 = N0 / (N0 + 1).
  double ratio() const noexcept {
    const double t = std::tanh(gamma_);
    return t * t;
  }
  /// log(tanh^2), -inf at zero gain.
  double log_ratio() const noexcept { return 2.0 * std::log(std::tanh(gamma_)); }
  /// log(1/cosh^2), evaluated without overflow for large gain.
  double log_vacuum_weight() const noexcept {
    const double g = gamma_;
    return -2.0 * (g + std::log1p(std::exp(-2.0 * g)) - std::log(2.0));
  }

  friend bool operator==(const GainParameter&, const GainParameter&) = default;

private:
  double gamma_ = 0.0;
};

/// Schmidt weights lambda_n = tanh^{2n} / cosh^2 of one two-mode squeezed pair,
/// kept for n = 0..cutoff.
class SchmidtSpectrum {
public:
  SchmidtSpectrum(GainParameter gain, int cutoff) : gain_(gain), cutoff_(cutoff) {
    if (cutoff < 0) throw std::domain_error("cutoff must be >= 0");
    lambdas_.resize(static_cast<std::size_t>(cutoff) + 1, 0.0);
    if (gain.value() == 0.0) {
      lambdas_[0] = 1.0;
      return;
    }
    const double log_x = gain.log_ratio();
    const double log_w = gain.log_vacuum_weight();
    for (int n = 0; n <= cutoff; ++n) lambdas_[static_cast<std::size_t>(n)] = std::exp(log_w + n * log_x);
  }

  GainParameter gain() const noexcept { return gain_; }
  int cutoff() const noexcept { return cutoff_; }
  std::span<const double> lambdas() const noexcept { return lambdas_; }
  double operator[](int n) const { return lambdas_.at(static_cast<std::size_t>(n)); }

  /// Exact mass beyond the cutoff, tanh^{2(cutoff+1)}.
  double tail_mass() const noexcept {
    if (gain_.value() == 0.0) return 0.0;
    return std::exp((cutoff_ + 1) * gain_.log_ratio());
  }

  /// Sum of the retained weights (compensated).
  double total() const noexcept {
    double sum = 0.0, c = 0.0;
    for (double l : lambdas_) {
      const double y = l - c;
      const double t = sum + y;
      c = (t - sum) - y;
      sum = t;
    }
    return sum;
  }

  /// Weights rescaled to sum to one.
  std::vector<double> renormalized() const {
    const double s = total();
    if (!(s > 0.0)) throw std::domain_error("spectrum has zero total weight");
    std::vector<double> out(lambdas_.begin(), lambdas_.end());
    for (double& l : out) l /= s;
    return out;
  }

private:
  GainParameter gain_;
  int cutoff_ = 0;
  std::vector<double> lambdas_;
};

inline SchmidtSpectrum schmidt_spectrum(GainParameter gain, int cutoff) { return SchmidtSpectrum(gain, cutoff); }

inline SchmidtSpectrum schmidt_spectrum(double gamma, int cutoff) {
  return SchmidtSpectrum(GainParameter(gamma), cutoff);
}

/// Smallest cutoff whose spectrum tail is below `tail`.
inline int cutoff_for_tail(GainParameter gain, double tail) {
  if (gain.value() == 0.0) return 0;
  // x^{N+1} < tail  <=>  N + 1 > log(tail) / log(x)
  const double n = std::floor(std::log(tail) / gain.log_ratio());
  return n < 0.0 ? 0 : static_cast<int>(n);
}

}  // namespace bsv
