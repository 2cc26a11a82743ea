#pragma once

#include "bsv/bell_state.hpp"
#include "bsv/errors.hpp"
#include "bsv/spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

namespace bsv {

// ---------------------------------------------------------------------------
// Effective Schmidt number

/// 1 / sum(lambda^2) of the renormalized spectrum; squared for the four-mode
/// state, which is the product of two identical pairs.
inline double effective_schmidt_number(const SchmidtSpectrum& spectrum, bool four_mode = true) {
  if (!(spectrum.total() > 0.0)) throw std::domain_error("all-zero Schmidt spectrum");
  if (spectrum.tail_mass() > 1e-8)
    throw std::domain_error("spectrum tail " + std::to_string(spectrum.tail_mass()) + " exceeds 1e-8; raise the cutoff");
  double s2 = 0.0;
  for (double l : spectrum.renormalized()) s2 += l * l;
  const double k = 1.0 / s2;
  return four_mode ? k * k : k;
}

inline double effective_schmidt_number_analytic(GainParameter g) {
  const double k = 1.0 + 2.0 * g.mean_photons();
  return k * k;
}

/// 1 / Tr(rho_a^2) from the reduced density matrix of a bipartite coefficient matrix.
inline double inverse_purity(const Eigen::MatrixXcd& coeffs) {
  const Eigen::MatrixXcd c = coeffs / coeffs.norm();
  const Eigen::MatrixXcd rho_a = c * c.adjoint();
  return 1.0 / (rho_a * rho_a).trace().real();
}

/// Coefficient matrix sqrt(lambda_n) delta_{nm} of one squeezed pair.
inline Eigen::MatrixXcd pair_coefficients(const SchmidtSpectrum& spectrum) {
  const auto l = spectrum.renormalized();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(l.size()), static_cast<Eigen::Index>(l.size()));
  for (std::size_t n = 0; n < l.size(); ++n) c(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = std::sqrt(l[n]);
  return c;
}

/// Coefficient matrix of the compressed four-mode state between beam-a kets
/// |n,m> (row n(N+1)+m) and beam-b kets |m,n> (column m(N+1)+n).
inline Eigen::MatrixXcd four_mode_coefficients(const FourModeState& s) {
  const int side = s.cutoff() + 1;
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(side * side, side * side);
  for (int n = 0; n < side; ++n)
    for (int m = 0; m < side; ++m) c(n * side + m, m * side + n) = s.amplitude(n, m);
  return c / c.norm();
}

// ---------------------------------------------------------------------------
// Negativity

/// Largest partially transposed matrix handed to the dense eigensolver (cutoff 50 pair).
inline constexpr Eigen::Index kDensePtLimit = 2601;

/// Partial transpose (on the second factor) of |psi><psi|, where psi has
/// coefficient matrix C: element ((i,j),(k,l)) = C(i,l) conj(C(k,j)).
inline Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& c) {
  const Eigen::Index da = c.rows(), db = c.cols();
  Eigen::MatrixXcd pt(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < db; ++j)
      for (Eigen::Index k = 0; k < da; ++k)
        for (Eigen::Index l = 0; l < db; ++l) pt(i * db + j, k * db + l) = c(i, l) * std::conj(c(k, j));
  return pt;
}

inline Eigen::VectorXd partial_transpose_eigenvalues(const Eigen::MatrixXcd& c) {
  const Eigen::MatrixXcd pt = partial_transpose(c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericError("Hermitian eigensolver did not converge on the partial transpose",
                       std::numeric_limits<double>::quiet_NaN());
  }
  return es.eigenvalues();
}

/// ||rho^PT||_1 of a pure bipartite state by dense diagonalization.
inline double trace_norm_dense(const Eigen::MatrixXcd& c) {
  if (c.rows() * c.cols() > kDensePtLimit) throw std::length_error("partial transpose too large for dense solver");
  const Eigen::MatrixXcd cn = c / c.norm();
  const Eigen::VectorXd ev = partial_transpose_eigenvalues(cn);
  const double tn = ev.cwiseAbs().sum();
  // eigenvalues of a unit-trace operator: check the trace survived
  const double residual = std::abs(ev.sum() - 1.0);
  if (residual > 1e-8) throw NumericError("partial transpose spectrum lost its trace", residual);
  return tn;
}

/// Exact PT spectrum of one squeezed pair: {lambda_n} U {+-sqrt(lambda_n lambda_m), n < m}.
inline std::vector<double> pair_pt_spectrum(const SchmidtSpectrum& spectrum) {
  const auto l = spectrum.renormalized();
  std::vector<double> ev(l.begin(), l.end());
  for (std::size_t n = 0; n < l.size(); ++n)
    for (std::size_t m = n + 1; m < l.size(); ++m) {
      const double r = std::sqrt(l[n] * l[m]);
      ev.push_back(r);
      ev.push_back(-r);
    }
  std::sort(ev.begin(), ev.end());
  return ev;
}

struct NegativityResult {
  double pair_trace_norm = 1.0;       ///< ||rho_1^PT||_1 of one pair
  double four_mode_trace_norm = 1.0;  ///< square of the pair value
  double pair_negativity = 0.0;
  double four_mode_negativity = 0.0;
  bool dense = true;  ///< false when the closed-form PT spectrum was used
};

/// Negativities from the pair partial transpose. Dense up to cutoff 50; above
/// that the exact PT spectrum is summed in closed form, (sum sqrt(lambda_n))^2.
/// The trace norm converges like sqrt(lambda_n), so the cutoff must leave a
/// spectral tail below 1e-16.
inline NegativityResult negativity_numeric(const SchmidtSpectrum& spectrum) {
  if (spectrum.tail_mass() > 1e-16)
    throw std::domain_error("spectrum tail " + std::to_string(spectrum.tail_mass()) + " exceeds 1e-16; raise the cutoff");
  NegativityResult r;
  const auto side = static_cast<Eigen::Index>(spectrum.cutoff()) + 1;
  if (side * side <= kDensePtLimit) {
    r.pair_trace_norm = trace_norm_dense(pair_coefficients(spectrum));
  } else {
    r.dense = false;
    double s = 0.0, c = 0.0;
    for (double l : spectrum.renormalized()) {
      const double y = std::sqrt(l) - c;
      const double t = s + y;
      c = (t - s) - y;
      s = t;
    }
    r.pair_trace_norm = s * s;
  }
  r.four_mode_trace_norm = r.pair_trace_norm * r.pair_trace_norm;
  r.pair_negativity = r.pair_trace_norm - 1.0;
  r.four_mode_negativity = r.four_mode_trace_norm - 1.0;
  return r;
}

inline double negativity_analytic(GainParameter g) { return std::expm1(4.0 * g.value()); }

/// Logarithmic negativity of `copies` squeezed pairs: copies * 2 gamma / ln 2.
inline double log_negativity(GainParameter g, int copies = 2) {
  if (copies != 1 && copies != 2) throw std::domain_error("copies must be 1 or 2");
  return copies * 2.0 * g.value() / std::numbers::ln2;
}

// ---------------------------------------------------------------------------
// Photon-number distributions and the Fedorov ratio

enum class WidthConvention {
  StdDev,         ///< width = standard deviation
  SqrtTwoStdDev,  ///< width = sqrt(2) * standard deviation
};

inline std::string_view to_string(WidthConvention c) {
  return c == WidthConvention::StdDev ? "stddev" : "sqrt2-stddev";
}

inline std::optional<WidthConvention> parse_width_convention(std::string_view s) {
  if (s == "stddev") return WidthConvention::StdDev;
  if (s == "sqrt2-stddev") return WidthConvention::SqrtTwoStdDev;
  return std::nullopt;
}

inline double width_factor(WidthConvention c) { return c == WidthConvention::StdDev ? 1.0 : std::numbers::sqrt2; }

struct PhotonNumberDistribution {
  enum class Kind { Marginal, Conditional };
  Kind kind = Kind::Marginal;
  int condition = -1;  ///< n_b for conditional distributions
  std::vector<double> probabilities;

  double mean() const {
    double m = 0.0;
    for (std::size_t n = 0; n < probabilities.size(); ++n) m += static_cast<double>(n) * probabilities[n];
    return m;
  }
  double stddev() const {
    const double mu = mean();
    double v = 0.0;
    for (std::size_t n = 0; n < probabilities.size(); ++n) {
      const double d = static_cast<double>(n) - mu;
      v += d * d * probabilities[n];
    }
    return std::sqrt(v);
  }
};

/// Marginal law P(n_a) = lambda_n (renormalized).
inline PhotonNumberDistribution marginal_distribution(const SchmidtSpectrum& spectrum) {
  return {PhotonNumberDistribution::Kind::Marginal, -1, spectrum.renormalized()};
}

/// Conditional law P(n_a | n_b) = delta_{n_a, n_b}.
inline PhotonNumberDistribution conditional_distribution(const SchmidtSpectrum& spectrum, int n_b) {
  if (n_b < 0 || n_b > spectrum.cutoff()) throw std::out_of_range("conditioning photon number beyond cutoff");
  PhotonNumberDistribution d{PhotonNumberDistribution::Kind::Conditional, n_b,
                             std::vector<double>(static_cast<std::size_t>(spectrum.cutoff()) + 1, 0.0)};
  d.probabilities[static_cast<std::size_t>(n_b)] = 1.0;
  return d;
}

struct PhotonNumberDistributions {
  PhotonNumberDistribution marginal;
  std::vector<PhotonNumberDistribution> conditional;  ///< indexed by n_b
};

inline PhotonNumberDistributions photon_number_distributions(const SchmidtSpectrum& spectrum) {
  PhotonNumberDistributions out{marginal_distribution(spectrum), {}};
  for (int n = 0; n <= spectrum.cutoff(); ++n) out.conditional.push_back(conditional_distribution(spectrum, n));
  return out;
}

struct FedorovRatio {
  double per_pair = 0.0;
  double four_mode = 0.0;
};

/// Marginal width over conditional width, the latter fixed to one photon
/// (the conditional law is a Kronecker delta).
inline FedorovRatio fedorov_ratio(const SchmidtSpectrum& spectrum,
                                  WidthConvention convention = WidthConvention::SqrtTwoStdDev) {
  const double per_pair = width_factor(convention) * marginal_distribution(spectrum).stddev() / 1.0;
  return {per_pair, per_pair * per_pair};
}

/// Closed form: the geometric law has standard deviation sqrt(N0 (N0 + 1)).
inline FedorovRatio fedorov_ratio_analytic(GainParameter g, WidthConvention convention = WidthConvention::SqrtTwoStdDev) {
  const double n0 = g.mean_photons();
  const double per_pair = width_factor(convention) * std::sqrt(n0 * (n0 + 1.0));
  return {per_pair, per_pair * per_pair};
}

// ---------------------------------------------------------------------------
// Reports and the N0 scan

struct MeasureReport {
  double gamma = 0.0;
  double n0 = 0.0;
  double kbar_analytic = 1.0;
  double kbar_numeric = 1.0;
  double negativity_analytic = 0.0;
  double negativity_numeric = 0.0;
  double log_negativity = 0.0;
  double fedorov_ratio = 0.0;
  WidthConvention width_convention = WidthConvention::SqrtTwoStdDev;
};

inline MeasureReport measure_report(GainParameter g, WidthConvention convention = WidthConvention::SqrtTwoStdDev) {
  const int cutoff = cutoff_for_tail(g, 1e-30);
  const SchmidtSpectrum spec(g, cutoff);
  MeasureReport r;
  r.gamma = g.value();
  r.n0 = g.mean_photons();
  r.kbar_analytic = effective_schmidt_number_analytic(g);
  r.kbar_numeric = effective_schmidt_number(spec, true);
  r.negativity_analytic = negativity_analytic(g);
  r.negativity_numeric = negativity_numeric(spec).four_mode_negativity;
  r.log_negativity = log_negativity(g, 2);
  r.fedorov_ratio = fedorov_ratio(spec, convention).four_mode;
  r.width_convention = convention;
  return r;
}

struct MeasuresRow {
  double n0 = 0.0;
  double negativity = 0.0;
  double kbar = 1.0;
  double fedorov = 0.0;
};

/// Negativity, effective Schmidt number and four-mode Fedorov ratio as
/// functions of the mean photon number per mode (closed forms).
inline std::vector<MeasuresRow> measures_scan(const std::vector<double>& n0_grid,
                                            WidthConvention convention = WidthConvention::SqrtTwoStdDev) {
  if (n0_grid.empty()) throw std::invalid_argument("empty N0 grid");
  std::vector<MeasuresRow> rows;
  rows.reserve(n0_grid.size());
  for (double n0 : n0_grid) {
    if (!(n0 >= 0.0) || !std::isfinite(n0)) throw std::domain_error("N0 grid values must be finite and >= 0");
    const GainParameter g = GainParameter::from_mean_photons(n0);
    rows.push_back({n0, negativity_analytic(g), effective_schmidt_number_analytic(g),
                    fedorov_ratio_analytic(g, convention).four_mode});
  }
  return rows;
}

}  // namespace bsv
