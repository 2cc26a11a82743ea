#pragma once

// Virtual photon-counting experiment: wave plates and polarizing splitters in
// each beam, four detectors, many pulses.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "bell_state.hpp"
#include "errors.hpp"
#include "measures.hpp"
#include "optics.hpp"
#include "pulse_rng.hpp"
#include "witnesses.hpp"

namespace bsv {

struct MeasurementSetting {
  double hwp_deg = 0.0;
  double qwp_deg = 0.0;

  /// Light passes the QWP first, then the HWP, then the polarizing splitter.
  Jones jones() const { return jones::half_wave(jones::deg(hwp_deg)) * jones::quarter_wave(jones::deg(qwp_deg)); }

  static MeasurementSetting canonical(int component) {
    switch (component) {
      case 1: return {0.0, 0.0};
      case 2: return {22.5, 45.0};
      case 3: return {0.0, 45.0};
    }
    throw std::out_of_range("Stokes component must be 1, 2 or 3");
  }

  /// The Stokes component this setting reads out, if it is one of the canonical three.
  std::optional<int> stokes_component() const {
    for (int c = 1; c <= 3; ++c) {
      const auto s = canonical(c);
      if (std::abs(s.hwp_deg - hwp_deg) < 1e-12 && std::abs(s.qwp_deg - qwp_deg) < 1e-12) return c;
    }
    return std::nullopt;
  }
};

inline std::string setting_name(int component) { return "S" + std::to_string(component); }

struct PulseRecord {
  std::uint64_t pulse_id = 0;
  int component = 1;
  std::array<std::int64_t, 4> counts{};  // aH', aV', bH', bV'

  std::int64_t readout_a() const { return counts[0] - counts[1]; }
  std::int64_t readout_b() const { return counts[2] - counts[3]; }
  std::int64_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }

  bool operator==(const PulseRecord&) const = default;
};

struct SimConfig {
  BellLabel label = BellLabel::PsiPlus;
  double gamma = 0.5;
  std::int64_t pulses = 100000;
  double eta = 1.0;
  std::int64_t bin_width = 200;
  std::uint64_t seed = 1;
  int workers = 1;
  WidthConvention convention = WidthConvention::SqrtTwoStdDev;
  /// When set, every pulse is drawn from the explicitly rotated truncated
  /// state at this per-beam cutoff instead of the closed-form pair law.
  std::optional<int> generic_cutoff;

  void validate() const {
    if (pulses < 1) throw std::invalid_argument("pulses must be >= 1");
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("efficiency must lie in (0, 1]");
    if (bin_width < 1) throw std::invalid_argument("bin width must be >= 1");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (generic_cutoff && (*generic_cutoff < 1 || *generic_cutoff > 20))
      throw std::invalid_argument("generic sampling cutoff must lie in [1, 20]");
    (void)GainParameter{gamma};
  }
};

namespace detail {

/// Which detector of beam b each detector of beam a is paired with, if the
/// rotated pair-creation matrix is a pure pairing.
inline std::optional<std::array<int, 2>> pairing_of(const Jones& m) {
  constexpr double tol = 1e-9;
  const auto unit = [](cplx z) { return std::abs(std::abs(z) - 1.0) < tol; };
  const auto zero = [](cplx z) { return std::abs(z) < tol; };
  if (unit(m(0, 0)) && unit(m(1, 1)) && zero(m(0, 1)) && zero(m(1, 0))) return std::array<int, 2>{0, 1};
  if (unit(m(0, 1)) && unit(m(1, 0)) && zero(m(0, 0)) && zero(m(1, 1))) return std::array<int, 2>{1, 0};
  return std::nullopt;
}

}  // namespace detail

/// Draws detector counts for one measurement setting (same plates on both beams).
class PulseSampler {
public:
  PulseSampler(const SimConfig& cfg, int component) : component_(component), eta_(cfg.eta) {
    const GainParameter gain{cfg.gamma};
    const Jones j = MeasurementSetting::canonical(component).jones();
    x_ = gain.ratio();
    pairing_ = detail::pairing_of(j * hv_coupling(cfg.label) * j.transpose());
    if (cfg.generic_cutoff || !pairing_) build_generic(cfg, gain, j, cfg.generic_cutoff.value_or(20));
  }

  int component() const { return component_; }
  bool closed_form() const { return cdf_.empty(); }

  PulseRecord sample(std::uint64_t seed, std::uint64_t pulse_id) const {
    PulseRng rng(seed, pulse_id);
    PulseRecord rec;
    rec.pulse_id = pulse_id;
    rec.component = component_;
    if (closed_form()) {
      const std::int64_t n = draw_geometric(rng);
      const std::int64_t m = draw_geometric(rng);
      rec.counts[0] = n;
      rec.counts[1] = m;
      rec.counts[2 + (*pairing_)[0]] = n;
      rec.counts[2 + (*pairing_)[1]] = m;
    } else {
      const double u = std::uniform_real_distribution<double>(0.0, cdf_.back())(rng);
      const auto idx = static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
      rec.counts = outcomes_[std::min(idx, outcomes_.size() - 1)];
    }
    if (eta_ < 1.0) {
      for (auto& c : rec.counts) {
        if (c > 0) c = std::binomial_distribution<std::int64_t>(c, eta_)(rng);
      }
    }
    return rec;
  }

private:
  std::int64_t draw_geometric(PulseRng& rng) const {
    if (x_ == 0.0) return 0;
    return std::geometric_distribution<std::int64_t>(1.0 - x_)(rng);
  }

  void build_generic(const SimConfig& cfg, GainParameter gain, const Jones& j, int cutoff) {
    const auto state = build_bell_state(cfg.label, gain, cutoff, TruncationMode::TotalPhotonCutoff);
    if (const double lost = 1.0 - state.norm2(); lost > 1e-9)
      throw TruncationError("generic sampling cutoff too small for this gain", lost);
    FockState psi = expand(state);
    apply_beam_unitary(psi, j, BeamTarget::Both);
    const FockBasis& basis = psi.basis();
    double acc = 0.0;
    for (int ib = 0; ib < basis.beam_dim(); ++ib) {
      for (int ia = 0; ia < basis.beam_dim(); ++ia) {
        const double p = std::norm(psi.amplitudes()(ia, ib));
        if (p < 1e-300) continue;
        acc += p;
        const BeamKet ka = basis.beam_ket(ia);
        const BeamKet kb = basis.beam_ket(ib);
        cdf_.push_back(acc);
        outcomes_.push_back({ka.h, ka.v, kb.h, kb.v});
      }
    }
  }

  int component_;
  double eta_;
  double x_ = 0.0;
  std::optional<std::array<int, 2>> pairing_;
  std::vector<double> cdf_;
  std::vector<std::array<std::int64_t, 4>> outcomes_;
};

/// One measurement series. Pulse ids run from first_id; the result is in
/// pulse-id order and does not depend on the worker count.
inline std::vector<PulseRecord> run_series(const SimConfig& cfg, int component, std::uint64_t first_id) {
  cfg.validate();
  const PulseSampler sampler(cfg, component);
  const auto n = static_cast<std::size_t>(cfg.pulses);
  std::vector<PulseRecord> out(n);
  const auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) out[k] = sampler.sample(cfg.seed, first_id + k);
  };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), n);
  if (workers <= 1) {
    work(0, n);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo < hi) pool.emplace_back(work, lo, hi);
  }
  for (auto& t : pool) t.join();
  return out;
}

using PulseLog = std::function<void(const PulseRecord&)>;

/// Sample variance of x and mean of t with delete-one jackknife errors,
/// including the error of f = var(x) - c * mean(t).
struct SeriesStats {
  std::size_t n = 0;
  double var_x = 0.0, mean_t = 0.0;
  double var_x_error = 0.0, mean_t_error = 0.0, f_error = 0.0;
};

inline SeriesStats jackknife_series(const std::vector<double>& x, const std::vector<double>& t, double c) {
  SeriesStats s;
  s.n = x.size();
  if (s.n < 3) throw std::invalid_argument("jackknife needs at least 3 samples");
  const double n = static_cast<double>(s.n);
  double mx = 0.0, mt = 0.0;
  for (std::size_t i = 0; i < s.n; ++i) {
    mx += x[i];
    mt += t[i];
  }
  mx /= n;
  mt /= n;
  double d2 = 0.0;
  for (double xi : x) d2 += (xi - mx) * (xi - mx);
  s.var_x = d2 / (n - 1.0);
  s.mean_t = mt;

  // Leave-one-out replicas in closed form.
  std::vector<double> rv(s.n), rt(s.n);
  double sum_v = 0.0, sum_t = 0.0;
  for (std::size_t j = 0; j < s.n; ++j) {
    const double dj = x[j] - mx;
    rv[j] = std::max(0.0, d2 - n * dj * dj / (n - 1.0)) / (n - 2.0);
    rt[j] = (n * mt - t[j]) / (n - 1.0);
    sum_v += rv[j];
    sum_t += rt[j];
  }
  const double bar_v = sum_v / n, bar_t = sum_t / n;
  double ev = 0.0, et = 0.0, ef = 0.0;
  for (std::size_t j = 0; j < s.n; ++j) {
    const double dv = rv[j] - bar_v, dt = rt[j] - bar_t;
    ev += dv * dv;
    et += dt * dt;
    ef += (dv - c * dt) * (dv - c * dt);
  }
  const double scale = (n - 1.0) / n;
  s.var_x_error = std::sqrt(scale * ev);
  s.mean_t_error = std::sqrt(scale * et);
  s.f_error = std::sqrt(scale * ef);
  return s;
}

struct SimulatedWitness {
  WitnessReport report;
  std::array<bool, 3> degenerate_series{};  // zero variance and zero mean
};

using SeriesSet = std::array<std::vector<PulseRecord>, 3>;

/// Three series, one per Stokes component, each on fresh pulses.
inline SeriesSet run_series_set(const SimConfig& cfg, const PulseLog& log = {}) {
  SeriesSet set;
  for (int i = 0; i < 3; ++i) {
    set[i] = run_series(cfg, i + 1, static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cfg.pulses));
    if (log) {
      for (const auto& r : set[i]) log(r);
    }
  }
  return set;
}

/// Witness from detected counts as they are; no efficiency correction.
inline SimulatedWitness estimate_witness(WitnessKind kind, const SeriesSet& set) {
  const auto signs = witness_signs(kind);
  SimulatedWitness out;
  auto& rep = out.report;
  rep.kind = kind;
  std::array<double, 3> var_err{};
  double value_err2 = 0.0, s0_err2 = 0.0, s0_sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto& series = set[i];
    if (series.size() < 3) throw std::invalid_argument("witness estimation needs at least 3 pulses per series");
    std::vector<double> x(series.size()), t(series.size());
    for (std::size_t k = 0; k < series.size(); ++k) {
      x[k] = static_cast<double>(series[k].readout_a() + signs[i] * series[k].readout_b());
      t[k] = static_cast<double>(series[k].total());
    }
    const auto st = jackknife_series(x, t, 2.0 / 3.0);
    rep.var_terms[i] = st.var_x;
    var_err[i] = st.var_x_error;
    s0_sum += st.mean_t;
    s0_err2 += st.mean_t_error * st.mean_t_error;
    value_err2 += st.f_error * st.f_error;
    if (st.var_x == 0.0 && st.mean_t == 0.0) {
      out.degenerate_series[i] = true;
      warn("series " + setting_name(i + 1) + " has zero variance and zero mean count");
    }
  }
  rep.s0_mean = s0_sum / 3.0;
  rep.value = rep.var_terms[0] + rep.var_terms[1] + rep.var_terms[2] - 2.0 * rep.s0_mean;
  rep.var_errors = var_err;
  rep.s0_error = std::sqrt(s0_err2) / 3.0;
  rep.value_error = std::sqrt(value_err2);
  return out;
}

inline SimulatedWitness estimate_witness(WitnessKind kind, const SimConfig& cfg, const PulseLog& log = {}) {
  cfg.validate();
  return estimate_witness(kind, run_series_set(cfg, log));
}

/// Expected matched variance term and witness value under binomial loss.
struct LossOracle {
  double var_term;
  double s0_mean;
  double value;
};

inline LossOracle matched_loss_oracle(GainParameter gain, double eta) {
  const double n0 = gain.mean_photons();
  const double term = 4.0 * eta * (1.0 - eta) * n0;
  const double s0 = 4.0 * eta * n0;
  return {term, s0, 3.0 * term - 2.0 * s0};
}

struct PairWidths {
  double marginal = 0.0;
  double conditional = 0.0;
  double ratio = 0.0;
  std::size_t bins_used = 0;
  std::size_t empty_bins = 0;
};

struct SimulatedFedorov {
  std::array<PairWidths, 2> pairs;
  double four_mode = 0.0;
};

namespace detail {

/// Width of x marginally and conditioned on y binned into intervals of bin_width.
/// The conditional width of a bin is never taken below one bin.
inline PairWidths pair_widths(const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& y,
                              std::int64_t bin_width, double factor) {
  struct Acc {
    double n = 0, mean = 0, m2 = 0;
    void add(double v) {
      n += 1;
      const double d = v - mean;
      mean += d / n;
      m2 += d * (v - mean);
    }
    double stddev() const { return n > 1 ? std::sqrt(m2 / (n - 1)) : 0.0; }
  };
  Acc all;
  std::map<std::int64_t, Acc> bins;
  for (std::size_t k = 0; k < x.size(); ++k) {
    all.add(static_cast<double>(x[k]));
    bins[y[k] / bin_width].add(static_cast<double>(x[k]));
  }
  PairWidths w;
  w.marginal = factor * all.stddev();
  double acc = 0.0;
  for (const auto& [b, a] : bins) acc += a.n * std::max(static_cast<double>(bin_width), factor * a.stddev());
  w.conditional = acc / all.n;
  w.ratio = w.marginal / w.conditional;
  w.bins_used = bins.size();
  w.empty_bins = static_cast<std::size_t>(bins.rbegin()->first - bins.begin()->first + 1) - bins.size();
  return w;
}

}  // namespace detail

/// Fedorov ratios from one series in the S1 setting: detector aH' against its
/// partner in beam b, and aV' against its partner.
inline SimulatedFedorov estimate_fedorov(const SimConfig& cfg, const PulseLog& log = {}) {
  cfg.validate();
  const Jones m = hv_coupling(cfg.label);
  const auto pairing = detail::pairing_of(m);
  if (!pairing) throw std::logic_error("state has no H/V pairing");
  const auto series = run_series(cfg, 1, 0);
  if (log) {
    for (const auto& r : series) log(r);
  }
  SimulatedFedorov out;
  std::size_t empty = 0;
  for (int p = 0; p < 2; ++p) {
    std::vector<std::int64_t> x(series.size()), y(series.size());
    for (std::size_t k = 0; k < series.size(); ++k) {
      x[k] = series[k].counts[p];
      y[k] = series[k].counts[2 + (*pairing)[p]];
    }
    out.pairs[p] = detail::pair_widths(x, y, cfg.bin_width, width_factor(cfg.convention));
    empty += out.pairs[p].empty_bins;
  }
  if (empty > 0) warn("skipped " + std::to_string(empty) + " empty conditional bins");
  out.four_mode = out.pairs[0].ratio * out.pairs[1].ratio;
  return out;
}

struct SweepRow {
  double eta;
  double value;
  double sigma;
  std::optional<double> oracle;
};

struct EfficiencySweep {
  std::vector<SweepRow> rows;  // ascending eta
  /// Largest grid efficiency at which the value is not three sigma below zero.
  std::optional<double> inconclusive_at_or_below;
};

/// The same seed is used at every efficiency so neighbouring points share
/// their photon-pair draws.
inline EfficiencySweep efficiency_sweep(WitnessKind kind, const SimConfig& base, std::vector<double> eta_grid) {
  if (eta_grid.empty()) throw std::invalid_argument("empty efficiency grid");
  std::sort(eta_grid.begin(), eta_grid.end());
  EfficiencySweep out;
  const bool matched = matched_state(kind) == base.label;
  for (double eta : eta_grid) {
    SimConfig cfg = base;
    cfg.eta = eta;
    const auto est = estimate_witness(kind, cfg);
    SweepRow row{eta, est.report.value, *est.report.value_error, std::nullopt};
    if (matched) row.oracle = matched_loss_oracle(GainParameter{cfg.gamma}, eta).value;
    if (row.value + 3.0 * row.sigma >= 0.0) out.inconclusive_at_or_below = eta;
    out.rows.push_back(row);
  }
  return out;
}

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson test of integer counts against the geometric law with the given mean.
/// Cells are merged so each expects at least five counts.
inline ChiSquare chi_square_geometric(const std::vector<std::int64_t>& counts, double mean) {
  ChiSquare out;
  if (counts.empty() || mean <= 0.0) return out;
  const double total = static_cast<double>(counts.size());
  const double q = mean / (1.0 + mean);
  std::map<std::int64_t, double> observed;
  for (auto c : counts) observed[c] += 1.0;

  std::vector<double> expected, seen;
  double p_k = 1.0 - q;  // P(k) for the current k
  double tail = 1.0;     // P(>= k)
  std::int64_t k = 0;
  while (true) {
    const double e_tail_after = (tail - p_k) * total;
    if (p_k * total < 5.0 || e_tail_after < 5.0) break;
    expected.push_back(p_k * total);
    seen.push_back(observed.count(k) ? observed[k] : 0.0);
    tail -= p_k;
    p_k *= q;
    ++k;
  }
  double seen_tail = 0.0;
  for (auto it = observed.lower_bound(k); it != observed.end(); ++it) seen_tail += it->second;
  expected.push_back(tail * total);
  seen.push_back(seen_tail);
  if (expected.size() < 2) return out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double d = seen[i] - expected[i];
    out.statistic += d * d / expected[i];
  }
  out.dof = static_cast<int>(expected.size()) - 1;
  out.p_value = boost::math::gamma_q(0.5 * out.dof, 0.5 * out.statistic);
  return out;
}

}  // namespace bsv
