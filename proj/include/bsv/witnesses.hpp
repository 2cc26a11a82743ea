#pragma once

#include "bsv/bell_state.hpp"
#include "bsv/errors.hpp"
#include "bsv/stokes.hpp"

#include <array>
#include <complex>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace bsv {

enum class WitnessKind { S, T1, T2, T3 };

inline constexpr std::array<WitnessKind, 4> kAllWitnessKinds = {WitnessKind::S, WitnessKind::T1, WitnessKind::T2,
                                                                WitnessKind::T3};

inline std::string_view to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::S: return "W_S";
    case WitnessKind::T1: return "W_T1";
    case WitnessKind::T2: return "W_T2";
    case WitnessKind::T3: return "W_T3";
  }
  return "?";
}

inline std::optional<WitnessKind> parse_witness_kind(std::string_view s) {
  for (WitnessKind k : kAllWitnessKinds)
    if (to_string(k) == s) return k;
  if (s == "S" || s == "s") return WitnessKind::S;
  if (s == "T1" || s == "t1") return WitnessKind::T1;
  if (s == "T2" || s == "t2") return WitnessKind::T2;
  if (s == "T3" || s == "t3") return WitnessKind::T3;
  return std::nullopt;
}

/// Relative sign of S_i^b in the i-th variance term (i = 1, 2, 3).
inline std::array<int, 3> witness_signs(WitnessKind k) {
  switch (k) {
    case WitnessKind::S: return {+1, +1, +1};
    case WitnessKind::T1: return {+1, -1, -1};
    case WitnessKind::T2: return {-1, -1, +1};
    case WitnessKind::T3: return {-1, +1, -1};
  }
  return {0, 0, 0};
}

/// The Bell state whose noise the witness suppresses in all three terms.
inline BellLabel matched_state(WitnessKind k) {
  switch (k) {
    case WitnessKind::S: return BellLabel::PsiMinus;
    case WitnessKind::T1: return BellLabel::PsiPlus;
    case WitnessKind::T2: return BellLabel::PhiPlus;
    case WitnessKind::T3: return BellLabel::PhiMinus;
  }
  return BellLabel::PsiMinus;
}

inline WitnessKind matched_witness(BellLabel l) {
  for (WitnessKind k : kAllWitnessKinds)
    if (matched_state(k) == l) return k;
  return WitnessKind::S;
}

struct WitnessReport {
  WitnessKind kind = WitnessKind::S;
  std::array<double, 3> var_terms{};
  double s0_mean = 0.0;
  double value = 0.0;  ///< sum(var_terms) - 2 s0_mean
  // Statistical errors, filled for sampled data only.
  std::optional<std::array<double, 3>> var_errors;
  std::optional<double> s0_error;
  std::optional<double> value_error;
};

/// The eight partial Stokes operators of one basis, built once.
class StokesOperatorSet {
public:
  explicit StokesOperatorSet(const FockBasis& basis) : basis_(basis) {
    for (int i = 0; i < 4; ++i) {
      a_.push_back(stokes_operator({Beam::A, i}, basis));
      b_.push_back(stokes_operator({Beam::B, i}, basis));
    }
  }
  const FockBasis& basis() const noexcept { return basis_; }
  const HermitianOperator& a(int i) const { return a_.at(static_cast<std::size_t>(i)); }
  const HermitianOperator& b(int i) const { return b_.at(static_cast<std::size_t>(i)); }
  HermitianOperator total(int i) const { return a(i) + b(i); }
  /// S_i^a + sign * S_i^b
  HermitianOperator signed_sum(int i, int sign) const { return sign > 0 ? a(i) + b(i) : a(i) - b(i); }

private:
  FockBasis basis_;
  std::vector<HermitianOperator> a_, b_;
};

/// Witness mean evaluated as centered variances minus twice <S_0>.
inline WitnessReport evaluate_witness(WitnessKind kind, const FockState& state, const StokesOperatorSet& ops) {
  WitnessReport r;
  r.kind = kind;
  const auto signs = witness_signs(kind);
  for (int i = 1; i <= 3; ++i)
    r.var_terms[static_cast<std::size_t>(i - 1)] = variance(ops.signed_sum(i, signs[static_cast<std::size_t>(i - 1)]), state);
  r.s0_mean = expectation(ops.total(0), state);
  r.value = r.var_terms[0] + r.var_terms[1] + r.var_terms[2] - 2.0 * r.s0_mean;
  return r;
}

inline WitnessReport evaluate_witness(WitnessKind kind, const FockState& state) {
  return evaluate_witness(kind, state, StokesOperatorSet(state.basis()));
}

/// Mass within two photons of the cutoff above which witness evaluation is refused.
inline constexpr double kEdgeMassLimit = 1e-10;

inline double edge_mass(const FourModeState& state) { return state.mass_at_or_above(state.cutoff() - 1); }

inline void require_small_edge_mass(const FourModeState& state) {
  const double m = edge_mass(state);
  if (m >= kEdgeMassLimit) {
    std::ostringstream msg;
    msg << "state carries " << m << " of its mass within two photons of cutoff " << state.cutoff()
        << "; raise the cutoff";
    throw TruncationError(msg.str(), m);
  }
}

inline WitnessReport evaluate_witness(WitnessKind kind, const FourModeState& state) {
  require_small_edge_mass(state);
  return evaluate_witness(kind, expand(state));
}

/// Matrix form of a witness with fixed centering constants `means`:
/// sum_i (S_i^a + s_i S_i^b - means_i)^2 - 2 S_0.
inline HermitianOperator witness_operator(WitnessKind kind, const std::array<double, 3>& means,
                                          const StokesOperatorSet& ops) {
  const auto signs = witness_signs(kind);
  auto w = -2.0 * ops.total(0);
  for (int i = 1; i <= 3; ++i) {
    const auto k = static_cast<std::size_t>(i - 1);
    w += ops.signed_sum(i, signs[k]).shifted(means[k]).squared();
  }
  return w;
}

/// Convex mixture of pure four-mode states, for separable test inputs.
struct MixedState {
  std::vector<std::pair<double, FockState>> components;
};

namespace detail {
inline Moments mixture_moments(const HermitianOperator& op, const MixedState& rho) {
  Moments m;
  double wsum = 0.0;
  for (const auto& [w, psi] : rho.components) {
    const Moments c = moments(op, psi);
    m.mean += w * c.mean;
    m.second += w * c.second;
    wsum += w;
  }
  if (!(wsum > 0.0)) throw std::domain_error("mixture has no weight");
  m.mean /= wsum;
  m.second /= wsum;
  return m;
}
}  // namespace detail

/// Var(S_1) + Var(S_2) + Var(S_3) - 2<S_0>; non-negative for separable states.
inline double separability_gap(const MixedState& rho) {
  if (rho.components.empty()) throw std::invalid_argument("empty mixture");
  const StokesOperatorSet ops(rho.components.front().second.basis());
  double gap = -2.0 * detail::mixture_moments(ops.total(0), rho).mean;
  for (int i = 1; i <= 3; ++i) gap += variance_from_moments(detail::mixture_moments(ops.total(i), rho));
  return gap;
}

inline double separability_gap(const FockState& psi) { return separability_gap(MixedState{{{1.0, psi}}}); }

inline double separability_gap(const FourModeState& state) {
  require_small_edge_mass(state);
  return separability_gap(expand(state));
}

/// Truncated coherent state of one beam, |alpha_H>|alpha_V>, renormalized.
inline Eigen::VectorXcd coherent_beam(const FockBasis& basis, cplx alpha_h, cplx alpha_v) {
  Eigen::VectorXcd v(basis.beam_dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const BeamKet k = FockBasis::beam_ket(i);
    const double log_norm = 0.5 * (std::lgamma(k.h + 1.0) + std::lgamma(k.v + 1.0));
    v(i) = std::pow(alpha_h, k.h) * std::pow(alpha_v, k.v) * std::exp(-log_norm);
  }
  return v.normalized();
}

inline Eigen::VectorXcd fock_beam(const FockBasis& basis, BeamKet k) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(basis.beam_dim());
  v(FockBasis::beam_index(k)) = 1.0;
  return v;
}

struct SeparableTestState {
  std::string name;
  MixedState rho;
};

/// Randomized product-state battery: coherent products (|alpha| <= 1.5 per mode),
/// product Fock kets, random pure product superpositions, and thermal products
/// sampled as equal-weight mixtures of product Fock kets. `per_family` states of
/// each family; fully determined by `seed`.
inline std::vector<SeparableTestState> separable_battery(std::uint64_t seed, int per_family = 6,
                                                         int beam_cutoff = 10) {
  const FockBasis basis(beam_cutoff);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  auto disc = [&](double rmax) { return std::polar(rmax * std::sqrt(unit(rng)), two_pi * unit(rng)); };
  const int small = std::min(beam_cutoff, 4);
  auto small_ket = [&] {
    std::uniform_int_distribution<int> tot(0, small);
    const int n = tot(rng);
    std::uniform_int_distribution<int> split(0, n);
    const int h = split(rng);
    return BeamKet{h, n - h};
  };
  auto random_beam = [&] {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(basis.beam_dim());
    for (Eigen::Index i = 0; i < FockBasis::sector_offset(small + 1); ++i) v(i) = cplx{gauss(rng), gauss(rng)};
    return Eigen::VectorXcd(v.normalized());
  };

  std::vector<SeparableTestState> out;
  for (int k = 0; k < per_family; ++k) {
    const auto a = coherent_beam(basis, disc(1.5), disc(1.5));
    const auto b = coherent_beam(basis, disc(1.5), disc(1.5));
    out.push_back({"coherent-" + std::to_string(k), {{{1.0, FockState::product(basis, a, b)}}}});
  }
  for (int k = 0; k < per_family; ++k) {
    const auto a = fock_beam(basis, small_ket());
    const auto b = fock_beam(basis, small_ket());
    out.push_back({"fock-" + std::to_string(k), {{{1.0, FockState::product(basis, a, b)}}}});
  }
  for (int k = 0; k < per_family; ++k)
    out.push_back({"pure-product-" + std::to_string(k), {{{1.0, FockState::product(basis, random_beam(), random_beam())}}}});
  for (int k = 0; k < per_family; ++k) {
    // four independent thermal modes, mean photon number in [0.1, 1.5]
    std::array<double, 4> nbar;
    for (double& x : nbar) x = 0.1 + 1.4 * unit(rng);
    MixedState rho;
    for (int s = 0; s < 48; ++s) {
      std::array<int, 4> n{};
      for (int mode = 0; mode < 4; ++mode) {
        std::geometric_distribution<int> g(1.0 / (1.0 + nbar[static_cast<std::size_t>(mode)]));
        n[static_cast<std::size_t>(mode)] = g(rng);
      }
      const BeamKet ka{n[0], n[1]}, kb{n[2], n[3]};
      if (!basis.contains(ka) || !basis.contains(kb)) continue;
      rho.components.emplace_back(1.0, FockState::product(basis, fock_beam(basis, ka), fock_beam(basis, kb)));
    }
    out.push_back({"thermal-" + std::to_string(k), std::move(rho)});
  }
  return out;
}

/// Witness values of every kind on every Bell label at one gain.
struct CrossWitnessMatrix {
  GainParameter gain;
  int cutoff = 0;
  /// values[kind][label] in kAllWitnessKinds x kAllBellLabels order
  std::array<std::array<double, 4>, 4> values{};
  std::array<double, 4> s0_means{};

  double at(WitnessKind k, BellLabel l) const {
    std::size_t i = 0, j = 0;
    while (kAllWitnessKinds[i] != k) ++i;
    while (kAllBellLabels[j] != l) ++j;
    return values[i][j];
  }

  /// Matched (witness, state) entries strictly negative.
  bool matched_negative() const {
    for (WitnessKind k : kAllWitnessKinds)
      if (!(at(k, matched_state(k)) < 0.0)) return false;
    return true;
  }
};

inline CrossWitnessMatrix cross_witness_matrix(GainParameter gain, int cutoff) {
  CrossWitnessMatrix m;
  m.gain = gain;
  m.cutoff = cutoff;
  const StokesOperatorSet ops{FockBasis(cutoff)};
  for (std::size_t j = 0; j < 4; ++j) {
    const FourModeState s = build_bell_state(kAllBellLabels[j], gain, cutoff, TruncationMode::TotalPhotonCutoff);
    require_small_edge_mass(s);
    const FockState psi = expand(s);
    for (std::size_t i = 0; i < 4; ++i) {
      const WitnessReport r = evaluate_witness(kAllWitnessKinds[i], psi, ops);
      m.values[i][j] = r.value;
      m.s0_means[j] = r.s0_mean;
    }
  }
  if (gain.value() > 0.0 && !m.matched_negative())
    throw NumericError("a matched witness is not negative on its own state", 0.0);
  return m;
}

}  // namespace bsv
