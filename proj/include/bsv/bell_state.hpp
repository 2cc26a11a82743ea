#pragma once

#include "bsv/fock_space.hpp"
#include "bsv/optics.hpp"
#include "bsv/spectrum.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bsv {

enum class BellLabel { PsiPlus, PsiMinus, PhiPlus, PhiMinus };

inline constexpr std::array<BellLabel, 4> kAllBellLabels = {BellLabel::PsiMinus, BellLabel::PsiPlus,
                                                            BellLabel::PhiPlus, BellLabel::PhiMinus};

inline std::string_view to_string(BellLabel label) {
  switch (label) {
    case BellLabel::PsiPlus: return "psi-plus";
    case BellLabel::PsiMinus: return "psi-minus";
    case BellLabel::PhiPlus: return "phi-plus";
    case BellLabel::PhiMinus: return "phi-minus";
  }
  return "?";
}

inline std::optional<BellLabel> parse_bell_label(std::string_view s) {
  for (BellLabel l : kAllBellLabels)
    if (to_string(l) == s) return l;
  return std::nullopt;
}

/// Basis in which a label's amplitude table takes the twin-beam form
/// sum (+-1)^m sqrt(l_n l_m) |n,m>_a |m,n>_b.
inline PolarizationBasis natural_basis(BellLabel label) {
  switch (label) {
    case BellLabel::PhiPlus: return PolarizationBasis::RL;
    case BellLabel::PhiMinus: return PolarizationBasis::DA;
    default: return PolarizationBasis::HV;
  }
}

/// Coupling matrix M of the generating Hamiltonian a^T M b in the (H, V) basis.
inline Jones hv_coupling(BellLabel label) {
  Jones m;
  switch (label) {
    case BellLabel::PsiPlus: m << 0, 1, 1, 0; break;
    case BellLabel::PsiMinus: m << 0, 1, -1, 0; break;
    case BellLabel::PhiPlus: m << 1, 0, 0, 1; break;
    case BellLabel::PhiMinus: m << 1, 0, 0, -1; break;
  }
  return m;
}

enum class TruncationMode {
  PerModeCutoff,      ///< n <= N and m <= N independently
  TotalPhotonCutoff,  ///< n + m <= N
};

inline std::string_view to_string(TruncationMode m) {
  return m == TruncationMode::PerModeCutoff ? "per-mode" : "total-photon";
}

inline std::optional<TruncationMode> parse_truncation_mode(std::string_view s) {
  if (s == "per-mode") return TruncationMode::PerModeCutoff;
  if (s == "total-photon") return TruncationMode::TotalPhotonCutoff;
  return std::nullopt;
}

/// Truncated macroscopic Bell state in compressed form: amplitude(n, m) is the
/// coefficient of |n,m>_a |m,n>_b, written in the label's natural polarization
/// basis. Immutable after construction.
class FourModeState {
public:
  FourModeState(BellLabel label, SchmidtSpectrum spectrum, TruncationMode mode, std::vector<cplx> table)
      : label_(label), spectrum_(std::move(spectrum)), mode_(mode), table_(std::move(table)) {
    const auto side = static_cast<std::size_t>(spectrum_.cutoff()) + 1;
    if (table_.size() != side * side) throw std::invalid_argument("amplitude table has wrong size");
  }

  BellLabel label() const noexcept { return label_; }
  const SchmidtSpectrum& spectrum() const noexcept { return spectrum_; }
  GainParameter gain() const noexcept { return spectrum_.gain(); }
  int cutoff() const noexcept { return spectrum_.cutoff(); }
  TruncationMode truncation_mode() const noexcept { return mode_; }
  PolarizationBasis basis() const noexcept { return natural_basis(label_); }

  bool in_range(int n, int m) const noexcept {
    const int c = cutoff();
    if (n < 0 || m < 0 || n > c || m > c) return false;
    return mode_ == TruncationMode::PerModeCutoff || n + m <= c;
  }

  cplx amplitude(int n, int m) const noexcept {
    if (!in_range(n, m)) return 0.0;
    return table_[index(n, m)];
  }

  double norm2() const noexcept {
    double s = 0.0;
    for (const cplx& a : table_) s += std::norm(a);
    return s;
  }

  FourModeState renormalized() const {
    const double n = std::sqrt(norm2());
    if (!(n > 0.0)) throw std::domain_error("cannot renormalize a zero state");
    auto t = table_;
    for (cplx& a : t) a /= n;
    return FourModeState(label_, spectrum_, mode_, std::move(t));
  }

  /// Probability mass (relative to the norm) on kets whose per-beam photon number is >= `photons`.
  double mass_at_or_above(int photons) const noexcept {
    double m = 0.0;
    const int c = cutoff();
    for (int n = 0; n <= c; ++n)
      for (int k = 0; k <= c; ++k)
        if (n + k >= photons) m += std::norm(amplitude(n, k));
    return m / norm2();
  }

private:
  std::size_t index(int n, int m) const noexcept {
    return static_cast<std::size_t>(n) * (static_cast<std::size_t>(cutoff()) + 1) + static_cast<std::size_t>(m);
  }

  BellLabel label_;
  SchmidtSpectrum spectrum_;
  TruncationMode mode_;
  std::vector<cplx> table_;
};

/// Closed-form truncated Bell state. Psi- carries the (-1)^m sign; the other
/// three labels share the all-plus table in their own natural basis.
inline FourModeState build_bell_state(BellLabel label, GainParameter gain, int cutoff,
                                      TruncationMode mode = TruncationMode::PerModeCutoff) {
  SchmidtSpectrum spec(gain, cutoff);
  const auto side = static_cast<std::size_t>(cutoff) + 1;
  std::vector<cplx> table(side * side, 0.0);
  for (int n = 0; n <= cutoff; ++n) {
    for (int m = 0; m <= cutoff; ++m) {
      if (mode == TruncationMode::TotalPhotonCutoff && n + m > cutoff) continue;
      const double mag = std::sqrt(spec[n] * spec[m]);
      const double sign = (label == BellLabel::PsiMinus && (m % 2) == 1) ? -1.0 : 1.0;
      table[static_cast<std::size_t>(n) * side + static_cast<std::size_t>(m)] = sign * mag;
    }
  }
  return FourModeState(label, std::move(spec), mode, std::move(table));
}

/// Expands the compressed state into the four-mode (H, V) Fock basis with per-beam
/// cutoff `beam_cutoff`. Kets with more than `beam_cutoff` photons in a beam are
/// dropped (see `dropped_mass`). States written in a rotated natural basis are
/// mapped to (H, V) by the corresponding per-beam Fock unitary.
inline FockState expand(const FourModeState& state, int beam_cutoff) {
  FockBasis basis(beam_cutoff);
  FockState out(basis);
  const int c = state.cutoff();
  for (int n = 0; n <= c; ++n)
    for (int m = 0; m <= c; ++m)
      if (n + m <= beam_cutoff && state.in_range(n, m)) out.at({n, m}, {m, n}) = state.amplitude(n, m);
  if (state.basis() != PolarizationBasis::HV) apply_beam_unitary(out, basis_vectors(state.basis()), BeamTarget::Both);
  return out;
}

inline FockState expand(const FourModeState& state) { return expand(state, state.cutoff()); }

/// Norm squared of the compressed amplitudes that do not fit under `beam_cutoff`.
inline double dropped_mass(const FourModeState& state, int beam_cutoff) {
  return state.mass_at_or_above(beam_cutoff + 1) * state.norm2();
}

struct SectorProjection {
  double weight = 0.0;           ///< unnormalized probability of total photon number n per beam
  std::vector<cplx> amplitudes;  ///< normalized, indexed by m over |n-m, m>_a |m, n-m>_b
};

/// Projection on the sector with `n` photons in each beam.
inline SectorProjection project_total_sector(const FourModeState& state, int n) {
  if (n < 0 || n > state.cutoff())
    throw std::out_of_range("sector " + std::to_string(n) + " beyond cutoff " + std::to_string(state.cutoff()));
  SectorProjection p;
  p.amplitudes.resize(static_cast<std::size_t>(n) + 1);
  for (int m = 0; m <= n; ++m) {
    const cplx a = state.amplitude(n - m, m);
    p.amplitudes[static_cast<std::size_t>(m)] = a;
    p.weight += std::norm(a);
  }
  if (p.weight > 0.0)
    for (cplx& a : p.amplitudes) a /= std::sqrt(p.weight);
  return p;
}

}  // namespace bsv
