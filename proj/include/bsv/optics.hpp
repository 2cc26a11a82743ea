#pragma once

#include "bsv/fock_space.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

namespace bsv {

/// 2x2 single-photon polarization unitary in the (H, V) basis. Column j is the
/// image of mode j, so a Fock creation operator maps as a_j^+ -> sum_i J(i,j) a_i^+.
using Jones = Eigen::Matrix2cd;

namespace jones {

inline double deg(double degrees) { return degrees * std::numbers::pi / 180.0; }

/// Real rotation of the polarization plane taking H to cos(t) H + sin(t) V.
inline Jones rotator(double theta_rad) {
  const double c = std::cos(theta_rad), s = std::sin(theta_rad);
  Jones j;
  j << c, -s, s, c;
  return j;
}

/// Linear retarder with optic axis at `theta_rad` from horizontal:
/// J = R(-t) diag(1, e^{i delta}) R(t), R(t) = [[c, s], [-s, c]].
/// No symmetric global phase is split off, so a quarter-wave plate at zero
/// angle is diag(1, i) and a half-wave plate at zero angle is diag(1, -1).
inline Jones retarder(double theta_rad, double retardance_rad) {
  const double c = std::cos(theta_rad), s = std::sin(theta_rad);
  Jones r, rinv, d;
  r << c, s, -s, c;
  rinv << c, -s, s, c;
  d << 1.0, 0.0, 0.0, std::polar(1.0, retardance_rad);
  return rinv * d * r;
}

inline Jones half_wave(double theta_rad) { return retarder(theta_rad, std::numbers::pi); }
inline Jones quarter_wave(double theta_rad) { return retarder(theta_rad, std::numbers::pi / 2.0); }

/// exp(i pi n_H): sign flip of the horizontal mode.
inline Jones pi_phase_on_h() {
  Jones j;
  j << -1.0, 0.0, 0.0, 1.0;
  return j;
}

inline double unitarity_defect(const Jones& j) { return (j.adjoint() * j - Jones::Identity()).cwiseAbs().maxCoeff(); }

}  // namespace jones

/// Polarization basis in which a state's Fock labels are written.
enum class PolarizationBasis { HV, RL, DA };

/// Columns are the basis vectors written in (H, V): R = (H + iV)/sqrt2, L = (H - iV)/sqrt2,
/// D = (H + V)/sqrt2, A = (H - V)/sqrt2.
inline Jones basis_vectors(PolarizationBasis basis) {
  const double r = std::numbers::sqrt2 / 2.0;
  const cplx i{0.0, 1.0};
  Jones j;
  switch (basis) {
    case PolarizationBasis::HV: j = Jones::Identity(); break;
    case PolarizationBasis::RL: j << r, r, i * r, -i * r; break;
    case PolarizationBasis::DA: j << r, r, r, -r; break;
  }
  return j;
}

enum class BeamTarget { A, B, Both };

/// A linear-optical element acting on the polarization modes of one or both beams.
struct BasisTransform {
  enum class Kind { HalfWavePlate, QuarterWavePlate, PiPhaseOnBH, PolarizationRotator };
  Kind kind = Kind::PolarizationRotator;
  double angle_deg = 0.0;
  BeamTarget target = BeamTarget::Both;

  static BasisTransform half_wave(double deg, BeamTarget t) { return {Kind::HalfWavePlate, deg, t}; }
  static BasisTransform quarter_wave(double deg, BeamTarget t) { return {Kind::QuarterWavePlate, deg, t}; }
  static BasisTransform pi_phase_on_bh() { return {Kind::PiPhaseOnBH, 0.0, BeamTarget::B}; }
  static BasisTransform rotator(double deg, BeamTarget t) { return {Kind::PolarizationRotator, deg, t}; }

  Jones jones() const {
    switch (kind) {
      case Kind::HalfWavePlate: return jones::half_wave(jones::deg(angle_deg));
      case Kind::QuarterWavePlate: return jones::quarter_wave(jones::deg(angle_deg));
      case Kind::PiPhaseOnBH: return jones::pi_phase_on_h();
      case Kind::PolarizationRotator: return jones::rotator(jones::deg(angle_deg));
    }
    return Jones::Identity();
  }
  bool acts_on_a() const { return target != BeamTarget::B; }
  bool acts_on_b() const { return target != BeamTarget::A; }
};

namespace detail {
inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

inline std::vector<cplx> powers(cplx z, int n) {
  std::vector<cplx> p(static_cast<std::size_t>(n) + 1);
  p[0] = 1.0;
  for (int k = 1; k <= n; ++k) p[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k) - 1] * z;
  return p;
}
}  // namespace detail

/// Matrix of the Fock-space image of `u` on the N-photon sector of one beam,
/// indexed by n_V (row: output, column: input).
inline Eigen::MatrixXcd sector_unitary(const Jones& u, int n) {
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  const auto p00 = detail::powers(u(0, 0), n), p10 = detail::powers(u(1, 0), n);
  const auto p01 = detail::powers(u(0, 1), n), p11 = detail::powers(u(1, 1), n);
  using detail::log_factorial;
  for (int v = 0; v <= n; ++v) {
    const int h = n - v;
    // (U00 aH + U10 aV)^h (U01 aH + U11 aV)^v |0> / sqrt(h! v!)
    for (int p = 0; p <= h; ++p) {
      for (int q = 0; q <= v; ++q) {
        const int h_out = p + q;
        const int v_out = n - h_out;
        const double log_mag = log_factorial(h) - log_factorial(p) - log_factorial(h - p) + log_factorial(v) -
                               log_factorial(q) - log_factorial(v - q) +
                               0.5 * (log_factorial(h_out) + log_factorial(v_out) - log_factorial(h) - log_factorial(v));
        const cplx phase = p00[static_cast<std::size_t>(p)] * p10[static_cast<std::size_t>(h - p)] *
                           p01[static_cast<std::size_t>(q)] * p11[static_cast<std::size_t>(v - q)];
        t(v_out, v) += std::exp(log_mag) * phase;
      }
    }
  }
  return t;
}

/// Applies the Fock image of `u` to beam a (rows) and/or beam b (columns).
inline void apply_beam_unitary(FockState& state, const Jones& u, BeamTarget target) {
  auto& amp = state.amplitudes();
  for (int n = 0; n <= state.basis().beam_cutoff(); ++n) {
    const Eigen::MatrixXcd t = sector_unitary(u, n);
    const Eigen::Index off = FockBasis::sector_offset(n);
    if (target != BeamTarget::B) amp.middleRows(off, n + 1) = (t * amp.middleRows(off, n + 1)).eval();
    if (target != BeamTarget::A) amp.middleCols(off, n + 1) = (amp.middleCols(off, n + 1) * t.transpose()).eval();
  }
}

/// Transformed copy of `state`. Linear optics conserves the photon number of
/// each beam, so the result stays inside the same truncated basis.
inline FockState apply_transform(const FockState& state, const BasisTransform& t) {
  assert(jones::unitarity_defect(t.jones()) < 1e-12);
  FockState out = state;
  apply_beam_unitary(out, t.jones(), t.target);
  return out;
}

/// Full Fock-space matrix of a per-beam unitary pair (dense; small bases only).
inline Eigen::MatrixXcd fock_unitary(const FockBasis& basis, const Jones& ua, const Jones& ub) {
  const Eigen::Index d = basis.beam_dim();
  Eigen::MatrixXcd beam_a = Eigen::MatrixXcd::Zero(d, d), beam_b = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 0; n <= basis.beam_cutoff(); ++n) {
    const Eigen::Index off = FockBasis::sector_offset(n);
    beam_a.block(off, off, n + 1, n + 1) = sector_unitary(ua, n);
    beam_b.block(off, off, n + 1, n + 1) = sector_unitary(ub, n);
  }
  // column-major flattening: index = ia + ib*d  =>  U = U_b (x) U_a
  Eigen::MatrixXcd u(d * d, d * d);
  for (Eigen::Index jb = 0; jb < d; ++jb)
    for (Eigen::Index ib = 0; ib < d; ++ib) u.block(ib * d, jb * d, d, d) = beam_b(ib, jb) * beam_a;
  return u;
}

}  // namespace bsv
