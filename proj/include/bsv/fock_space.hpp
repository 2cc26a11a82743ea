#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace bsv {

using cplx = std::complex<double>;

/// Photon numbers of the (H, V) mode pair of one beam.
struct BeamKet {
  int h = 0;
  int v = 0;
  int total() const noexcept { return h + v; }
  friend bool operator==(const BeamKet&, const BeamKet&) = default;
};

/// Four-mode Fock basis truncated per beam: n_H + n_V <= K in each of beams a and b.
///
/// Beam kets are ordered by total photon number, so each fixed-photon-number
/// sector occupies a contiguous index range [N(N+1)/2, N(N+1)/2 + N]; within a
/// sector the index grows with n_V. Polarization optics and all Stokes operators
/// preserve the per-beam photon number, so this space is closed under them.
/// Four-mode kets are flattened column-major: index = ia + ib * beam_dim.
class FockBasis {
public:
  explicit FockBasis(int beam_cutoff) : cutoff_(beam_cutoff) {
    if (beam_cutoff < 0) throw std::domain_error("beam cutoff must be >= 0");
  }

  int beam_cutoff() const noexcept { return cutoff_; }
  Eigen::Index beam_dim() const noexcept { return sector_offset(cutoff_ + 1); }
  Eigen::Index dim() const noexcept { return beam_dim() * beam_dim(); }

  static Eigen::Index sector_offset(int n) noexcept { return static_cast<Eigen::Index>(n) * (n + 1) / 2; }
  static Eigen::Index beam_index(BeamKet k) noexcept { return sector_offset(k.total()) + k.v; }

  static BeamKet beam_ket(Eigen::Index idx) noexcept {
    int n = static_cast<int>((std::sqrt(8.0 * static_cast<double>(idx) + 1.0) - 1.0) / 2.0);
    while (sector_offset(n + 1) <= idx) ++n;
    while (sector_offset(n) > idx) --n;
    const int v = static_cast<int>(idx - sector_offset(n));
    return {n - v, v};
  }

  bool contains(BeamKet k) const noexcept { return k.h >= 0 && k.v >= 0 && k.total() <= cutoff_; }

  Eigen::Index index(Eigen::Index ia, Eigen::Index ib) const noexcept { return ia + ib * beam_dim(); }
  Eigen::Index index(BeamKet a, BeamKet b) const noexcept { return index(beam_index(a), beam_index(b)); }

  friend bool operator==(const FockBasis&, const FockBasis&) = default;

private:
  int cutoff_ = 0;
};

/// Pure four-mode state over a FockBasis, stored as the bipartite coefficient
/// matrix amp(ia, ib) between beam a and beam b kets. Not necessarily normalized.
class FockState {
public:
  explicit FockState(FockBasis basis)
      : basis_(basis), amp_(Eigen::MatrixXcd::Zero(basis.beam_dim(), basis.beam_dim())) {}
  FockState(FockBasis basis, Eigen::MatrixXcd amplitudes) : basis_(basis), amp_(std::move(amplitudes)) {
    if (amp_.rows() != basis_.beam_dim() || amp_.cols() != basis_.beam_dim())
      throw std::invalid_argument("amplitude matrix does not match basis");
  }

  static FockState vacuum(FockBasis basis) {
    FockState s(basis);
    s.amp_(0, 0) = 1.0;
    return s;
  }

  /// Product |a> (x) |b> of two beam states given over the beam basis.
  static FockState product(FockBasis basis, const Eigen::VectorXcd& beam_a, const Eigen::VectorXcd& beam_b) {
    if (beam_a.size() != basis.beam_dim() || beam_b.size() != basis.beam_dim())
      throw std::invalid_argument("beam vector does not match basis");
    return FockState(basis, beam_a * beam_b.transpose());
  }

  const FockBasis& basis() const noexcept { return basis_; }
  const Eigen::MatrixXcd& amplitudes() const noexcept { return amp_; }
  Eigen::MatrixXcd& amplitudes() noexcept { return amp_; }

  cplx operator()(BeamKet a, BeamKet b) const {
    if (!basis_.contains(a) || !basis_.contains(b)) return 0.0;
    return amp_(FockBasis::beam_index(a), FockBasis::beam_index(b));
  }
  cplx& at(BeamKet a, BeamKet b) {
    if (!basis_.contains(a) || !basis_.contains(b)) throw std::out_of_range("ket outside truncated basis");
    return amp_(FockBasis::beam_index(a), FockBasis::beam_index(b));
  }

  /// Flat (column-major) amplitude vector in FockBasis::index order.
  Eigen::Map<const Eigen::VectorXcd> vector() const { return {amp_.data(), amp_.size()}; }
  Eigen::Map<Eigen::VectorXcd> vector() { return {amp_.data(), amp_.size()}; }

  double norm2() const { return amp_.squaredNorm(); }

  FockState normalized() const {
    const double n = std::sqrt(norm2());
    if (!(n > 0.0)) throw std::domain_error("cannot normalize a zero state");
    return FockState(basis_, amp_ / n);
  }

  /// Probability mass on kets where either beam holds at least `photons` photons.
  double mass_at_or_above(int photons) const {
    double m = 0.0;
    const Eigen::Index d = basis_.beam_dim();
    const Eigen::Index off = FockBasis::sector_offset(std::max(photons, 0));
    for (Eigen::Index ib = 0; ib < d; ++ib)
      for (Eigen::Index ia = 0; ia < d; ++ia)
        if (ia >= off || ib >= off) m += std::norm(amp_(ia, ib));
    return m;
  }

private:
  FockBasis basis_;
  Eigen::MatrixXcd amp_;
};

inline cplx inner(const FockState& x, const FockState& y) {
  if (!(x.basis() == y.basis())) throw std::invalid_argument("states live in different bases");
  return x.vector().dot(y.vector());
}

/// |<x|y>|^2 / (<x|x><y|y>).
inline double fidelity(const FockState& x, const FockState& y) {
  const double nx = x.norm2(), ny = y.norm2();
  if (!(nx > 0.0) || !(ny > 0.0)) throw std::domain_error("fidelity of a zero state");
  return std::norm(inner(x, y)) / (nx * ny);
}

}  // namespace bsv
