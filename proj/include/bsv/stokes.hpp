#pragma once

#include "bsv/bell_state.hpp"
#include "bsv/errors.hpp"
#include "bsv/fock_space.hpp"

#include <Eigen/Sparse>

#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bsv {

enum class Beam { A, B };

/// Partial Stokes operator label S_i^{a|b}, i = 0..3.
struct StokesIndex {
  Beam beam = Beam::A;
  int component = 0;

  StokesIndex() = default;
  StokesIndex(Beam b, int c) : beam(b), component(c) {
    if (c < 0 || c > 3) throw std::out_of_range("Stokes component must be 0..3");
  }
  friend auto operator<=>(const StokesIndex&, const StokesIndex&) = default;
};

using StokesCombination = std::map<StokesIndex, double>;

using SparseOp = Eigen::SparseMatrix<cplx>;

/// Hermitian operator on a truncated four-mode basis (sparse, full storage).
/// Only real linear combinations and squares are exposed, which keeps Hermiticity.
class HermitianOperator {
public:
  HermitianOperator(FockBasis basis, SparseOp m) : basis_(basis), m_(std::move(m)) {
    if (m_.rows() != basis_.dim() || m_.cols() != basis_.dim())
      throw std::invalid_argument("operator dimension does not match basis");
  }

  static HermitianOperator zero(FockBasis basis) { return {basis, SparseOp(basis.dim(), basis.dim())}; }

  const FockBasis& basis() const noexcept { return basis_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  const SparseOp& matrix() const noexcept { return m_; }

  /// Dense copy; refuses above 5000 rows.
  Eigen::MatrixXcd dense() const {
    if (dim() >= 5000) throw std::length_error("dense expansion refused above dimension 5000");
    return Eigen::MatrixXcd(m_);
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const {
    if (v.size() != dim()) throw std::invalid_argument("vector dimension does not match operator");
    return m_ * v;
  }

  HermitianOperator squared() const { return {basis_, (m_ * m_).pruned()}; }

  HermitianOperator& operator+=(const HermitianOperator& o) {
    check(o);
    m_ += o.m_;
    return *this;
  }
  HermitianOperator& operator-=(const HermitianOperator& o) {
    check(o);
    m_ -= o.m_;
    return *this;
  }
  friend HermitianOperator operator+(HermitianOperator x, const HermitianOperator& y) { return x += y; }
  friend HermitianOperator operator-(HermitianOperator x, const HermitianOperator& y) { return x -= y; }
  friend HermitianOperator operator*(double c, const HermitianOperator& x) { return {x.basis_, c * x.m_}; }

  /// this - c * identity
  HermitianOperator shifted(double c) const {
    SparseOp id(dim(), dim());
    id.setIdentity();
    return {basis_, m_ - cplx{c} * id};
  }

private:
  void check(const HermitianOperator& o) const {
    if (!(o.basis_ == basis_)) throw std::invalid_argument("operators act on different bases");
  }
  FockBasis basis_;
  SparseOp m_;
};

/// Single-beam Stokes matrix on the (H, V) kets with n_H + n_V <= K.
inline SparseOp beam_stokes_matrix(const FockBasis& basis, int component) {
  const Eigen::Index d = basis.beam_dim();
  std::vector<Eigen::Triplet<cplx>> t;
  const cplx i{0.0, 1.0};
  for (Eigen::Index col = 0; col < d; ++col) {
    const BeamKet k = FockBasis::beam_ket(col);
    switch (component) {
      case 0: t.emplace_back(col, col, k.h + k.v); break;
      case 1: t.emplace_back(col, col, k.h - k.v); break;
      case 2:
      case 3: {
        // aH^+ aV |h,v> = sqrt((h+1) v) |h+1, v-1>;  aV^+ aH |h,v> = sqrt(h (v+1)) |h-1, v+1>
        if (k.v > 0) {
          const double f = std::sqrt(static_cast<double>((k.h + 1) * k.v));
          const Eigen::Index row = FockBasis::beam_index({k.h + 1, k.v - 1});
          t.emplace_back(row, col, component == 2 ? cplx{f} : -i * f);
        }
        if (k.h > 0) {
          const double f = std::sqrt(static_cast<double>(k.h * (k.v + 1)));
          const Eigen::Index row = FockBasis::beam_index({k.h - 1, k.v + 1});
          t.emplace_back(row, col, component == 2 ? cplx{f} : i * f);
        }
        break;
      }
      default: throw std::out_of_range("Stokes component must be 0..3");
    }
  }
  SparseOp m(d, d);
  m.setFromTriplets(t.begin(), t.end());
  m.prune(cplx{0.0});
  return m;
}

/// Lifts a single-beam operator to the four-mode space (column-major flattening,
/// so beam a is the inner Kronecker factor).
inline SparseOp lift_to_beam(const FockBasis& basis, const SparseOp& beam_op, Beam beam) {
  const Eigen::Index d = basis.beam_dim();
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(static_cast<std::size_t>(beam_op.nonZeros() * d));
  for (Eigen::Index k = 0; k < beam_op.outerSize(); ++k) {
    for (SparseOp::InnerIterator it(beam_op, k); it; ++it) {
      for (Eigen::Index other = 0; other < d; ++other) {
        if (beam == Beam::A)
          t.emplace_back(basis.index(it.row(), other), basis.index(it.col(), other), it.value());
        else
          t.emplace_back(basis.index(other, it.row()), basis.index(other, it.col()), it.value());
      }
    }
  }
  SparseOp m(basis.dim(), basis.dim());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

inline HermitianOperator stokes_operator(StokesIndex idx, const FockBasis& basis) {
  return {basis, lift_to_beam(basis, beam_stokes_matrix(basis, idx.component), idx.beam)};
}

/// S_i = S_i^a + S_i^b.
inline HermitianOperator stokes_total(int component, const FockBasis& basis) {
  return stokes_operator({Beam::A, component}, basis) + stokes_operator({Beam::B, component}, basis);
}

inline HermitianOperator combination(const StokesCombination& coeffs, const FockBasis& basis) {
  auto op = HermitianOperator::zero(basis);
  for (const auto& [idx, c] : coeffs)
    if (c != 0.0) op += c * stokes_operator(idx, basis);
  return op;
}

/// First and second moments of an operator in a normalized pure state.
struct Moments {
  double mean = 0.0;
  double second = 0.0;
};

inline Moments moments(const HermitianOperator& op, const FockState& state) {
  if (!(op.basis() == state.basis())) throw std::invalid_argument("state and operator bases differ");
  const double n2 = state.norm2();
  if (!(n2 > 0.0)) throw std::domain_error("moments of a zero state");
  const Eigen::VectorXcd psi = state.vector();
  const Eigen::VectorXcd v = op.apply(psi);
  const cplx mean = psi.dot(v) / n2;
  if (std::abs(mean.imag()) > 1e-10 * std::max(1.0, std::abs(mean.real()))) {
    std::ostringstream msg;
    msg << "expectation has imaginary part " << mean.imag();
    throw NumericError(msg.str(), std::abs(mean.imag()));
  }
  return {mean.real(), v.squaredNorm() / n2};
}

inline double expectation(const HermitianOperator& op, const FockState& state) { return moments(op, state).mean; }

namespace detail {
inline std::atomic<long>& clamp_counter() {
  static std::atomic<long> n{0};
  return n;
}
}  // namespace detail

/// Number of negative variances clamped to zero so far (process-wide).
inline long variance_clamp_events() { return detail::clamp_counter().load(); }

/// <O^2> - <O>^2, clamped at zero. A negative value below -1e-9 cannot come
/// from roundoff and raises NumericError.
inline double variance_from_moments(const Moments& m) {
  const double var = m.second - m.mean * m.mean;
  if (var >= 0.0) return var;
  if (var < -1e-9) throw NumericError("variance is negative beyond the numerical floor", -var);
  ++detail::clamp_counter();
  if (var < -1e-15 * (1.0 + m.second)) {
    std::ostringstream msg;
    msg << "clamped negative variance " << var << " to zero";
    warn(msg.str());
  }
  return 0.0;
}

inline double variance(const HermitianOperator& op, const FockState& state) {
  return variance_from_moments(moments(op, state));
}

inline double variance_of_combination(const StokesCombination& coeffs, const FockState& state) {
  bool any = false;
  for (const auto& kv : coeffs) any = any || kv.second != 0.0;
  if (!any) throw std::invalid_argument("combination has no nonzero coefficient");
  return variance(combination(coeffs, state.basis()), state);
}

inline double variance_of_combination(const StokesCombination& coeffs, const FourModeState& state) {
  return variance_of_combination(coeffs, expand(state));
}

inline double expectation(const HermitianOperator& op, const FourModeState& state) {
  if (op.basis().beam_cutoff() != state.cutoff())
    throw std::invalid_argument("operator basis cutoff does not match the state cutoff");
  return expectation(op, expand(state));
}

}  // namespace bsv
