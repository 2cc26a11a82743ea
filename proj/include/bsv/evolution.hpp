#pragma once

#include "bsv/bell_state.hpp"
#include "bsv/errors.hpp"
#include "bsv/fock_space.hpp"

#include <Eigen/Sparse>

#include <sstream>
#include <vector>

namespace bsv {

/// Sparse matrix of a^T M b summed over polarizations, i.e. sum_ij M(i,j) a_i^+ b_j^+,
/// restricted to the truncated basis (terms leaving it are dropped).
inline Eigen::SparseMatrix<cplx> pair_creation_matrix(const FockBasis& basis, const Jones& coupling) {
  const Eigen::Index d = basis.beam_dim();
  std::vector<Eigen::Triplet<cplx>> trips;
  for (Eigen::Index ib = 0; ib < d; ++ib) {
    const BeamKet kb = FockBasis::beam_ket(ib);
    for (Eigen::Index ia = 0; ia < d; ++ia) {
      const BeamKet ka = FockBasis::beam_ket(ia);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const cplx c = coupling(i, j);
          if (c == cplx{0.0}) continue;
          BeamKet na = ka, nb = kb;
          int& ai = i == 0 ? na.h : na.v;
          int& bj = j == 0 ? nb.h : nb.v;
          const double f = std::sqrt(static_cast<double>(ai + 1) * static_cast<double>(bj + 1));
          ++ai;
          ++bj;
          if (!basis.contains(na) || !basis.contains(nb)) continue;
          trips.emplace_back(basis.index(na, nb), basis.index(ia, ib), c * f);
        }
      }
    }
  }
  Eigen::SparseMatrix<cplx> a(basis.dim(), basis.dim());
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

/// Independent route to the Bell states: exp(G)|vac> with the truncated
/// generator G = gamma (a^T M b - h.c.) of the label's Hamiltonian, computed as
/// `steps` Taylor-series substeps on the per-beam truncated basis.
///
/// Throws TruncationError when the evolved state carries more than 1e-8 of its
/// mass on the boundary sector (beam photon number == cutoff).
inline FockState evolve_from_vacuum(BellLabel label, GainParameter gain, int beam_cutoff, int steps = 16,
                                    double leak_threshold = 1e-8) {
  if (steps < 1) throw std::domain_error("steps must be >= 1");
  FockBasis basis(beam_cutoff);
  FockState state = FockState::vacuum(basis);
  if (gain.value() == 0.0) return state;

  const Eigen::SparseMatrix<cplx> a = pair_creation_matrix(basis, hv_coupling(label));
  const Eigen::SparseMatrix<cplx> gen =
      (gain.value() / steps) * (a - Eigen::SparseMatrix<cplx>(a.adjoint()));

  Eigen::VectorXcd v = state.vector();
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXcd term = v;
    Eigen::VectorXcd sum = v;
    for (int k = 1; k < 400; ++k) {
      term = (gen * term) / static_cast<double>(k);
      sum += term;
      if (term.norm() < 1e-18 * sum.norm()) break;
    }
    v = sum;
  }
  state.vector() = v;

  const double leak = state.mass_at_or_above(beam_cutoff) / state.norm2();
  if (leak > leak_threshold) {
    std::ostringstream msg;
    msg << "evolution leaks " << leak << " of its norm onto the cutoff sector " << beam_cutoff;
    throw TruncationError(msg.str(), leak);
  }
  return state;
}

}  // namespace bsv
