#include <bsv/evolution.hpp>

#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

using namespace bsv;

TEST(evolution, zero_gain_is_vacuum) {
  const auto s = evolve_from_vacuum(BellLabel::PsiPlus, GainParameter(0.0), 5);
  EXPECT_EQ(s.amplitudes()(0, 0), cplx(1.0));
  EXPECT_DOUBLE_EQ(s.norm2(), 1.0);
}

TEST(evolution, taylor_steps_match_dense_exponential) {
  // Same truncated generator, exponentiated by Pade scaling-and-squaring.
  const FockBasis basis(5);
  for (BellLabel l : kAllBellLabels) {
    const Eigen::SparseMatrix<cplx> a = pair_creation_matrix(basis, hv_coupling(l));
    const Eigen::MatrixXcd ad(a);
    const Eigen::MatrixXcd gen = 0.25 * (ad - ad.adjoint());
    const Eigen::MatrixXcd u = gen.exp();
    const auto s = evolve_from_vacuum(l, GainParameter(0.25), 5, 4, 1.0);
    EXPECT_LT((s.vector() - u.col(0)).norm(), 1e-12) << to_string(l);
  }
}

TEST(evolution, matches_closed_form_states) {
  const GainParameter g(0.3);
  for (BellLabel l : kAllBellLabels) {
    const auto evolved = evolve_from_vacuum(l, g, 20);
    const auto closed = expand(build_bell_state(l, g, 20, TruncationMode::TotalPhotonCutoff));
    EXPECT_GT(fidelity(evolved, closed), 1.0 - 1e-10) << to_string(l);
    EXPECT_NEAR(evolved.norm2(), 1.0, 1e-12);
  }
}

TEST(evolution, pairs_orthogonal_polarizations) {
  const auto s = evolve_from_vacuum(BellLabel::PsiMinus, GainParameter(0.4), 12);
  const FockBasis& b = s.basis();
  double off_pair = 0.0;
  for (Eigen::Index ib = 0; ib < b.beam_dim(); ++ib)
    for (Eigen::Index ia = 0; ia < b.beam_dim(); ++ia) {
      const BeamKet ka = FockBasis::beam_ket(ia), kb = FockBasis::beam_ket(ib);
      if (ka.h != kb.v || ka.v != kb.h) off_pair += std::norm(s.amplitudes()(ia, ib));
    }
  EXPECT_LT(off_pair, 1e-28);
}

TEST(evolution, refuses_when_norm_leaks) {
  try {
    evolve_from_vacuum(BellLabel::PsiPlus, GainParameter(1.5), 6);
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    EXPECT_GT(e.measured(), 1e-8);
  }
  EXPECT_THROW(evolve_from_vacuum(BellLabel::PsiPlus, GainParameter(0.1), 6, 0), std::domain_error);
}
