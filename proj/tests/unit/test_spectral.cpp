#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "polaron_hhg/eigensolver.hpp"
#include "polaron_hhg/errors.hpp"
#include "polaron_hhg/operators.hpp"
#include "polaron_hhg/spectral.hpp"

namespace polaron {
namespace {

ModelParams chain(int cells, int cutoff, double gamma = -0.025) {
  ModelParams p;
  p.n_cells = cells;
  p.phonon_cutoff = cutoff;
  p.gamma = gamma;
  return p;
}

constexpr double kOmegaL = 0.002;

TEST(Eigensolver, TwoSiteChain) {
  const EigenPairs pairs = eigensolve_lowest(build_hamiltonian(BasisIndex(chain(1, 1))), 2);
  EXPECT_NEAR(pairs.energies[0], -0.037, 1e-14);
  EXPECT_NEAR(pairs.energies[1], 0.109, 1e-14);
}

TEST(Eigensolver, SixSiteChainMatchesDirectDiagonalization) {
  const BasisIndex basis(chain(3, 1));
  const EigenPairs pairs = eigensolve_lowest(build_hamiltonian(basis), 6);
  // Open SSH chain written out by hand plus the six zero-point energies.
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(6, 6);
  for (int i = 0; i < 5; ++i) h(i, i + 1) = h(i + 1, i) = (i % 2 == 0) ? -0.073 : -0.104;
  const Eigen::VectorXd expected =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h).eigenvalues().array() + 0.108;
  ASSERT_EQ(pairs.count(), 6);
  for (int k = 0; k < 6; ++k) EXPECT_NEAR(pairs.energies[k], expected[k], 1e-14);
  // Particle-hole symmetric band around the zero point.
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(pairs.energies[k] + pairs.energies[5 - k], 0.216, 1e-14);
}

TEST(Eigensolver, AtomicLimitDisplacedOscillator) {
  ModelParams p = chain(1, 12);
  p.v = 0.0;
  p.w = 0.0;
  const EigenPairs pairs = eigensolve_lowest(build_hamiltonian(BasisIndex(p)), 1);
  const double expected = 2 * 0.036 / 2 - 0.025 * 0.025 / 0.036;
  EXPECT_NEAR(pairs.energies[0], expected, 1e-6);
}

class DenseVsLanczos : public ::testing::TestWithParam<int> {};

TEST_P(DenseVsLanczos, AgreeOnLowestEigenvalues) {
  const SparseOperator h = build_hamiltonian(BasisIndex(chain(3, GetParam())));
  const Index count = 40;
  const EigenPairs dense = dense_lowest(h, count);
  const EigenPairs lanczos = lanczos_lowest(h, count);
  ASSERT_EQ(lanczos.count(), count);
  EXPECT_LE((dense.energies - lanczos.energies).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE(residual_norms(h, lanczos).maxCoeff(), 1e-8);
  EXPECT_LE(residual_norms(h, dense).maxCoeff(), 1e-10);
  const Eigen::MatrixXd overlap = lanczos.vectors.transpose() * lanczos.vectors;
  EXPECT_LE((overlap - Eigen::MatrixXd::Identity(count, count)).cwiseAbs().maxCoeff(), 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Cutoffs, DenseVsLanczos, ::testing::Values(2, 3));

TEST(Eigensolver, DispatchByDimension) {
  const SparseOperator h = build_hamiltonian(BasisIndex(chain(3, 2)));
  EigensolverOptions options;
  options.dense_threshold = 0;
  const EigenPairs iterative = eigensolve_lowest(h, 5, options);
  options.dense_threshold = 5000;
  const EigenPairs dense = eigensolve_lowest(h, 5, options);
  EXPECT_LE((iterative.energies - dense.energies).cwiseAbs().maxCoeff(), 1e-10);
  // Non-degenerate states: fixed phases make the vectors themselves agree.
  EXPECT_LE((iterative.vectors.col(0) - dense.vectors.col(0)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Eigensolver, PhaseConvention) {
  const EigenPairs pairs = eigensolve_lowest(build_hamiltonian(BasisIndex(chain(2, 2))), 10);
  for (Index k = 0; k < pairs.count(); ++k) {
    Index at = 0;
    pairs.vectors.col(k).cwiseAbs().maxCoeff(&at);
    EXPECT_GT(pairs.vectors(at, k), 0.0);
  }
}

TEST(Eigensolver, NonConvergenceCarriesResiduals) {
  const SparseOperator h = build_hamiltonian(BasisIndex(chain(3, 2)));
  EigensolverOptions options;
  options.tolerance = 1e-300;
  options.max_restarts = 2;
  try {
    lanczos_lowest(h, 4, options);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    ASSERT_EQ(e.residuals().size(), 4u);
    for (double r : e.residuals()) EXPECT_GE(r, 0.0);
  }
}

TEST(Eigensolver, RejectsBadCounts) {
  const SparseOperator h = build_hamiltonian(BasisIndex(chain(1, 1)));
  EXPECT_THROW(eigensolve_lowest(h, 0), InvalidParameterError);
  EXPECT_THROW(eigensolve_lowest(h, 3), InvalidParameterError);
}

TEST(Eigensolver, GroundEnergyNonIncreasingInCutoff) {
  double previous = std::numeric_limits<double>::infinity();
  for (int cutoff = 1; cutoff <= 4; ++cutoff) {
    const SparseOperator h = build_hamiltonian(BasisIndex(chain(2, cutoff)));
    const double e = eigensolve_lowest(h, 1).energies[0];
    EXPECT_LE(e, previous + 1e-12);
    previous = e;
  }
}

TEST(TransitionMatrix, TwoSiteChain) {
  const BasisIndex basis(chain(1, 1));
  const EigenPairs pairs = eigensolve_lowest(build_hamiltonian(basis), 2);
  const Eigen::MatrixXd t = transition_matrix(pairs, build_position(basis));
  EXPECT_NEAR(t(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(t(1, 1), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t(0, 1)), 1.0, 1e-15);
  EXPECT_EQ(t(0, 1), t(1, 0));
}

TEST(TransitionMatrix, SymmetricAndSizeChecked) {
  const BasisIndex basis(chain(3, 2));
  const EigenPairs pairs = eigensolve_lowest(build_hamiltonian(basis), 20);
  const Eigen::MatrixXd t = transition_matrix(pairs, build_position(basis));
  EXPECT_EQ(t, t.transpose());
  const SparseOperator wrong = build_position(BasisIndex(chain(1, 1)));
  EXPECT_THROW(transition_matrix(pairs, wrong), DimensionMismatchError);
}

TEST(TransitionMatrix, DecoupledSectorsDoNotMix) {
  const BasisIndex basis(chain(1, 3, 0.0));
  const SparseOperator h = build_hamiltonian(basis);
  const EigenPairs pairs = eigensolve_lowest(h, basis.dim());
  const Eigen::MatrixXd t = transition_matrix(pairs, build_position(basis));
  std::vector<double> quanta(static_cast<std::size_t>(basis.dim()));
  for (Index s = 0; s < basis.dim(); ++s) quanta[s] = basis.total_phonons(s);
  const Eigen::MatrixXd n = rotate_operator(pairs.vectors, SparseOperator::diagonal(quanta));
  // Sectors are not degenerate with each other here, so every eigenvector
  // carries a definite phonon number.
  for (Index m = 0; m < pairs.count(); ++m) {
    EXPECT_NEAR(n(m, m), std::round(n(m, m)), 1e-10);
  }
  for (Index m = 0; m < pairs.count(); ++m) {
    for (Index k = 0; k < pairs.count(); ++k) {
      if (std::round(n(m, m)) != std::round(n(k, k))) EXPECT_NEAR(t(m, k), 0.0, 1e-12);
    }
  }
}

TEST(HarmonicOrder, Examples) {
  EXPECT_EQ(harmonic_order(-0.05, -0.05, kOmegaL), 0.0);
  EXPECT_NEAR(harmonic_order(-0.01, -0.05, kOmegaL), 20.0, 1e-12);
  EXPECT_NEAR(harmonic_order(0.03, -0.05, kOmegaL), 40.0, 1e-12);
}

TEST(SelectNr, Examples) {
  const BasisIndex basis(chain(3, 1));
  const EigenPairs pairs = eigensolve_lowest(build_hamiltonian(basis), 6);
  const std::span<const double> e(pairs.energies.data(), 6);
  // The pipeline floors N_R at the electronic band size 2N.
  EXPECT_EQ(select_nr(e, kOmegaL, 40.0, std::nullopt, basis.n_sites()), 6);
  EXPECT_EQ(select_nr(e, kOmegaL, 0.0), 1);
  std::vector<double> many(2000);
  for (std::size_t i = 0; i < many.size(); ++i) many[i] = 1e-4 * static_cast<double>(i);
  EXPECT_EQ(select_nr(many, kOmegaL, 45.0, Index{1500}), 1500);
  EXPECT_EQ(select_nr(e, kOmegaL, 45.0, Index{1500}), 6);  // clamped
}

TEST(SelectNr, SmallestCoveringCount) {
  const std::vector<double> e = {0.0, 0.02, 0.05, 0.09, 0.1, 0.2};
  // Orders 0, 10, 25, 45, 50, 100.
  EXPECT_EQ(select_nr(e, kOmegaL, 45.0), 4);
  EXPECT_EQ(select_nr(e, kOmegaL, 44.0), 4);
  EXPECT_EQ(select_nr(e, kOmegaL, 46.0), 5);
  EXPECT_EQ(select_nr(e, kOmegaL, 1000.0), 6);
  EXPECT_EQ(select_nr(e, kOmegaL, 45.0, std::nullopt, 5), 5);
}

TEST(TruncatedBasis, CoversTheRequestedWindow) {
  const BasisIndex basis(chain(3, 2));
  TruncationOptions options;
  options.min_states = basis.n_sites();
  options.solver.dense_threshold = 0;
  const EigenBasis eig =
      solve_truncated_basis(build_hamiltonian(basis), build_position(basis), kOmegaL, options);
  const Index nr = eig.size();
  ASSERT_GE(nr, 2);
  EXPECT_GE(harmonic_order(eig.energies[nr - 1], eig.energies[0], kOmegaL), 45.0);
  EXPECT_LT(harmonic_order(eig.energies[nr - 2], eig.energies[0], kOmegaL), 45.0);

  const EigenPairs reference = dense_lowest(build_hamiltonian(basis), nr);
  EXPECT_LE((eig.energies - reference.energies).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(eig.transition.rows(), nr);
  EXPECT_EQ(eig.gs_transition, Eigen::VectorXd(eig.transition.row(0).transpose()));
  EXPECT_FALSE(eig.degenerate_ground);
}

TEST(TruncatedBasis, OverrideWins) {
  const BasisIndex basis(chain(3, 2));
  TruncationOptions options;
  options.nr_override = 100;
  const EigenBasis eig =
      solve_truncated_basis(build_hamiltonian(basis), build_position(basis), kOmegaL, options);
  EXPECT_EQ(eig.size(), 100);
}

TEST(StateRelevance, TwoSiteChain) {
  const BasisIndex basis(chain(1, 1));
  const EigenBasis eig =
      make_eigen_basis(eigensolve_lowest(build_hamiltonian(basis), 2), build_position(basis));
  const auto relevance = state_relevance(eig, kOmegaL);
  ASSERT_EQ(relevance.size(), 2u);
  EXPECT_EQ(relevance[0].order, 0.0);
  EXPECT_NEAR(relevance[1].log10_tgs2, 0.0, 1e-14);
  EXPECT_NEAR(relevance[1].order, 0.146 / kOmegaL, 1e-9);
  // <gs|x|gs> vanishes by mirror symmetry, up to roundoff.
  EXPECT_LT(relevance[0].log10_tgs2, -25.0);
}

TEST(StateRelevance, ZeroMapsToMinusInfinity) {
  EigenBasis eig;
  eig.energies = Eigen::Vector2d(0.0, 0.01);
  eig.transition = Eigen::Matrix2d::Zero();
  eig.gs_transition = Eigen::Vector2d::Zero();
  const auto relevance = state_relevance(eig, kOmegaL);
  EXPECT_EQ(relevance[1].log10_tgs2, -std::numeric_limits<double>::infinity());
}

TEST(StateRelevance, RankingAtDefaultParameters) {
  const BasisIndex basis(chain(3, 3));
  TruncationOptions options;
  options.min_states = basis.n_sites();
  options.solver.dense_threshold = 0;
  const EigenBasis eig =
      solve_truncated_basis(build_hamiltonian(basis), build_position(basis), kOmegaL, options);
  const auto top = most_relevant_states(state_relevance(eig, kOmegaL), 3, 40.0);
  const std::set<Index> got(top.begin(), top.end());
  EXPECT_EQ(got, (std::set<Index>{1, 7, 12}));
}

TEST(StateRelevance, LevelTableFormat) {
  const std::vector<StateRelevance> rows = {{0, -0.05, 0.0, -30.0}, {1, -0.01, 20.0, 0.5}};
  std::ostringstream out;
  write_energy_levels(out, rows);
  EXPECT_EQ(out.str(), "# index\tenergy\tharmonic_order\tlog10_Tgs2\n0\t-0.05\t0\t-30\n1\t-0.01\t20\t0.5\n");
}

}  // namespace
}  // namespace polaron
