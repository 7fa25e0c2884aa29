#include <set>

#include <gtest/gtest.h>

#include "polaron_hhg/errors.hpp"
#include "polaron_hhg/hilbert.hpp"

namespace polaron {
namespace {

ModelParams chain(int cells, int cutoff) {
  ModelParams p;
  p.n_cells = cells;
  p.phonon_cutoff = cutoff;
  return p;
}

TEST(TotalDim, MatchesKnownCounts) {
  EXPECT_EQ(total_dim(chain(3, 1)), 6u);
  EXPECT_EQ(total_dim(chain(3, 3)), 4374u);
  EXPECT_EQ(total_dim(chain(3, 5)), 93750u);
  EXPECT_EQ(total_dim(chain(1, 1)), 2u);
}

TEST(TotalDim, StrictlyIncreasingInCutoff) {
  for (int cells = 1; cells <= 3; ++cells) {
    for (int cutoff = 1; cutoff < 8; ++cutoff) {
      EXPECT_LT(total_dim(chain(cells, cutoff)), total_dim(chain(cells, cutoff + 1)));
    }
  }
}

TEST(TotalDim, OverflowIsReported) {
  EXPECT_THROW(total_dim(chain(40, 1000)), DimensionOverflowError);
  // Fits in 64 unsigned bits but not in a signed index.
  EXPECT_NO_THROW(total_dim(chain(29, 2)));  // 58 * 2^58
  EXPECT_THROW(BasisIndex(chain(29, 2)), DimensionOverflowError);
}

TEST(BasisIndex, EncodeExamples) {
  const BasisIndex basis(chain(1, 2));
  EXPECT_EQ(basis.encode({{0, 0}, 0}), 0);
  EXPECT_EQ(basis.encode({{0, 0}, 1}), 1);
  EXPECT_EQ(basis.encode({{1, 1}, 1}), 7);
}

TEST(BasisIndex, DecodeExamples) {
  const BasisIndex basis(chain(1, 2));
  EXPECT_EQ(basis.decode(0), (BasisState{{0, 0}, 0}));
  EXPECT_EQ(basis.decode(7), (BasisState{{1, 1}, 1}));
}

TEST(BasisIndex, FullEnumerationOfSmallSpace) {
  // index = r + 2 * (n0 + 2 * n1) for N = 1, L = 2.
  const BasisIndex basis(chain(1, 2));
  for (int n1 = 0; n1 < 2; ++n1) {
    for (int n0 = 0; n0 < 2; ++n0) {
      for (int r = 0; r < 2; ++r) {
        EXPECT_EQ(basis.encode({{n0, n1}, r}), r + 2 * (n0 + 2 * n1));
      }
    }
  }
}

TEST(BasisIndex, InvalidStatesAreRejected) {
  const BasisIndex basis(chain(1, 2));
  EXPECT_THROW(basis.encode({{2, 0}, 0}), InvalidStateError);
  EXPECT_THROW(basis.encode({{0, -1}, 0}), InvalidStateError);
  EXPECT_THROW(basis.encode({{0, 0}, 2}), InvalidStateError);
  EXPECT_THROW(basis.encode({{0, 0}, -1}), InvalidStateError);
  EXPECT_THROW(basis.encode({{0}, 0}), InvalidStateError);
}

TEST(BasisIndex, DecodeOutOfRange) {
  const BasisIndex basis(chain(1, 2));
  EXPECT_THROW(basis.decode(-1), IndexOutOfRangeError);
  EXPECT_THROW(basis.decode(8), IndexOutOfRangeError);
}

class Bijection : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(Bijection, EncodeDecodeRoundTrip) {
  const auto [cells, cutoff] = GetParam();
  const BasisIndex basis(chain(cells, cutoff));
  ASSERT_EQ(static_cast<std::uint64_t>(basis.dim()), total_dim(chain(cells, cutoff)));
  for (Index i = 0; i < basis.dim(); ++i) {
    const BasisState s = basis.decode(i);
    ASSERT_EQ(basis.encode(s), i);
    ASSERT_EQ(basis.electron_site(i), s.electron_site);
    int total = 0;
    for (int f = 0; f < basis.n_sites(); ++f) {
      ASSERT_EQ(basis.occupation(i, f), s.phonon_occ[f]);
      total += s.phonon_occ[f];
    }
    ASSERT_EQ(basis.total_phonons(i), total);
  }
}

TEST_P(Bijection, CardinalityOfValidStates) {
  const auto [cells, cutoff] = GetParam();
  const BasisIndex basis(chain(cells, cutoff));
  const int sites = 2 * cells;
  // Odometer over every valid state, independent of the index arithmetic.
  std::set<Index> seen;
  BasisState s{std::vector<int>(sites, 0), 0};
  while (true) {
    const Index i = basis.encode(s);
    ASSERT_EQ(basis.decode(i), s);
    seen.insert(i);
    int digit = 0;
    if (++s.electron_site < sites) continue;
    s.electron_site = 0;
    while (digit < sites && ++s.phonon_occ[digit] == cutoff) s.phonon_occ[digit++] = 0;
    if (digit == sites) break;
  }
  EXPECT_EQ(static_cast<Index>(seen.size()), basis.dim());
  EXPECT_EQ(*seen.begin(), 0);
  EXPECT_EQ(*seen.rbegin(), basis.dim() - 1);
}

INSTANTIATE_TEST_SUITE_P(SmallSpaces, Bijection,
                         ::testing::Values(std::pair{1, 1}, std::pair{1, 2}, std::pair{1, 5},
                                           std::pair{2, 3}, std::pair{3, 1}, std::pair{3, 2}));

TEST(BasisIndex, PhononStrideAddsOneQuantum) {
  const BasisIndex basis(chain(2, 3));
  const Index i = basis.encode({{0, 1, 0, 2}, 3});
  for (int f = 0; f < 4; ++f) {
    BasisState s = basis.decode(i);
    if (s.phonon_occ[f] + 1 >= 3) continue;
    ++s.phonon_occ[f];
    EXPECT_EQ(basis.encode(s), i + basis.phonon_stride(f));
  }
}

TEST(ModelParams, ValidationNamesTheKey) {
  auto message = [](ModelParams p) {
    try {
      p.validate();
    } catch (const InvalidParameterError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  ModelParams p;
  EXPECT_EQ(message(p), "");
  p.gamma = 0.01;
  EXPECT_EQ(message(p).rfind("gamma:", 0), 0u);
  p = {};
  p.phonon_cutoff = 0;
  EXPECT_EQ(message(p).rfind("phonon_cutoff:", 0), 0u);
  p = {};
  p.n_cells = 0;
  EXPECT_EQ(message(p).rfind("n_cells:", 0), 0u);
  p = {};
  p.omega_ph = 0.0;
  EXPECT_EQ(message(p).rfind("omega_ph:", 0), 0u);
  p = {};
  p.v = 0.1;
  EXPECT_EQ(message(p).rfind("v:", 0), 0u);
  p = {};
  p.d = -1.0;
  EXPECT_EQ(message(p).rfind("d:", 0), 0u);
}

TEST(ModelParams, DecoupledAndAtomicLimitsAreValid) {
  ModelParams p;
  p.gamma = 0.0;
  p.v = 0.0;
  p.w = 0.0;
  EXPECT_NO_THROW(p.validate());
}

}  // namespace
}  // namespace polaron
