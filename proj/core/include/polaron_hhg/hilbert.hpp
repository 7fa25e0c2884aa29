#pragma once

// Composite Hilbert space of one electron on a 2N-site SSH chain times
// 2N local phonon oscillators truncated to L levels each.
//
// Sites are flattened as A1=0, B1=1, A2=2, ..., B_N=2N-1. A basis state is
// encoded in mixed radix with the electron site as the fastest digit
// (radix 2N) followed by the phonon occupations in site order (radix L):
//
//   index = r + 2N * (n_0 + L * (n_1 + L * (... + L * n_{2N-1})))

#include <cstdint>
#include <vector>

namespace polaron {

using Index = std::int64_t;

struct ModelParams {
  double v = -0.073;        // intra-cell hopping (A_n <-> B_n)
  double w = -0.104;        // inter-cell hopping (B_n <-> A_{n+1})
  double gamma = -0.025;    // Holstein coupling
  double omega_ph = 0.036;  // phonon quantum
  int n_cells = 3;
  int phonon_cutoff = 3;    // L levels per site: occupations 0..L-1
  double d = 2.0;           // ion spacing

  int n_sites() const noexcept { return 2 * n_cells; }

  /// Throws InvalidParameterError naming the first violated constraint.
  void validate() const;
};

/// 2N * L^(2N) with checked arithmetic; throws DimensionOverflowError.
std::uint64_t total_dim(const ModelParams& params);

struct BasisState {
  std::vector<int> phonon_occ;
  int electron_site = 0;

  friend bool operator==(const BasisState&, const BasisState&) = default;
};

class BasisIndex {
 public:
  /// Rejects spaces whose dimension does not fit an Index.
  explicit BasisIndex(const ModelParams& params);

  const ModelParams& params() const noexcept { return params_; }
  Index dim() const noexcept { return dim_; }
  int n_sites() const noexcept { return n_sites_; }
  int cutoff() const noexcept { return cutoff_; }

  Index encode(const BasisState& state) const;
  BasisState decode(Index index) const;

  // Digit accessors that avoid materializing a BasisState.
  int electron_site(Index index) const noexcept {
    return static_cast<int>(index % n_sites_);
  }
  int occupation(Index index, int site) const noexcept {
    return static_cast<int>((index / stride_[site]) % cutoff_);
  }
  int total_phonons(Index index) const noexcept;

  /// Index offset produced by adding one quantum at `site`.
  Index phonon_stride(int site) const noexcept { return stride_[site]; }

 private:
  ModelParams params_;
  int n_sites_;
  int cutoff_;
  Index dim_;
  std::vector<Index> stride_;
};

}  // namespace polaron
