#include "polaron_hhg/hilbert.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "polaron_hhg/errors.hpp"

namespace polaron {

namespace {

void require(bool ok, const char* key, const std::string& message) {
  if (!ok) throw InvalidParameterError(fmt::format("{}: {}", key, message));
}

bool checked_mul(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
  return !__builtin_mul_overflow(a, b, &out);
}

}  // namespace

void ModelParams::validate() const {
  require(std::isfinite(v) && v <= 0.0, "v", "intra-cell hopping must be finite and <= 0");
  require(std::isfinite(w) && w <= 0.0, "w", "inter-cell hopping must be finite and <= 0");
  require(std::isfinite(gamma) && gamma <= 0.0, "gamma", "e-ph coupling must be finite and <= 0");
  require(std::isfinite(omega_ph) && omega_ph > 0.0, "omega_ph", "phonon energy must be > 0");
  require(n_cells >= 1, "n_cells", "need at least one unit cell");
  require(phonon_cutoff >= 1, "phonon_cutoff", "need at least one phonon level");
  require(std::isfinite(d) && d > 0.0, "d", "ion spacing must be > 0");
}

std::uint64_t total_dim(const ModelParams& params) {
  if (params.n_cells < 1 || params.phonon_cutoff < 1) {
    throw InvalidParameterError("total_dim: n_cells and phonon_cutoff must be >= 1");
  }
  const auto sites = static_cast<std::uint64_t>(params.n_cells) * 2;
  const auto cutoff = static_cast<std::uint64_t>(params.phonon_cutoff);
  std::uint64_t dim = sites;
  for (std::uint64_t i = 0; i < sites; ++i) {
    if (!checked_mul(dim, cutoff, dim)) {
      throw DimensionOverflowError(fmt::format(
          "total_dim: 2N*L^(2N) overflows 64 bits for N={}, L={}", params.n_cells,
          params.phonon_cutoff));
    }
  }
  return dim;
}

BasisIndex::BasisIndex(const ModelParams& params)
    : params_(params), n_sites_(params.n_sites()), cutoff_(params.phonon_cutoff) {
  params_.validate();
  const std::uint64_t dim = total_dim(params_);
  if (dim > static_cast<std::uint64_t>(std::numeric_limits<Index>::max())) {
    throw DimensionOverflowError(fmt::format("basis dimension {} exceeds the index range", dim));
  }
  dim_ = static_cast<Index>(dim);
  stride_.resize(n_sites_);
  Index stride = n_sites_;
  for (int f = 0; f < n_sites_; ++f) {
    stride_[f] = stride;
    stride *= cutoff_;
  }
}

Index BasisIndex::encode(const BasisState& state) const {
  if (static_cast<int>(state.phonon_occ.size()) != n_sites_) {
    throw InvalidStateError(fmt::format("encode: expected {} phonon occupations, got {}",
                                        n_sites_, state.phonon_occ.size()));
  }
  if (state.electron_site < 0 || state.electron_site >= n_sites_) {
    throw InvalidStateError(
        fmt::format("encode: electron site {} outside [0, {})", state.electron_site, n_sites_));
  }
  Index index = state.electron_site;
  for (int f = 0; f < n_sites_; ++f) {
    const int n = state.phonon_occ[f];
    if (n < 0 || n >= cutoff_) {
      throw InvalidStateError(
          fmt::format("encode: occupation {} at site {} outside [0, {})", n, f, cutoff_));
    }
    index += stride_[f] * n;
  }
  return index;
}

BasisState BasisIndex::decode(Index index) const {
  if (index < 0 || index >= dim_) {
    throw IndexOutOfRangeError(fmt::format("decode: index {} outside [0, {})", index, dim_));
  }
  BasisState state;
  state.electron_site = electron_site(index);
  state.phonon_occ.resize(n_sites_);
  Index rest = index / n_sites_;
  for (int f = 0; f < n_sites_; ++f) {
    state.phonon_occ[f] = static_cast<int>(rest % cutoff_);
    rest /= cutoff_;
  }
  return state;
}

int BasisIndex::total_phonons(Index index) const noexcept {
  int total = 0;
  Index rest = index / n_sites_;
  for (int f = 0; f < n_sites_; ++f) {
    total += static_cast<int>(rest % cutoff_);
    rest /= cutoff_;
  }
  return total;
}

}  // namespace polaron
