#pragma once

// Run configuration: a flat sectioned key-value file.
//
//   [model]        v, w, gamma, omega_ph, n_cells, phonon_cutoff, d
//   [laser]        a0, omega_l, n_cyc
//   [propagation]  n_steps, record_stride
//   [run]          nr_override, max_order, output_dir, dense_threshold,
//                  solver_tolerance, spectrum_max_order, gamma_values,
//                  l_values, correlate_states
//
// '#' or ';' start a comment. Lists are comma separated. Every key is
// optional; unknown sections or keys are errors.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polaron_hhg/dynamics.hpp"
#include "polaron_hhg/hilbert.hpp"
#include "polaron_hhg/pulse.hpp"

namespace polaron {

enum class Mode { levels, run, gamma_scan, converge, correlate };

std::string_view to_string(Mode mode);
/// Accepts "levels", "run", "gamma-scan", "converge", "correlate".
std::optional<Mode> parse_mode(std::string_view text);

struct RunConfig {
  ModelParams model;
  LaserParams laser;
  PropagationConfig propagation;
  Mode mode = Mode::run;
  std::optional<Index> nr_override;
  double max_order = 45.0;
  std::filesystem::path output_dir = "out";
  Index dense_threshold = 5000;
  double solver_tolerance = 1e-10;
  double spectrum_max_order = 60.0;
  std::vector<double> gamma_values;
  std::vector<int> l_values = {1, 3, 5, 6};
  std::vector<Index> correlate_states = {0, 1, 7, 12};

  RunConfig();
};

/// Throws ConfigError naming the offending key (or line for syntax errors).
RunConfig parse_config_text(std::string_view text);
RunConfig parse_config(const std::filesystem::path& file);

/// Canonical text with every key resolved; parse_config_text round-trips it.
/// output_dir only says where results go, so it can be left out.
std::string to_config_text(const RunConfig& config, bool include_output_dir = true);

std::uint64_t fnv1a64(std::string_view bytes);

/// Hash of the canonical text without output_dir, used to stamp every output
/// file. Identical runs into different directories share it.
std::uint64_t config_hash(const RunConfig& config);

}  // namespace polaron
