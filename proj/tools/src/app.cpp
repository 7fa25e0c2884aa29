#include "polaron_hhg_app/app.hpp"

#include <exception>
#include <fstream>
#include <functional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "polaron_hhg/errors.hpp"
#include "polaron_hhg/operators.hpp"
#include "polaron_hhg/scan.hpp"
#include "polaron_hhg/spectral.hpp"
#include "polaron_hhg/text_output.hpp"

namespace polaron::app {

namespace {

namespace fs = std::filesystem;

// Writes stamped artifacts into one directory and keeps manifest.txt in step.
class ArtifactWriter {
 public:
  ArtifactWriter(fs::path dir, Mode mode, std::uint64_t hash)
      : dir_(std::move(dir)), mode_(mode), hash_(hash) {
    fs::create_directories(dir_);
    write_manifest("running");
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    if (name.empty() || name.find('/') != std::string::npos || name.starts_with('.')) {
      throw Error(fmt::format("refusing to write artifact '{}'", name));
    }
    const fs::path target = dir_ / name;
    const fs::path staging = dir_ / (name + ".partial");
    {
      std::ofstream out(staging, std::ios::trunc);
      if (!out) throw Error(fmt::format("cannot open '{}' for writing", staging.string()));
      write_stamp(out, hash_);
      body(out);
      out.flush();
      if (!out) throw Error(fmt::format("write to '{}' failed", staging.string()));
    }
    fs::rename(staging, target);
    artifacts_.push_back(name);
    write_manifest("running");
  }

  void finish(const std::string& status) { write_manifest(status); }

  const std::vector<std::string>& artifacts() const noexcept { return artifacts_; }

 private:
  void write_manifest(const std::string& status) const {
    std::ofstream out(dir_ / "manifest.txt", std::ios::trunc);
    write_stamp(out, hash_);
    fmt::print(out, "# mode {}\n# status {}\n", to_string(mode_), status);
    for (const auto& a : artifacts_) fmt::print(out, "{}\n", a);
  }

  fs::path dir_;
  Mode mode_;
  std::uint64_t hash_;
  std::vector<std::string> artifacts_;
};

PipelineOptions pipeline_options(const RunConfig& c) {
  PipelineOptions options;
  options.truncation.max_order = c.max_order;
  options.truncation.nr_override = c.nr_override;
  options.truncation.solver.dense_threshold = c.dense_threshold;
  options.truncation.solver.tolerance = c.solver_tolerance;
  options.propagation = c.propagation;
  return options;
}

ScanSpec scan_spec(const RunConfig& c, int workers) {
  ScanSpec spec;
  spec.gamma_values = c.gamma_values;
  spec.l_values = c.l_values;
  spec.model = c.model;
  spec.laser = c.laser;
  spec.options = pipeline_options(c);
  spec.workers = workers;
  return spec;
}

EigenBasis solve_levels(const RunConfig& c, const BasisIndex& basis) {
  const SparseOperator h = build_hamiltonian(basis);
  const SparseOperator x = build_position(basis);
  TruncationOptions truncation = pipeline_options(c).truncation;
  truncation.min_states = std::max<Index>(truncation.min_states, basis.n_sites());
  return solve_truncated_basis(h, x, c.laser.omega_l, truncation);
}

void write_levels(std::ostream& out, Index dim, Index nr, bool degenerate,
                  std::span<const StateRelevance> relevance) {
  fmt::print(out, "# dim {}\n# N_R {}\n", dim, nr);
  if (degenerate) fmt::print(out, "# degenerate ground state: e_1 - e_0 < 1e-9\n");
  write_energy_levels(out, relevance);
}

void levels_mode(const RunConfig& c, ArtifactWriter& writer) {
  const BasisIndex basis(c.model);
  const EigenBasis eig = solve_levels(c, basis);
  const auto relevance = state_relevance(eig, c.laser.omega_l);
  writer.write("levels.txt", [&](std::ostream& out) {
    write_levels(out, basis.dim(), eig.size(), eig.degenerate_ground, relevance);
  });
}

void run_mode_single(const RunConfig& c, ArtifactWriter& writer) {
  const PointResult result = run_point(c.model, c.laser, pipeline_options(c));
  writer.write("timeseries.txt", [&](std::ostream& out) { write_time_series(out, result.series); });
  writer.write("spectrum.txt", [&](std::ostream& out) {
    write_spectrum(out, result.spectrum, c.spectrum_max_order);
  });
  writer.write("levels.txt", [&](std::ostream& out) {
    const auto& s = result.summary;
    write_levels(out, s.dim, s.nr, s.degenerate_ground, s.relevance);
  });
}

bool gamma_scan_mode(const RunConfig& c, int workers, ArtifactWriter& writer) {
  const GammaScanResult scan = gamma_scan(scan_spec(c, workers));
  writer.write("heatmap.txt",
               [&](std::ostream& out) { write_heatmap(out, scan, c.spectrum_max_order); });
  writer.write("relevance.txt", [&](std::ostream& out) { write_relevance(out, scan); });
  writer.write("failures.txt", [&](std::ostream& out) { write_scan_failures(out, scan); });
  return std::all_of(scan.points.begin(), scan.points.end(),
                     [](const ScanPoint& p) { return p.ok(); });
}

bool converge_mode(const RunConfig& c, int workers, ArtifactWriter& writer) {
  const ConvergenceReport report = convergence_study(scan_spec(c, workers));
  writer.write("convergence.txt", [&](std::ostream& out) { write_convergence(out, report); });
  bool complete = true;
  for (const auto& entry : report.entries) {
    if (!entry.point.spectrum) {
      complete = false;
      continue;
    }
    writer.write(fmt::format("spectrum_L{}.txt", entry.point.phonon_cutoff), [&](std::ostream& out) {
      write_spectrum(out, *entry.point.spectrum, c.spectrum_max_order);
    });
  }
  return complete;
}

void correlate_mode(const RunConfig& c, ArtifactWriter& writer) {
  const BasisIndex basis(c.model);
  const EigenBasis eig = solve_levels(c, basis);
  for (Index m : c.correlate_states) {
    const Eigen::MatrixXd map = correlation_map(eig, m, basis);
    writer.write(fmt::format("correlation_m{}.txt", m), [&](std::ostream& out) {
      fmt::print(out, "# state {} energy {:.15g}\n", m, eig.energies[m]);
      write_correlation(out, map);
    });
  }
}

std::string describe(const std::exception& e) {
  std::string message = e.what();
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    message += ": " + describe(inner);
  } catch (...) {
  }
  return message;
}

}  // namespace

ModeOutcome run_mode(Mode mode, const RunConfig& config, int workers) {
  ArtifactWriter writer(config.output_dir, mode, config_hash(config));
  bool complete = true;
  try {
    writer.write("config.resolved.ini", [&](std::ostream& out) {
      fmt::print(out, "# output_dir is the directory holding this file\n{}",
                 to_config_text(config, false));
    });
    switch (mode) {
      case Mode::levels: levels_mode(config, writer); break;
      case Mode::run: run_mode_single(config, writer); break;
      case Mode::gamma_scan: complete = gamma_scan_mode(config, workers, writer); break;
      case Mode::converge: complete = converge_mode(config, workers, writer); break;
      case Mode::correlate: correlate_mode(config, writer); break;
    }
  } catch (const std::exception& e) {
    writer.finish("failed: " + describe(e));
    throw;
  }
  writer.finish(complete ? "complete" : "partial");
  return {writer.artifacts(), !complete};
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App cli{"Holstein-SSH polaron high-harmonic generation"};
  std::string mode_text;
  fs::path config_file;
  fs::path output_dir;
  int workers = 1;
  cli.add_option("mode", mode_text, "levels | run | gamma-scan | converge | correlate")
      ->required()
      ->check(CLI::IsMember({"levels", "run", "gamma-scan", "converge", "correlate"}));
  cli.add_option("--config", config_file, "Run configuration file")->required();
  cli.add_option("--out", output_dir, "Output directory (overrides run.output_dir)");
  cli.add_option("--workers", workers, "Worker threads for scans")->check(CLI::Range(1, 256));
  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e, out, err);
  }

  try {
    RunConfig config = parse_config(config_file);
    config.mode = *parse_mode(mode_text);
    if (!output_dir.empty()) config.output_dir = output_dir;
    const ModeOutcome outcome = run_mode(config.mode, config, workers);
    fmt::print(out, "{}: wrote {} files to {}\n", mode_text, outcome.artifacts.size(),
               config.output_dir.string());
    if (outcome.partial) {
      fmt::print(err, "error: some points failed; see {}\n",
                 (config.output_dir / "failures.txt").string());
      return 2;
    }
    return 0;
  } catch (const ConfigError& e) {
    fmt::print(err, "error: config {}: {}\n", config_file.string(), e.what());
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", describe(e));
  }
  return 1;
}

}  // namespace polaron::app
