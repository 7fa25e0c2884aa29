#include "polaron_hhg/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "polaron_hhg/errors.hpp"
#include "polaron_hhg/scan.hpp"

namespace polaron {

namespace {

std::string_view trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string_view strip_comment(std::string_view line) {
  const auto at = line.find_first_of("#;");
  return at == std::string_view::npos ? line : line.substr(0, at);
}

template <typename T>
T parse_number(std::string_view text, const std::string& key) {
  const std::string_view t = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigError(fmt::format("{}: cannot parse '{}' as a number", key, t), key);
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view text, const std::string& key) {
  std::vector<T> out;
  std::string_view rest = trim(text);
  if (rest.empty()) return out;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_number<T>(rest.substr(0, comma), key));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt::format("{:.17g}", values[i]);
    } else {
      out += fmt::format("{}", values[i]);
    }
  }
  return out;
}

using Setter = void (*)(RunConfig&, std::string_view, const std::string&);

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"model.v", [](RunConfig& c, std::string_view v, const std::string& k) { c.model.v = parse_number<double>(v, k); }},
      {"model.w", [](RunConfig& c, std::string_view v, const std::string& k) { c.model.w = parse_number<double>(v, k); }},
      {"model.gamma", [](RunConfig& c, std::string_view v, const std::string& k) { c.model.gamma = parse_number<double>(v, k); }},
      {"model.omega_ph", [](RunConfig& c, std::string_view v, const std::string& k) { c.model.omega_ph = parse_number<double>(v, k); }},
      {"model.n_cells", [](RunConfig& c, std::string_view v, const std::string& k) { c.model.n_cells = parse_number<int>(v, k); }},
      {"model.phonon_cutoff", [](RunConfig& c, std::string_view v, const std::string& k) { c.model.phonon_cutoff = parse_number<int>(v, k); }},
      {"model.d", [](RunConfig& c, std::string_view v, const std::string& k) { c.model.d = parse_number<double>(v, k); }},
      {"laser.a0", [](RunConfig& c, std::string_view v, const std::string& k) { c.laser.a0 = parse_number<double>(v, k); }},
      {"laser.omega_l", [](RunConfig& c, std::string_view v, const std::string& k) { c.laser.omega_l = parse_number<double>(v, k); }},
      {"laser.n_cyc", [](RunConfig& c, std::string_view v, const std::string& k) { c.laser.n_cyc = parse_number<int>(v, k); }},
      {"propagation.n_steps", [](RunConfig& c, std::string_view v, const std::string& k) { c.propagation.n_steps = parse_number<Index>(v, k); }},
      {"propagation.record_stride", [](RunConfig& c, std::string_view v, const std::string& k) { c.propagation.record_stride = parse_number<Index>(v, k); }},
      {"run.nr_override", [](RunConfig& c, std::string_view v, const std::string& k) {
         if (trim(v) == "none" || trim(v).empty()) c.nr_override.reset();
         else c.nr_override = parse_number<Index>(v, k);
       }},
      {"run.max_order", [](RunConfig& c, std::string_view v, const std::string& k) { c.max_order = parse_number<double>(v, k); }},
      {"run.output_dir", [](RunConfig& c, std::string_view v, const std::string&) { c.output_dir = std::string(trim(v)); }},
      {"run.dense_threshold", [](RunConfig& c, std::string_view v, const std::string& k) { c.dense_threshold = parse_number<Index>(v, k); }},
      {"run.solver_tolerance", [](RunConfig& c, std::string_view v, const std::string& k) { c.solver_tolerance = parse_number<double>(v, k); }},
      {"run.spectrum_max_order", [](RunConfig& c, std::string_view v, const std::string& k) { c.spectrum_max_order = parse_number<double>(v, k); }},
      {"run.gamma_values", [](RunConfig& c, std::string_view v, const std::string& k) { c.gamma_values = parse_list<double>(v, k); }},
      {"run.l_values", [](RunConfig& c, std::string_view v, const std::string& k) { c.l_values = parse_list<int>(v, k); }},
      {"run.correlate_states", [](RunConfig& c, std::string_view v, const std::string& k) { c.correlate_states = parse_list<Index>(v, k); }},
  };
  return table;
}

void validate(const RunConfig& c) {
  try {
    c.model.validate();
  } catch (const InvalidParameterError& e) {
    const std::string message = e.what();
    throw ConfigError("model." + message, "model." + message.substr(0, message.find(':')));
  }
  try {
    c.laser.validate();
  } catch (const InvalidParameterError& e) {
    const std::string message = e.what();
    throw ConfigError("laser." + message, "laser." + message.substr(0, message.find(':')));
  }
  try {
    c.propagation.validate();
  } catch (const InvalidParameterError& e) {
    const std::string message = e.what();
    throw ConfigError("propagation." + message, "propagation." + message.substr(0, message.find(':')));
  }
  try {
    (void)total_dim(c.model);
  } catch (const DimensionOverflowError& e) {
    throw ConfigError(e.what(), "model.phonon_cutoff");
  }
  auto fail = [](const char* key, const char* message) {
    throw ConfigError(fmt::format("{}: {}", key, message), key);
  };
  if (c.nr_override && *c.nr_override < 1) fail("run.nr_override", "must be >= 1");
  if (!(c.max_order >= 0.0)) fail("run.max_order", "must be >= 0");
  if (c.output_dir.empty()) fail("run.output_dir", "must not be empty");
  if (c.dense_threshold < 0) fail("run.dense_threshold", "must be >= 0");
  if (!(c.solver_tolerance > 0.0)) fail("run.solver_tolerance", "must be > 0");
  if (!(c.spectrum_max_order > 0.0)) fail("run.spectrum_max_order", "must be > 0");
  for (double g : c.gamma_values) {
    if (!(g <= 0.0)) fail("run.gamma_values", "every coupling must be <= 0");
  }
  for (std::size_t i = 0; i < c.l_values.size(); ++i) {
    if (c.l_values[i] < 1) fail("run.l_values", "cutoffs must be >= 1");
    if (i > 0 && c.l_values[i] <= c.l_values[i - 1]) fail("run.l_values", "must be strictly ascending");
  }
  for (Index m : c.correlate_states) {
    if (m < 0) fail("run.correlate_states", "state indices must be >= 0");
  }
}

}  // namespace

RunConfig::RunConfig() : gamma_values(default_gamma_grid()) {}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::levels: return "levels";
    case Mode::run: return "run";
    case Mode::gamma_scan: return "gamma-scan";
    case Mode::converge: return "converge";
    case Mode::correlate: return "correlate";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view text) {
  for (Mode m : {Mode::levels, Mode::run, Mode::gamma_scan, Mode::converge, Mode::correlate}) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

RunConfig parse_config_text(std::string_view text) {
  static const std::set<std::string, std::less<>> sections = {"model", "laser", "propagation", "run"};
  RunConfig config;
  std::string section;
  std::set<std::string> seen;
  std::istringstream stream{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(fmt::format("line {}: malformed section header '{}'", line_no, line));
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!sections.contains(section)) {
        throw ConfigError(fmt::format("line {}: unknown section [{}]", line_no, section), section);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value', got '{}'", line_no, line));
    }
    const std::string_view name = trim(line.substr(0, eq));
    if (section.empty()) {
      throw ConfigError(fmt::format("line {}: key '{}' appears before any section", line_no, name),
                        std::string(name));
    }
    const std::string key = section + "." + std::string(name);
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError(fmt::format("line {}: unknown key '{}'", line_no, key), key);
    }
    if (!seen.insert(key).second) {
      throw ConfigError(fmt::format("line {}: duplicate key '{}'", line_no, key), key);
    }
    it->second(config, line.substr(eq + 1), key);
  }
  validate(config);
  return config;
}

RunConfig parse_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", file.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string to_config_text(const RunConfig& c, bool include_output_dir) {
  std::string out;
  out += "[model]\n";
  out += fmt::format("v = {:.17g}\n", c.model.v);
  out += fmt::format("w = {:.17g}\n", c.model.w);
  out += fmt::format("gamma = {:.17g}\n", c.model.gamma);
  out += fmt::format("omega_ph = {:.17g}\n", c.model.omega_ph);
  out += fmt::format("n_cells = {}\n", c.model.n_cells);
  out += fmt::format("phonon_cutoff = {}\n", c.model.phonon_cutoff);
  out += fmt::format("d = {:.17g}\n", c.model.d);
  out += "\n[laser]\n";
  out += fmt::format("a0 = {:.17g}\n", c.laser.a0);
  out += fmt::format("omega_l = {:.17g}\n", c.laser.omega_l);
  out += fmt::format("n_cyc = {}\n", c.laser.n_cyc);
  out += "\n[propagation]\n";
  out += fmt::format("n_steps = {}\n", c.propagation.n_steps);
  out += fmt::format("record_stride = {}\n", c.propagation.record_stride);
  out += "\n[run]\n";
  out += fmt::format("nr_override = {}\n",
                     c.nr_override ? fmt::format("{}", *c.nr_override) : std::string("none"));
  out += fmt::format("max_order = {:.17g}\n", c.max_order);
  if (include_output_dir) out += fmt::format("output_dir = {}\n", c.output_dir.string());
  out += fmt::format("dense_threshold = {}\n", c.dense_threshold);
  out += fmt::format("solver_tolerance = {:.17g}\n", c.solver_tolerance);
  out += fmt::format("spectrum_max_order = {:.17g}\n", c.spectrum_max_order);
  out += fmt::format("gamma_values = {}\n", join(c.gamma_values));
  out += fmt::format("l_values = {}\n", join(c.l_values));
  out += fmt::format("correlate_states = {}\n", join(c.correlate_states));
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    hash ^= b;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t config_hash(const RunConfig& config) { return fnv1a64(to_config_text(config, false)); }

}  // namespace polaron
