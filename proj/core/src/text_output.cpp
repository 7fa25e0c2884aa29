#include "polaron_hhg/text_output.hpp"

#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace polaron {

std::string_view version() noexcept { return POLARON_HHG_VERSION; }

std::string hash_hex(std::uint64_t hash) { return fmt::format("{:016x}", hash); }

void write_stamp(std::ostream& out, std::uint64_t config_hash) {
  fmt::print(out, "# polaron-hhg {}\n# config-hash {}\n", version(), hash_hex(config_hash));
}

}  // namespace polaron
