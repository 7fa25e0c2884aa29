#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace polaron {

std::string_view version() noexcept;

/// 16 lowercase hex digits.
std::string hash_hex(std::uint64_t hash);

/// Writes "# polaron-hhg <version>" and "# config-hash <hex>" lines.
void write_stamp(std::ostream& out, std::uint64_t config_hash);

}  // namespace polaron
