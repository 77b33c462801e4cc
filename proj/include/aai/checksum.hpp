#pragma once

#include <string>
#include <string_view>

namespace aai {

// Lowercase hex SHA-256 digest.
[[nodiscard]] std::string sha256_hex(std::string_view bytes);
[[nodiscard]] std::string sha256_file(const std::string& path);

}  // namespace aai
