#pragma once

#include <filesystem>
#include <string>

namespace varex {

inline constexpr const char *kHashAlgorithm = "SHA-256";

std::string sha256_hex(const std::string &data);
std::string sha256_file(const std::filesystem::path &path); // throws IoError

} // namespace varex
