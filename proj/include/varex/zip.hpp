#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace varex {

/// Minimal store-only zip support, sufficient for experiment archives.
/// Entry names use forward slashes. Timestamps are fixed so identical
/// content yields identical archives.
class ZipWriter {
public:
    void add(const std::string &name, const std::string &data);
    void write(const std::filesystem::path &path) const; // throws IoError

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// name -> content of every entry.
std::map<std::string, std::string> read_zip(const std::filesystem::path &path);

} // namespace varex
