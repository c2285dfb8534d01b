#pragma once

#include <filesystem>
#include <string>

namespace dlalab {

// Writes content to a temp file next to `path` and renames it into place, so
// interrupted runs never leave a partial file.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace dlalab
