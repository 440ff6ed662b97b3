/* Small file helpers: whole-file reads and atomic writes for reports. */
#pragma once

#include <optional>
#include <string>

namespace ade {

std::string read_file(const std::string& path);

/// Write via a temporary file in the same directory plus rename, so readers
/// never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

/// Cache directory from the ADE_CACHE_DIR environment variable, if set.
std::optional<std::string> cache_dir();

}  // namespace ade
