#pragma once

#include <filesystem>
#include <string_view>

namespace longrag {

/// Writes `bytes` to `<path>.tmp` and renames it over `path`, creating parent
/// directories as needed. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace longrag
