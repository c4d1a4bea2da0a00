#pragma once

// Internal helpers for line-delimited JSON. Not installed.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace longrag::detail {

using json = nlohmann::json;

/// Calls `fn(object, line_number)` for every non-blank line. Throws
/// ParseError on malformed JSON or a non-object line.
void for_each_jsonl(std::string_view bytes, std::string_view source,
                    const std::function<void(const json&, std::size_t)>& fn);

std::string read_file(const std::filesystem::path& path);

/// Typed field access that reports ParseError with the line number.
std::string require_string(const json& obj, const char* key, std::string_view source,
                           std::size_t line);

}  // namespace longrag::detail
