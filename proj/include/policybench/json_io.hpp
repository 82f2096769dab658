// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace policybench {

using json = nlohmann::json;

/// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes);

/// Lower-case, zero-padded hex of a 64-bit value.
std::string hex64(std::uint64_t value);

std::string read_text_file(const std::filesystem::path& path);

/// Writes bytes exactly; throws IoError when the file cannot be written.
void write_text_file(const std::filesystem::path& path, std::string_view text);

json read_json_file(const std::filesystem::path& path);

/// Pretty-printed (2-space) JSON followed by a newline.
void write_json_file(const std::filesystem::path& path, const json& value);

std::vector<json> read_jsonl_file(const std::filesystem::path& path);

/// One compact JSON document per line.
void write_jsonl_file(const std::filesystem::path& path, const std::vector<json>& rows);

} // namespace policybench
