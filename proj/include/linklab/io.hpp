#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace linklab::io {

// Whole-file read; throws std::runtime_error on failure.
std::string read_file(const std::filesystem::path& path);

// Atomic-ish write: write then rename would need a temp file; we just write
// directly and throw on failure.
void write_file(const std::filesystem::path& path, const std::string& contents);

std::vector<std::string> read_lines(const std::filesystem::path& path);

// Splits a CSV line on commas. No quoting: ids in this project are
// normalized names or hex tags, neither of which can contain a comma.
std::vector<std::string> split_csv_line(const std::string& line);

std::string to_hex(const unsigned char* data, std::size_t len);
std::vector<unsigned char> from_hex(const std::string& hex);

// SHA-256 of a file's contents, lowercase hex. Used for run metadata.
std::string file_sha256_hex(const std::filesystem::path& path);

}  // namespace linklab::io
