#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "evrisk/gpd.hpp"

namespace evrisk {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double x);

// Writes rows with '\n' line endings; every row must match the header width.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// FNV-1a 64-bit over the file bytes, as 16 hex digits.
std::string file_hash_hex(const std::filesystem::path& path);

// Reads a labeled returns file (header "return,label", labels red/green),
// keeps the k largest by value (ties broken by input order), sets the
// threshold to the (k+1)-th value and returns the excess sample.
TopKSample parse_returns_csv(const std::filesystem::path& path, std::size_t k);

}  // namespace evrisk
