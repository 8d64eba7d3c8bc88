#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fwos::io {

// Shortest decimal string that parses back to the identical double.
std::string format_double(double v);
// Strict parse of a whole field; throws DataError on trailing garbage.
double parse_double(std::string_view field);

std::vector<std::string_view> split_csv_line(std::string_view line);

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t h);

// Comment line that opens every artifact file.
std::string manifest_comment(std::string_view manifest_hash);

}  // namespace fwos::io
