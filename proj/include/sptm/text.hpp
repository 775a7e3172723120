#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sptm {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

// lowercase, trim, collapse internal whitespace runs to single spaces
std::string normalize_name(std::string_view s);

// lowercase slug form: whitespace and '-' become '_'
std::string slugify(std::string_view s);

std::vector<std::string> split(std::string_view s, char delim);

// one CSV record; handles double-quoted fields with "" escapes
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_quote(std::string_view field);

// shortest exact decimal form ("%.17g" fallback), for byte-stable reports
std::string format_double(double v);

// Pulls the leading numeric quantities out of free-form field text
// ("25k/month" -> {25000}, "500-2000" -> {500, 2000}). A 'k'/'K'/'w' suffix
// scales by 1e3 / 1e4 ('w' = Chinese wan).
std::vector<double> extract_numbers(std::string_view s);

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xCBF29CE484222325ULL);

}  // namespace sptm
