#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cl::csv {

using Row = std::vector<std::string>;

// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF.
std::vector<Row> parse(std::string_view text);
std::vector<Row> read_file(const std::filesystem::path& path);

std::string escape(std::string_view field);
std::string join(const Row& fields);

// Fixed-point rendering used by every numeric table this project writes.
std::string format_fixed(double value, int decimals = 6);

}  // namespace cl::csv
