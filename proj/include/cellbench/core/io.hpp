#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cellbench::io {

namespace fs = std::filesystem;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a header column; throws DataError(MissingKey) when absent.
    std::size_t column(std::string_view name) const;
    bool has_column(std::string_view name) const;
};

// RFC 4180 subset: comma separated, double-quoted fields may contain commas,
// quotes ("") and newlines. Rows whose field count differs from the header
// raise DataError(BadFormat).
CsvTable read_csv(const fs::path &path);
CsvTable parse_csv(std::string_view text, const std::string &origin = "<memory>");

std::string csv_escape(std::string_view field);
std::string csv_row(const std::vector<std::string> &fields);

std::string read_file(const fs::path &path);

// Writes to a sibling temporary and renames over the destination.
void write_file_atomic(const fs::path &path, std::string_view bytes);

double parse_double(std::string_view text, std::string_view context);
long long parse_int(std::string_view text, std::string_view context);

// Shortest round-trip text for a double ("%.17g").
std::string format_double(double value);
std::string format_sig(double value, int significant_digits);

} // namespace cellbench::io
