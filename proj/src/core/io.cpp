#include "cellbench/core/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "cellbench/core/errors.hpp"

namespace cellbench::io {

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    throw DataError(DataErrorCode::MissingKey, "CSV column '" + std::string(name) + "' not found");
}

bool CsvTable::has_column(std::string_view name) const {
    for (const auto &h : header)
        if (h == name)
            return true;
    return false;
}

CsvTable parse_csv(std::string_view text, const std::string &origin) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    bool any_content = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        // Skip blank lines.
        if (!(record.size() == 1 && record[0].empty()))
            records.push_back(std::move(record));
        record.clear();
        any_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (field_started && !field.empty())
                throw DataError(DataErrorCode::BadFormat, origin + ": stray quote in unquoted field");
            in_quotes = true;
            field_started = true;
            any_content = true;
            break;
        case ',':
            end_field();
            any_content = true;
            break;
        case '\r':
            break;
        case '\n':
            end_record();
            break;
        default:
            field.push_back(c);
            field_started = true;
            any_content = true;
        }
    }
    if (in_quotes)
        throw DataError(DataErrorCode::BadFormat, origin + ": unterminated quoted field");
    if (any_content || !field.empty())
        end_record();

    CsvTable table;
    if (records.empty())
        throw DataError(DataErrorCode::BadFormat, origin + ": empty CSV (no header)");
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size())
            throw DataError(DataErrorCode::BadFormat,
                            origin + ": row " + std::to_string(r) + " has " +
                                std::to_string(records[r].size()) + " fields, expected " +
                                std::to_string(table.header.size()));
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

CsvTable read_csv(const fs::path &path) { return parse_csv(read_file(path), path.string()); }

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos)
        return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += "\"\"";
        else
            out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string csv_row(const std::vector<std::string> &fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out.push_back(',');
        out += csv_escape(fields[i]);
    }
    out.push_back('\n');
    return out;
}

std::string read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError(DataErrorCode::MissingFile, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const fs::path &path, std::string_view bytes) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw DataError(DataErrorCode::MissingFile, "cannot write '" + path.string() + "'");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out)
            throw DataError(DataErrorCode::MissingFile, "write failed for '" + path.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec)
        throw DataError(DataErrorCode::MissingFile,
                        "cannot rename into '" + path.string() + "': " + ec.message());
}

double parse_double(std::string_view text, std::string_view context) {
    // std::from_chars for double is available in libstdc++ 11.
    double value = 0.0;
    const char *first = text.data();
    const char *last = text.data() + text.size();
    while (first < last && (*first == ' ' || *first == '\t'))
        ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '\t'))
        --last;
    if (first < last && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last)
        throw DataError(DataErrorCode::BadFormat,
                        std::string(context) + ": cannot parse number '" + std::string(text) + "'");
    return value;
}

long long parse_int(std::string_view text, std::string_view context) {
    long long value = 0;
    const char *first = text.data();
    const char *last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last)
        throw DataError(DataErrorCode::BadFormat,
                        std::string(context) + ": cannot parse integer '" + std::string(text) + "'");
    return value;
}

std::string format_double(double value) { return format_sig(value, 17); }

std::string format_sig(double value, int significant_digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value);
    return buf;
}

} // namespace cellbench::io
