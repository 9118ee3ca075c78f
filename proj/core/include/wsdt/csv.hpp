#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wsdt {

/// Parsed CSV table: header row plus data rows, all cells as raw strings.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column_index(const std::string& name) const;  // npos when absent
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// RFC-4180 parser: quoted fields, doubled-quote escapes, CR/LF or LF line
/// endings, fields may contain newlines when quoted. The header row is
/// mandatory for every file this project reads.
CsvTable parse_csv(std::string_view text);

CsvTable read_csv_file(const std::string& path);

/// Reads a whole file (or stdin when path == "-") into a string.
std::string read_text(const std::string& path);

std::string csv_quote(std::string_view cell);
std::string write_csv(const CsvTable& table);

/// Writes bytes to `path` atomically (temp file in the same directory, then
/// rename). path == "-" writes to stdout.
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace wsdt
