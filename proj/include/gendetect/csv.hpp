#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gendetect {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a header column, -1 when absent.
    int column(std::string_view name) const;
};

// RFC 4180 style delimited text: quoted fields, "" escapes, embedded
// delimiters and newlines inside quotes. Accepts LF and CRLF line endings
// and skips a UTF-8 BOM before the header. Every row must have exactly as
// many fields as the header; violations raise DataError naming the data row.
CsvTable parse_delimited(std::string_view content, char delimiter, std::string_view source_name);
CsvTable read_delimited(const std::filesystem::path& path, char delimiter);

// Fields are quoted only when they contain the delimiter, a quote, or a
// newline, so a write/read cycle is byte-exact on field contents.
std::string format_delimited(const CsvTable& table, char delimiter);
void write_delimited(const std::filesystem::path& path, const CsvTable& table, char delimiter);

}  // namespace gendetect
