#include "gendetect/csv.hpp"

#include <fstream>
#include <sstream>

#include "gendetect/errors.hpp"

namespace gendetect {

int CsvTable::column(std::string_view name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

namespace {

// One physical record, possibly spanning multiple lines inside quotes.
// Returns false at end of input.
bool next_record(std::string_view content, size_t& pos, char delimiter,
                 std::vector<std::string>& fields, std::string_view source_name) {
    fields.clear();
    if (pos >= content.size()) return false;
    std::string field;
    bool in_quotes = false;
    bool saw_any = false;
    while (pos < content.size()) {
        char c = content[pos];
        if (in_quotes) {
            if (c == '"') {
                if (pos + 1 < content.size() && content[pos + 1] == '"') {
                    field += '"';
                    pos += 2;
                } else {
                    in_quotes = false;
                    ++pos;
                }
            } else {
                field += c;
                ++pos;
            }
            continue;
        }
        if (c == '"' && field.empty()) {
            in_quotes = true;
            saw_any = true;
            ++pos;
            continue;
        }
        if (c == delimiter) {
            fields.push_back(std::move(field));
            field.clear();
            saw_any = true;
            ++pos;
            continue;
        }
        if (c == '\n' || c == '\r') {
            if (c == '\r' && pos + 1 < content.size() && content[pos + 1] == '\n') ++pos;
            ++pos;
            fields.push_back(std::move(field));
            return true;
        }
        field += c;
        saw_any = true;
        ++pos;
    }
    if (in_quotes)
        throw DataError(std::string(source_name) + ": unterminated quoted field at end of file");
    if (saw_any || !field.empty()) {
        fields.push_back(std::move(field));
        return true;
    }
    return false;
}

}  // namespace

CsvTable parse_delimited(std::string_view content, char delimiter, std::string_view source_name) {
    if (content.size() >= 3 && content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);
    CsvTable table;
    size_t pos = 0;
    std::vector<std::string> fields;
    if (!next_record(content, pos, delimiter, fields, source_name))
        throw DataError(std::string(source_name) + ": missing header row");
    table.header = fields;
    size_t row_index = 0;
    while (next_record(content, pos, delimiter, fields, source_name)) {
        ++row_index;
        if (fields.size() == 1 && fields[0].empty() && pos >= content.size())
            break;  // trailing newline
        if (fields.size() != table.header.size()) {
            std::ostringstream msg;
            msg << source_name << ": row " << row_index << ": expected " << table.header.size()
                << " fields, got " << fields.size();
            throw DataError(msg.str());
        }
        table.rows.push_back(fields);
    }
    return table;
}

CsvTable read_delimited(const std::filesystem::path& path, char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_delimited(buf.str(), delimiter, path.string());
}

namespace {

void append_field(std::string& out, const std::string& field, char delimiter) {
    bool needs_quotes = field.find(delimiter) != std::string::npos ||
                        field.find('"') != std::string::npos ||
                        field.find('\n') != std::string::npos ||
                        field.find('\r') != std::string::npos;
    if (!needs_quotes) {
        out += field;
        return;
    }
    out += '"';
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

void append_row(std::string& out, const std::vector<std::string>& row, char delimiter) {
    for (size_t i = 0; i < row.size(); ++i) {
        if (i > 0) out += delimiter;
        append_field(out, row[i], delimiter);
    }
    out += '\n';
}

}  // namespace

std::string format_delimited(const CsvTable& table, char delimiter) {
    std::string out;
    append_row(out, table.header, delimiter);
    for (const auto& row : table.rows) append_row(out, row, delimiter);
    return out;
}

void write_delimited(const std::filesystem::path& path, const CsvTable& table, char delimiter) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << format_delimited(table, delimiter);
    if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace gendetect
