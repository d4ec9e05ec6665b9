#include "jch/emit.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace jch {

namespace {

std::string csv_escape(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string json_escape(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

std::string cell_csv(const Cell& cell) {
    switch (cell.kind) {
        case Cell::Kind::number: return format_number(cell.number);
        case Cell::Kind::integer: return std::to_string(cell.integer);
        case Cell::Kind::text: return csv_escape(cell.text);
        case Cell::Kind::empty: return {};
    }
    return {};
}

std::string cell_json(const Cell& cell) {
    switch (cell.kind) {
        case Cell::Kind::number:
            if (!std::isfinite(cell.number)) return "null";
            return format_number(cell.number);
        case Cell::Kind::integer: return std::to_string(cell.integer);
        case Cell::Kind::text: return json_escape(cell.text);
        case Cell::Kind::empty: return "null";
    }
    return "null";
}

} // namespace

void Table::add_row(std::vector<Cell> cells) {
    if (cells.size() != columns.size())
        throw std::invalid_argument("row width does not match table header");
    rows.push_back(std::move(cells));
}

std::string format_number(double value) {
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void emit_csv(const Table& table, std::ostream& out) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(table.columns[i]);
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << cell_csv(row[i]);
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write to output sink failed");
}

void emit_json(const Table& table, std::ostream& out) {
    out << "[";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << (r ? ",\n " : "\n ") << "{";
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            if (i) out << ", ";
            out << json_escape(table.columns[i]) << ": " << cell_json(table.rows[r][i]);
        }
        out << "}";
    }
    out << (table.rows.empty() ? "]\n" : "\n]\n");
    if (!out) throw std::runtime_error("write to output sink failed");
}

void emit(const Table& table, OutputFormat format, std::ostream& out) {
    if (format == OutputFormat::csv)
        emit_csv(table, out);
    else
        emit_json(table, out);
}

} // namespace jch
