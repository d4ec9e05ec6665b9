// emit.hpp — Byte-deterministic CSV/JSON emission of record tables.

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace jch {

enum class OutputFormat { csv, json };

struct Cell {
    enum class Kind { number, integer, text, empty };
    Kind kind{Kind::empty};
    double number{0.0};
    long long integer{0};
    std::string text;

    Cell() = default;
    Cell(double v) : kind(Kind::number), number(v) {}
    Cell(long long v) : kind(Kind::integer), integer(v) {}
    Cell(int v) : kind(Kind::integer), integer(v) {}
    Cell(std::string v) : kind(Kind::text), text(std::move(v)) {}
    Cell(const char* v) : kind(Kind::text), text(v) {}
    Cell(std::optional<double> v) {
        if (v) {
            kind = Kind::number;
            number = *v;
        }
    }
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> cells);
};

// Locale-independent shortest text with 17 significant digits.
std::string format_number(double value);

// Header line, ',' separator, '.' decimal point, '\n' endings; empty cells
// stay empty.
void emit_csv(const Table& table, std::ostream& out);

// Array of objects with the column names as keys; empty cells become null.
void emit_json(const Table& table, std::ostream& out);

void emit(const Table& table, OutputFormat format, std::ostream& out);

} // namespace jch
