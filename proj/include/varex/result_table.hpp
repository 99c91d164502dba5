#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace varex {

using Cell = std::variant<std::string, double>;
using Row = std::vector<Cell>;

/// Tabular analysis result. Numeric cells keep full precision; rounding
/// happens at write time.
struct ResultTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<Row> rows;

    void add_row(Row row);
};

enum class OutputFormat { Csv, Json };

OutputFormat parse_output_format(const std::string &text); // throws ConfigInvalid

/// Fixed-decimal half-up rounding, e.g. format_rounded(100, 2) == "100.00".
std::string format_rounded(double value, int decimals);

std::string render_csv(const ResultTable &table, int round_decimals);
std::string render_json(const ResultTable &table);

/// Writes atomically (temp file + rename).
void write_table(const ResultTable &table, OutputFormat format, int round_decimals,
                 const std::filesystem::path &path);

} // namespace varex
