#include "varex/result_table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "varex/errors.hpp"

namespace varex {

void ResultTable::add_row(Row row) {
    if (row.size() != columns.size())
        throw std::invalid_argument("row width " + std::to_string(row.size()) +
                               " does not match table " + name + " with " +
                               std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(row));
}

OutputFormat parse_output_format(const std::string &text) {
    if (text == "csv")
        return OutputFormat::Csv;
    if (text == "json")
        return OutputFormat::Json;
    throw ConfigInvalid("unknown analysis.output.format: " + text);
}

std::string format_rounded(double value, int decimals) {
    double scale = std::pow(10.0, decimals);
    double rounded = std::floor(value * scale + 0.5) / scale;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded);
    return buf;
}

namespace {
std::string csv_quote(const std::string &cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos)
        return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}
} // namespace

std::string render_csv(const ResultTable &table, int round_decimals) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i)
            out += ',';
        out += csv_quote(table.columns[i]);
    }
    out += '\n';
    for (const auto &row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ',';
            if (const auto *s = std::get_if<std::string>(&row[i]))
                out += csv_quote(*s);
            else
                out += format_rounded(std::get<double>(row[i]), round_decimals);
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const ResultTable &table) {
    nlohmann::json j;
    j["name"] = table.name;
    j["columns"] = table.columns;
    j["rows"] = nlohmann::json::array();
    for (const auto &row : table.rows) {
        nlohmann::json jr = nlohmann::json::array();
        for (const auto &cell : row) {
            if (const auto *s = std::get_if<std::string>(&cell))
                jr.push_back(*s);
            else
                jr.push_back(std::get<double>(cell));
        }
        j["rows"].push_back(std::move(jr));
    }
    return j.dump(2) + "\n";
}

void write_table(const ResultTable &table, OutputFormat format, int round_decimals,
                 const std::filesystem::path &path) {
    std::string content =
        format == OutputFormat::Csv ? render_csv(table, round_decimals) : render_json(table);
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out)
            throw IoError(tmp.string());
        out << content;
        if (!out)
            throw IoError(tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw IoError(path.string());
}

} // namespace varex
