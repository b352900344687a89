#include "needlet_lq/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nlq {

namespace {

bool parse_double(const std::string& text, double& value) {
    std::size_t begin = text.find_first_not_of(" \t\r");
    std::size_t end = text.find_last_not_of(" \t\r");
    if (begin == std::string::npos) return false;
    const char* first = text.data() + begin;
    const char* last = text.data() + end + 1;
    auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc() && ptr == last;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::string version_line() { return std::string("# needlet-lq v") + NEEDLET_LQ_VERSION; }

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buffer, ptr);
}

CsvWriter::CsvWriter(std::ostream& out, bool with_version) : out_(out) {
    if (with_version) out_ << version_line() << '\n';
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>) {
                    out_ << format_double(v);
                } else {
                    out_ << v;
                }
            },
            cells[i]);
    }
    out_ << '\n';
}

SampleTable read_samples(std::istream& in, int d) {
    if (d < 1) throw std::invalid_argument("read_samples: dimension must be >= 1");
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_number = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split(line);
        std::vector<double> values;
        bool numeric = true;
        for (const auto& cell : cells) {
            double v = 0.0;
            if (!parse_double(cell, v)) {
                numeric = false;
                break;
            }
            values.push_back(v);
        }
        if (!numeric) {
            if (!seen_data && rows.empty()) {
                seen_data = true;  // header row
                continue;
            }
            throw std::runtime_error("read_samples: non-numeric value on line " + std::to_string(line_number));
        }
        seen_data = true;
        if (static_cast<int>(values.size()) != d + 1) {
            throw std::runtime_error("read_samples: line " + std::to_string(line_number) + " has " +
                                     std::to_string(values.size()) + " columns, expected " + std::to_string(d + 1));
        }
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw std::runtime_error("read_samples: no samples");
    SampleTable table;
    table.points.resize(d, static_cast<Eigen::Index>(rows.size()));
    table.targets.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int k = 0; k < d; ++k) table.points(k, static_cast<Eigen::Index>(i)) = rows[i][k];
        table.targets[static_cast<Eigen::Index>(i)] = rows[i][d];
    }
    return table;
}

}  // namespace nlq
