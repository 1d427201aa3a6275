#include "csv.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

#include "config.hpp"

namespace igfade::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        cells.push_back(trim(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return cells;
}

}  // namespace

Table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read data file '" + path + "'");
    Table table;
    std::string text;
    std::size_t line_no = 0;
    while (std::getline(in, text)) {
        ++line_no;
        if (trim(text).empty()) continue;
        auto cells = split(text);
        if (table.header.empty()) {
            table.header = cells;
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw InputError(path + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(table.header.size()) + " columns, found " + std::to_string(cells.size()));
        }
        std::vector<double> values;
        for (const auto& c : cells) {
            std::size_t used = 0;
            double x = 0.0;
            try {
                x = std::stod(c, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (c.empty() || used != c.size() || !std::isfinite(x)) {
                throw InputError(path + ":" + std::to_string(line_no) + ": '" + c + "' is not a finite number");
            }
            values.push_back(x);
        }
        table.rows.push_back(std::move(values));
        table.line.push_back(line_no);
    }
    if (table.header.empty()) throw InputError(path + ": empty file");
    return table;
}

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

CsvWriter::CsvWriter(std::string path, const std::vector<std::string>& header) : path_(std::move(path)) {
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    row(cells);
}

void CsvWriter::commit() {
    if (path_.empty() || path_ == "-") {
        std::cout << text_ << std::flush;
        return;
    }
    const std::string tmp = path_ + ".partial";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw InputError("cannot write '" + path_ + "'");
        out << text_;
        if (!out) {
            std::remove(tmp.c_str());
            throw InputError("write to '" + path_ + "' failed");
        }
    }
    if (std::rename(tmp.c_str(), path_.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw InputError("cannot write '" + path_ + "'");
    }
}

}  // namespace igfade::cli
