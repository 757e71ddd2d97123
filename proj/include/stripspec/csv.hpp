#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "stripspec/errors.hpp"

namespace stripspec {

inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Minimal CSV writer with a fixed header; numeric formatting is
/// reproducible byte for byte.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_.is_open()) throw Error("cannot open " + path);
        for (std::size_t i = 0; i < header.size(); ++i)
            out_ << (i ? "," : "") << header[i];
        out_ << "\n";
    }

    using Cell = std::variant<double, int, std::string>;

    void row(const std::vector<Cell>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            if (std::holds_alternative<double>(cells[i]))
                out_ << csv_num(std::get<double>(cells[i]));
            else if (std::holds_alternative<int>(cells[i]))
                out_ << std::get<int>(cells[i]);
            else
                out_ << std::get<std::string>(cells[i]);
        }
        out_ << "\n";
    }

  private:
    std::ofstream out_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return int(i);
        throw Error("csv: no column named " + name);
    }
    double num(std::size_t row, const std::string& name) const {
        return std::stod(rows.at(row).at(column(name)));
    }
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) throw Error("cannot open " + path);
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            t.header = cells;
            first = false;
        } else {
            t.rows.push_back(cells);
        }
    }
    return t;
}

} // namespace stripspec
