#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "falpha/errors.hpp"

namespace falpha::cli {

// Full double precision (17 significant digits); "inf" for the sentinel.
inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw ArgumentError("cannot open output file: " + path);
    }

    void header(const std::vector<std::string>& columns) { write_row_strings(columns); }

    void row(const std::vector<double>& values) {
        std::string line;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) line += ',';
            line += csv_number(values[i]);
        }
        out_ << line << '\n';
    }

    void write_row_strings(const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) line += ',';
            line += cells[i];
        }
        out_ << line << '\n';
    }

private:
    std::ofstream out_;
};

}  // namespace falpha::cli
