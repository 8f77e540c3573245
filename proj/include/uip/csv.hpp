#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uip {

/// Full-precision scientific notation, identical across runs and platforms
/// that share a libc.
std::string sci(double x);

/// A header plus rows of already-formatted cells.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

void write_csv(std::ostream& os, const CsvTable& table);

}  // namespace uip
